//! Exact decision procedures and degeneration certificates for gluing two
//! curves in projective space at general points.
//!
//! - [`numerics`]: Brill-Noether numbers, interpolation capacities, unions.
//! - [`hypotheses`]: checkers returning itemized [`Verdict`]s.
//! - [`certifier`]: replays the inductive arguments as [`Certificate`] trees.
//! - [`verifier`]: re-checks a certificate from its stored data alone.
//! - [`audit`]: exhaustive enumeration of bounded grids.
//! - [`planner`]: two-component decompositions of a target class.
//!
//! All arithmetic is integer; nothing allocates beyond `alloc`.

#![no_std]

extern crate alloc;

pub mod audit;
pub mod certificate;
pub mod certifier;
pub mod error;
pub mod hypotheses;
pub mod numerics;
pub mod planner;
pub mod verifier;

pub use certificate::{Certificate, Instance};
pub use certifier::{certify_main, certify_small_hyp, certify_small_mid, Refusal};
pub use error::{Error, Result};
pub use hypotheses::{GluingInstance, HyperplaneInstance, SmallMidQuery, Verdict};
pub use numerics::{Capacity, CurveSpec};
pub use verifier::{verify, VerificationReport};
