//! Builds degeneration certificates by replaying the inductive arguments
//! behind each gluing theorem.
//!
//! Every entry point first evaluates the relevant hypothesis checker and
//! refuses with its [`Verdict`] when it fails. Internally inconsistent states
//! (which never arise on the audited grid) also become refusals rather than
//! panics, so a faulty dispatch is always observable as data.

use alloc::string::String;
use core::fmt;

use crate::certificate::Certificate;
use crate::hypotheses::{GluingInstance, HyperplaneInstance, SmallMidQuery, Verdict};

mod main;
mod small_hyp;
mod small_mid;

pub use main::{linearly_normal_arm, LinearlyNormalArm};

/// Why a certificate was not produced.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Refusal {
    pub reason: String,
    /// The failing hypothesis verdict, when that is the reason.
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub verdict: Option<Verdict>,
}

impl Refusal {
    pub(crate) fn hypotheses(verdict: Verdict) -> Self {
        Self {
            reason: alloc::format!("{} hypotheses fail", verdict.theorem.name()),
            verdict: Some(verdict),
        }
    }

    pub(crate) fn internal(reason: impl Into<String>) -> Self {
        Self {
            reason: reason.into(),
            verdict: None,
        }
    }

    /// True when the refusal comes from failed hypotheses rather than from the
    /// dispatch itself.
    pub fn is_hypothesis_failure(&self) -> bool {
        self.verdict.as_ref().is_some_and(|v| !v.passed())
    }
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.reason)
    }
}

pub type Certified = core::result::Result<Certificate, Refusal>;

/// Seeded dispatch bugs, used to check that the verifier and the audits
/// notice when the certifier goes wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(not(feature = "mutation"), allow(dead_code))]
pub enum Fault {
    /// Take the weak-gluing base case up to `n = r + 3`.
    LooseBaseBound,
    /// Ignore the strict inequality of the line case at `g = 3`.
    LineCaseStrictnessSkipped,
    /// Keep one unit of genus too many on the residual piece of a rational
    /// normal curve split.
    RncGenusKept,
    /// Record three internal nodes for a two-node line split.
    LineTwoNodeCount,
    /// Record `r` internal nodes for a rational normal curve split.
    RncNodeCount,
    /// Keep the genus on the main piece of a two-node line split.
    LineTwoGenusKept,
    /// Drop the genus on the main piece of a one-node line split.
    LineOneGenusDropped,
    /// Put the rational normal curve on the wrong side of the split.
    RncPiecesSwapped,
    /// Do not exchange sides when the margin is exactly 2 at `(6, 2, 3)`.
    ElevenExceptionSkipped,
    /// Do not exchange sides when the margin is exactly 4 at `(6, 3, 3)`.
    TenExceptionSkipped,
    /// Degenerate the left side even when the margin condition holds only on
    /// the right.
    MarginSideIgnored,
    /// Split a line off the left side regardless of which genus is lower.
    LowerGenusIgnored,
    /// Keep `n` nodes on the outer gluing of a one-node line split.
    OuterNodeCountKept,
    /// Skip the hypothesis gate at the root.
    RootGateSkipped,
}

impl Fault {
    pub const ALL: [Fault; 14] = [
        Fault::LooseBaseBound,
        Fault::LineCaseStrictnessSkipped,
        Fault::RncGenusKept,
        Fault::LineTwoNodeCount,
        Fault::RncNodeCount,
        Fault::LineTwoGenusKept,
        Fault::LineOneGenusDropped,
        Fault::RncPiecesSwapped,
        Fault::ElevenExceptionSkipped,
        Fault::TenExceptionSkipped,
        Fault::MarginSideIgnored,
        Fault::LowerGenusIgnored,
        Fault::OuterNodeCountKept,
        Fault::RootGateSkipped,
    ];
}

/// Certificate for the main gluing theorem.
pub fn certify_main(inst: &GluingInstance) -> Certified {
    main::MainCertifier::new(None).certify(inst)
}

/// Like [`certify_main`] with one seeded dispatch bug.
#[cfg(feature = "mutation")]
pub fn certify_main_mutant(inst: &GluingInstance, fault: Fault) -> Certified {
    main::MainCertifier::new(Some(fault)).certify(inst)
}

/// Certificate for attaching a rational curve of degree `a` at `a + 2` points.
pub fn certify_small_mid(q: &SmallMidQuery) -> Certified {
    small_mid::certify(q)
}

/// Certificate for gluing to a Brill-Noether curve inside a hyperplane.
pub fn certify_small_hyp(inst: &HyperplaneInstance) -> Certified {
    small_hyp::certify(inst)
}
