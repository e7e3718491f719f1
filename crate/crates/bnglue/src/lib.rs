//! Command-line tool, JSON documents and parallel audits built on
//! [`bnglue_core`].

pub mod cli;
pub mod document;
pub mod parallel;
pub mod table;
