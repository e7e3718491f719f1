use thiserror::Error;

/// Domain violations raised by constructors and numeric operations.
///
/// Hypothesis failures are never errors: they are reported as data in a
/// [`Verdict`](crate::hypotheses::Verdict) or a
/// [`Refusal`](crate::certifier::Refusal).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{field} = {value} is out of range: expected {expected}")]
    OutOfRange {
        field: &'static str,
        value: i64,
        expected: &'static str,
    },
    #[error("no nonspecial class of degree {d} and genus {g}: requires d >= g")]
    NoNonspecialClass { d: u32, g: u32 },
    #[error("ambient dimensions differ: {left} != {right}")]
    AmbientMismatch { left: u32, right: u32 },
    #[error("hyperplane curve must live in dimension {expected}, found {found}")]
    HyperplaneMismatch { expected: u32, found: u32 },
    #[error("a gluing needs at least one node")]
    NoNodes,
    #[error("attached rational curve degree a = {a} exceeds r = {r}")]
    DegreeAboveAmbient { a: u32, r: u32 },
    #[error("planner requires r >= 3, found r = {0}")]
    PlannerAmbient(u32),
    #[error("planner requires a target with rho >= 0, found rho = {0}")]
    NegativeRho(i64),
}

pub type Result<T> = core::result::Result<T, Error>;
