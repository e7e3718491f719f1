//! Hypothesis checkers for the gluing theorems.
//!
//! Each checker returns a [`Verdict`] listing every inequality it evaluated,
//! rendered with concrete integers, together with its integer slack. A check
//! holds iff its slack is nonnegative; strict inequalities are encoded as
//! `lhs - rhs - 1`. Disjunctive hypotheses ("for at least one side") appear as a
//! single check carrying the best alternative's slack and naming the witness.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::numerics::{self, CurveSpec};

/// `C_1 ∪_Γ C_2` with both curves in the same `P^r` and `#Γ = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawGluing"))]
pub struct GluingInstance {
    left: CurveSpec,
    right: CurveSpec,
    n: u32,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawGluing {
    left: CurveSpec,
    right: CurveSpec,
    n: u32,
}

#[cfg(feature = "serde")]
impl TryFrom<RawGluing> for GluingInstance {
    type Error = Error;

    fn try_from(raw: RawGluing) -> Result<Self> {
        GluingInstance::new(raw.left, raw.right, raw.n)
    }
}

impl GluingInstance {
    pub fn new(left: CurveSpec, right: CurveSpec, n: u32) -> Result<Self> {
        if left.r() != right.r() {
            return Err(Error::AmbientMismatch {
                left: left.r(),
                right: right.r(),
            });
        }
        if n == 0 {
            return Err(Error::NoNodes);
        }
        Ok(Self { left, right, n })
    }

    /// Convenience constructor from raw parameters.
    pub fn from_parts(d1: u32, g1: u32, d2: u32, g2: u32, r: u32, n: u32) -> Result<Self> {
        Self::new(CurveSpec::new(d1, g1, r)?, CurveSpec::new(d2, g2, r)?, n)
    }

    pub fn left(&self) -> &CurveSpec {
        &self.left
    }

    pub fn right(&self) -> &CurveSpec {
        &self.right
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.left.r()
    }

    pub fn side(&self, side: Side) -> &CurveSpec {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            left: self.right,
            right: self.left,
            n: self.n,
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.left.d() as u64 + self.right.d() as u64
    }

    /// Class of the glued curve.
    pub fn union(&self) -> Result<CurveSpec> {
        numerics::glue(&self.left, &self.right, self.n)
    }

    /// Brill-Noether number of the glued curve, without materialising it.
    pub fn union_rho(&self) -> i64 {
        let r = self.r() as i64;
        let d = self.left.d() as i64 + self.right.d() as i64;
        let g = self.left.g() as i64 + self.right.g() as i64 + self.n as i64 - 1;
        (r + 1) * d - r * g - r * (r + 1)
    }
}

impl fmt::Display for GluingInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ∪ {} at n = {}", self.left, self.right, self.n)
    }
}

/// `C ∪_Γ D` where `D` lies in a hyperplane `H ≅ P^(r-1)` and `Γ ⊂ H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawHyperplane"))]
pub struct HyperplaneInstance {
    inner: CurveSpec,
    hyper: CurveSpec,
    n: u32,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawHyperplane {
    inner: CurveSpec,
    hyper: CurveSpec,
    n: u32,
}

#[cfg(feature = "serde")]
impl TryFrom<RawHyperplane> for HyperplaneInstance {
    type Error = Error;

    fn try_from(raw: RawHyperplane) -> Result<Self> {
        HyperplaneInstance::new(raw.inner, raw.hyper, raw.n)
    }
}

impl HyperplaneInstance {
    pub fn new(inner: CurveSpec, hyper: CurveSpec, n: u32) -> Result<Self> {
        if inner.r() != hyper.r() + 1 {
            return Err(Error::HyperplaneMismatch {
                expected: inner.r().saturating_sub(1),
                found: hyper.r(),
            });
        }
        if n == 0 {
            return Err(Error::NoNodes);
        }
        Ok(Self { inner, hyper, n })
    }

    pub fn from_parts(d1: u32, g1: u32, d2: u32, g2: u32, r: u32, n: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::OutOfRange {
                field: "r",
                value: r as i64,
                expected: "r >= 2 for a hyperplane to hold a curve",
            });
        }
        Self::new(
            CurveSpec::new(d1, g1, r)?,
            CurveSpec::new(d2, g2, r - 1)?,
            n,
        )
    }

    /// The transverse curve `C` in `P^r`.
    pub fn inner(&self) -> &CurveSpec {
        &self.inner
    }

    /// The curve `D` inside the hyperplane, with ambient dimension `r - 1`.
    pub fn hyper(&self) -> &CurveSpec {
        &self.hyper
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.inner.r()
    }

    /// `D` regarded as a curve in `P^r`.
    pub fn hyper_in_ambient(&self) -> CurveSpec {
        self.hyper
            .with_ambient(self.r())
            .expect("hyperplane curve already validated")
    }

    pub fn union(&self) -> Result<CurveSpec> {
        numerics::glue(&self.inner, &self.hyper_in_ambient(), self.n)
    }

    pub fn union_rho(&self) -> i64 {
        let r = self.r() as i64;
        let d = self.inner.d() as i64 + self.hyper.d() as i64;
        let g = self.inner.g() as i64 + self.hyper.g() as i64 + self.n as i64 - 1;
        (r + 1) * d - r * g - r * (r + 1)
    }
}

impl fmt::Display for HyperplaneInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ∪ {} ⊂ H at n = {}", self.inner, self.hyper, self.n)
    }
}

/// A curve `C` with a rational curve of degree `a` attached at `a + 2` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawSmallMid"))]
pub struct SmallMidQuery {
    spec: CurveSpec,
    a: u32,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawSmallMid {
    spec: CurveSpec,
    a: u32,
}

#[cfg(feature = "serde")]
impl TryFrom<RawSmallMid> for SmallMidQuery {
    type Error = Error;

    fn try_from(raw: RawSmallMid) -> Result<Self> {
        SmallMidQuery::new(raw.spec, raw.a)
    }
}

impl SmallMidQuery {
    pub fn new(spec: CurveSpec, a: u32) -> Result<Self> {
        if a > spec.r() {
            return Err(Error::DegreeAboveAmbient { a, r: spec.r() });
        }
        Ok(Self { spec, a })
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// `#Γ = a + 2`.
    pub fn nodes(&self) -> u32 {
        self.a + 2
    }
}

impl fmt::Display for SmallMidQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} with a = {}", self.spec, self.a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn index(self) -> u8 {
        match self {
            Side::Left => 1,
            Side::Right => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Conclusion {
    #[cfg_attr(feature = "serde", serde(rename = "BN"))]
    Bn,
    #[cfg_attr(feature = "serde", serde(rename = "WBN"))]
    Wbn,
    #[cfg_attr(feature = "serde", serde(rename = "none"))]
    None,
}

/// Which gluing theorem a verdict speaks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Theorem {
    /// Two nondegenerate nonspecial curves glued at general points.
    Main,
    /// Weak gluing with one side carrying enough sections.
    MainSp,
    /// Weak gluing with one curve inside a hyperplane.
    MainHyp,
    /// Attaching a rational curve of degree `a` at `a + 2` points.
    SmallMid,
    /// Gluing to a Brill-Noether curve inside a hyperplane.
    SmallHyp,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::Main => "main",
            Theorem::MainSp => "main-sp",
            Theorem::MainHyp => "main-hyp",
            Theorem::SmallMid => "small-mid",
            Theorem::SmallHyp => "small-hyp",
        }
    }
}

/// One evaluated inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub label: String,
    pub rendered: String,
    pub slack: i64,
}

impl Check {
    /// `lhs >= rhs`.
    pub fn at_least(label: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Self {
            label: label.into(),
            rendered: format!("{lhs} >= {rhs}"),
            slack: lhs - rhs,
        }
    }

    /// `lhs > rhs`, i.e. slack `lhs - rhs - 1`.
    pub fn greater(label: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Self {
            label: label.into(),
            rendered: format!("{lhs} > {rhs}"),
            slack: lhs - rhs - 1,
        }
    }

    /// `lhs <= rhs`.
    pub fn at_most(label: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Self {
            label: label.into(),
            rendered: format!("{lhs} <= {rhs}"),
            slack: rhs - lhs,
        }
    }

    /// `lhs < rhs`.
    pub fn less(label: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Self {
            label: label.into(),
            rendered: format!("{lhs} < {rhs}"),
            slack: rhs - lhs - 1,
        }
    }

    pub fn holds(&self) -> bool {
        self.slack >= 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub theorem: Theorem,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    pub conclusion: Conclusion,
    /// Side satisfying a disjunctive hypothesis, when there is one.
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub witness: Option<Side>,
}

impl Verdict {
    fn from_checks(
        theorem: Theorem,
        checks: Vec<Check>,
        on_pass: Conclusion,
        witness: Option<Side>,
    ) -> Self {
        let outcome = outcome_of(&checks);
        Self {
            theorem,
            outcome,
            conclusion: match outcome {
                Outcome::Pass => on_pass,
                Outcome::Fail => Conclusion::None,
            },
            checks,
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// Checks with negative slack.
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds())
    }
}

/// Outcome as a pure function of the slacks.
pub fn outcome_of(checks: &[Check]) -> Outcome {
    if checks.iter().all(Check::holds) {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

/// `(r+1)d - rg + r`, the section count the weak gluing compares against `rn`.
pub fn weak_budget(spec: &CurveSpec) -> i64 {
    let (d, g, r) = (spec.d() as i64, spec.g() as i64, spec.r() as i64);
    (r + 1) * d - r * g + r
}

/// Threshold on `margin` required of side `i` for the main theorem: 2 when
/// `d > g + r`, 4 when `d = g + r`; `None` outside the nondegenerate range.
pub fn margin_threshold(spec: &CurveSpec) -> Option<i64> {
    match spec.excess() {
        e if e > 0 => Some(2),
        0 => Some(4),
        _ => None,
    }
}

fn interpolation_check(label: &str, spec: &CurveSpec, n: u32) -> Check {
    let slack = numerics::interpolation_slack(spec, n);
    let rendered = if spec.d() < spec.g() {
        format!("{} >= {}", spec.d(), spec.g())
    } else if spec.r() == 1 {
        String::from("vacuous for r = 1")
    } else if spec.is_nns() {
        let lhs = (spec.r() as i64 - 1) * n as i64;
        let rhs = numerics::interpolation_budget(spec);
        if numerics::is_exceptional(spec) {
            format!("{lhs} < {rhs}")
        } else {
            format!("{lhs} <= {rhs}")
        }
    } else {
        format!("{n} <= {}", spec.d() as i64 + 1 - spec.g() as i64)
    };
    // The strict encoding at the exceptional triples must coincide with the
    // capacity override.
    if spec.d() >= spec.g() {
        assert_eq!(
            slack >= 0,
            numerics::passes_through(spec, n).unwrap_or(false),
            "interpolation slack disagrees with capacity for {spec}, n = {n}"
        );
    }
    Check {
        label: format!("{label} passes through n points"),
        rendered,
        slack,
    }
}

fn nns_check(label: &str, spec: &CurveSpec) -> Check {
    Check::at_least(
        format!("{label} nondegenerate nonspecial (d >= g + r)"),
        spec.d() as i64,
        spec.g() as i64 + spec.r() as i64,
    )
}

/// The disjunction "both sides limit linearly normal, or the margin
/// condition holds for some side" as one check.
pub fn margin_alternatives(inst: &GluingInstance) -> (Check, Option<Side>) {
    let (l, r) = (inst.left(), inst.right());
    let both = Check {
        label: String::from("both sides limit linearly normal"),
        rendered: format!("d1 - g1 - r = {}, d2 - g2 - r = {}", l.excess(), r.excess()),
        slack: -(l.excess().abs() + r.excess().abs()),
    };
    let side = |spec: &CurveSpec, idx: u8| -> Check {
        let m = numerics::margin(spec, inst.n());
        match margin_threshold(spec) {
            Some(t) => Check::at_least(format!("margin condition on side {idx}"), m, t),
            None => Check {
                label: format!("margin condition on side {idx}"),
                rendered: format!("side {idx} is not nondegenerate nonspecial"),
                slack: spec.excess(),
            },
        }
    };
    let candidates = [
        (both, None),
        (side(l, 1), Some(Side::Left)),
        (side(r, 2), Some(Side::Right)),
    ];
    let mut best = 0;
    for (i, (c, _)) in candidates.iter().enumerate() {
        if c.slack > candidates[best].0.slack {
            best = i;
        }
    }
    let (chosen, witness) = candidates[best].clone();
    let check = Check {
        label: format!(
            "limit linear normality or margin condition (via {})",
            chosen.label
        ),
        rendered: chosen.rendered,
        slack: chosen.slack,
    };
    (check, witness)
}

/// Hypotheses of the main gluing theorem.
pub fn check_main(inst: &GluingInstance) -> Verdict {
    let (l, rt, n, r) = (inst.left(), inst.right(), inst.n(), inst.r() as i64);
    let mut checks = Vec::with_capacity(8);
    checks.push(Check::at_least("ambient dimension r >= 2", r, 2));
    checks.push(nns_check("side 1", l));
    checks.push(nns_check("side 2", rt));
    checks.push(interpolation_check("side 1", l, n));
    checks.push(interpolation_check("side 2", rt, n));
    checks.push(Check::at_least("n >= 1", n as i64, 1));
    let (alt, witness) = margin_alternatives(inst);
    checks.push(alt);
    let rho = inst.union_rho();
    checks.push(Check::at_least("rho of the union >= 0", rho, 0));
    // Division-free route: r n <= r(r+2) + rho_1 + rho_2.
    let bound = r * (r + 2) + numerics::rho(l) + numerics::rho(rt);
    assert_eq!(
        rho >= 0,
        r * n as i64 <= bound,
        "rho additivity violated for {inst}"
    );
    Verdict::from_checks(Theorem::Main, checks, Conclusion::Bn, witness)
}

/// Same outcome as [`check_main`] without building the report.
pub fn main_holds(inst: &GluingInstance) -> bool {
    let (l, rt, n) = (inst.left(), inst.right(), inst.n());
    if inst.r() < 2 || !l.is_nns() || !rt.is_nns() {
        return false;
    }
    if numerics::interpolation_slack(l, n) < 0 || numerics::interpolation_slack(rt, n) < 0 {
        return false;
    }
    let alt = (l.is_limit_linearly_normal() && rt.is_limit_linearly_normal())
        || margin_condition(l, n)
        || margin_condition(rt, n);
    alt && inst.union_rho() >= 0
}

/// Whether side `spec` satisfies the margin condition at `n` nodes.
pub fn margin_condition(spec: &CurveSpec, n: u32) -> bool {
    margin_threshold(spec).is_some_and(|t| numerics::margin(spec, n) >= t)
}

/// Hypotheses of the weak gluing theorem.
pub fn check_main_sp(inst: &GluingInstance) -> Verdict {
    let rn = inst.r() as i64 * inst.n() as i64;
    let s1 = weak_budget(inst.left()) - rn;
    let s2 = weak_budget(inst.right()) - rn;
    let (side, budget) = if s1 >= s2 {
        (Side::Left, weak_budget(inst.left()))
    } else {
        (Side::Right, weak_budget(inst.right()))
    };
    let checks = alloc::vec![
        Check::at_least("n >= 1", inst.n() as i64, 1),
        Check::at_least(format!("weak gluing side {}", side.index()), budget, rn),
    ];
    let witness = (s1.max(s2) >= 0).then_some(side);
    Verdict::from_checks(Theorem::MainSp, checks, Conclusion::Wbn, witness)
}

/// Hypotheses of the weak hyperplane gluing theorem.
pub fn check_main_hyp(inst: &HyperplaneInstance) -> Verdict {
    let c = inst.inner();
    let (d, g, r) = (c.d() as i64, c.g() as i64, c.r() as i64);
    let checks = alloc::vec![
        Check::at_least("n >= 1", inst.n() as i64, 1),
        Check::at_least("d' - r g' - 1 >= 0", d - r * g - 1, 0),
        Check::at_least(
            "(r+1)d' - r g' + r >= r n",
            weak_budget(c),
            r * inst.n() as i64
        ),
    ];
    Verdict::from_checks(Theorem::MainHyp, checks, Conclusion::Wbn, None)
}

/// Hypotheses for attaching a degree-`a` rational curve at `a + 2` points.
pub fn check_small_mid(q: &SmallMidQuery) -> Verdict {
    let (a, r) = (q.a() as i64, q.spec().r() as i64);
    let rho = numerics::rho(q.spec());
    let checks = alloc::vec![
        Check::at_least("2a >= r - 2", 2 * a, r - 2),
        Check::at_least("a >= r - rho", a, r - rho),
        Check::at_most("a <= r", a, r),
        Check::at_least("rho >= 0", rho, 0),
    ];
    Verdict::from_checks(Theorem::SmallMid, checks, Conclusion::Bn, None)
}

/// Hypotheses for gluing to a Brill-Noether curve inside a hyperplane.
pub fn check_small_hyp(inst: &HyperplaneInstance) -> Verdict {
    let (n, r) = (inst.n() as i64, inst.r() as i64);
    let d2 = inst.hyper();
    let checks = alloc::vec![
        Check::at_most("n <= r + 2", n, r + 2),
        Check::at_least("d'' + n >= g'' + r", d2.d() as i64 + n, d2.g() as i64 + r),
        Check::at_least("rho of the union >= 0", inst.union_rho(), 0),
    ];
    Verdict::from_checks(Theorem::SmallHyp, checks, Conclusion::Bn, None)
}
