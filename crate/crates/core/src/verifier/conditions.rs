//! Independent recomputation of every theorem's hypotheses.
//!
//! Nothing here calls into the hypothesis checkers or the certifier; the only
//! shared code is the numerics module. Where a quantity admits two routes the
//! other one is taken: point conditions go through the interpolation capacity
//! and the Brill-Noether gate through cross-multiplied node counts.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::hypotheses::{GluingInstance, HyperplaneInstance, SmallMidQuery};
use crate::numerics::{self, Capacity, CurveSpec};

/// One condition evaluated by the verifier; it holds iff `slack >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Condition {
    pub label: String,
    pub rendered: String,
    pub slack: i64,
}

impl Condition {
    pub fn new(label: impl Into<String>, rendered: impl Into<String>, slack: i64) -> Self {
        Self {
            label: label.into(),
            rendered: rendered.into(),
            slack,
        }
    }

    /// `lhs >= rhs`.
    pub fn ge(label: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Self::new(label, format!("{lhs} >= {rhs}"), lhs - rhs)
    }

    /// `lhs <= rhs`.
    pub fn le(label: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Self::new(label, format!("{lhs} <= {rhs}"), rhs - lhs)
    }

    /// Equality of two displayable values, slack 0 or -1.
    pub fn same<T: PartialEq + core::fmt::Display>(
        label: impl Into<String>,
        expected: &T,
        found: &T,
    ) -> Self {
        if expected == found {
            Self::new(label, format!("{found}"), 0)
        } else {
            Self::new(label, format!("expected {expected}, found {found}"), -1)
        }
    }

    pub fn flag(label: impl Into<String>, rendered: impl Into<String>, holds: bool) -> Self {
        Self::new(label, rendered, if holds { 0 } else { -1 })
    }

    pub fn holds(&self) -> bool {
        self.slack >= 0
    }
}

/// Collapses a list of conditions into one whose slack is the minimum.
pub fn all_of(label: &str, conditions: &[Condition]) -> Condition {
    match conditions.iter().min_by_key(|c| c.slack) {
        None => Condition::new(label, "vacuous", 0),
        Some(worst) if worst.slack < 0 => Condition::new(
            label,
            format!("{}: {}", worst.label, worst.rendered),
            worst.slack,
        ),
        Some(worst) => Condition::new(label, "all hold", worst.slack),
    }
}

fn point_slack(spec: &CurveSpec, n: u32) -> (String, i64) {
    match numerics::interpolation_capacity(spec) {
        Ok(Capacity::Unbounded) => (String::from("unbounded capacity"), 0),
        Ok(Capacity::Bounded(max)) => (format!("{n} <= {max}"), max as i64 - n as i64),
        Err(_) => (format!("no nonspecial class {spec}"), -1),
    }
}

fn margin_alternative(spec: &CurveSpec, n: u32, idx: u8) -> Condition {
    let label = format!("margin condition on side {idx}");
    let m = numerics::margin(spec, n);
    let excess = spec.d() as i64 - spec.g() as i64 - spec.r() as i64;
    if excess > 0 {
        Condition::ge(label, m, 2)
    } else if excess == 0 {
        Condition::ge(label, m, 4)
    } else {
        Condition::new(label, format!("{spec} below the nonspecial range"), excess)
    }
}

/// Every gate of the main gluing theorem, one condition each.
pub fn main_gates(inst: &GluingInstance) -> Vec<Condition> {
    let (l, rt, n) = (inst.left(), inst.right(), inst.n());
    let r = l.r() as i64;
    let mut out = Vec::with_capacity(8);
    out.push(Condition::ge("r >= 2", r, 2));
    for (idx, s) in [(1u8, l), (2, rt)] {
        out.push(Condition::ge(
            format!("side {idx} in the nonspecial range"),
            s.d() as i64,
            s.g() as i64 + r,
        ));
        let (rendered, slack) = point_slack(s, n);
        out.push(Condition::new(
            format!("side {idx} through n points"),
            rendered,
            slack,
        ));
    }
    out.push(Condition::ge("n >= 1", n as i64, 1));

    let e1 = l.d() as i64 - l.g() as i64 - r;
    let e2 = rt.d() as i64 - rt.g() as i64 - r;
    let alternatives = [
        Condition::new(
            "both limit linearly normal",
            format!("excesses {e1}, {e2}"),
            -(e1.abs() + e2.abs()),
        ),
        margin_alternative(l, n, 1),
        margin_alternative(rt, n, 2),
    ];
    let best = alternatives
        .iter()
        .max_by_key(|c| c.slack)
        .cloned()
        .unwrap_or_else(|| Condition::new("linear normality or margin", "no alternative", -1));
    out.push(Condition::new(
        format!("linear normality or margin ({})", best.label),
        best.rendered,
        best.slack,
    ));

    let bound = r * (r + 2) + numerics::rho(l) + numerics::rho(rt);
    out.push(Condition::le(
        "r n <= r(r+2) + rho_1 + rho_2",
        r * n as i64,
        bound,
    ));
    out
}

/// Weak gluing inequality for the better side.
pub fn weak_gate(inst: &GluingInstance) -> Condition {
    let r = inst.left().r() as i64;
    let rn = r * inst.n() as i64;
    let budget = |s: &CurveSpec| (r + 1) * s.d() as i64 - r * s.g() as i64 + r;
    let (b1, b2) = (budget(inst.left()), budget(inst.right()));
    let (idx, b) = if b1 >= b2 { (1, b1) } else { (2, b2) };
    Condition::ge(format!("weak gluing side {idx}"), b, rn)
}

pub fn main_hyp_gates(inst: &HyperplaneInstance) -> Vec<Condition> {
    let c = inst.inner();
    let (d, g, r) = (c.d() as i64, c.g() as i64, c.r() as i64);
    alloc::vec![
        Condition::ge("n >= 1", inst.n() as i64, 1),
        Condition::ge("d' - r g' - 1 >= 0", d - r * g - 1, 0),
        Condition::ge(
            "(r+1)d' - r g' + r >= r n",
            (r + 1) * d - r * g + r,
            r * inst.n() as i64
        ),
    ]
}

pub fn small_mid_gates(q: &SmallMidQuery) -> Vec<Condition> {
    let (a, r) = (q.a() as i64, q.spec().r() as i64);
    let rho = numerics::rho(q.spec());
    alloc::vec![
        Condition::ge("2a >= r - 2", 2 * a, r - 2),
        Condition::ge("a + rho >= r", a + rho, r),
        Condition::le("a <= r", a, r),
        Condition::ge("rho >= 0", rho, 0),
    ]
}

pub fn small_hyp_gates(inst: &HyperplaneInstance) -> Vec<Condition> {
    let (n, r) = (inst.n() as i64, inst.r() as i64);
    let h = inst.hyper();
    let union_rho = inst
        .hyper()
        .with_ambient(inst.r())
        .and_then(|lifted| numerics::glue(inst.inner(), &lifted, inst.n()))
        .map(|u| numerics::rho(&u));
    let rho_cond = match union_rho {
        Ok(rho) => Condition::ge("rho of the union >= 0", rho, 0),
        Err(e) => Condition::new("rho of the union >= 0", format!("{e}"), -1),
    };
    alloc::vec![
        Condition::le("n <= r + 2", n, r + 2),
        Condition::ge("d'' + n >= g'' + r", h.d() as i64 + n, h.g() as i64 + r),
        rho_cond,
    ]
}

pub fn min_slack(conditions: &[Condition]) -> i64 {
    conditions.iter().map(|c| c.slack).min().unwrap_or(0)
}
