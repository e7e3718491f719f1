//! Search for a two-component degeneration of a target class.
//!
//! A target `(d, g, r)` is written as `C_1 ∪ C_2` with both sides in the
//! nonspecial range and `n = g - g_1 - g_2 + 1` nodes, then certified with the
//! main gluing theorem. Candidates are tried in canonical order: fewest nodes,
//! then most balanced degrees, then lexicographically on `(d_1, g_1, g_2)`.

use alloc::vec::Vec;

use crate::certificate::Certificate;
use crate::certifier::certify_main;
use crate::error::{Error, Result};
use crate::hypotheses::{self, GluingInstance};
use crate::numerics::{self, CurveSpec};
use crate::verifier;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecompositionPlan {
    pub left: CurveSpec,
    pub right: CurveSpec,
    pub n: u32,
    pub certificate: Certificate,
}

/// The space a failed search exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchBounds {
    /// `d_1` ranges over `r..=d - r`; empty when `d < 2r`.
    pub d1_min: u32,
    pub d1_max: i64,
    pub candidates: u64,
    /// Candidates whose hypotheses passed but which failed to certify or
    /// verify. Nonzero only on a certifier bug.
    pub rejected_certificates: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "outcome", rename_all = "kebab-case"))]
pub enum PlanOutcome {
    Found(DecompositionPlan),
    Infeasible(SearchBounds),
}

fn validate(target: &CurveSpec) -> Result<()> {
    if target.r() < 3 {
        return Err(Error::PlannerAmbient(target.r()));
    }
    let rho = numerics::rho(target);
    if rho < 0 {
        return Err(Error::NegativeRho(rho));
    }
    Ok(())
}

/// Every split of `target` into two nonspecial sides, in canonical order.
fn candidates(target: &CurveSpec) -> Vec<GluingInstance> {
    let (d, g, r) = (target.d(), target.g(), target.r());
    let mut out = Vec::new();
    if d < 2 * r {
        return out;
    }
    for d1 in r..=d - r {
        let d2 = d - d1;
        for g1 in 0..=d1 - r {
            for g2 in 0..=d2 - r {
                let Some(n) = (g + 1).checked_sub(g1 + g2).filter(|&n| n >= 1) else {
                    continue;
                };
                let pieces =
                    CurveSpec::new(d1, g1, r).and_then(|l| Ok((l, CurveSpec::new(d2, g2, r)?)));
                if let Ok(inst) = pieces.and_then(|(l, rt)| GluingInstance::new(l, rt, n)) {
                    out.push(inst);
                }
            }
        }
    }
    out.sort_by_key(|i| {
        let (d1, d2) = (i.left().d(), i.right().d());
        (i.n(), d1.abs_diff(d2), d1, i.left().g(), i.right().g())
    });
    out
}

/// Plans in canonical order, each certified and verified, plus the number of
/// candidates examined and rejected along the way.
fn search(target: &CurveSpec, limit: usize) -> (Vec<DecompositionPlan>, SearchBounds) {
    let all = candidates(target);
    let mut bounds = SearchBounds {
        d1_min: target.r(),
        d1_max: target.d() as i64 - target.r() as i64,
        candidates: all.len() as u64,
        rejected_certificates: 0,
    };
    let mut plans = Vec::new();
    for inst in all {
        if plans.len() >= limit {
            break;
        }
        if !hypotheses::main_holds(&inst) {
            continue;
        }
        match certify_main(&inst) {
            Ok(certificate) if verifier::verify(&certificate).ok => plans.push(DecompositionPlan {
                left: *inst.left(),
                right: *inst.right(),
                n: inst.n(),
                certificate,
            }),
            _ => bounds.rejected_certificates += 1,
        }
    }
    (plans, bounds)
}

/// First decomposition of `target` in canonical order.
pub fn plan_decomposition(target: &CurveSpec) -> Result<PlanOutcome> {
    validate(target)?;
    let (mut plans, bounds) = search(target, 1);
    Ok(match plans.pop() {
        Some(plan) => PlanOutcome::Found(plan),
        None => PlanOutcome::Infeasible(bounds),
    })
}

/// Up to `limit` decompositions of `target` in canonical order.
pub fn enumerate_decompositions(
    target: &CurveSpec,
    limit: usize,
) -> Result<Vec<DecompositionPlan>> {
    validate(target)?;
    Ok(search(target, limit).0)
}
