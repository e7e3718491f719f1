use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::main::weak_leaf;
use super::{Certified, Refusal};
use crate::certificate::{Case, Certificate, Instance, LemmaTag, Node};
use crate::hypotheses::{self, GluingInstance, SmallMidQuery};
use crate::numerics::{self, CurveSpec};

pub(super) fn certify(q: &SmallMidQuery) -> Certified {
    let verdict = hypotheses::check_small_mid(q);
    if !verdict.passed() {
        return Err(Refusal::hypotheses(verdict));
    }
    step(q, q.spec().d() as usize + 1)
}

/// `C` with a degree-`a` rational curve attached at `a + 2` points.
pub(crate) fn with_attached(spec: &CurveSpec, a: u32) -> Result<CurveSpec, Refusal> {
    CurveSpec::new(spec.d() + a, spec.g() + a + 1, spec.r())
        .map_err(|e| Refusal::internal(format!("{e}")))
}

fn curve(d: i64, g: i64, r: u32) -> Result<CurveSpec, Refusal> {
    match (u32::try_from(d), u32::try_from(g)) {
        (Ok(d), Ok(g)) => CurveSpec::new(d, g, r).map_err(|e| Refusal::internal(format!("{e}"))),
        _ => Err(Refusal::internal(format!(
            "no curve of degree {d} and genus {g}"
        ))),
    }
}

fn weak(left: CurveSpec, right: CurveSpec, n: u32) -> Certified {
    let inst =
        GluingInstance::new(left, right, n).map_err(|e| Refusal::internal(format!("{e}")))?;
    weak_leaf(&inst, Case::WeakGluing)
}

fn node(
    q: &SmallMidQuery,
    case: Case,
    tags: Vec<LemmaTag>,
    children: Vec<Certificate>,
) -> Certificate {
    Certificate {
        instance: Instance::SmallMid(*q),
        case,
        node: Node::Lemma { tags, children },
    }
}

fn recurse(spec: CurveSpec, a: u32, fuel: usize) -> Certified {
    let q = SmallMidQuery::new(spec, a).map_err(|e| Refusal::internal(format!("{e}")))?;
    let verdict = hypotheses::check_small_mid(&q);
    if !verdict.passed() {
        return Err(Refusal::internal(format!(
            "intermediate query {q} fails its hypotheses"
        )));
    }
    step(&q, fuel)
}

fn step(q: &SmallMidQuery, fuel: usize) -> Certified {
    let fuel = fuel
        .checked_sub(1)
        .ok_or_else(|| Refusal::internal(format!("recursion limit reached at {q}")))?;
    let c = *q.spec();
    let (d, g, r, a) = (c.d() as i64, c.g() as i64, c.r(), q.a());
    let (r_, a_) = (r as i64, a as i64);
    let rho = numerics::rho(&c);

    if a == r {
        let rnc = CurveSpec::rational_normal(r).map_err(|e| Refusal::internal(format!("{e}")))?;
        return Ok(node(
            q,
            Case::MidFullDegree,
            vec![
                LemmaTag::InterpolationThroughGeneralPoints,
                LemmaTag::RationalCurveThroughPoints,
                LemmaTag::InteriorCurve,
            ],
            vec![weak(c, rnc, r + 2)?],
        ));
    }
    if rho > r_ {
        let c0 = curve(d - 1, g, r)?;
        let children = if a >= 1 {
            let arc = curve(a_, 0, r)?;
            let joined =
                numerics::glue(&c0, &arc, a + 1).map_err(|e| Refusal::internal(format!("{e}")))?;
            let line = CurveSpec::line(r).map_err(|e| Refusal::internal(format!("{e}")))?;
            vec![weak(c0, arc, a + 1)?, weak(joined, line, 2)?]
        } else {
            Vec::new()
        };
        return Ok(node(
            q,
            Case::MidRichRho,
            vec![
                LemmaTag::InteriorCurve,
                LemmaTag::NormalComplexRestriction,
                LemmaTag::UnionSmoothing,
            ],
            children,
        ));
    }
    let tags = || {
        vec![
            LemmaTag::InterpolationThroughGeneralPoints,
            LemmaTag::RationalCurveThroughPoints,
            LemmaTag::InteriorCurve,
            LemmaTag::NormalComplexRestriction,
            LemmaTag::UnionSmoothing,
        ]
    };
    if g > r_ {
        let c0 = curve(d - r_, g - r_ - 1, r)?;
        let sub = recurse(c0, a, fuel)?;
        let rnc = CurveSpec::rational_normal(r).map_err(|e| Refusal::internal(format!("{e}")))?;
        let outer = weak(rnc, with_attached(&c0, a)?, r + 2)?;
        return Ok(node(q, Case::MidGenusDrop, tags(), vec![sub, outer]));
    }
    if rho >= 1 && g >= 1 && a_ >= r_ + 1 - rho {
        let c0 = curve(d - 1, g - 1, r)?;
        let sub = recurse(c0, a, fuel)?;
        let line = CurveSpec::line(r).map_err(|e| Refusal::internal(format!("{e}")))?;
        let outer = weak(line, with_attached(&c0, a)?, 2)?;
        return Ok(node(q, Case::MidLineDrop, tags(), vec![sub, outer]));
    }
    if d == 2 * r_ - a_ && g == r_ - a_ {
        return Ok(node(
            q,
            Case::MidCompletion,
            vec![
                LemmaTag::DualizingSheafConstruction,
                LemmaTag::InteriorCurve,
            ],
            Vec::new(),
        ));
    }
    Err(Refusal::internal(format!("no arm applies to {q}")))
}
