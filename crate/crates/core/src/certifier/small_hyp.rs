use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::main::weak_leaf;
use super::{certify_main, small_mid, Certified, Refusal};
use crate::certificate::{Case, Certificate, Instance, LemmaTag, Node};
use crate::hypotheses::{self, GluingInstance, HyperplaneInstance, SmallMidQuery};
use crate::numerics::{self, CurveSpec};

pub(super) fn certify(inst: &HyperplaneInstance) -> Certified {
    let verdict = hypotheses::check_small_hyp(inst);
    if !verdict.passed() {
        return Err(Refusal::hypotheses(verdict));
    }
    let fuel = (inst.hyper().d() as usize + 1) * (inst.r() as usize + 3) + inst.n() as usize + 8;
    step(inst, fuel)
}

fn internal(e: impl core::fmt::Display) -> Refusal {
    Refusal::internal(format!("{e}"))
}

fn curve(d: i64, g: i64, r: u32) -> Result<CurveSpec, Refusal> {
    match (u32::try_from(d), u32::try_from(g)) {
        (Ok(d), Ok(g)) => CurveSpec::new(d, g, r).map_err(internal),
        _ => Err(Refusal::internal(format!(
            "no curve of degree {d} and genus {g}"
        ))),
    }
}

fn weak(left: CurveSpec, right: CurveSpec, n: u32) -> Certified {
    let inst = GluingInstance::new(left, right, n).map_err(internal)?;
    weak_leaf(&inst, Case::WeakGluing)
}

fn node(
    inst: &HyperplaneInstance,
    case: Case,
    tags: Vec<LemmaTag>,
    children: Vec<Certificate>,
) -> Certificate {
    Certificate {
        instance: Instance::Hyperplane(*inst),
        case,
        node: Node::Lemma { tags, children },
    }
}

fn recurse(inner: CurveSpec, hyper: CurveSpec, n: u32, fuel: usize) -> Certified {
    let inst = HyperplaneInstance::new(inner, hyper, n).map_err(internal)?;
    if !hypotheses::check_small_hyp(&inst).passed() {
        return Err(Refusal::internal(format!(
            "intermediate instance {inst} fails its hypotheses"
        )));
    }
    step(&inst, fuel)
}

fn step(inst: &HyperplaneInstance, fuel: usize) -> Certified {
    let fuel = fuel
        .checked_sub(1)
        .ok_or_else(|| Refusal::internal(format!("recursion limit reached at {inst}")))?;
    let (c, dh, n, r) = (*inst.inner(), *inst.hyper(), inst.n(), inst.r());
    let (d1, g1) = (c.d() as i64, c.g() as i64);
    let (d2, g2) = (dh.d() as i64, dh.g() as i64);
    let r_ = r as i64;
    let lifted = inst.hyper_in_ambient();

    if d2 < g2 + r_ - 1 {
        return hyperplane_step(inst, fuel);
    }
    if n < r {
        return Ok(node(
            inst,
            Case::HypDegenerate,
            Vec::new(),
            vec![weak(c, lifted, n)?],
        ));
    }
    if c.is_nns() {
        if g1 == 0 {
            let verdict = hypotheses::check_main_hyp(inst);
            if !verdict.passed() {
                return Err(Refusal::hypotheses(verdict));
            }
            return Ok(Certificate {
                instance: Instance::Hyperplane(*inst),
                case: Case::HypRationalTransverse,
                node: Node::BaseMainHyp { verdict },
            });
        }
        let c0 = curve(d1 - 1, g1 - 1, r)?;
        let line = CurveSpec::line(r).map_err(internal)?;
        let with_line = numerics::glue(&line, &lifted, 1).map_err(internal)?;
        let main_inst = GluingInstance::new(c0, with_line, n + 1).map_err(internal)?;
        let main = certify_main(&main_inst).map_err(|e| {
            Refusal::internal(format!("gluing {main_inst} is not certified: {}", e.reason))
        })?;
        return Ok(node(
            inst,
            Case::HypTransverseLine,
            vec![
                LemmaTag::SpecializeComponent,
                LemmaTag::HyperplanePointsLift,
            ],
            vec![weak(c0, line, 2)?, weak(line, lifted, 1)?, main],
        ));
    }

    if numerics::rho(&c) < 0 {
        return Err(Refusal::internal(format!(
            "special transverse curve {c} has negative rho"
        )));
    }
    if n <= r {
        return Ok(node(
            inst,
            Case::HypSpecialFew,
            Vec::new(),
            vec![weak(c, lifted, n)?],
        ));
    }
    let tags = || {
        vec![
            LemmaTag::SpecializeTransverseCurve,
            LemmaTag::HyperplanePointsLift,
        ]
    };
    if d2 == r_ - 1 && n == r + 1 {
        let q = SmallMidQuery::new(c, r - 1).map_err(internal)?;
        let sub = small_mid::certify(&q)
            .map_err(|e| Refusal::internal(format!("{q} is not certified: {}", e.reason)))?;
        return Ok(node(inst, Case::HypSpecialMid, Vec::new(), vec![sub]));
    }
    if d2 == r_ - 1 && n == r + 2 {
        let c0 = curve(d1 - r_, g1 - r_, r)?;
        if numerics::rho(&c0) < 1 {
            return Err(Refusal::internal(format!("{c0} has rho below 1")));
        }
        let rnc = CurveSpec::rational_normal(r).map_err(internal)?;
        let joined = numerics::glue(&c0, &lifted, r + 1).map_err(internal)?;
        let children = vec![
            weak(c0, rnc, r + 1)?,
            recurse(c0, dh, r + 1, fuel)?,
            weak(rnc, joined, r + 2)?,
        ];
        return Ok(node(inst, Case::HypSpecialExceptional, tags(), children));
    }
    let c0 = curve(d1 - r_ + 1, g1 - r_, r)?;
    let q = SmallMidQuery::new(c0, r - 1).map_err(internal)?;
    let mid = small_mid::certify(&q)
        .map_err(|e| Refusal::internal(format!("{q} is not certified: {}", e.reason)))?;
    let joined = numerics::glue(&c0, &lifted, n - 1).map_err(internal)?;
    let conic_like = CurveSpec::rational_normal(r - 1).map_err(internal)?;
    let children = vec![
        mid,
        recurse(c0, dh, n - 1, fuel)?,
        recurse(joined, conic_like, r + 2, fuel)?,
    ];
    Ok(node(inst, Case::HypSpecialStep, tags(), children))
}

/// `d'' <= g'' + r - 2`: degenerate the hyperplane curve.
fn hyperplane_step(inst: &HyperplaneInstance, fuel: usize) -> Certified {
    let (c, dh, n, r) = (*inst.inner(), *inst.hyper(), inst.n(), inst.r());
    let r_ = r as i64;
    if numerics::rho(&dh) < 0 {
        return Err(Refusal::internal(format!(
            "hyperplane curve {dh} has negative rho"
        )));
    }
    let d0 = curve(dh.d() as i64 - r_ + 1, dh.g() as i64 - r_, r - 1)?;
    let rnc = CurveSpec::rational_normal(r - 1).map_err(internal)?;
    let d0_lifted = d0.with_ambient(r).map_err(internal)?;
    let joined = numerics::glue(&c, &d0_lifted, n).map_err(internal)?;
    let children = vec![
        weak(d0, rnc, r + 1)?,
        recurse(c, d0, n, fuel)?,
        recurse(joined, rnc, r + 1, fuel)?,
    ];
    Ok(node(
        inst,
        Case::HypHyperplaneStep,
        vec![
            LemmaTag::SpecializeHyperplaneCurve,
            LemmaTag::HyperplanePointsLift,
            LemmaTag::AdmitsTransverseDeformation,
            LemmaTag::InteriorCurve,
            LemmaTag::NormalComplexRestriction,
            LemmaTag::UnionSmoothing,
        ],
        children,
    ))
}
