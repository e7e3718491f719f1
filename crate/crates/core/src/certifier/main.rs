use alloc::boxed::Box;
use alloc::format;

use super::{Certified, Fault, Refusal};
use crate::certificate::{Case, Certificate, Instance, Node, SplitKind, SplitPlan};
use crate::hypotheses::{self, GluingInstance, Side};
use crate::numerics::{self, CurveSpec};

/// Classes at which a margin of exactly 2 forces `n = 11`.
const EXCESS_EXCEPTIONS: [(u32, u32, u32); 2] = [(6, 2, 3), (8, 2, 5)];
/// Classes at which a margin of exactly 4 forces `n = 10`.
const BALANCED_EXCEPTIONS: [(u32, u32, u32); 2] = [(6, 3, 3), (8, 3, 5)];

/// Arm taken when both sides are limit linearly normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearlyNormalArm {
    /// `n <= r + 2`.
    Base,
    /// Split a line off the given side, which has the lower genus.
    LineOnLower(Side),
    /// Split a rational normal curve off the given side, which has the higher
    /// genus.
    RncOnHigher(Side),
}

/// The arm the certifier takes for an instance whose sides are both limit
/// linearly normal, or `None` if no arm applies.
pub fn linearly_normal_arm(inst: &GluingInstance) -> Option<LinearlyNormalArm> {
    MainCertifier::new(None).linearly_normal_arm(inst)
}

fn key(spec: &CurveSpec) -> (u32, u32, u32) {
    (spec.d(), spec.g(), spec.r())
}

fn spec(d: i64, g: i64, r: u32) -> Result<CurveSpec, Refusal> {
    let d = u32::try_from(d).map_err(|_| Refusal::internal(format!("negative degree {d}")))?;
    let g = u32::try_from(g).map_err(|_| Refusal::internal(format!("negative genus {g}")))?;
    CurveSpec::new(d, g, r).map_err(|e| Refusal::internal(format!("{e}")))
}

fn gluing(left: CurveSpec, right: CurveSpec, n: u32) -> Result<GluingInstance, Refusal> {
    GluingInstance::new(left, right, n).map_err(|e| Refusal::internal(format!("{e}")))
}

fn swap_node(inst: &GluingInstance, case: Case, child: Certificate) -> Certificate {
    Certificate {
        instance: Instance::Gluing(*inst),
        case,
        node: Node::Swap {
            child: Box::new(child),
        },
    }
}

#[derive(Clone, Copy)]
enum Outer {
    Recurse,
    /// Exchange sides and split a line off the new left side.
    Exchange,
}

pub(super) struct MainCertifier {
    fault: Option<Fault>,
}

impl MainCertifier {
    pub(super) fn new(fault: Option<Fault>) -> Self {
        Self { fault }
    }

    fn has(&self, fault: Fault) -> bool {
        self.fault == Some(fault)
    }

    pub(super) fn certify(&self, inst: &GluingInstance) -> Certified {
        if !self.has(Fault::RootGateSkipped) {
            let verdict = hypotheses::check_main(inst);
            if !verdict.passed() {
                return Err(Refusal::hypotheses(verdict));
            }
        }
        let fuel = inst.total_degree() as usize + inst.n() as usize + 8;
        self.dispatch(inst, fuel)
    }

    fn recurse(&self, inst: &GluingInstance, fuel: usize) -> Certified {
        if !hypotheses::main_holds(inst) {
            return Err(Refusal::internal(format!(
                "intermediate instance {inst} fails the main hypotheses"
            )));
        }
        self.dispatch(inst, fuel)
    }

    fn base_bound(&self, r: u32) -> u32 {
        r + 2 + u32::from(self.has(Fault::LooseBaseBound))
    }

    fn dispatch(&self, inst: &GluingInstance, fuel: usize) -> Certified {
        let fuel = fuel
            .checked_sub(1)
            .ok_or_else(|| Refusal::internal(format!("recursion limit reached at {inst}")))?;
        if inst.n() <= self.base_bound(inst.r()) {
            return weak_leaf(inst, Case::FewNodes);
        }
        if inst.left().is_limit_linearly_normal() && inst.right().is_limit_linearly_normal() {
            self.linearly_normal(inst, fuel)
        } else {
            self.unbalanced(inst, fuel)
        }
    }

    fn line_case(&self, g: u32, r: u32, n: u32) -> bool {
        let (g, r_) = (g as i64, r as i64);
        let lhs = (r_ - 1) * n as i64;
        let rhs = 4 * g + r_ * r_ + 2 * r_ - 7;
        let strict =
            matches!((g, r), (3, 3) | (3, 5)) && !self.has(Fault::LineCaseStrictnessSkipped);
        g >= 1 && if strict { lhs < rhs } else { lhs <= rhs }
    }

    fn rnc_case(&self, g: u32, r: u32, n: u32) -> bool {
        let (g, r_) = (g as i64, r as i64);
        let lhs = (r_ - 1) * n as i64;
        let rhs = 4 * g + r_ * r_ - r_ - 4;
        let strict = matches!((g, r), (5, 3) | (7, 5));
        g >= r_ && if strict { lhs < rhs } else { lhs <= rhs }
    }

    fn linearly_normal_arm(&self, inst: &GluingInstance) -> Option<LinearlyNormalArm> {
        let (r, n) = (inst.r(), inst.n());
        if n <= self.base_bound(r) {
            return Some(LinearlyNormalArm::Base);
        }
        let lower = if self.has(Fault::LowerGenusIgnored) || inst.left().g() <= inst.right().g() {
            Side::Left
        } else {
            Side::Right
        };
        let higher = match lower {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        };
        if self.line_case(inst.side(lower).g(), r, n) {
            Some(LinearlyNormalArm::LineOnLower(lower))
        } else if self.rnc_case(inst.side(higher).g(), r, n) {
            Some(LinearlyNormalArm::RncOnHigher(higher))
        } else {
            None
        }
    }

    fn linearly_normal(&self, inst: &GluingInstance, fuel: usize) -> Certified {
        match self.linearly_normal_arm(inst) {
            Some(LinearlyNormalArm::Base) => weak_leaf(inst, Case::FewNodes),
            Some(LinearlyNormalArm::LineOnLower(side)) => {
                self.oriented(inst, side, Case::LowerGenusFirst, |o| {
                    self.split_line2(o, Case::LinearlyNormalLine, Outer::Recurse, fuel)
                })
            }
            Some(LinearlyNormalArm::RncOnHigher(side)) => {
                self.oriented(inst, side, Case::HigherGenusFirst, |o| {
                    self.split_rnc(o, fuel)
                })
            }
            None => Err(Refusal::internal(format!(
                "no arm applies to the limit linearly normal instance {inst}"
            ))),
        }
    }

    /// Runs `f` on the instance with `side` moved to the left, recording the
    /// exchange as a swap node when needed.
    fn oriented(
        &self,
        inst: &GluingInstance,
        side: Side,
        case: Case,
        f: impl FnOnce(&GluingInstance) -> Certified,
    ) -> Certified {
        match side {
            Side::Left => f(inst),
            Side::Right => Ok(swap_node(inst, case, f(&inst.swapped())?)),
        }
    }

    fn unbalanced(&self, inst: &GluingInstance, fuel: usize) -> Certified {
        let n = inst.n();
        if self.has(Fault::MarginSideIgnored) || hypotheses::margin_condition(inst.left(), n) {
            self.margin_left(inst, true, fuel)
        } else if hypotheses::margin_condition(inst.right(), n) {
            let child = self.margin_left(&inst.swapped(), true, fuel)?;
            Ok(swap_node(inst, Case::MarginFirst, child))
        } else {
            Err(Refusal::internal(format!(
                "no side of {inst} satisfies the margin condition"
            )))
        }
    }

    /// Left side satisfies the margin condition.
    fn margin_left(&self, inst: &GluingInstance, allow_exchange: bool, fuel: usize) -> Certified {
        let (c1, n) = (inst.left(), inst.n());
        let margin = numerics::margin(c1, n);
        match c1.excess() {
            e if e > 0 => {
                if allow_exchange
                    && !self.has(Fault::ElevenExceptionSkipped)
                    && EXCESS_EXCEPTIONS.contains(&key(c1))
                    && margin == 2
                {
                    if n != 11 {
                        return Err(Refusal::internal(format!("margin 2 at {c1} with n = {n}")));
                    }
                    let swapped = inst.swapped();
                    if !hypotheses::margin_condition(swapped.left(), n) {
                        return Err(Refusal::internal(format!(
                            "after exchange, {} fails the margin condition",
                            swapped.left()
                        )));
                    }
                    let child = self.margin_left(&swapped, false, fuel)?;
                    return Ok(swap_node(inst, Case::ExceptionalEleven, child));
                }
                self.excess_line(inst, fuel)
            }
            0 => {
                if allow_exchange
                    && !self.has(Fault::TenExceptionSkipped)
                    && BALANCED_EXCEPTIONS.contains(&key(c1))
                    && margin == 4
                {
                    if n != 10 {
                        return Err(Refusal::internal(format!("margin 4 at {c1} with n = {n}")));
                    }
                    let swapped = inst.swapped();
                    let child = self.excess_line(&swapped, fuel)?;
                    return Ok(swap_node(inst, Case::ExceptionalTen, child));
                }
                self.split_line2(inst, Case::BalancedLine, Outer::Exchange, fuel)
            }
            _ => Err(Refusal::internal(format!(
                "{c1} is not nondegenerate nonspecial"
            ))),
        }
    }

    /// `d_1 > g_1 + r`: a line meeting the rest once.
    fn excess_line(&self, inst: &GluingInstance, fuel: usize) -> Certified {
        let (c1, c2, r, n) = (*inst.left(), *inst.right(), inst.r(), inst.n());
        if c1.excess() <= 0 || n < 2 {
            return Err(Refusal::internal(format!(
                "one-node line split does not apply to {inst}"
            )));
        }
        let genus = c1.g() as i64 - i64::from(self.has(Fault::LineOneGenusDropped));
        let plan = SplitPlan {
            parent: c1,
            piece_main: spec(c1.d() as i64 - 1, genus, r)?,
            piece_off: line(r)?,
            n0: 1,
            n_prime: n - 2,
            n_dprime: 2,
        };
        let inner_inst = gluing(plan.piece_off, c2, plan.n_dprime)?;
        let inner = weak_leaf(&inner_inst, Case::WeakGluing)?;
        let outer_n = if self.has(Fault::OuterNodeCountKept) {
            n
        } else {
            plan.main_points()
        };
        let outer_inst = gluing(plan.piece_main, union(&inner_inst)?, outer_n)?;
        let outer = self.recurse(&outer_inst, fuel)?;
        Ok(split_node(
            inst,
            Case::ExcessLine,
            SplitKind::Line1,
            plan,
            inner,
            outer,
        ))
    }

    /// A line meeting the rest twice, dropping the genus of the left side.
    fn split_line2(
        &self,
        inst: &GluingInstance,
        case: Case,
        mode: Outer,
        fuel: usize,
    ) -> Certified {
        let (c1, c2, r, n) = (*inst.left(), *inst.right(), inst.r(), inst.n());
        if c1.g() == 0 || n < 2 {
            return Err(Refusal::internal(format!(
                "two-node line split does not apply to {inst}"
            )));
        }
        let genus = c1.g() as i64 - i64::from(!self.has(Fault::LineTwoGenusKept));
        let plan = SplitPlan {
            parent: c1,
            piece_main: spec(c1.d() as i64 - 1, genus, r)?,
            piece_off: line(r)?,
            n0: if self.has(Fault::LineTwoNodeCount) {
                3
            } else {
                2
            },
            n_prime: n - 2,
            n_dprime: 2,
        };
        let inner_inst = gluing(plan.piece_off, c2, plan.n_dprime)?;
        let inner = weak_leaf(&inner_inst, Case::WeakGluing)?;
        let outer_inst = gluing(plan.piece_main, union(&inner_inst)?, plan.main_points())?;
        let outer = match mode {
            Outer::Recurse => self.recurse(&outer_inst, fuel)?,
            Outer::Exchange => {
                if !hypotheses::main_holds(&outer_inst) {
                    return Err(Refusal::internal(format!(
                        "intermediate instance {outer_inst} fails the main hypotheses"
                    )));
                }
                let child = self.excess_line(&outer_inst.swapped(), fuel)?;
                swap_node(&outer_inst, Case::ExchangeIndices, child)
            }
        };
        Ok(split_node(inst, case, SplitKind::Line2, plan, inner, outer))
    }

    /// A rational normal curve meeting the rest in `r + 1` points.
    fn split_rnc(&self, inst: &GluingInstance, fuel: usize) -> Certified {
        let (c1, c2, r, n) = (*inst.left(), *inst.right(), inst.r(), inst.n());
        let rnc = CurveSpec::rational_normal(r).map_err(|e| Refusal::internal(format!("{e}")))?;
        let genus = c1.g() as i64 - r as i64 + i64::from(self.has(Fault::RncGenusKept));
        let rest = spec(c1.d() as i64 - r as i64, genus, r)?;
        let (piece_main, piece_off) = if self.has(Fault::RncPiecesSwapped) {
            (rest, rnc)
        } else {
            (rnc, rest)
        };
        let plan = SplitPlan {
            parent: c1,
            piece_main,
            piece_off,
            n0: if self.has(Fault::RncNodeCount) {
                r
            } else {
                r + 1
            },
            n_prime: 1,
            n_dprime: n - 1,
        };
        let inner_inst = gluing(plan.piece_off, c2, plan.n_dprime)?;
        let inner = self.recurse(&inner_inst, fuel)?;
        let outer_inst = gluing(plan.piece_main, union(&inner_inst)?, plan.main_points())?;
        let outer = weak_leaf(&outer_inst, Case::WeakGluing)?;
        Ok(split_node(
            inst,
            Case::LinearlyNormalRnc,
            SplitKind::Rnc,
            plan,
            inner,
            outer,
        ))
    }
}

fn line(r: u32) -> Result<CurveSpec, Refusal> {
    CurveSpec::line(r).map_err(|e| Refusal::internal(format!("{e}")))
}

fn union(inst: &GluingInstance) -> Result<CurveSpec, Refusal> {
    inst.union().map_err(|e| Refusal::internal(format!("{e}")))
}

fn split_node(
    inst: &GluingInstance,
    case: Case,
    split: SplitKind,
    plan: SplitPlan,
    inner: Certificate,
    outer: Certificate,
) -> Certificate {
    Certificate {
        instance: Instance::Gluing(*inst),
        case,
        node: Node::Split {
            split,
            plan,
            inner: Box::new(inner),
            outer: Box::new(outer),
        },
    }
}

/// A leaf applying weak gluing; refuses if its inequality fails.
pub(super) fn weak_leaf(inst: &GluingInstance, case: Case) -> Certified {
    let verdict = hypotheses::check_main_sp(inst);
    if !verdict.passed() {
        return Err(Refusal::hypotheses(verdict));
    }
    Ok(Certificate {
        instance: Instance::Gluing(*inst),
        case,
        node: Node::BaseMainSp { verdict },
    })
}
