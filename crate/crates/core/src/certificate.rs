//! Degeneration certificates.
//!
//! A certificate is an immutable tree. Internal nodes are degeneration steps
//! (a split of the left curve, an exchange of the two sides, or a reduction
//! justified by named constructions); leaves are applications of a base
//! theorem or of a named construction whose numeric side conditions are
//! re-checked by the verifier.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::hypotheses::{GluingInstance, HyperplaneInstance, SmallMidQuery, Theorem, Verdict};
use crate::numerics::CurveSpec;

/// The statement a certificate speaks about.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case"))]
pub enum Instance {
    Gluing(GluingInstance),
    SmallMid(SmallMidQuery),
    Hyperplane(HyperplaneInstance),
}

impl Instance {
    pub fn as_gluing(&self) -> Option<&GluingInstance> {
        match self {
            Instance::Gluing(g) => Some(g),
            _ => None,
        }
    }

    pub fn as_small_mid(&self) -> Option<&SmallMidQuery> {
        match self {
            Instance::SmallMid(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_hyperplane(&self) -> Option<&HyperplaneInstance> {
        match self {
            Instance::Hyperplane(h) => Some(h),
            _ => None,
        }
    }

    /// Theorem a root certificate for this instance establishes.
    pub fn theorem(&self) -> Theorem {
        match self {
            Instance::Gluing(_) => Theorem::Main,
            Instance::SmallMid(_) => Theorem::SmallMid,
            Instance::Hyperplane(_) => Theorem::SmallHyp,
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Gluing(g) => g.fmt(f),
            Instance::SmallMid(q) => q.fmt(f),
            Instance::Hyperplane(h) => h.fmt(f),
        }
    }
}

/// Sizes of a degeneration `C_1 ⇝ C_1' ∪_{Γ_0} C_1''` of the left curve, with
/// `Γ = Γ' ∪ Γ''` split between the two pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplitPlan {
    pub parent: CurveSpec,
    pub piece_main: CurveSpec,
    pub piece_off: CurveSpec,
    pub n0: u32,
    pub n_prime: u32,
    pub n_dprime: u32,
}

impl SplitPlan {
    /// `d' + d'' - d`; zero for a consistent plan.
    pub fn degree_defect(&self) -> i64 {
        self.piece_main.d() as i64 + self.piece_off.d() as i64 - self.parent.d() as i64
    }

    /// `g' + g'' + n0 - 1 - g`.
    pub fn genus_defect(&self) -> i64 {
        self.piece_main.g() as i64 + self.piece_off.g() as i64 + self.n0 as i64
            - 1
            - self.parent.g() as i64
    }

    /// Points on the main piece, counting internal nodes: `n' + n0`.
    pub fn main_points(&self) -> u32 {
        self.n_prime + self.n0
    }
}

/// Shape of a split of the left curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SplitKind {
    /// Split off a line meeting the rest once.
    Line1,
    /// Split off a line meeting the rest twice.
    Line2,
    /// Split off everything but a rational normal curve meeting it in `r + 1` points.
    Rnc,
}

impl SplitKind {
    pub fn name(self) -> &'static str {
        match self {
            SplitKind::Line1 => "split-line-1",
            SplitKind::Line2 => "split-line-2",
            SplitKind::Rnc => "split-rnc",
        }
    }
}

/// Named constructions accepted as axioms once their numeric side
/// conditions hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum LemmaTag {
    InterpolationThroughGeneralPoints,
    RationalCurveThroughPoints,
    InteriorCurve,
    NormalComplexRestriction,
    UnionSmoothing,
    SpecializeComponent,
    SpecializeTransverseCurve,
    SpecializeHyperplaneCurve,
    HyperplanePointsLift,
    AdmitsTransverseDeformation,
    DualizingSheafConstruction,
}

impl LemmaTag {
    pub fn name(self) -> &'static str {
        match self {
            LemmaTag::InterpolationThroughGeneralPoints => "interpolation-through-general-points",
            LemmaTag::RationalCurveThroughPoints => "rational-curve-through-points",
            LemmaTag::InteriorCurve => "interior-curve",
            LemmaTag::NormalComplexRestriction => "normal-complex-restriction",
            LemmaTag::UnionSmoothing => "union-smoothing",
            LemmaTag::SpecializeComponent => "specialize-component",
            LemmaTag::SpecializeTransverseCurve => "specialize-transverse-curve",
            LemmaTag::SpecializeHyperplaneCurve => "specialize-hyperplane-curve",
            LemmaTag::HyperplanePointsLift => "hyperplane-points-lift",
            LemmaTag::AdmitsTransverseDeformation => "admits-transverse-deformation",
            LemmaTag::DualizingSheafConstruction => "dualizing-sheaf-construction",
        }
    }
}

/// Which branch of an inductive argument a node applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Case {
    /// `n <= r + 2`: weak gluing suffices.
    FewNodes,
    /// Both sides limit linearly normal; split a line off the lower genus side.
    LinearlyNormalLine,
    /// Both sides limit linearly normal; split a rational normal curve off the
    /// higher genus side.
    LinearlyNormalRnc,
    /// `d_1 > g_1 + r`: split off a line meeting the rest once.
    ExcessLine,
    /// `d_1 = g_1 + r`, other side not limit linearly normal: split off a line
    /// meeting the rest twice.
    BalancedLine,
    /// Exchange sides so that the lower genus side is on the left.
    LowerGenusFirst,
    /// Exchange sides so that the higher genus side is on the left.
    HigherGenusFirst,
    /// Exchange sides so that the margin condition holds on the left.
    MarginFirst,
    /// Exchange sides after a balanced line split.
    ExchangeIndices,
    /// Margin exactly 4 at `(6, 3, 3)` or `(8, 3, 5)`, forcing `n = 10`.
    ExceptionalTen,
    /// Margin exactly 2 at `(6, 2, 3)` or `(8, 2, 5)`, forcing `n = 11`.
    ExceptionalEleven,

    /// `a = r`.
    MidFullDegree,
    /// `a < r` and `rho >= r + 1`.
    MidRichRho,
    /// `g >= r + 1`: peel off a rational normal curve.
    MidGenusDrop,
    /// `rho >= 1`, `g >= 1`, `a >= r + 1 - rho`: peel off a line.
    MidLineDrop,
    /// `(d, g) = (2r - a, r - a)`.
    MidCompletion,

    /// `d'' >= g'' + r - 1` and `n <= r - 1`.
    HypDegenerate,
    /// `d' >= g' + r`, `g' = 0`.
    HypRationalTransverse,
    /// `d' >= g' + r`, `g' >= 1`: split a line off the transverse curve.
    HypTransverseLine,
    /// `d' <= g' + r - 1` and `n <= r`.
    HypSpecialFew,
    /// `d' <= g' + r - 1`, `n = r + 1`, `d'' = r - 1`.
    HypSpecialMid,
    /// `d' <= g' + r - 1`, `n = r + 2`, `d'' = r - 1`.
    HypSpecialExceptional,
    /// `d' <= g' + r - 1`: degenerate the transverse curve.
    HypSpecialStep,
    /// `d'' <= g'' + r - 2`: degenerate the hyperplane curve.
    HypHyperplaneStep,

    /// A weak gluing used as an auxiliary step.
    WeakGluing,
}

/// Node payload.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Node {
    /// Weak gluing applied to a [`GluingInstance`] with `n <= r + 2`.
    BaseMainSp {
        verdict: Verdict,
    },
    /// Weak hyperplane gluing applied to a [`HyperplaneInstance`].
    BaseMainHyp {
        verdict: Verdict,
    },
    Split {
        split: SplitKind,
        plan: SplitPlan,
        inner: Box<Certificate>,
        outer: Box<Certificate>,
    },
    Swap {
        child: Box<Certificate>,
    },
    /// A step justified by named constructions; leaves have no children.
    Lemma {
        tags: Vec<LemmaTag>,
        children: Vec<Certificate>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Certificate {
    pub instance: Instance,
    pub case: Case,
    pub node: Node,
}

impl Certificate {
    /// Children in canonical order, each paired with its path segment.
    pub fn children(&self) -> Vec<(ChildRole, &Certificate)> {
        match &self.node {
            Node::BaseMainSp { .. } | Node::BaseMainHyp { .. } => Vec::new(),
            Node::Split { inner, outer, .. } => {
                alloc::vec![(ChildRole::Inner, &**inner), (ChildRole::Outer, &**outer)]
            }
            Node::Swap { child } => alloc::vec![(ChildRole::Swap, &**child)],
            Node::Lemma { children, .. } => children
                .iter()
                .enumerate()
                .map(|(i, c)| (ChildRole::Part(i), c))
                .collect(),
        }
    }

    /// Longest root-to-leaf path counting every node except swaps.
    pub fn depth(&self) -> usize {
        let own = usize::from(!matches!(self.node, Node::Swap { .. }));
        own + self
            .children()
            .into_iter()
            .map(|(_, c)| c.depth())
            .max()
            .unwrap_or(0)
    }

    /// Total number of nodes.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(|(_, c)| c.size())
            .sum::<usize>()
    }

    /// Follows swap nodes down to the first node that does real work.
    pub fn through_swaps(&self) -> &Certificate {
        let mut cur = self;
        while let Node::Swap { child } = &cur.node {
            cur = child;
        }
        cur
    }

    pub fn is_leaf(&self) -> bool {
        self.children().is_empty()
    }
}

/// Position of a child below its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChildRole {
    Inner,
    Outer,
    Swap,
    Part(usize),
}

impl fmt::Display for ChildRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChildRole::Inner => f.write_str("inner"),
            ChildRole::Outer => f.write_str("outer"),
            ChildRole::Swap => f.write_str("swap"),
            ChildRole::Part(i) => write!(f, "part{i}"),
        }
    }
}
