//! Trust-nothing certificate checker.
//!
//! Each node is re-validated from its stored data alone: split plans against
//! the side conditions that make the degeneration legitimate, children against
//! the instances the plan prescribes, leaves against a fresh evaluation of
//! their base theorem. Failures accumulate so that a report shows every
//! violation, keyed by a canonical path such as `root/outer/swap/inner`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::certificate::{Case, Certificate, Instance, Node, SplitKind, SplitPlan};
use crate::hypotheses::{GluingInstance, HyperplaneInstance, SmallMidQuery, Theorem, Verdict};
use crate::numerics::{self, CurveSpec};

mod conditions;

pub use conditions::{
    all_of, main_gates, main_hyp_gates, min_slack, small_hyp_gates, small_mid_gates, weak_gate,
    Condition,
};

/// One violated condition and where it was found.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Failure {
    pub path: String,
    pub label: String,
    pub rendered: String,
    pub slack: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub ok: bool,
    pub nodes_checked: u64,
    pub failures: Vec<Failure>,
}

/// Lexicographic termination measure of a gluing node:
/// `(d_1 + d_2, n, phase, min(g_1, g_2))`.
///
/// `phase` is 1 exactly at a two-node line split whose instance has one limit
/// linearly normal side; its outer child swaps sides and splits a line off
/// the other curve at the same degree and node count, where `phase` is 0.
/// Swap nodes are transparent.
pub fn metric(cert: &Certificate) -> Option<(u64, u32, u8, u32)> {
    let eff = cert.through_swaps();
    let inst = eff.instance.as_gluing()?;
    let lln = |s: &CurveSpec| s.d() as i64 == s.g() as i64 + s.r() as i64;
    let phase = match &eff.node {
        Node::Split {
            split: SplitKind::Line2,
            ..
        } if lln(inst.left()) != lln(inst.right()) => 1,
        _ => 0,
    };
    Some((
        inst.left().d() as u64 + inst.right().d() as u64,
        inst.n(),
        phase,
        inst.left().g().min(inst.right().g()),
    ))
}

/// Verifies a certificate and every node below it.
pub fn verify(cert: &Certificate) -> VerificationReport {
    let mut failures = Vec::new();
    let mut nodes = 0;
    if let Instance::Gluing(inst) = &cert.instance {
        // Split nodes check the main hypotheses themselves; a leaf root must
        // still establish the main theorem for its instance.
        if !matches!(cert.through_swaps().node, Node::Split { .. }) {
            for c in main_gates(inst) {
                record(&mut failures, "root", c);
            }
        }
    }
    walk(cert, &mut String::from("root"), &mut failures, &mut nodes);
    VerificationReport {
        ok: failures.is_empty(),
        nodes_checked: nodes,
        failures,
    }
}

fn record(failures: &mut Vec<Failure>, path: &str, c: Condition) {
    if !c.holds() {
        failures.push(Failure {
            path: String::from(path),
            label: c.label,
            rendered: c.rendered,
            slack: c.slack,
        });
    }
}

fn walk(cert: &Certificate, path: &mut String, failures: &mut Vec<Failure>, nodes: &mut u64) {
    *nodes += 1;
    for c in verify_node(cert) {
        record(failures, path, c);
    }
    for (role, child) in cert.children() {
        let len = path.len();
        path.push('/');
        path.push_str(&format!("{role}"));
        walk(child, path, failures, nodes);
        path.truncate(len);
    }
}

/// The conditions checked at one node, not descending into children beyond
/// comparing their instances.
pub fn verify_node(cert: &Certificate) -> Vec<Condition> {
    match (&cert.instance, &cert.node) {
        (Instance::Gluing(inst), Node::BaseMainSp { verdict }) => weak_leaf(inst, verdict),
        (Instance::Gluing(inst), Node::Swap { child }) => {
            let expected = Instance::Gluing(inst.swapped());
            if child.instance == expected {
                Vec::new()
            } else {
                alloc::vec![malformed(format!(
                    "swap child is {} instead of {}",
                    child.instance, expected
                ))]
            }
        }
        (
            Instance::Gluing(inst),
            Node::Split {
                split,
                plan,
                inner,
                outer,
            },
        ) => split_node(cert, inst, *split, plan, inner, outer),
        (Instance::Hyperplane(inst), Node::BaseMainHyp { verdict }) => {
            let mut out = small_hyp_gates(inst);
            let gates = main_hyp_gates(inst);
            out.push(verdict_agrees(
                verdict,
                Theorem::MainHyp,
                min_slack(&gates) >= 0,
            ));
            out.extend(gates);
            out
        }
        (Instance::SmallMid(q), Node::Lemma { children, .. }) => {
            small_mid_node(cert.case, q, children)
        }
        (Instance::Hyperplane(inst), Node::Lemma { children, .. }) => {
            small_hyp_node(cert.case, inst, children)
        }
        (instance, node) => alloc::vec![malformed(format!(
            "{} node cannot justify {}",
            node_kind(node),
            instance
        ))],
    }
}

fn node_kind(node: &Node) -> &'static str {
    match node {
        Node::BaseMainSp { .. } => "weak gluing",
        Node::BaseMainHyp { .. } => "weak hyperplane gluing",
        Node::Split { .. } => "split",
        Node::Swap { .. } => "swap",
        Node::Lemma { .. } => "lemma",
    }
}

fn malformed(rendered: String) -> Condition {
    Condition::new("malformed node", rendered, -1)
}

fn verdict_agrees(verdict: &Verdict, theorem: Theorem, recomputed: bool) -> Condition {
    Condition::flag(
        "stored verdict agrees",
        format!(
            "stored {} {}, recomputed {}",
            verdict.theorem.name(),
            if verdict.passed() { "pass" } else { "fail" },
            if recomputed { "pass" } else { "fail" }
        ),
        verdict.theorem == theorem && verdict.passed() == recomputed,
    )
}

fn weak_leaf(inst: &GluingInstance, verdict: &Verdict) -> Vec<Condition> {
    let r = inst.left().r() as i64;
    let weak = weak_gate(inst);
    alloc::vec![
        Condition::le("few nodes (n <= r + 2)", inst.n() as i64, r + 2),
        Condition::ge("n >= 1", inst.n() as i64, 1),
        verdict_agrees(verdict, Theorem::MainSp, weak.holds()),
        weak,
    ]
}

/// Slack of "passes through `n` points" in the nondegenerate range, strict at
/// the exceptional triples.
fn margin_slack(spec: &CurveSpec, n: u32) -> (String, i64) {
    let m = numerics::margin(spec, n);
    if numerics::is_exceptional(spec) {
        (format!("margin {m} > 0 at {spec}"), m - 1)
    } else {
        (format!("margin {m} >= 0 at {spec}"), m)
    }
}

fn split_node(
    cert: &Certificate,
    inst: &GluingInstance,
    split: SplitKind,
    plan: &SplitPlan,
    inner: &Certificate,
    outer: &Certificate,
) -> Vec<Condition> {
    let (c1, c2, n) = (inst.left(), inst.right(), inst.n());
    let r = c1.r();
    let r_ = r as i64;
    let mut out = Vec::with_capacity(20);

    out.push(all_of(
        "instance satisfies the main hypotheses",
        &main_gates(inst),
    ));

    // plan arithmetic
    out.push(Condition::same(
        "plan parent is the left side",
        c1,
        &plan.parent,
    ));
    let degree = plan.degree_defect();
    out.push(Condition::new(
        "degree additivity",
        format!(
            "{} + {} - {} = {degree}",
            plan.piece_main.d(),
            plan.piece_off.d(),
            plan.parent.d()
        ),
        -degree.abs(),
    ));
    let genus = plan.genus_defect();
    out.push(Condition::new(
        "genus additivity",
        format!(
            "{} + {} + {} - 1 - {} = {genus}",
            plan.piece_main.g(),
            plan.piece_off.g(),
            plan.n0,
            plan.parent.g()
        ),
        -genus.abs(),
    ));
    let nodes = plan.n_prime as i64 + plan.n_dprime as i64 - n as i64;
    out.push(Condition::new(
        "node additivity",
        format!("{} + {} - {n} = {nodes}", plan.n_prime, plan.n_dprime),
        -nodes.abs(),
    ));
    let same_space = plan.piece_main.r() == r && plan.piece_off.r() == r;
    let line = CurveSpec::line(r).ok();
    let rnc = CurveSpec::rational_normal(r).ok();
    let shape = same_space
        && match split {
            SplitKind::Line1 => Some(plan.piece_off) == line && plan.n0 == 1,
            SplitKind::Line2 => Some(plan.piece_off) == line && plan.n0 == 2,
            SplitKind::Rnc => Some(plan.piece_main) == rnc && plan.n0 == r + 1,
        };
    out.push(Condition::flag(
        "split shape",
        format!("{} with n0 = {}", split.name(), plan.n0),
        shape,
    ));
    if !same_space {
        return out;
    }

    // the degeneration itself
    let (pm, po) = (&plan.piece_main, &plan.piece_off);
    out.push(Condition::ge(
        "main piece in the nonspecial range",
        pm.d() as i64,
        pm.g() as i64 + r_,
    ));
    let (rendered, slack) = margin_slack(pm, plan.main_points());
    out.push(Condition::new(
        "main piece through its points",
        rendered,
        slack,
    ));
    let off_points = plan.n_dprime.max(plan.n0);
    if po.d() as i64 >= po.g() as i64 + r_ {
        let (rendered, slack) = margin_slack(po, off_points);
        out.push(Condition::new(
            "off piece through its points",
            rendered,
            slack,
        ));
    } else {
        let cap = po.d() as i64 + 1 - po.g() as i64;
        out.push(Condition::le(
            "off piece through its points",
            off_points as i64,
            cap,
        ));
    }
    out.push(Condition::le(
        "internal nodes (n0 <= r + 2)",
        plan.n0 as i64,
        r_ + 2,
    ));

    // children
    let inner_inst = GluingInstance::new(*po, *c2, plan.n_dprime);
    let union = numerics::glue(po, c2, plan.n_dprime);
    let outer_inst = union.and_then(|u| GluingInstance::new(*pm, u, plan.main_points()));
    match inner_inst {
        Ok(expected) => {
            out.push(Condition::same(
                "inner instance",
                &Instance::Gluing(expected),
                &inner.instance,
            ));
            let weak = weak_gate(&expected).slack;
            let main = min_slack(&main_gates(&expected));
            out.push(Condition::new(
                "inner child hypotheses",
                format!("weak {weak}, main {main}"),
                weak.max(main),
            ));
        }
        Err(e) => out.push(Condition::new("inner instance", format!("{e}"), -1)),
    }
    match outer_inst {
        Ok(expected) => {
            out.push(Condition::same(
                "outer instance",
                &Instance::Gluing(expected),
                &outer.instance,
            ));
            let main = min_slack(&main_gates(&expected));
            let weak = weak_gate(&expected).slack;
            let via_main = main.min(plan.n_dprime as i64 - plan.n0 as i64);
            let via_weak = weak.min(r_ + 2 - plan.main_points() as i64);
            out.push(Condition::new(
                "outer child hypotheses",
                format!(
                    "main {main} with n0 <= n'' ({} <= {}), or weak {weak} with n0 + n' = {} <= {}",
                    plan.n0,
                    plan.n_dprime,
                    plan.main_points(),
                    r + 2
                ),
                via_main.max(via_weak),
            ));
        }
        Err(e) => out.push(Condition::new("outer instance", format!("{e}"), -1)),
    }

    // termination
    if let (Some(own), Some(next)) = (metric(cert), metric(outer)) {
        out.push(Condition::flag(
            "termination metric decreases to outer",
            format!("{own:?} > {next:?}"),
            next < own,
        ));
    }
    if let Some(child) = inner.instance.as_gluing() {
        let own = inst.total_degree();
        let next = child.total_degree();
        out.push(Condition::flag(
            "total degree decreases to inner",
            format!("{own} > {next}"),
            next < own,
        ));
    }
    out
}

fn gluing(left: CurveSpec, right: CurveSpec, n: u32) -> Option<Instance> {
    GluingInstance::new(left, right, n)
        .ok()
        .map(Instance::Gluing)
}

fn hyperplane(inner: CurveSpec, hyper: CurveSpec, n: u32) -> Option<Instance> {
    HyperplaneInstance::new(inner, hyper, n)
        .ok()
        .map(Instance::Hyperplane)
}

fn small_mid(spec: CurveSpec, a: u32) -> Option<Instance> {
    SmallMidQuery::new(spec, a).ok().map(Instance::SmallMid)
}

fn curve(d: i64, g: i64, r: u32) -> Option<CurveSpec> {
    CurveSpec::new(u32::try_from(d).ok()?, u32::try_from(g).ok()?, r).ok()
}

/// How a child certificate must justify its instance.
#[derive(Clone, Copy)]
enum Role {
    /// A weak gluing leaf.
    Weak,
    /// Any certificate establishing the main theorem.
    Main,
    /// A small-mid or hyperplane certificate; checked at its own node.
    Nested,
}

/// Compares the children against the expected instances and roles.
fn expect_children(
    out: &mut Vec<Condition>,
    children: &[Certificate],
    expected: &[(Option<Instance>, Role)],
) {
    out.push(Condition::same(
        "child count",
        &expected.len(),
        &children.len(),
    ));
    for (i, ((want, role), child)) in expected.iter().zip(children).enumerate() {
        let Some(want) = want else {
            out.push(Condition::new(
                format!("part{i} instance"),
                "no such curve class",
                -1,
            ));
            continue;
        };
        out.push(Condition::same(
            format!("part{i} instance"),
            want,
            &child.instance,
        ));
        match role {
            Role::Weak => out.push(Condition::flag(
                format!("part{i} is a weak gluing leaf"),
                node_kind(&child.node),
                matches!(child.node, Node::BaseMainSp { .. }),
            )),
            Role::Main => match &child.instance {
                Instance::Gluing(g) => out.push(all_of(
                    &format!("part{i} satisfies the main hypotheses"),
                    &main_gates(g),
                )),
                other => out.push(malformed(format!("part{i} is {other}, not a gluing"))),
            },
            Role::Nested => {}
        }
    }
}

fn small_mid_node(case: Case, q: &SmallMidQuery, children: &[Certificate]) -> Vec<Condition> {
    let c = q.spec();
    let (d, g, r, a) = (c.d() as i64, c.g() as i64, c.r(), q.a());
    let (r_, a_) = (r as i64, a as i64);
    let rho = numerics::rho(c);
    let mut out = small_mid_gates(q);
    let line = CurveSpec::line(r).ok();
    let rnc = CurveSpec::rational_normal(r).ok();
    let attached = |s: CurveSpec| curve(s.d() as i64 + a_, s.g() as i64 + a_ + 1, r);
    match case {
        Case::MidFullDegree => {
            out.push(Condition::flag("a = r", format!("{a} vs {r}"), a == r));
            let want = rnc.and_then(|rnc| gluing(*c, rnc, r + 2));
            expect_children(&mut out, children, &[(want, Role::Weak)]);
        }
        Case::MidRichRho => {
            out.push(Condition::le("a < r", a_ + 1, r_));
            out.push(Condition::ge("rho >= r + 1", rho, r_ + 1));
            let c0 = curve(d - 1, g, r);
            if a == 0 {
                expect_children(&mut out, children, &[]);
            } else {
                let arc = curve(a_, 0, r);
                let first = c0.zip(arc).and_then(|(c0, arc)| gluing(c0, arc, a + 1));
                let joined = c0
                    .zip(arc)
                    .and_then(|(c0, arc)| numerics::glue(&c0, &arc, a + 1).ok());
                let second = joined.zip(line).and_then(|(j, l)| gluing(j, l, 2));
                expect_children(
                    &mut out,
                    children,
                    &[(first, Role::Weak), (second, Role::Weak)],
                );
            }
        }
        Case::MidGenusDrop | Case::MidLineDrop => {
            let c0 = if case == Case::MidGenusDrop {
                out.push(Condition::ge("g >= r + 1", g, r_ + 1));
                curve(d - r_, g - r_ - 1, r)
            } else {
                out.push(Condition::ge("rho >= 1", rho, 1));
                out.push(Condition::ge("g >= 1", g, 1));
                out.push(Condition::ge("a >= r + 1 - rho", a_, r_ + 1 - rho));
                curve(d - 1, g - 1, r)
            };
            let sub = c0.and_then(|c0| small_mid(c0, a));
            let (piece, nodes) = if case == Case::MidGenusDrop {
                (rnc, r + 2)
            } else {
                (line, 2)
            };
            let outer = c0
                .and_then(attached)
                .zip(piece)
                .and_then(|(h, p)| gluing(p, h, nodes));
            expect_children(
                &mut out,
                children,
                &[(sub, Role::Nested), (outer, Role::Weak)],
            );
            if let Some(child) = children.first().and_then(|c| c.instance.as_small_mid()) {
                let next = child.spec().d();
                out.push(Condition::flag(
                    "degree decreases to part0",
                    format!("{d} > {next}"),
                    (next as i64) < d,
                ));
            }
        }
        Case::MidCompletion => {
            out.push(Condition::flag(
                "(d, g) = (2r - a, r - a)",
                format!("({d}, {g}) vs ({}, {})", 2 * r_ - a_, r_ - a_),
                d == 2 * r_ - a_ && g == r_ - a_,
            ));
            expect_children(&mut out, children, &[]);
        }
        other => out.push(malformed(format!("case {other:?} does not apply to {q}"))),
    }
    out
}

fn small_hyp_node(
    case: Case,
    inst: &HyperplaneInstance,
    children: &[Certificate],
) -> Vec<Condition> {
    let (c, h, n, r) = (inst.inner(), inst.hyper(), inst.n(), inst.r());
    let (d1, g1) = (c.d() as i64, c.g() as i64);
    let (d2, g2) = (h.d() as i64, h.g() as i64);
    let (r_, n_) = (r as i64, n as i64);
    let lifted = h.with_ambient(r).ok();
    let mut out = small_hyp_gates(inst);
    let rnc = CurveSpec::rational_normal(r).ok();
    let rnc_h = CurveSpec::rational_normal(r - 1).ok();
    let hyper_range = |out: &mut Vec<Condition>| {
        out.push(Condition::ge("d'' >= g'' + r - 1", d2, g2 + r_ - 1));
    };
    let special = |out: &mut Vec<Condition>| {
        hyper_range(out);
        out.push(Condition::le("d' <= g' + r - 1", d1, g1 + r_ - 1));
        out.push(Condition::ge("rho(C) >= 0", numerics::rho(c), 0));
    };
    match case {
        Case::HypDegenerate => {
            hyper_range(&mut out);
            out.push(Condition::le("n <= r - 1", n_, r_ - 1));
            let want = lifted.and_then(|l| gluing(*c, l, n));
            expect_children(&mut out, children, &[(want, Role::Weak)]);
        }
        Case::HypTransverseLine => {
            hyper_range(&mut out);
            out.push(Condition::ge("d' >= g' + r", d1, g1 + r_));
            out.push(Condition::ge("g' >= 1", g1, 1));
            let c0 = curve(d1 - 1, g1 - 1, r);
            let line = CurveSpec::line(r).ok();
            let with_line = curve(d2 + 1, g2, r);
            expect_children(
                &mut out,
                children,
                &[
                    (
                        c0.zip(line).and_then(|(c0, l)| gluing(c0, l, 2)),
                        Role::Weak,
                    ),
                    (
                        line.zip(lifted).and_then(|(l, h)| gluing(l, h, 1)),
                        Role::Weak,
                    ),
                    (
                        c0.zip(with_line).and_then(|(c0, w)| gluing(c0, w, n + 1)),
                        Role::Main,
                    ),
                ],
            );
        }
        Case::HypSpecialFew => {
            special(&mut out);
            out.push(Condition::le("n <= r", n_, r_));
            let want = lifted.and_then(|l| gluing(*c, l, n));
            expect_children(&mut out, children, &[(want, Role::Weak)]);
        }
        Case::HypSpecialMid => {
            special(&mut out);
            out.push(Condition::flag("n = r + 1", format!("{n}"), n_ == r_ + 1));
            out.push(Condition::flag(
                "d'' = r - 1",
                format!("{d2}"),
                d2 == r_ - 1,
            ));
            expect_children(&mut out, children, &[(small_mid(*c, r - 1), Role::Nested)]);
        }
        Case::HypSpecialExceptional => {
            special(&mut out);
            out.push(Condition::flag("n = r + 2", format!("{n}"), n_ == r_ + 2));
            out.push(Condition::flag(
                "d'' = r - 1",
                format!("{d2}"),
                d2 == r_ - 1,
            ));
            let c0 = curve(d1 - r_, g1 - r_, r);
            if let Some(c0) = c0 {
                out.push(Condition::ge(
                    "rho(d' - r, g' - r) >= 1",
                    numerics::rho(&c0),
                    1,
                ));
            }
            let joined = c0
                .zip(lifted)
                .and_then(|(c0, l)| numerics::glue(&c0, &l, r + 1).ok());
            expect_children(
                &mut out,
                children,
                &[
                    (
                        c0.zip(rnc).and_then(|(c0, k)| gluing(c0, k, r + 1)),
                        Role::Weak,
                    ),
                    (c0.and_then(|c0| hyperplane(c0, *h, r + 1)), Role::Nested),
                    (
                        rnc.zip(joined).and_then(|(k, j)| gluing(k, j, r + 2)),
                        Role::Weak,
                    ),
                ],
            );
        }
        Case::HypSpecialStep => {
            special(&mut out);
            out.push(Condition::ge("n >= r + 1", n_, r_ + 1));
            out.push(Condition::ge("d'' >= r", d2, r_));
            let c0 = curve(d1 - r_ + 1, g1 - r_, r);
            let joined = c0
                .zip(lifted)
                .and_then(|(c0, l)| numerics::glue(&c0, &l, n - 1).ok());
            expect_children(
                &mut out,
                children,
                &[
                    (c0.and_then(|c0| small_mid(c0, r - 1)), Role::Nested),
                    (c0.and_then(|c0| hyperplane(c0, *h, n - 1)), Role::Nested),
                    (
                        joined.zip(rnc_h).and_then(|(j, k)| hyperplane(j, k, r + 2)),
                        Role::Nested,
                    ),
                ],
            );
        }
        Case::HypHyperplaneStep => {
            out.push(Condition::le("d'' <= g'' + r - 2", d2, g2 + r_ - 2));
            out.push(Condition::ge("rho(D) >= 0", numerics::rho(h), 0));
            out.push(Condition::ge("g'' >= r", g2, r_));
            out.push(Condition::ge(
                "transverse deformation (d'' + n >= g'' + r)",
                d2 + n_,
                g2 + r_,
            ));
            let d0 = curve(d2 - r_ + 1, g2 - r_, r - 1);
            let joined = d0
                .and_then(|d0| d0.with_ambient(r).ok())
                .and_then(|d0| numerics::glue(c, &d0, n).ok());
            expect_children(
                &mut out,
                children,
                &[
                    (
                        d0.zip(rnc_h).and_then(|(d0, k)| gluing(d0, k, r + 1)),
                        Role::Weak,
                    ),
                    (d0.and_then(|d0| hyperplane(*c, d0, n)), Role::Nested),
                    (
                        joined.zip(rnc_h).and_then(|(j, k)| hyperplane(j, k, r + 1)),
                        Role::Nested,
                    ),
                ],
            );
        }
        other => out.push(malformed(format!(
            "case {other:?} does not apply to {inst}"
        ))),
    }
    for (i, child) in children.iter().enumerate() {
        if let Some(next) = child.instance.as_hyperplane() {
            let own = (h.d(), n);
            let below = (next.hyper().d(), next.n());
            out.push(Condition::flag(
                format!("(d'', n) decreases to part{i}"),
                format!("{own:?} > {below:?}"),
                below < own,
            ));
        }
    }
    out
}
