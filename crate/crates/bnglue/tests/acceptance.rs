//! Acceptance criteria, one pass/fail line each.
//!
//! Runs as a plain binary (no libtest harness) so that every criterion is
//! evaluated and reported even when an earlier one fails. The process exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use bnglue::document::CertificateDocument;
use bnglue_core::audit::{AuditGrid, Cell, GenusCap, NodeMode};
use bnglue_core::certificate::{Case, Certificate, Node, SplitKind};
use bnglue_core::certifier::{certify_main, certify_main_mutant, Certified, Fault};
use bnglue_core::hypotheses::{self, GluingInstance};
use bnglue_core::numerics::{self, Capacity, CurveSpec};
use bnglue_core::planner::{plan_decomposition, PlanOutcome};
use bnglue_core::verifier::{self, metric};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn spec(d: u32, g: u32, r: u32) -> CurveSpec {
    CurveSpec::new(d, g, r).unwrap()
}

fn gi(d1: u32, g1: u32, d2: u32, g2: u32, r: u32, n: u32) -> GluingInstance {
    GluingInstance::from_parts(d1, g1, d2, g2, r, n).unwrap()
}

/// `floor(((r+1)d - (r-3)(g-1)) / (r-1))` with no exceptions.
fn raw_capacity(d: i64, g: i64, r: i64) -> i64 {
    ((r + 1) * d - (r - 3) * (g - 1)).div_euclid(r - 1)
}

fn exceptional_capacities() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (d, g, r) in [(5, 2, 3), (7, 2, 5)] {
        let cap = numerics::interpolation_capacity(&spec(d, g, r)).unwrap();
        let raw = raw_capacity(d as i64, g as i64, r as i64);
        pass &= cap == Capacity::Bounded(9) && raw == 10;
        notes.push(format!("({d},{g},{r}): {cap:?}, formula {raw}"));
    }
    outcome(pass, notes.join("; "))
}

fn rho_identities() -> Outcome {
    let mut bad = 0;
    for r in 1..=10u32 {
        for g in 0..=50u32 {
            if numerics::rho(&spec(g + r, g, r)) != g as i64 {
                bad += 1;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x0b_6e_1e);
    let mut additivity_bad = 0;
    for _ in 0..10_000 {
        let r = rng.random_range(1..=12u32);
        let (g1, g2) = (rng.random_range(0..=40u32), rng.random_range(0..=40u32));
        let d1 = g1 + rng.random_range(1..=40u32);
        let d2 = g2 + rng.random_range(1..=40u32);
        let n = rng.random_range(1..=60u32);
        let (c1, c2) = (spec(d1, g1, r), spec(d2, g2, r));
        let union = numerics::glue(&c1, &c2, n).unwrap();
        let r_ = r as i64;
        let expected = numerics::rho(&c1) + numerics::rho(&c2) - r_ * n as i64 + r_ * (r_ + 2);
        if numerics::rho(&union) != expected {
            additivity_bad += 1;
        }
    }
    outcome(
        bad == 0 && additivity_bad == 0,
        format!("{bad} identity failures over 510 classes, {additivity_bad} additivity failures over 10000 gluings"),
    )
}

fn case_coverage() -> Outcome {
    let grid = AuditGrid {
        r_min: 3,
        r_max: 8,
        genus_cap: GenusCap::TimesR(3),
        d_cap: None,
        n_mode: NodeMode::AllAdmissible,
    };
    let timed = bnglue::parallel::run_audit(bnglue_core::audit::AuditKind::Coverage, &grid);
    let rep = &timed.report;
    let first = rep
        .gaps
        .iter()
        .chain(&rep.disagreements)
        .next()
        .map(|f| format!("; first: {} ({})", f.instance, f.detail))
        .unwrap_or_default();
    outcome(
        rep.gap_count == 0,
        format!(
            "{} limit linearly normal instances, {} gaps, {} certifier/verifier findings{first}",
            rep.instances_checked, rep.gap_count, rep.disagreement_count
        ),
    )
}

/// Per-instance findings on the soundness grid.
#[derive(Default)]
struct GridTally {
    instances: u64,
    certified: u64,
    unsound: Vec<String>,
    disagreements: Vec<(GluingInstance, String)>,
    metric_violations: Vec<String>,
    depth_violations: Vec<String>,
    edges: u64,
    max_depth: usize,
}

impl GridTally {
    fn merge(mut self, other: GridTally) -> GridTally {
        self.instances += other.instances;
        self.certified += other.certified;
        self.unsound.extend(other.unsound);
        self.disagreements.extend(other.disagreements);
        self.metric_violations.extend(other.metric_violations);
        self.depth_violations.extend(other.depth_violations);
        self.edges += other.edges;
        self.max_depth = self.max_depth.max(other.max_depth);
        self
    }
}

fn soundness_grid() -> AuditGrid {
    AuditGrid {
        r_min: 3,
        r_max: 6,
        genus_cap: GenusCap::TimesR(3),
        d_cap: Some(30),
        n_mode: NodeMode::AllAdmissible,
    }
}

/// Walks every edge, independently of the verifier's own metric condition.
fn check_edges(cert: &Certificate, tally: &mut GridTally) {
    if let Node::Split { inner, outer, .. } = &cert.node {
        tally.edges += 2;
        let total = |c: &Certificate| c.instance.as_gluing().map(GluingInstance::total_degree);
        if !(total(inner) < total(cert) && total(inner).is_some()) {
            tally
                .metric_violations
                .push(format!("{}: inner keeps the total degree", cert.instance));
        }
        let (own, next) = (metric(cert), metric(outer));
        if !(next < own && next.is_some()) {
            tally.metric_violations.push(format!(
                "{}: outer metric {next:?} vs {own:?}",
                cert.instance
            ));
        }
    }
    for (_, child) in cert.children() {
        check_edges(child, tally);
    }
}

fn audit_cell(grid: &AuditGrid, cell: Cell) -> GridTally {
    let mut t = GridTally::default();
    for inst in grid.instances(cell) {
        t.instances += 1;
        let expected = hypotheses::check_main(&inst).passed();
        let result = certify_main(&inst);
        match (&result, expected) {
            (Ok(_), false) => t
                .disagreements
                .push((inst, "certified, hypotheses fail".into())),
            (Err(e), true) => t
                .disagreements
                .push((inst, format!("refused: {}", e.reason))),
            _ => {}
        }
        if let Ok(cert) = result {
            t.certified += 1;
            let report = verifier::verify(&cert);
            if !report.ok {
                let f = &report.failures[0];
                t.unsound.push(format!("{inst}: {} at {}", f.label, f.path));
            }
            let depth = cert.depth();
            t.max_depth = t.max_depth.max(depth);
            if depth as u64 > inst.total_degree() + inst.n() as u64 {
                t.depth_violations.push(format!("{inst}: depth {depth}"));
            }
            check_edges(&cert, &mut t);
        }
    }
    t
}

fn sample(items: &[String]) -> String {
    items.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
}

fn soundness(t: &GridTally) -> Outcome {
    outcome(
        t.unsound.is_empty(),
        format!(
            "{} certificates over {} instances, {} failed verification {}",
            t.certified,
            t.instances,
            t.unsound.len(),
            sample(&t.unsound)
        ),
    )
}

fn completeness(t: &GridTally) -> Outcome {
    let listed: Vec<String> = t
        .disagreements
        .iter()
        .map(|(i, why)| format!("{i} ({why})"))
        .collect();
    outcome(
        t.disagreements.is_empty(),
        format!(
            "{} disagreements {}",
            t.disagreements.len(),
            sample(&listed)
        ),
    )
}

fn termination(t: &GridTally) -> Outcome {
    outcome(
        t.metric_violations.is_empty() && t.depth_violations.is_empty(),
        format!(
            "{} split edges, {} metric violations, {} depth violations, max depth {} {}",
            t.edges,
            t.metric_violations.len(),
            t.depth_violations.len(),
            t.max_depth,
            sample(&t.metric_violations)
        ),
    )
}

fn contains_case(cert: &Certificate, case: Case) -> bool {
    cert.case == case || cert.children().iter().any(|(_, c)| contains_case(c, case))
}

fn exceptional_branches() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for ((d1, g1), margin, n, case) in [
        ((6, 3), 4, 10, Case::ExceptionalTen),
        ((6, 2), 2, 11, Case::ExceptionalEleven),
    ] {
        let left = spec(d1, g1, 3);
        assert_eq!(numerics::margin(&left, n), margin);
        let (mut seen, mut routed, mut verified) = (0, 0, 0);
        for d2 in 3..=24 {
            for g2 in 0..=d2 - 3 {
                let right = spec(d2, g2, 3);
                if right.is_limit_linearly_normal() {
                    // both sides limit linearly normal take the other dispatch
                    continue;
                }
                let inst = GluingInstance::new(left, right, n).unwrap();
                if !hypotheses::check_main(&inst).passed() {
                    continue;
                }
                seen += 1;
                if let Ok(cert) = certify_main(&inst) {
                    routed += u32::from(contains_case(&cert, case));
                    verified += u32::from(verifier::verify(&cert).ok);
                }
            }
        }
        pass &= seen > 0 && routed == seen && verified == seen;
        notes.push(format!(
            "({d1},{g1},3) at n = {n}: {routed}/{seen} routed, {verified}/{seen} verified"
        ));
    }
    outcome(pass, notes.join("; "))
}

fn planner_iff() -> Outcome {
    let targets: Vec<CurveSpec> = (3..=6u32)
        .flat_map(|r| (1..=24u32).flat_map(move |d| (0..=d).map(move |g| spec(d, g, r))))
        .filter(|t| numerics::rho(t) >= 0)
        .collect();
    let findings: Vec<String> = targets
        .par_iter()
        .filter_map(|t| {
            let found = matches!(plan_decomposition(t), Ok(PlanOutcome::Found(_)));
            let expected = t.d() >= 2 * t.r();
            (found != expected).then(|| format!("{t}: planner {found}, d >= 2r {expected}"))
        })
        .collect();
    outcome(
        findings.is_empty(),
        format!(
            "{} targets, {} deviations {}",
            targets.len(),
            findings.len(),
            sample(&findings)
        ),
    )
}

fn worked_example() -> Outcome {
    let inst = gi(4, 1, 5, 2, 3, 6);
    let cert = certify_main(&inst).unwrap();
    let shape = match &cert.node {
        Node::Split {
            split: SplitKind::Line2,
            outer,
            inner,
            ..
        } => {
            let rnc = outer.through_swaps();
            matches!(inner.node, Node::BaseMainSp { .. })
                && matches!(outer.node, Node::Swap { .. })
                && matches!(&rnc.node, Node::Split { split: SplitKind::Rnc, inner, outer, .. }
                    if inner.is_leaf() && outer.is_leaf())
        }
        _ => false,
    };
    let text = CertificateDocument::new(cert.clone()).to_json();
    let again = CertificateDocument::new(certify_main(&inst).unwrap()).to_json();
    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/worked_example.json");
    let golden = std::fs::read_to_string(&golden_path).unwrap_or_default();
    let stable = text == again && text.trim_end() == golden.trim_end();
    outcome(
        shape && cert.depth() == 3 && verifier::verify(&cert).ok && stable,
        format!(
            "depth {}, line then rational normal curve then base: {shape}, bytes match golden: {stable}",
            cert.depth()
        ),
    )
}

/// A new finding the unmutated certifier does not produce.
fn mutant_finding(
    grid: &AuditGrid,
    cells: &[Cell],
    baseline: &BTreeSet<GluingInstance>,
    certify: impl Fn(&GluingInstance) -> Certified,
) -> Option<String> {
    for &cell in cells {
        for inst in grid.instances(cell) {
            if baseline.contains(&inst) {
                continue;
            }
            let result = certify(&inst);
            let expected = hypotheses::check_main(&inst).passed();
            let found = match (&result, expected) {
                (Ok(_), false) => Some("certified though hypotheses fail".to_owned()),
                (Err(e), true) => Some(format!("refused: {}", e.reason)),
                _ => None,
            };
            if let Some(why) = found {
                return Some(format!("{inst}: {why}"));
            }
            if let Ok(cert) = result {
                let report = verifier::verify(&cert);
                if let Some(f) = report.failures.first() {
                    return Some(format!("{inst}: verifier, {} at {}", f.label, f.path));
                }
                let mut t = GridTally::default();
                check_edges(&cert, &mut t);
                if let Some(v) = t.metric_violations.first() {
                    return Some(format!("{inst}: termination audit, {v}"));
                }
            }
        }
    }
    None
}

fn mutation_suite(baseline: &BTreeSet<GluingInstance>) -> Outcome {
    let grid = soundness_grid();
    let cells = grid.cells();
    let results: Vec<(Fault, Option<String>)> = Fault::ALL
        .par_iter()
        .map(|&f| {
            (
                f,
                mutant_finding(&grid, &cells, baseline, |i| certify_main_mutant(i, f)),
            )
        })
        .collect();
    let missed: Vec<String> = results
        .iter()
        .filter(|(_, found)| found.is_none())
        .map(|(f, _)| format!("{f:?}"))
        .collect();
    for (f, found) in &results {
        println!("      {f:?}: {}", found.as_deref().unwrap_or("NOT CAUGHT"));
    }
    outcome(
        missed.is_empty() && Fault::ALL.len() >= 10,
        format!(
            "{}/{} seeded faults caught{}",
            results.len() - missed.len(),
            results.len(),
            if missed.is_empty() {
                String::new()
            } else {
                format!("; missed {}", missed.join(", "))
            }
        ),
    )
}

fn main() {
    let mut failed = 0;
    let mut report = |id: &str, name: &str, start: Instant, o: Outcome| {
        let status = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!(
            "{id:>4} {status} {name} [{:.2}s] {}",
            start.elapsed().as_secs_f64(),
            o.detail
        );
    };

    let t = Instant::now();
    report("AC1", "exceptional capacities", t, exceptional_capacities());
    let t = Instant::now();
    report("AC2", "rho identities", t, rho_identities());
    let t = Instant::now();
    report("AC3", "case coverage", t, case_coverage());

    let t = Instant::now();
    let grid = soundness_grid();
    let tally = grid
        .cells()
        .par_iter()
        .map(|&cell| audit_cell(&grid, cell))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(GridTally::default(), GridTally::merge);
    report("AC4", "soundness", t, soundness(&tally));
    report("AC5", "oracle agreement", t, completeness(&tally));
    report("AC6", "termination", t, termination(&tally));

    let t = Instant::now();
    report("AC7", "exceptional branches", t, exceptional_branches());
    let t = Instant::now();
    report("AC8", "planner iff d >= 2r", t, planner_iff());
    let t = Instant::now();
    report("AC9", "worked example", t, worked_example());

    let t = Instant::now();
    let baseline: BTreeSet<GluingInstance> = tally.disagreements.iter().map(|(i, _)| *i).collect();
    report(
        "AC10",
        "verifier independence",
        t,
        mutation_suite(&baseline),
    );

    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
