//! Exhaustive enumeration of gluing instances on a bounded grid.
//!
//! The grid is split into cells, one per `(r, d_1)`, enumerated in the
//! canonical order `(r, d_1, g_1, d_2, g_2, n)`. Each cell is audited on its
//! own and reports are merged in cell order, so a sharded run produces the
//! same report as a sequential one.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::certificate::{Certificate, Node};
use crate::certifier::{self, linearly_normal_arm, Certified};
use crate::hypotheses::{self, GluingInstance};
use crate::numerics::{self, CurveSpec};
use crate::verifier;

/// Findings kept per list; totals are still counted past this.
pub const FINDINGS_CAP: usize = 64;

/// Bound on the genus of each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum GenusCap {
    Fixed(u32),
    /// `g_i <= k r`.
    TimesR(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum NodeMode {
    /// Every `n >= 1` up to one past the Brill-Noether bound of the union.
    AllAdmissible,
    Fixed(u32),
}

/// A finite box of gluing instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AuditGrid {
    pub r_min: u32,
    pub r_max: u32,
    pub genus_cap: GenusCap,
    /// Cap on `d_1 + d_2`; `None` leaves the degree bounded by the genus cap
    /// alone.
    pub d_cap: Option<u32>,
    pub n_mode: NodeMode,
}

/// One shard of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub r: u32,
    pub d1: u32,
}

impl AuditGrid {
    /// `r` in `3..=8`, `g_i <= 3r`, `d_1 + d_2 <= 40`.
    pub fn standard() -> Self {
        Self {
            r_min: 3,
            r_max: 8,
            genus_cap: GenusCap::TimesR(3),
            d_cap: Some(40),
            n_mode: NodeMode::AllAdmissible,
        }
    }

    pub fn genus_cap(&self, r: u32) -> u32 {
        match self.genus_cap {
            GenusCap::Fixed(g) => g,
            GenusCap::TimesR(k) => k.saturating_mul(r),
        }
    }

    fn degree_range(&self, r: u32) -> (u32, u32) {
        // one below the nonspecial range so refusals are exercised too
        let lo = r.saturating_sub(1).max(1);
        let hi = self.genus_cap(r) + r;
        (lo, hi)
    }

    fn degree_fits(&self, d_total: u32) -> bool {
        self.d_cap.map_or(true, |cap| d_total <= cap)
    }

    /// Cells in canonical order; empty when `r_min > r_max`.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for r in self.r_min.max(1)..=self.r_max {
            let (lo, hi) = self.degree_range(r);
            for d1 in lo..=hi {
                out.push(Cell { r, d1 });
            }
        }
        out
    }

    fn node_range(&self, l: &CurveSpec, rt: &CurveSpec) -> core::ops::RangeInclusive<u32> {
        match self.n_mode {
            NodeMode::Fixed(n) => n.max(1)..=n,
            NodeMode::AllAdmissible => {
                let r = l.r() as i64;
                let bound = r * (r + 2) + numerics::rho(l) + numerics::rho(rt);
                let last = (bound.max(0) / r) as u32 + 1;
                1..=last
            }
        }
    }

    /// Instances of one cell, in canonical order.
    pub fn instances(&self, cell: Cell) -> impl Iterator<Item = GluingInstance> + '_ {
        let Cell { r, d1 } = cell;
        let cap = self.genus_cap(r);
        let (lo, hi) = self.degree_range(r);
        (0..=cap.min(d1 + 1 - r.min(d1 + 1)))
            .flat_map(move |g1| (lo..=hi).flat_map(move |d2| (0..=cap).map(move |g2| (g1, d2, g2))))
            .filter(move |&(g1, d2, g2)| {
                self.degree_fits(d1 + d2) && d1 + 1 >= g1 + r && d2 + 1 >= g2 + r
            })
            .filter_map(move |(g1, d2, g2)| {
                Some((
                    CurveSpec::new(d1, g1, r).ok()?,
                    CurveSpec::new(d2, g2, r).ok()?,
                ))
            })
            .flat_map(move |(l, rt)| {
                self.node_range(&l, &rt)
                    .filter_map(move |n| GluingInstance::new(l, rt, n).ok())
            })
    }
}

/// An instance the audit flagged, with the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Finding {
    pub instance: GluingInstance,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AuditReport {
    pub instances_checked: u64,
    pub certified: u64,
    pub refused: u64,
    /// Instances where no dispatch arm applied.
    pub gaps: Vec<Finding>,
    pub gap_count: u64,
    /// Instances where the certifier, the checker and the verifier disagree.
    pub disagreements: Vec<Finding>,
    pub disagreement_count: u64,
    /// Edges on which the termination metric fails to decrease, or trees
    /// deeper than `d_1 + d_2 + n`.
    pub termination_violations: Vec<Finding>,
    pub termination_violation_count: u64,
    pub max_depth: u64,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.gap_count == 0 && self.disagreement_count == 0 && self.termination_violation_count == 0
    }

    /// Appends `other`, which must come later in canonical order.
    pub fn merge(mut self, other: AuditReport) -> AuditReport {
        self.instances_checked += other.instances_checked;
        self.certified += other.certified;
        self.refused += other.refused;
        self.gap_count += other.gap_count;
        self.disagreement_count += other.disagreement_count;
        self.termination_violation_count += other.termination_violation_count;
        self.max_depth = self.max_depth.max(other.max_depth);
        extend_capped(&mut self.gaps, other.gaps);
        extend_capped(&mut self.disagreements, other.disagreements);
        extend_capped(
            &mut self.termination_violations,
            other.termination_violations,
        );
        self
    }

    fn gap(&mut self, instance: GluingInstance, detail: String) {
        self.gap_count += 1;
        push_capped(&mut self.gaps, Finding { instance, detail });
    }

    fn disagree(&mut self, instance: GluingInstance, detail: String) {
        self.disagreement_count += 1;
        push_capped(&mut self.disagreements, Finding { instance, detail });
    }

    fn violation(&mut self, instance: GluingInstance, detail: String) {
        self.termination_violation_count += 1;
        push_capped(
            &mut self.termination_violations,
            Finding { instance, detail },
        );
    }

    fn tally(&mut self, result: &Certified) {
        self.instances_checked += 1;
        match result {
            Ok(_) => self.certified += 1,
            Err(_) => self.refused += 1,
        }
    }
}

fn push_capped(list: &mut Vec<Finding>, f: Finding) {
    if list.len() < FINDINGS_CAP {
        list.push(f);
    }
}

fn extend_capped(list: &mut Vec<Finding>, more: Vec<Finding>) {
    let room = FINDINGS_CAP.saturating_sub(list.len());
    list.extend(more.into_iter().take(room));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum AuditKind {
    Coverage,
    Agreement,
    Termination,
}

/// Runs one audit over the whole grid sequentially.
pub fn audit(kind: AuditKind, grid: &AuditGrid) -> AuditReport {
    audit_with(kind, grid, certifier::certify_main)
}

/// Like [`audit`] with a substitute certifier, for mutation testing.
pub fn audit_with<F>(kind: AuditKind, grid: &AuditGrid, certify: F) -> AuditReport
where
    F: Fn(&GluingInstance) -> Certified,
{
    grid.cells()
        .into_iter()
        .map(|cell| audit_cell(kind, grid, cell, &certify))
        .fold(AuditReport::default(), AuditReport::merge)
}

pub fn audit_case_coverage(grid: &AuditGrid) -> AuditReport {
    audit(AuditKind::Coverage, grid)
}

pub fn audit_oracle_agreement(grid: &AuditGrid) -> AuditReport {
    audit(AuditKind::Agreement, grid)
}

pub fn audit_termination(grid: &AuditGrid) -> AuditReport {
    audit(AuditKind::Termination, grid)
}

/// Audits a single cell.
pub fn audit_cell<F>(kind: AuditKind, grid: &AuditGrid, cell: Cell, certify: &F) -> AuditReport
where
    F: Fn(&GluingInstance) -> Certified,
{
    let mut report = AuditReport::default();
    for inst in grid.instances(cell) {
        match kind {
            AuditKind::Coverage => coverage(&mut report, &inst, certify),
            AuditKind::Agreement => agreement(&mut report, &inst, certify),
            AuditKind::Termination => termination(&mut report, &inst, certify),
        }
    }
    report
}

/// `r n <= r(r+2) + g_1 + g_2`, the node bound for two limit linearly normal
/// sides.
pub fn within_node_bound(inst: &GluingInstance) -> bool {
    let r = inst.r() as u64;
    r * inst.n() as u64 <= r * (r + 2) + inst.left().g() as u64 + inst.right().g() as u64
}

fn coverage<F>(report: &mut AuditReport, inst: &GluingInstance, certify: &F)
where
    F: Fn(&GluingInstance) -> Certified,
{
    let (l, rt) = (inst.left(), inst.right());
    if !(l.is_limit_linearly_normal() && rt.is_limit_linearly_normal()) {
        return;
    }
    let result = certify(inst);
    report.tally(&result);
    if !within_node_bound(inst) {
        if let Ok(cert) = result {
            report.disagree(
                *inst,
                format!("certified beyond the node bound as {:?}", cert.case),
            );
        }
        return;
    }
    let n = inst.n();
    let admits = |s: &CurveSpec| numerics::passes_through(s, n).unwrap_or(false);
    if !(admits(l) && admits(rt)) {
        return;
    }
    if linearly_normal_arm(inst).is_none() {
        report.gap(
            *inst,
            String::from("neither the base case nor a split applies"),
        );
    }
    match result {
        Ok(cert) => {
            let v = verifier::verify(&cert);
            if !v.ok {
                report.disagree(*inst, describe_failures(&v));
            }
        }
        Err(refusal) => report.disagree(*inst, format!("refused: {}", refusal.reason)),
    }
}

fn describe_failures(v: &verifier::VerificationReport) -> String {
    match v.failures.first() {
        Some(f) => format!(
            "{} failed condition(s), first at {}: {} ({})",
            v.failures.len(),
            f.path,
            f.label,
            f.rendered
        ),
        None => String::from("verification failed"),
    }
}

fn agreement<F>(report: &mut AuditReport, inst: &GluingInstance, certify: &F)
where
    F: Fn(&GluingInstance) -> Certified,
{
    let result = certify(inst);
    report.tally(&result);
    let expected = hypotheses::check_main(inst).passed();
    match (&result, expected) {
        (Ok(cert), true) => {
            let v = verifier::verify(cert);
            if !v.ok {
                report.disagree(*inst, describe_failures(&v));
            }
        }
        (Ok(_), false) => report.disagree(*inst, String::from("certified but hypotheses fail")),
        (Err(refusal), true) => report.disagree(
            *inst,
            format!("hypotheses pass but refused: {}", refusal.reason),
        ),
        (Err(_), false) => {}
    }
}

fn termination<F>(report: &mut AuditReport, inst: &GluingInstance, certify: &F)
where
    F: Fn(&GluingInstance) -> Certified,
{
    let result = certify(inst);
    report.tally(&result);
    let Ok(cert) = result else { return };
    let depth = cert.depth() as u64;
    report.max_depth = report.max_depth.max(depth);
    let bound = inst.total_degree() + inst.n() as u64;
    if depth > bound {
        report.violation(
            *inst,
            format!("depth {depth} exceeds d_1 + d_2 + n = {bound}"),
        );
    }
    let mut bad = Vec::new();
    edges_decrease(&cert, &mut String::from("root"), &mut bad);
    for detail in bad {
        report.violation(*inst, detail);
    }
}

/// Checks the metric on every split edge below `cert`.
fn edges_decrease(cert: &Certificate, path: &mut String, bad: &mut Vec<String>) {
    if let Node::Split { inner, outer, .. } = &cert.node {
        let own = verifier::metric(cert);
        let next = verifier::metric(outer);
        if !matches!((own, next), (Some(a), Some(b)) if b < a) {
            bad.push(format!(
                "{path}: metric {own:?} does not exceed outer {next:?}"
            ));
        }
        let d = |c: &Certificate| c.instance.as_gluing().map(GluingInstance::total_degree);
        if !matches!((d(cert), d(inner)), (Some(a), Some(b)) if b < a) {
            bad.push(format!("{path}: total degree does not drop to inner"));
        }
    }
    for (role, child) in cert.children() {
        let len = path.len();
        path.push('/');
        path.push_str(&format!("{role}"));
        edges_decrease(child, path, bad);
        path.truncate(len);
    }
}
