//! Sharded audit runs.

use std::time::Instant;

use bnglue_core::audit::{self, AuditGrid, AuditKind, AuditReport};
use bnglue_core::certifier::Certified;
use bnglue_core::GluingInstance;
use rayon::prelude::*;
use serde::Serialize;

/// Environment variable bounding the number of audit threads.
pub const THREADS_VAR: &str = "BNGLUE_THREADS";

#[derive(Debug, Clone, Serialize)]
pub struct TimedReport {
    pub kind: AuditKind,
    pub grid: AuditGrid,
    pub report: AuditReport,
    pub wall_time_us: u64,
}

fn pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Audits every cell in parallel and merges in canonical cell order, which
/// gives the same report as [`audit::audit`].
pub fn run_audit(kind: AuditKind, grid: &AuditGrid) -> TimedReport {
    run_audit_with(kind, grid, bnglue_core::certify_main)
}

pub fn run_audit_with<F>(kind: AuditKind, grid: &AuditGrid, certify: F) -> TimedReport
where
    F: Fn(&GluingInstance) -> Certified + Sync,
{
    let start = Instant::now();
    let cells = grid.cells();
    let reports: Vec<AuditReport> = pool().install(|| {
        cells
            .par_iter()
            .map(|&cell| audit::audit_cell(kind, grid, cell, &certify))
            .collect()
    });
    let report = reports
        .into_iter()
        .fold(AuditReport::default(), AuditReport::merge);
    TimedReport {
        kind,
        grid: *grid,
        report,
        wall_time_us: start.elapsed().as_micros() as u64,
    }
}
