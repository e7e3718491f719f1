//! Command-line surface.
//!
//! Exit codes: 0 when the requested statement holds (hypotheses pass, a
//! certificate was produced or verified, an audit found nothing), 1 when it
//! does not, 2 on usage errors and invalid parameters.

use std::ffi::OsString;
use std::io::Write;

use bnglue_core::audit::{AuditGrid, AuditKind, GenusCap, NodeMode};
use bnglue_core::certifier::{self, Certified};
use bnglue_core::hypotheses;
use bnglue_core::numerics::{self, Capacity};
use bnglue_core::planner::{self, PlanOutcome};
use bnglue_core::{
    verify, CurveSpec, GluingInstance, HyperplaneInstance, Instance, SmallMidQuery, Verdict,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::document::{to_json, CertificateDocument, RefusalDocument};
use crate::parallel::run_audit;
use crate::table::{interpolation_table, TableFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "bnglue",
    version,
    about = "Decide, certify and audit gluings of curves in projective space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Brill-Noether number of (d, g, r).
    Rho(Class),
    /// Number of general points the general curve of (d, g, r) passes through.
    Interp(Class),
    /// Evaluate the hypotheses of a theorem.
    #[command(subcommand)]
    Check(Statement),
    /// Build a degeneration certificate.
    #[command(subcommand)]
    Certify(Certifiable),
    /// Re-check a certificate document.
    Verify {
        /// Path to the document, or `-` for stdin.
        #[arg(long = "in")]
        input: String,
    },
    /// Run an exhaustive audit over a grid.
    Audit(AuditArgs),
    /// Decompose (d, g, r) into two glued components.
    Plan {
        #[command(flatten)]
        class: Class,
        /// Return up to this many plans instead of the first.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Emit a table.
    #[command(subcommand)]
    Table(Table),
}

#[derive(Args, Debug, Clone, Copy)]
struct Class {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    r: u32,
}

#[derive(Args, Debug, Clone, Copy)]
struct Pair {
    #[arg(long)]
    d1: u32,
    #[arg(long)]
    g1: u32,
    #[arg(long)]
    d2: u32,
    #[arg(long)]
    g2: u32,
    /// Ambient dimension; for hyperplane gluings the second curve lives in
    /// a hyperplane `P^{r-1}`.
    #[arg(long)]
    r: u32,
    #[arg(long)]
    n: u32,
}

#[derive(Args, Debug, Clone, Copy)]
struct Attach {
    #[command(flatten)]
    class: Class,
    /// Degree of the attached rational curve.
    #[arg(long)]
    a: u32,
}

#[derive(Subcommand, Debug)]
enum Statement {
    Main(Pair),
    MainSp(Pair),
    MainHyp(Pair),
    SmallMid(Attach),
    SmallHyp(Pair),
}

#[derive(Subcommand, Debug)]
enum Certifiable {
    Main(Pair),
    SmallMid(Attach),
    SmallHyp(Pair),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Coverage,
    Agreement,
    Termination,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 3)]
    r_min: u32,
    #[arg(long, default_value_t = 8)]
    r_max: u32,
    /// Genus cap per side; defaults to 3r.
    #[arg(long)]
    g_cap: Option<u32>,
    /// Cap on d_1 + d_2; unbounded when omitted.
    #[arg(long)]
    d_cap: Option<u32>,
    /// Audit a single node count instead of all admissible ones.
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Table {
    /// Interpolation capacities for d = 1..=d_max, g = 0..=g_max.
    Interp {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d_max: u32,
        #[arg(long)]
        g_max: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
    },
}

/// An invalid parameter, reported with exit code 2.
#[derive(Debug, thiserror::Error)]
enum Usage {
    #[error(transparent)]
    Domain(#[from] bnglue_core::Error),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Document(#[from] crate::document::DocumentError),
}

impl Class {
    fn spec(self) -> bnglue_core::Result<CurveSpec> {
        CurveSpec::new(self.d, self.g, self.r)
    }
}

impl Pair {
    fn gluing(self) -> bnglue_core::Result<GluingInstance> {
        GluingInstance::from_parts(self.d1, self.g1, self.d2, self.g2, self.r, self.n)
    }

    fn hyperplane(self) -> bnglue_core::Result<HyperplaneInstance> {
        HyperplaneInstance::from_parts(self.d1, self.g1, self.d2, self.g2, self.r, self.n)
    }
}

impl Attach {
    fn query(self) -> bnglue_core::Result<SmallMidQuery> {
        SmallMidQuery::new(self.class.spec()?, self.a)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) {
    // a closed pipe is not worth a panic
    let _ = writeln!(out, "{text}");
}

fn verdict_exit(out: &mut dyn Write, verdict: &Verdict) -> i32 {
    emit(out, &to_json(verdict));
    if verdict.passed() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn certified_exit(out: &mut dyn Write, instance: Instance, result: Certified) -> i32 {
    match result {
        Ok(cert) => {
            emit(out, &CertificateDocument::new(cert).to_json());
            EXIT_OK
        }
        Err(refusal) => {
            emit(out, &to_json(&RefusalDocument::new(instance, refusal)));
            EXIT_FAIL
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Usage> {
    Ok(match command {
        Command::Rho(c) => {
            emit(out, &numerics::rho(&c.spec()?).to_string());
            EXIT_OK
        }
        Command::Interp(c) => {
            match numerics::interpolation_capacity(&c.spec()?)? {
                Capacity::Bounded(n) => emit(out, &n.to_string()),
                Capacity::Unbounded => emit(out, "unbounded"),
            }
            EXIT_OK
        }
        Command::Check(statement) => {
            let verdict = match statement {
                Statement::Main(p) => hypotheses::check_main(&p.gluing()?),
                Statement::MainSp(p) => hypotheses::check_main_sp(&p.gluing()?),
                Statement::MainHyp(p) => hypotheses::check_main_hyp(&p.hyperplane()?),
                Statement::SmallMid(a) => hypotheses::check_small_mid(&a.query()?),
                Statement::SmallHyp(p) => hypotheses::check_small_hyp(&p.hyperplane()?),
            };
            verdict_exit(out, &verdict)
        }
        Command::Certify(what) => match what {
            Certifiable::Main(p) => {
                let inst = p.gluing()?;
                certified_exit(out, Instance::Gluing(inst), certifier::certify_main(&inst))
            }
            Certifiable::SmallMid(a) => {
                let q = a.query()?;
                certified_exit(out, Instance::SmallMid(q), certifier::certify_small_mid(&q))
            }
            Certifiable::SmallHyp(p) => {
                let inst = p.hyperplane()?;
                certified_exit(
                    out,
                    Instance::Hyperplane(inst),
                    certifier::certify_small_hyp(&inst),
                )
            }
        },
        Command::Verify { input } => {
            let text = if input == "-" {
                std::io::read_to_string(std::io::stdin())
            } else {
                std::fs::read_to_string(&input)
            }
            .map_err(|source| Usage::Read {
                path: input.clone(),
                source,
            })?;
            let doc = CertificateDocument::parse(&text)?;
            let report = verify(&doc.tree);
            emit(out, &to_json(&report));
            if report.ok {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Command::Audit(a) => {
            let grid = AuditGrid {
                r_min: a.r_min,
                r_max: a.r_max,
                genus_cap: a.g_cap.map_or(GenusCap::TimesR(3), GenusCap::Fixed),
                d_cap: a.d_cap,
                n_mode: a.n.map_or(NodeMode::AllAdmissible, NodeMode::Fixed),
            };
            let kind = match a.kind {
                Kind::Coverage => AuditKind::Coverage,
                Kind::Agreement => AuditKind::Agreement,
                Kind::Termination => AuditKind::Termination,
            };
            let timed = run_audit(kind, &grid);
            emit(out, &to_json(&timed));
            if timed.report.passed() {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Command::Plan { class, limit } => {
            let target = class.spec()?;
            match limit {
                None => {
                    let outcome = planner::plan_decomposition(&target)?;
                    emit(out, &to_json(&outcome));
                    match outcome {
                        PlanOutcome::Found(_) => EXIT_OK,
                        PlanOutcome::Infeasible(_) => EXIT_FAIL,
                    }
                }
                Some(k) => {
                    let plans = planner::enumerate_decompositions(&target, k)?;
                    emit(out, &to_json(&plans));
                    if plans.is_empty() {
                        EXIT_FAIL
                    } else {
                        EXIT_OK
                    }
                }
            }
        }
        Command::Table(Table::Interp {
            r,
            d_max,
            g_max,
            format,
        }) => {
            let text = interpolation_table(r, d_max, g_max, format)?;
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
    })
}
