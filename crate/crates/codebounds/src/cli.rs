//! Command-line front end.
//!
//! Subcommands: `bound unrestricted N D`, `bound cw N D W`, `tbound SPEC`
//! (spec syntax `w1:n1,w2:n2,...@d`), `sweep ...`, `export-sdpa ...`,
//! `tables ingest`, and `verify oracle`. Exit codes: 0 success, 2 invalid
//! arguments, 3 solver failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::bounds::{
    self, constraint_listing, cw_bound, engine_with_tables, sweep_cw_bound,
    sweep_unrestricted_bound, unrestricted_bound, BoundOutcome, Method,
};
use crate::sdp::{
    build_cw, build_unrestricted, export_sdpa, CwOptions, SolveOptions, SolveStatus,
    UnrestrictedOptions,
};
use crate::tbounds::{ingest_table, BoundEngine, McwSpec, TableKind};

const DEFAULT_CACHE: &str = "./tbounds.cache.json";

#[derive(Parser, Debug)]
#[command(
    name = "codebounds",
    about = "Upper bounds for binary codes via linear and semidefinite programming",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
struct CommonOpts {
    /// Bounding method.
    #[arg(long, default_value = "sdp-plus")]
    method: String,
    /// Restrict to an explicit comma-separated family list
    /// (unrestricted: t1,cor2,delsarte,mel; constant-weight: t6,t7,t11,t13,t14).
    #[arg(long)]
    families: Option<String>,
    /// Doubly-constant-weight bound table (CSV).
    #[arg(long)]
    tables: Option<PathBuf>,
    /// Doubly-bounded-weight bound table (CSV).
    #[arg(long)]
    tables_dbw: Option<PathBuf>,
    /// Bound cache path (env CODEBOUNDS_CACHE, then this flag, override
    /// the default ./tbounds.cache.json).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Print every linear constraint row of the model.
    #[arg(long)]
    print_constraints: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute an upper bound.
    Bound {
        #[command(subcommand)]
        target: BoundTarget,
    },
    /// Evaluate the multiply constant-weight bound calculus on a spec.
    Tbound {
        /// Specification, e.g. 2:13,3:14@8
        spec: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Refine a bound by sweeping candidate sizes through parity families.
    Sweep {
        #[command(subcommand)]
        target: BoundTarget,
    },
    /// Write a model in SDPA sparse format.
    ExportSdpa {
        #[command(subcommand)]
        target: ExportTarget,
    },
    /// Table management.
    Tables {
        #[command(subcommand)]
        action: TablesAction,
    },
    /// Internal consistency checks.
    Verify {
        #[command(subcommand)]
        action: VerifyAction,
    },
}

#[derive(Subcommand, Debug)]
enum BoundTarget {
    /// Binary codes: A(n,d).
    Unrestricted {
        n: usize,
        d: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Constant-weight codes: A(n,d,w).
    Cw {
        n: usize,
        d: usize,
        w: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand, Debug)]
enum ExportTarget {
    Unrestricted {
        n: usize,
        d: usize,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    Cw {
        n: usize,
        d: usize,
        w: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand, Debug)]
enum TablesAction {
    /// Parse and canonicalise a table CSV, reporting its contents.
    Ingest {
        path: PathBuf,
        /// Table kind: dcw (doubly-constant-weight) or dbw (doubly-bounded).
        #[arg(long, default_value = "dcw")]
        kind: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyAction {
    /// Check bound dominance against exhaustive search at small scale.
    Oracle {
        /// Largest code length to check.
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Largest distance to check.
        #[arg(long, default_value_t = 6)]
        max_d: usize,
        /// Node budget per exact search.
        #[arg(long, default_value_t = 20_000_000)]
        budget: u64,
    },
}

/// Parsed family toggles.
#[derive(Default, Clone, Copy)]
struct FamilySet {
    t1: bool,
    cor2: bool,
    delsarte: bool,
    mel: bool,
    t6: bool,
    t7: bool,
    t11_13: bool,
    t14: bool,
}

fn parse_families(spec: &str) -> Result<FamilySet, String> {
    let mut out = FamilySet::default();
    for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match name {
            "t1" => out.t1 = true,
            "cor2" => out.cor2 = true,
            "delsarte" => out.delsarte = true,
            "mel" => out.mel = true,
            "t6" => out.t6 = true,
            "t7" => out.t7 = true,
            "t11" | "t13" | "t11-13" => out.t11_13 = true,
            "t14" => out.t14 = true,
            other => return Err(format!("unknown family {other:?}")),
        }
    }
    Ok(out)
}

struct Report {
    exit: u8,
    text: String,
}

fn fail(exit: u8, msg: impl Into<String>) -> Report {
    Report {
        exit,
        text: format!("error: {}\n", msg.into()),
    }
}

fn cache_path(common: &CommonOpts) -> PathBuf {
    if let Some(p) = &common.cache {
        return p.clone();
    }
    if let Ok(env) = std::env::var("CODEBOUNDS_CACHE") {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    PathBuf::from(DEFAULT_CACHE)
}

fn build_engine(common: &CommonOpts) -> Result<BoundEngine, Report> {
    let cache = cache_path(common);
    engine_with_tables(
        common.tables.as_deref(),
        common.tables_dbw.as_deref(),
        Some(&cache),
    )
    .map_err(|e| fail(2, format!("table ingestion failed: {e}")))
}

fn persist_cache(engine: &BoundEngine, common: &CommonOpts) {
    if engine.memo_len() == 0 {
        return;
    }
    let path = cache_path(common);
    if let Err(e) = engine.save_cache(&path) {
        log::warn!("could not persist bound cache to {}: {e}", path.display());
    }
}

fn status_name(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Optimal => "optimal",
        SolveStatus::MaxIterations => "max-iterations",
        SolveStatus::NumericalFailure => "numerical-failure",
        SolveStatus::Infeasible => "infeasible",
    }
}

fn timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn outcome_json(
    kind: &str,
    n: usize,
    d: usize,
    w: Option<usize>,
    outcome: &BoundOutcome,
    swept: Option<&BigInt>,
    constraints: Option<Vec<String>>,
) -> serde_json::Value {
    serde_json::json!({
        "command": if swept.is_some() { "sweep" } else { "bound" },
        "kind": kind,
        "n": n,
        "d": d,
        "w": w,
        "method": outcome.method.name(),
        "bound": swept.unwrap_or(&outcome.bound).to_string(),
        "value": outcome.value,
        "families": outcome.families,
        "solver": outcome.solver.as_ref().map(|s| serde_json::json!({
            "status": status_name(s.status),
            "iterations": s.iterations,
            "primal": s.primal,
            "dual": s.dual,
            "min_eigenvalue": s.min_eigenvalue,
        })),
        "constraints": constraints,
        "timestamp": timestamp(),
    })
}

fn render_outcome(
    kind: &str,
    n: usize,
    d: usize,
    w: Option<usize>,
    outcome: &BoundOutcome,
    swept: Option<&BigInt>,
    constraints: Option<Vec<String>>,
    format: Format,
) -> Report {
    let exit = match &outcome.solver {
        Some(info) if info.status == SolveStatus::Infeasible => 3,
        Some(info) if info.status == SolveStatus::NumericalFailure && !info.dual.is_finite() => 3,
        _ => 0,
    };
    let text = match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&outcome_json(kind, n, d, w, outcome, swept, constraints))
                .unwrap()
        ),
        Format::Text => {
            let mut lines = String::new();
            let params = match w {
                Some(w) => format!("A({n},{d},{w})"),
                None => format!("A({n},{d})"),
            };
            lines.push_str(&format!(
                "{params} <= {}   [method {}, value {:.6}]\n",
                swept.unwrap_or(&outcome.bound),
                outcome.method.name(),
                outcome.value,
            ));
            if let Some(sw) = swept {
                lines.push_str(&format!(
                    "  parity sweep refined {} -> {}\n",
                    outcome.bound, sw
                ));
            }
            lines.push_str(&format!("  families: {}\n", outcome.families.join(", ")));
            if let Some(info) = &outcome.solver {
                lines.push_str(&format!(
                    "  solver: {} after {} iterations (primal {:.6}, certified dual {:.6})\n",
                    status_name(info.status),
                    info.iterations,
                    info.primal,
                    info.dual
                ));
            }
            if let Some(rows) = constraints {
                lines.push_str("  constraints:\n");
                for row in rows {
                    lines.push_str(&format!("    {row}\n"));
                }
            }
            lines
        }
    };
    Report { exit, text }
}

fn run_bound(target: &BoundTarget, sweep: bool) -> Report {
    let (kind, n, d, w, common) = match target {
        BoundTarget::Unrestricted { n, d, common } => ("unrestricted", *n, *d, None, common),
        BoundTarget::Cw { n, d, w, common } => ("cw", *n, *d, Some(*w), common),
    };
    if n == 0 || d == 0 || n > 32 || w.map_or(false, |w| w > n) {
        return fail(2, "parameters must satisfy 1 <= d, 1 <= n <= 32, w <= n");
    }
    let method: Method = match common.method.parse() {
        Ok(m) => m,
        Err(e) => return fail(2, e),
    };
    let engine = match build_engine(common) {
        Ok(e) => e,
        Err(r) => return r,
    };
    let opts = SolveOptions::default();

    let families = match common.families.as_deref().map(parse_families) {
        None => None,
        Some(Ok(f)) => Some(f),
        Some(Err(e)) => return fail(2, e),
    };

    if let Some(f) = families {
        // Explicit family selection always runs the SDP path.
        let built = match w {
            None => build_unrestricted(
                n,
                d,
                UnrestrictedOptions {
                    even_reduction: None,
                    t1: f.t1,
                    cor2: f.cor2,
                    delsarte: f.delsarte,
                    mel: f.mel,
                },
                Some(&engine),
            ),
            Some(w) => match bounds::normalize_cw(n, d, w) {
                bounds::CwCase::Exact(_) => {
                    return fail(2, "family selection needs a core-regime instance")
                }
                bounds::CwCase::Core { n, d, w } => build_cw(
                    n,
                    d,
                    w,
                    CwOptions {
                        t6: f.t6,
                        t7: f.t7,
                        families_11_13: f.t11_13,
                        t14: f.t14,
                    },
                    Some(&engine),
                ),
            },
        };
        let inst = match built {
            Ok(i) => i,
            Err(e) => return fail(2, e.to_string()),
        };
        let constraints = common.print_constraints.then(|| constraint_listing(&inst));
        let report = crate::sdp::solve(&inst, &opts);
        let out = BoundOutcome {
            bound: BigInt::from((report.dual_objective + 1e-6).floor() as i64),
            value: report.dual_objective,
            method,
            families: inst.meta.families.clone(),
            solver: Some(bounds::SolverInfo {
                status: report.status,
                iterations: report.iterations,
                primal: report.primal_objective,
                dual: report.dual_objective,
                min_eigenvalue: report.max_block_min_eigenvalue,
            }),
        };
        persist_cache(&engine, common);
        return render_outcome(kind, n, d, w, &out, None, constraints, common.format);
    }

    let outcome = match w {
        None => unrestricted_bound(n, d, method, &engine, &opts),
        Some(w) => cw_bound(n, d, w, method, &engine, &opts),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => return fail(2, e.to_string()),
    };

    let swept = sweep.then(|| match w {
        None => sweep_unrestricted_bound(n, d, &outcome.bound),
        Some(w) => sweep_cw_bound(n, d, w, &outcome.bound),
    });

    let constraints = if common.print_constraints {
        let built = match w {
            None => build_unrestricted(
                n,
                d,
                match method {
                    Method::SdpPlus => UnrestrictedOptions::plus(),
                    _ => UnrestrictedOptions::default(),
                },
                Some(&engine),
            )
            .ok(),
            Some(w) => match bounds::normalize_cw(n, d, w) {
                bounds::CwCase::Core { n, d, w } => build_cw(
                    n,
                    d,
                    w,
                    match method {
                        Method::SdpPlus => CwOptions::plus(),
                        _ => CwOptions::default(),
                    },
                    Some(&engine),
                )
                .ok(),
                _ => None,
            },
        };
        built.map(|inst| constraint_listing(&inst))
    } else {
        None
    };

    persist_cache(&engine, common);
    render_outcome(
        kind,
        n,
        d,
        w,
        &outcome,
        swept.as_ref(),
        constraints,
        common.format,
    )
}

fn run_tbound(spec: &str, common: &CommonOpts) -> Report {
    let parsed: McwSpec = match spec.parse() {
        Ok(s) => s,
        Err(e) => return fail(2, e.to_string()),
    };
    let engine = match build_engine(common) {
        Ok(e) => e,
        Err(r) => return r,
    };
    let record = engine.upper_bound(&parsed);
    let chain = engine.derivation_chain(&parsed);
    persist_cache(&engine, common);
    let text = match common.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::json!({
                "command": "tbound",
                "spec": spec,
                "canonical": record.spec.to_string(),
                "upper": record.upper.to_string(),
                "rule": record.rule.to_string(),
                "provenance": record.provenance,
                "chain": chain,
                "timestamp": timestamp(),
            }))
            .unwrap()
        ),
        Format::Text => {
            let mut out = format!(
                "T({}) <= {}   [rule {}, {}]\n",
                record.spec, record.upper, record.rule, record.provenance
            );
            for line in chain {
                out.push_str(&format!("  {line}\n"));
            }
            out
        }
    };
    Report { exit: 0, text }
}

fn run_export(target: &ExportTarget) -> Report {
    let (built, out_path) = match target {
        ExportTarget::Unrestricted { n, d, out, common } => {
            let engine = match build_engine(common) {
                Ok(e) => e,
                Err(r) => return r,
            };
            let opts = match common.method.parse() {
                Ok(Method::SdpPlus) => UnrestrictedOptions::plus(),
                Ok(_) => UnrestrictedOptions::default(),
                Err(e) => return fail(2, e),
            };
            (
                build_unrestricted(*n, *d, opts, Some(&engine)).map_err(|e| e.to_string()),
                out,
            )
        }
        ExportTarget::Cw { n, d, w, out, common } => {
            let engine = match build_engine(common) {
                Ok(e) => e,
                Err(r) => return r,
            };
            let opts = match common.method.parse() {
                Ok(Method::SdpPlus) => CwOptions::plus(),
                Ok(_) => CwOptions::default(),
                Err(e) => return fail(2, e),
            };
            match bounds::normalize_cw(*n, *d, *w) {
                bounds::CwCase::Exact(_) => {
                    return fail(2, "degenerate parameters have no model to export")
                }
                bounds::CwCase::Core { n, d, w } => (
                    build_cw(n, d, w, opts, Some(&engine)).map_err(|e| e.to_string()),
                    out,
                ),
            }
        }
    };
    let inst = match built {
        Ok(i) => i,
        Err(e) => return fail(2, e),
    };
    match export_sdpa(&inst, out_path) {
        Ok(()) => Report {
            exit: 0,
            text: format!(
                "wrote {} variables, {} blocks to {}\n",
                inst.variables.len(),
                inst.psd_blocks.len() + 1,
                out_path.display()
            ),
        },
        Err(e) => fail(3, e.to_string()),
    }
}

fn run_tables(action: &TablesAction) -> Report {
    match action {
        TablesAction::Ingest { path, kind, format } => {
            let kind = match kind.as_str() {
                "dcw" => TableKind::Dcw,
                "dbw" => TableKind::Dbw,
                other => return fail(2, format!("unknown table kind {other:?} (dcw|dbw)")),
            };
            match ingest_table(path, kind) {
                Ok(table) => {
                    let text = match format {
                        Format::Json => format!(
                            "{}\n",
                            serde_json::to_string_pretty(&serde_json::json!({
                                "command": "tables-ingest",
                                "path": path.display().to_string(),
                                "kind": match kind { TableKind::Dcw => "dcw", TableKind::Dbw => "dbw" },
                                "entries": table.len(),
                                "timestamp": timestamp(),
                            }))
                            .unwrap()
                        ),
                        Format::Text => format!(
                            "ingested {} entries from {}\n",
                            table.len(),
                            path.display()
                        ),
                    };
                    Report { exit: 0, text }
                }
                Err(e) => fail(2, e.to_string()),
            }
        }
    }
}

fn run_verify(action: &VerifyAction) -> Report {
    match action {
        VerifyAction::Oracle { n, max_d, budget } => {
            match bounds::oracle_dominance_sweep(*n, *max_d, *budget, &SolveOptions::default()) {
                Ok(failures) if failures.is_empty() => Report {
                    exit: 0,
                    text: format!("oracle dominance holds for all cases with n <= {n}\n"),
                },
                Ok(failures) => Report {
                    exit: 1,
                    text: format!("dominance violations:\n{}\n", failures.join("\n")),
                },
                Err(e) => fail(3, e),
            }
        }
    }
}

/// Run the CLI on explicit arguments; returns the exit code and the text
/// that would go to stdout.
pub fn dispatch<I, S>(argv: I) -> (u8, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return (code, e.to_string());
        }
    };
    let report = match &cli.command {
        Command::Bound { target } => run_bound(target, false),
        Command::Sweep { target } => run_bound(target, true),
        Command::Tbound { spec, common } => run_tbound(spec, common),
        Command::ExportSdpa { target } => run_export(target),
        Command::Tables { action } => run_tables(action),
        Command::Verify { action } => run_verify(action),
    };
    (report.exit, report.text)
}

/// Binary entry point.
pub fn main() -> ExitCode {
    let (code, text) = dispatch(std::env::args_os());
    if code == 0 {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    ExitCode::from(code)
}
