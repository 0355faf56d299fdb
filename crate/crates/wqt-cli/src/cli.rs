//! Argument parsing and subcommand dispatch.
//!
//! Exit codes: 0 for success (Completed where a run is involved), 1 for
//! usage, parse, preflight or IO errors, 2 for Failed runs and failed
//! certificates or comparisons, 3 for Truncated runs.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use wqt_core::cartan::{build_root_data, LieType};
use wqt_core::catalog::{catalog, compare, CatalogError};
use wqt_core::engine::{expand, ExpansionConfig, FieldExpansion, Status};
use wqt_core::limit::{specialize_t1, weight_multiset};
use wqt_core::monomial::{Monomial, Spectral};
use wqt_core::verifier::verify_cancellation;

use crate::dot::to_dot;
use crate::json::{from_json, report_to_json, to_json};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_TRUNCATED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "wqt",
    version,
    about = "Exact monomial expansions of deformed W-algebra fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a starting monomial and report the resulting field
    Run(RunArgs),
    /// Run a fundamental field, then verify, specialize and compare
    /// against the closed form catalog where one exists
    Fundamental(FundamentalArgs),
    /// Check the screening cancellation certificate of a saved run
    Verify(VerifyArgs),
    /// Specialize a saved run at t = 1 and print the q-character
    Limit(LimitArgs),
    /// Print the closed form monomial list of a fundamental field
    Catalog(CatalogArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Lie type as a fused letter-rank token, e.g. A3, B2, D4
    #[arg(long = "type", value_name = "TYPE")]
    lie_type: String,
    /// Starting monomial, e.g. "Y[1](q^0 t^0) * Y[1](q^-2 t^0)"
    #[arg(long, value_name = "MONOMIAL")]
    start: String,
    /// Stop generating past this height and report Truncated
    #[arg(long, value_name = "H")]
    max_height: Option<u32>,
    /// Stop once the table reaches this size and report Truncated
    #[arg(long, value_name = "M")]
    max_monomials: Option<usize>,
    /// Skip the coefficient cross-check on rediscovered monomials
    #[arg(long)]
    no_path_check: bool,
    /// Seed for coefficient equality sampling; overrides WQT_SEED
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Write the full run to this path as JSON
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write the expansion graph to this path as DOT
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
}

#[derive(clap::Args)]
struct FundamentalArgs {
    /// Lie type as a fused letter-rank token, e.g. A3, B2, D4
    #[arg(long = "type", value_name = "TYPE")]
    lie_type: String,
    /// Node index in 1..=rank; the start is Y[node](q^0 t^0)
    #[arg(long, value_name = "I")]
    node: usize,
    /// Seed for coefficient equality sampling; overrides WQT_SEED
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Write the full run to this path as JSON
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write the expansion graph to this path as DOT
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Path of a run saved by `run --json` or `fundamental --json`
    #[arg(long, value_name = "PATH")]
    json: PathBuf,
    /// Seed for coefficient equality sampling; overrides WQT_SEED
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
}

#[derive(clap::Args)]
struct LimitArgs {
    /// Path of a run saved by `run --json` or `fundamental --json`
    #[arg(long, value_name = "PATH")]
    json: PathBuf,
}

#[derive(clap::Args)]
struct CatalogArgs {
    /// Lie type as a fused letter-rank token, e.g. A3, B2, D4
    #[arg(long = "type", value_name = "TYPE")]
    lie_type: String,
    /// Node index in 1..=rank
    #[arg(long, value_name = "I")]
    node: usize,
    /// Write the monomial list to this path as JSON
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

pub fn main_entry() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            // clap renders help to stdout and errors to stderr
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Fundamental(args) => cmd_fundamental(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Limit(args) => cmd_limit(args),
        Command::Catalog(args) => cmd_catalog(args),
    }
}

// a consumer like `head` may close stdout early; a truncated pipe must
// not panic or disturb the exit code, so write errors are dropped
fn say(args: fmt::Arguments<'_>) {
    let mut out = io::stdout().lock();
    let _ = out.write_fmt(args);
    let _ = out.write_all(b"\n");
}

fn say_raw(args: fmt::Arguments<'_>) {
    let _ = io::stdout().lock().write_fmt(args);
}

fn usage_error(msg: impl fmt::Display) -> u8 {
    let _ = writeln!(io::stderr().lock(), "error: {}", msg);
    EXIT_USAGE
}

fn complain(msg: impl fmt::Display) {
    let _ = writeln!(io::stderr().lock(), "{}", msg);
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("WQT_SEED") {
        Ok(text) => text
            .parse()
            .map_err(|_| format!("WQT_SEED must be an integer, got {:?}", text)),
        Err(_) => Ok(0),
    }
}

fn parse_type(token: &str) -> Result<LieType, String> {
    token.parse().map_err(|e| format!("{}", e))
}

fn status_word(status: Status) -> &'static str {
    match status {
        Status::Completed => "completed",
        Status::Failed => "failed",
        Status::Truncated(_) => "truncated",
    }
}

fn status_exit(status: Status) -> u8 {
    match status {
        Status::Completed => EXIT_OK,
        Status::Failed => EXIT_FAILED,
        Status::Truncated(_) => EXIT_TRUNCATED,
    }
}

fn write_outputs(
    fe: &FieldExpansion,
    json: Option<&PathBuf>,
    dot: Option<&PathBuf>,
) -> Result<(), String> {
    if let Some(path) = json {
        fs::write(path, to_json(fe)).map_err(|e| format!("cannot write {:?}: {}", path, e))?;
    }
    if let Some(path) = dot {
        fs::write(path, to_dot(fe)).map_err(|e| format!("cannot write {:?}: {}", path, e))?;
    }
    Ok(())
}

fn print_run(fe: &FieldExpansion) {
    say(format_args!("{} from {}", fe.lie_type(), fe.start()));
    match fe.status() {
        Status::Truncated(cap) => say(format_args!("status: truncated ({} cap)", cap)),
        other => say(format_args!("status: {}", status_word(other))),
    }
    say(format_args!("monomials: {}", fe.len()));
    say(format_args!("edges: {}", fe.edges().len()));
    for (m, defect) in fe.witnesses() {
        say(format_args!("witness ({}): {}", defect, m));
    }
}

fn cmd_run(args: RunArgs) -> u8 {
    let lie_type = match parse_type(&args.lie_type) {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };
    let start: Monomial = match args.start.parse() {
        Ok(m) => m,
        Err(e) => return usage_error(e),
    };
    let seed = match resolve_seed(args.seed) {
        Ok(s) => s,
        Err(e) => return usage_error(e),
    };
    let mut cfg = ExpansionConfig {
        check_path_independence: !args.no_path_check,
        equality_seed: seed,
        ..ExpansionConfig::default()
    };
    if let Some(h) = args.max_height {
        cfg.max_height = h;
    }
    if let Some(m) = args.max_monomials {
        cfg.max_monomials = m;
    }

    let rd = build_root_data(lie_type);
    let fe = match expand(&rd, &start, &cfg) {
        Ok(fe) => fe,
        Err(e) => return usage_error(e),
    };
    if let Err(e) = write_outputs(&fe, args.json.as_ref(), args.dot.as_ref()) {
        return usage_error(e);
    }
    print_run(&fe);
    status_exit(fe.status())
}

fn cmd_fundamental(args: FundamentalArgs) -> u8 {
    let lie_type = match parse_type(&args.lie_type) {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };
    let seed = match resolve_seed(args.seed) {
        Ok(s) => s,
        Err(e) => return usage_error(e),
    };
    let cfg = ExpansionConfig {
        equality_seed: seed,
        ..ExpansionConfig::default()
    };
    let rd = build_root_data(lie_type);
    let start = Monomial::variable(args.node, Spectral::UNIT, 1);
    let fe = match expand(&rd, &start, &cfg) {
        Ok(fe) => fe,
        Err(e) => return usage_error(e),
    };
    if let Err(e) = write_outputs(&fe, args.json.as_ref(), args.dot.as_ref()) {
        return usage_error(e);
    }
    print_run(&fe);
    if fe.status() != Status::Completed {
        return status_exit(fe.status());
    }

    let report = verify_cancellation(&fe, seed).expect("completed run");
    say(format_args!(
        "verify: {} pairings, {} violations",
        report.pairings.len(),
        report.violations.len()
    ));
    if !report.is_certified() {
        return EXIT_FAILED;
    }

    let qc = match specialize_t1(&fe) {
        Ok(qc) => qc,
        Err(e) => {
            complain(format_args!("limit stage failed: {}", e));
            return EXIT_FAILED;
        }
    };
    let weights = match weight_multiset(lie_type.rank(), &qc) {
        Ok(ws) => ws,
        Err(e) => {
            complain(format_args!("limit stage failed: {}", e));
            return EXIT_FAILED;
        }
    };
    say(format_args!(
        "limit: {} terms, {} weights",
        qc.len(),
        weights.len()
    ));

    match catalog(lie_type, args.node) {
        Ok(entry) => match compare(&fe, &entry) {
            Ok(report) if report.is_clean() => {
                say(format_args!(
                    "catalog: match, {} monomials, shift (q^{}, t^{})",
                    entry.len(),
                    report.shift.0,
                    report.shift.1
                ));
            }
            Ok(report) => {
                say(format_args!(
                    "catalog: mismatch, {} missing, {} unexpected",
                    report.missing_in_expansion.len(),
                    report.unexpected_in_expansion.len()
                ));
                return EXIT_FAILED;
            }
            Err(e) => {
                complain(format_args!("catalog stage failed: {}", e));
                return EXIT_FAILED;
            }
        },
        Err(CatalogError::Unsupported { .. }) => {
            say(format_args!("catalog: not covered for this type and node"));
        }
        Err(e) => {
            complain(format_args!("catalog stage failed: {}", e));
            return EXIT_FAILED;
        }
    }
    EXIT_OK
}

fn read_run(path: &PathBuf) -> Result<FieldExpansion, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {:?}: {}", path, e))?;
    from_json(&text).map_err(|e| format!("{}", e))
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    let fe = match read_run(&args.json) {
        Ok(fe) => fe,
        Err(e) => return usage_error(e),
    };
    let seed = match resolve_seed(args.seed) {
        Ok(s) => s,
        Err(e) => return usage_error(e),
    };
    let report = match verify_cancellation(&fe, seed) {
        Ok(report) => report,
        Err(e) => return usage_error(e),
    };
    say_raw(format_args!("{}", report_to_json(&fe, &report)));
    if report.is_certified() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn cmd_limit(args: LimitArgs) -> u8 {
    let fe = match read_run(&args.json) {
        Ok(fe) => fe,
        Err(e) => return usage_error(e),
    };
    let qc = match specialize_t1(&fe) {
        Ok(qc) => qc,
        Err(e) => return usage_error(e),
    };
    say(format_args!("{}", qc));
    match weight_multiset(fe.lie_type().rank(), &qc) {
        Ok(ws) => {
            let rendered: Vec<String> = ws
                .iter()
                .map(|w| {
                    let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                    format!("({})", parts.join(","))
                })
                .collect();
            say(format_args!("weights: {}", rendered.join(" ")));
            EXIT_OK
        }
        Err(e) => usage_error(e),
    }
}

fn cmd_catalog(args: CatalogArgs) -> u8 {
    let lie_type = match parse_type(&args.lie_type) {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };
    let entry = match catalog(lie_type, args.node) {
        Ok(entry) => entry,
        Err(e) => return usage_error(e),
    };
    say(format_args!(
        "{} node {}: {} monomials",
        lie_type,
        args.node,
        entry.len()
    ));
    for m in &entry.monomials {
        say(format_args!("{}", m));
    }
    if let Some(path) = args.json {
        let rows: Vec<serde_json::Value> = entry
            .monomials
            .iter()
            .map(|m| {
                serde_json::Value::Array(
                    m.entries()
                        .map(|(n, a, e)| {
                            serde_json::json!([n, a.orbit, a.qexp, a.texp, e])
                        })
                        .collect(),
                )
            })
            .collect();
        let doc = serde_json::json!({
            "lie_type": lie_type.to_string(),
            "node": args.node,
            "monomials": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
        text.push('\n');
        if let Err(e) = fs::write(&path, text) {
            return usage_error(format!("cannot write {:?}: {}", path, e));
        }
    }
    EXIT_OK
}
