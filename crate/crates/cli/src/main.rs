//! Command-line front end: compute, verify, sweep, and report.
//!
//! Exit codes: 0 on success with all checks passing, 1 when a mathematical
//! check fails (the offending graph is embedded in the report), 2 on usage
//! or parse errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use admlab_core::deligne::{verify_all, verify_identity, IdentityReport};
use admlab_core::graph::{parse_graph, MetrizedGraph, PointRef};
use admlab_core::green::{canonical_measure, green_value};
use admlab_core::invariants::run_checks;
use admlab_core::ledger::{parse_ledger, report as ledger_report};
use admlab_core::oracle::discrete_oracle;
use admlab_core::rational::{format_rational, parse_rational};
use admlab_core::sweep::{outcome_line, run_sweep, SweepConfig};
use admlab_core::{circuit, Error};

#[derive(Parser)]
#[command(
    name = "admlab",
    version,
    about = "Exact potential theory on metrized graphs"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the invariant report of a graph file
    Invariants(GraphArg),
    /// Run the invariant checks and print one verdict line per check
    Check(GraphArg),
    /// Exact effective resistance between two points
    Resistance {
        file: PathBuf,
        /// First point: vertex:<id> or edge:<id>@<p>/<q>
        a: String,
        /// Second point: vertex:<id> or edge:<id>@<p>/<q>
        b: String,
    },
    /// Exact Green's function value for the canonical measure
    Green {
        file: PathBuf,
        /// Source point y of g(., y)
        #[arg(long)]
        source: String,
        /// Evaluation point x
        #[arg(long)]
        at: String,
    },
    /// Floating-point discretization of the Green's function (approximate)
    Oracle {
        file: PathBuf,
        /// Source point y of g(., y)
        #[arg(long)]
        source: String,
        /// Segments per edge
        #[arg(long, default_value_t = 64)]
        segments: u32,
    },
    /// Generate seeded random graphs and verify every invariant on each
    Random {
        #[arg(long, default_value_t = 50)]
        count: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        #[arg(long, default_value_t = 12)]
        max_edges: usize,
        #[arg(long, default_value_t = 6)]
        max_genus: u64,
        /// Which checks to run (only `all` is defined)
        #[arg(long, default_value = "all")]
        check: String,
    },
    /// Assemble a per-place ledger and verify its bounds
    Ledger { file: PathBuf },
    /// Verify the pairing-identity catalog
    Identities {
        /// A single identity name; omit (or pass --all) for the whole catalog
        name: Option<String>,
        #[arg(long)]
        all: bool,
        /// Print each applied rewrite rule
        #[arg(long)]
        show_derivation: bool,
    },
}

#[derive(Args)]
struct GraphArg {
    file: PathBuf,
}

fn parse_point(text: &str) -> Result<PointRef, String> {
    if let Some(id) = text.strip_prefix("vertex:") {
        return Ok(PointRef::vertex(id));
    }
    if let Some(rest) = text.strip_prefix("edge:") {
        let (id, offset) = rest
            .split_once('@')
            .ok_or_else(|| format!("expected edge:<id>@<p>/<q>, got `{text}`"))?;
        let offset = parse_rational(offset).ok_or_else(|| format!("invalid offset in `{text}`"))?;
        return Ok(PointRef::edge_point(id, offset));
    }
    Err(format!(
        "expected vertex:<id> or edge:<id>@<p>/<q>, got `{text}`"
    ))
}

fn load_graph(path: &PathBuf) -> Result<MetrizedGraph, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_graph(&text)
}

/// 2 = usage/parse problem, 1 = a mathematical check failed.
enum Failure {
    Usage(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

fn identity_json(report: &IdentityReport, show_derivation: bool) -> serde_json::Value {
    let mut value = json!({
        "name": report.name,
        "holds": report.holds,
        "lhs": report.lhs.to_string(),
        "rhs": report.rhs.to_string(),
    });
    if show_derivation {
        value["derivation"] = json!(report.derivation);
    }
    value
}

fn print_identity(report: &IdentityReport, show_derivation: bool) {
    let status = if report.holds { "holds" } else { "FAILS" };
    println!("{}: {status}", report.name);
    println!("  lhs = {}", report.lhs);
    println!("  rhs = {}", report.rhs);
    if show_derivation {
        for line in &report.derivation {
            println!("    {line}");
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Invariants(arg) => {
            let graph = load_graph(&arg.file)?;
            let report = run_checks(&graph)?;
            let ok = report.all_pass();
            if cli.json {
                let value = json!({
                    "report": report,
                    "graph_file": if ok { serde_json::Value::Null } else { json!(graph.serialize()) },
                });
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                println!("genus          {}", report.genus);
                println!("total length   {}", format_rational(&report.total_length));
                let delta: Vec<String> = report.delta.iter().map(format_rational).collect();
                println!("delta          [{}]", delta.join(", "));
                println!("epsilon        {}", format_rational(&report.epsilon));
                println!("epsilon (alt)  {}", format_rational(&report.epsilon_alt));
                println!("phi            {}", format_rational(&report.phi));
                for check in &report.checks {
                    let status = if check.pass { "pass" } else { "FAIL" };
                    println!(
                        "check {:28} {status}  margin={}",
                        check.name,
                        format_rational(&check.margin)
                    );
                }
                if !ok {
                    println!("offending graph:");
                    print!("{}", graph.serialize());
                }
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Check(arg) => {
            let graph = load_graph(&arg.file)?;
            let report = run_checks(&graph)?;
            let ok = report.all_pass();
            if cli.json {
                let value = json!({
                    "all_pass": ok,
                    "checks": report.checks,
                    "graph_file": if ok { serde_json::Value::Null } else { json!(graph.serialize()) },
                });
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                for check in &report.checks {
                    let status = if check.pass { "pass" } else { "FAIL" };
                    println!(
                        "{status}  {} (margin {})",
                        check.name,
                        format_rational(&check.margin)
                    );
                }
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Resistance { file, a, b } => {
            let graph = load_graph(&file)?;
            let pa = parse_point(&a)?;
            let pb = parse_point(&b)?;
            let r = circuit::resistance(&graph, &pa, &pb)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "a": pa.to_string(),
                        "b": pb.to_string(),
                        "resistance": format_rational(&r),
                    }))
                    .unwrap()
                );
            } else {
                println!("{}", format_rational(&r));
            }
            Ok(())
        }
        Command::Green { file, source, at } => {
            let graph = load_graph(&file)?;
            let y = parse_point(&source)?;
            let x = parse_point(&at)?;
            let mu = canonical_measure(&graph)?;
            let value = green_value(&graph, &mu, &x, &y)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "source": y.to_string(),
                        "at": x.to_string(),
                        "value": format_rational(&value),
                    }))
                    .unwrap()
                );
            } else {
                println!("{}", format_rational(&value));
            }
            Ok(())
        }
        Command::Oracle {
            file,
            source,
            segments,
        } => {
            let graph = load_graph(&file)?;
            let y = parse_point(&source)?;
            let mu = canonical_measure(&graph)?;
            let oracle = discrete_oracle(&graph, &mu, &y, segments)?;
            if cli.json {
                let values: BTreeMap<&String, f64> =
                    oracle.vertex_values.iter().map(|(k, &v)| (k, v)).collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "approximate": true,
                        "segments": oracle.segments,
                        "source": y.to_string(),
                        "vertex_values": values,
                    }))
                    .unwrap()
                );
            } else {
                println!(
                    "# approximate values, {} segments per edge",
                    oracle.segments
                );
                for (vertex, value) in &oracle.vertex_values {
                    println!("{vertex} {value:.12}");
                }
            }
            Ok(())
        }
        Command::Random {
            count,
            seed,
            max_vertices,
            max_edges,
            max_genus,
            check,
        } => {
            if check != "all" {
                return Err(Failure::Usage(format!(
                    "unknown check set `{check}`; only `all` is defined"
                )));
            }
            let cfg = SweepConfig {
                count,
                seed,
                max_vertices,
                max_edges,
                max_genus,
            };
            let report = run_sweep(&cfg)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                for outcome in &report.graphs {
                    println!("{}", outcome_line(outcome));
                    if let Some(file) = &outcome.graph_file {
                        println!("offending graph:");
                        print!("{file}");
                    }
                }
                println!("{}/{} graphs pass", report.passed, report.count);
                println!("minimum observed margins:");
                for (name, margin) in &report.min_margins {
                    println!("  {name:28} {}", format_rational(margin));
                }
            }
            if report.all_pass {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Ledger { file } => {
            let ledger = parse_ledger(&file)?;
            let report = ledger_report(&ledger)?;
            let ok = report.all_pass();
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("genus       {}", report.genus);
                println!("deg lambda  {}", format_rational(&report.deg_lambda));
                println!("omega_sq    {}", format_rational(&report.omega_sq));
                println!("sum delta   {}", format_rational(&report.sum_delta));
                println!("sum epsilon {}", format_rational(&report.sum_epsilon));
                println!("sum phi     {}", format_rational(&report.sum_phi));
                for place in &report.places {
                    println!(
                        "place {}: w={} g={} delta={} epsilon={} phi={}",
                        place.name,
                        format_rational(&place.weight),
                        place.genus,
                        format_rational(&place.delta),
                        format_rational(&place.epsilon),
                        format_rational(&place.phi)
                    );
                }
                for bound in [&report.phi_lower_bound, &report.height_lower_bound] {
                    let status = if bound.satisfied { "pass" } else { "FAIL" };
                    println!(
                        "bound {:24} {status}  bound={} margin={}",
                        bound.name,
                        format_rational(&bound.bound),
                        format_rational(&bound.margin)
                    );
                }
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Identities {
            name,
            all,
            show_derivation,
        } => {
            let reports = match (&name, all) {
                (Some(n), false) => vec![verify_identity(n)?],
                (None, _) | (_, true) => verify_all()?,
            };
            let ok = reports.iter().all(|r| r.holds);
            if cli.json {
                let values: Vec<serde_json::Value> = reports
                    .iter()
                    .map(|r| identity_json(r, show_derivation))
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "all_hold": ok,
                        "identities": values,
                    }))
                    .unwrap()
                );
            } else {
                for report in &reports {
                    print_identity(report, show_derivation);
                }
                println!(
                    "{}/{} identities hold",
                    reports.iter().filter(|r| r.holds).count(),
                    reports.len()
                );
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("ADMLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
