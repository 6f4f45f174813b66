//! `cqcount`: analyse conjunctive queries, count their answers, build
//! reduction instances and run the verification suites.
//!
//! JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 verification failure, 2 input error, 3 structurally inapplicable.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;

use cqcount::reductions::{ds_to_star_instance, embed_star2, Graph, Manifest};
use cqcount::verify::{self, Fault, Suite, SuiteReport, VerifyConfig};
use cqcount::{analyze, count, parse_query, AnalysisReport, Database, EngineChoice, Query};

#[derive(Parser)]
#[command(
    name = "cqcount",
    version,
    about = "Structure analysis and answer counting for conjunctive queries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report acyclicity, free-connexness, free path, star size and join tree.
    Analyze { query: PathBuf },
    /// Print the number of distinct answers of a query on a CSV database.
    Count {
        query: PathBuf,
        /// Directory of `<relation>.csv` files, or a single CSV file.
        database: PathBuf,
        #[arg(long, default_value = "auto")]
        engine: EngineChoice,
    },
    /// Build the star-query instance for dominating set on a graph.
    ReduceDs {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long = "kprime")]
        k_prime: usize,
        out_dir: PathBuf,
    },
    /// Embed a two-star database into an acyclic query that is not free-connex.
    ReduceEmbed {
        query: PathBuf,
        /// Database holding the binary relation `R`.
        star_database: PathBuf,
        out_dir: PathBuf,
    },
    /// Run one verification suite.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random instances; the suite's default if omitted.
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
    /// Run every verification suite with default sizes.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct AnalyzeOutput {
    query: String,
    #[serde(flatten)]
    report: AnalysisReport,
    /// Star size, the exponent in the conditional counting lower bound.
    counting_exponent_lower_bound: Option<usize>,
    /// Boolean queries are treated as free-connex.
    boolean: bool,
}

#[derive(Serialize)]
struct SelfcheckOutput {
    seed: u64,
    passed: bool,
    suites: Vec<SuiteReport>,
}

fn print_json(value: &impl Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn read_query(path: &Path) -> anyhow::Result<Query> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_query(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_database(path: &Path, arities: &BTreeMap<&str, usize>) -> anyhow::Result<Database> {
    Ok(Database::load_with_arities(path, arities)?)
}

fn query_arities(q: &Query) -> anyhow::Result<BTreeMap<&str, usize>> {
    q.predicate_arities()
        .map_err(|p| anyhow!("predicate `{p}` is used with different arities"))
}

/// The manifest as printed: everything but the decoder, which can be large.
fn manifest_summary(m: &Manifest, out_dir: &Path) -> anyhow::Result<serde_json::Value> {
    let mut v = serde_json::to_value(m)?;
    let obj = v.as_object_mut().expect("manifest is an object");
    obj.remove("decoder");
    obj.insert("out_dir".into(), out_dir.display().to_string().into());
    Ok(v)
}

fn report_checks(report: &SuiteReport) {
    for c in &report.checks {
        let status = if c.passed() { "ok" } else { "FAILED" };
        eprintln!(
            "{}/{}: {} checked, {} failed ({status})",
            report.suite, c.name, c.checked, c.failed
        );
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Analyze { query } => {
            let q = read_query(&query)?;
            let report = analyze(&q);
            print_json(&AnalyzeOutput {
                query: q.to_string(),
                counting_exponent_lower_bound: report.star_size,
                boolean: q.head.is_empty(),
                report,
            })?;
        }
        Command::Count {
            query,
            database,
            engine,
        } => {
            let q = read_query(&query)?;
            let db = load_database(&database, &query_arities(&q)?)?;
            let c = count(&q, &db, engine)?;
            eprintln!("engine: {}", c.engine);
            println!("{}", c.value);
        }
        Command::ReduceDs {
            graph,
            k,
            k_prime,
            out_dir,
        } => {
            let text = fs::read_to_string(&graph).with_context(|| format!("reading {}", graph.display()))?;
            let g = Graph::parse(&text)?;
            let inst = ds_to_star_instance(&g, k, k_prime)?;
            inst.write(&out_dir)?;
            eprintln!("wrote {} tuples to {}", inst.relation().len(), out_dir.display());
            print_json(&manifest_summary(&inst.manifest(), &out_dir)?)?;
        }
        Command::ReduceEmbed {
            query,
            star_database,
            out_dir,
        } => {
            let q = read_query(&query)?;
            let source = load_database(&star_database, &BTreeMap::from([("R", 2)]))?;
            let inst = embed_star2(&q, &source)?;
            inst.write(&out_dir)?;
            eprintln!("wrote {} tuples to {}", inst.database.tuple_count(), out_dir.display());
            print_json(&manifest_summary(&inst.manifest(), &out_dir)?)?;
        }
        Command::Verify {
            suite,
            seed,
            size,
            inject_fault,
        } => {
            let report = verify::run(VerifyConfig {
                suite,
                seed,
                size,
                fault: inject_fault,
            });
            report_checks(&report);
            print_json(&report)?;
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Selfcheck { seed } => {
            let suites: Vec<SuiteReport> = [Suite::Structure, Suite::Engines, Suite::Reductions]
                .into_iter()
                .map(|s| verify::run(VerifyConfig::new(s, seed)))
                .inspect(report_checks)
                .collect();
            let passed = suites.iter().all(|s| s.passed);
            print_json(&SelfcheckOutput { seed, passed, suites })?;
            if !passed {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let structural = e
                .chain()
                .find_map(|c| c.downcast_ref::<cqcount::Error>())
                .is_some_and(cqcount::Error::is_structural);
            ExitCode::from(if structural { 3 } else { 2 })
        }
    }
}
