use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use concurrent_dsu::config::{Compaction, CompactionSync, DsuConfig, Linking, Variant};
use concurrent_dsu::graph::write_path;
use concurrent_dsu::harness::{
    matrix_specs, run_experiment_on, write_csv, Benchmark, CsvRow, ExperimentSpec, GraphSource,
};
use concurrent_dsu::verify::{run_suites, Scale};
use log::info;

/// Benchmarks and checks for the concurrent union-find variants.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph to an edge-list file (gzip if it ends in .gz).
    Gen {
        /// Generator spec: er:n:m:seed or hc:n:m:seed.
        #[arg(long)]
        graph: String,
        #[arg(long)]
        weighted: bool,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Connected components benchmark.
    Cc(RunArgs),
    /// Parallel Boruvka MST benchmark.
    Mst(RunArgs),
    /// Run every valid DSU configuration once on one graph.
    Matrix {
        #[arg(long, default_value = "cc")]
        benchmark: Benchmark,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the correctness suites and print one PASS/FAIL line each.
    Verify {
        /// Acceptance-scale parameters instead of the quick ones.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Graph file (edge list, or DIMACS .gr; optionally .gz) or er:n:m:seed / hc:n:m:seed.
    #[arg(long)]
    graph: String,
    /// Comma-separated thread counts.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    threads: Vec<usize>,
    /// Seed for the op stream and the DSU's random priorities.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Probability that a CC edge becomes a same-set query instead of a union.
    #[arg(long, default_value_t = 0.5)]
    sameset_prob: f64,
    /// Component count at which Boruvka finishes sequentially (default max(1024, n/64)).
    #[arg(long)]
    threshold: Option<usize>,
    /// Check every measured run against an oracle; exit nonzero on mismatch.
    #[arg(long)]
    verify: bool,
    /// CSV output path; standard output when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value = "cas-rank")]
    variant: Variant,
    #[arg(long, default_value = "splitting")]
    compaction: Compaction,
    #[arg(long, default_value = "cas")]
    sync: CompactionSync,
    /// Immediate parent check.
    #[arg(long)]
    ipc: bool,
    /// Early recognition; requires --variant early-recognition.
    #[arg(long)]
    er: bool,
    /// Linking of the sequential DSU behind the coarse lock.
    #[arg(long, default_value = "rank")]
    lock_linking: Linking,
    #[arg(long, default_value_t = 2)]
    warmup: usize,
    #[arg(long, default_value_t = 5)]
    iters: usize,
}

fn spec_from(
    benchmark: Benchmark,
    common: &CommonArgs,
    config: DsuConfig,
) -> Result<ExperimentSpec> {
    let graph: GraphSource = common.graph.parse()?;
    let mut spec = ExperimentSpec::new(benchmark, graph, config.with_seed(common.seed));
    spec.threads = common.threads.clone();
    spec.seed = common.seed;
    spec.sameset_prob = common.sameset_prob;
    spec.mst_threshold = common.threshold;
    spec.verify = common.verify;
    Ok(spec)
}

fn emit(rows: &[CsvRow], path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            write_csv(rows, BufWriter::new(f))?;
            info!("wrote {} rows to {}", rows.len(), p.display());
        }
        None => write_csv(rows, io::stdout().lock())?,
    }
    Ok(())
}

fn run_benchmark(benchmark: Benchmark, a: &RunArgs) -> Result<()> {
    let config = DsuConfig::new(a.variant)
        .with_compaction(a.compaction)
        .with_sync(a.sync)
        .with_ipc(a.ipc)
        .with_lock_linking(a.lock_linking);
    let mut spec = spec_from(benchmark, &a.common, config)?;
    spec.er = a.er;
    spec.warmup_iters = a.warmup;
    spec.measured_iters = a.iters;
    spec.validate()?;
    let g = spec.load_graph()?;
    let rows = run_experiment_on(&spec, &g)?;
    emit(&rows, a.common.csv.as_ref())
}

fn run_matrix(benchmark: Benchmark, common: &CommonArgs) -> Result<()> {
    let base = spec_from(benchmark, common, DsuConfig::new(Variant::CasRank))?;
    let g = base.load_graph()?;
    let mut rows = Vec::new();
    for spec in matrix_specs(&base) {
        rows.extend(run_experiment_on(&spec, &g)?);
    }
    emit(&rows, common.csv.as_ref())
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen {
            graph,
            weighted,
            out,
        } => {
            let source: GraphSource = graph.parse()?;
            if let GraphSource::File(p) = source {
                bail!(
                    "`{}` is not a generator spec (expected er:n:m:seed or hc:n:m:seed)",
                    p.display()
                );
            }
            let g = source.load(weighted)?;
            write_path(&g, &out).with_context(|| format!("writing {}", out.display()))?;
            info!(
                "wrote {} (n={}, m={}) to {}",
                g.name(),
                g.n(),
                g.m(),
                out.display()
            );
        }
        Command::Cc(a) => run_benchmark(Benchmark::Cc, &a)?,
        Command::Mst(a) => run_benchmark(Benchmark::Mst, &a)?,
        Command::Matrix { benchmark, common } => run_matrix(benchmark, &common)?,
        Command::Verify { full } => {
            let scale = if full { Scale::Full } else { Scale::Quick };
            let results = run_suites(scale);
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            println!("SUMMARY {} passed, {failed} failed", results.len() - failed);
            return Ok(failed == 0);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
