//! Experiment runner: graph acquisition, warmup and measured iterations on
//! fresh DSUs, and CSV rows.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use log::{debug, info};
use serde::Serialize;

use crate::concurrent::ConcurrentDsu;
use crate::config::{DsuConfig, Variant};
use crate::error::HarnessError;
use crate::graph::{gen_erdos_renyi, gen_high_contention, load_path, Graph};
use crate::verify::{oracle_components, oracle_mst_weight};
use crate::workloads::{default_threshold, run_boruvka, run_cc};

/// Column order of every CSV file written by [`write_csv`].
pub const CSV_HEADER: &str = "benchmark,graph,n,m,variant,compaction,sync,ipc,er,threads,iter,millis,failed_cas,find_steps,ipc_hits,er_terms,components,mst_weight";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Benchmark {
    Cc,
    Mst,
}

impl Benchmark {
    pub fn as_str(self) -> &'static str {
        match self {
            Benchmark::Cc => "cc",
            Benchmark::Mst => "mst",
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Benchmark {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cc" => Ok(Benchmark::Cc),
            "mst" => Ok(Benchmark::Mst),
            other => Err(HarnessError::Invalid(format!(
                "unknown benchmark `{other}` (expected cc or mst)"
            ))),
        }
    }
}

/// A graph file or a generator spec `er:n:m:seed` / `hc:n:m:seed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    File(PathBuf),
    ErdosRenyi { n: usize, m: usize, seed: u64 },
    HighContention { n: usize, m: usize, seed: u64 },
}

impl GraphSource {
    /// Generated graphs get weights only when `weighted` is set; files keep
    /// whatever they contain.
    pub fn load(&self, weighted: bool) -> Result<Graph, HarnessError> {
        let g = match *self {
            GraphSource::File(ref p) => load_path(p)?,
            GraphSource::ErdosRenyi { n, m, seed } => gen_erdos_renyi(n, m, seed, weighted)?,
            GraphSource::HighContention { n, m, seed } => {
                gen_high_contention(n, m, seed, weighted)?
            }
        };
        Ok(g)
    }
}

fn parse_count(s: &str) -> Option<u64> {
    // Accept scientific shorthand such as 1e6 as well as plain integers.
    if let Ok(v) = s.parse::<u64>() {
        return Some(v);
    }
    let (mant, exp) = s.split_once(['e', 'E'])?;
    let mant: u64 = mant.parse().ok()?;
    let exp: u32 = exp.parse().ok()?;
    mant.checked_mul(10u64.checked_pow(exp)?)
}

impl FromStr for GraphSource {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [kind @ ("er" | "hc"), n, m, seed] => {
                let bad = || {
                    HarnessError::Invalid(format!(
                        "malformed generator spec `{s}` (expected {kind}:n:m:seed)"
                    ))
                };
                let n = parse_count(n).ok_or_else(bad)? as usize;
                let m = parse_count(m).ok_or_else(bad)? as usize;
                let seed = seed.parse().map_err(|_| bad())?;
                Ok(if *kind == "er" {
                    GraphSource::ErdosRenyi { n, m, seed }
                } else {
                    GraphSource::HighContention { n, m, seed }
                })
            }
            [kind @ ("er" | "hc"), ..] => Err(HarnessError::Invalid(format!(
                "malformed generator spec `{s}` (expected {kind}:n:m:seed)"
            ))),
            _ => Ok(GraphSource::File(PathBuf::from(s))),
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::File(p) => write!(f, "{}", p.display()),
            GraphSource::ErdosRenyi { n, m, seed } => write!(f, "er:{n}:{m}:{seed}"),
            GraphSource::HighContention { n, m, seed } => write!(f, "hc:{n}:{m}:{seed}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub benchmark: Benchmark,
    pub graph: GraphSource,
    pub config: DsuConfig,
    /// Requests early recognition; only valid with that variant.
    pub er: bool,
    pub threads: Vec<usize>,
    pub warmup_iters: usize,
    pub measured_iters: usize,
    /// Seeds the op stream shuffle.
    pub seed: u64,
    pub sameset_prob: f64,
    /// Component count at which Boruvka hands over to the sequential
    /// finish; `None` uses [`default_threshold`].
    pub mst_threshold: Option<usize>,
    /// Recount components (or recompute the MST weight) with an oracle after
    /// every measured run.
    pub verify: bool,
}

impl ExperimentSpec {
    pub fn new(benchmark: Benchmark, graph: GraphSource, config: DsuConfig) -> Self {
        ExperimentSpec {
            benchmark,
            graph,
            config,
            er: config.variant == Variant::EarlyRecognition,
            threads: vec![1],
            warmup_iters: 2,
            measured_iters: 5,
            seed: 0,
            sameset_prob: 0.5,
            mst_threshold: None,
            verify: false,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.config.validate()?;
        if self.er && self.config.variant != Variant::EarlyRecognition {
            return Err(HarnessError::Invalid(format!(
                "early recognition requires variant early-recognition, got {}",
                self.config.variant
            )));
        }
        if self.threads.is_empty() || self.threads.contains(&0) {
            return Err(HarnessError::Invalid(
                "thread counts must be non-empty and positive".into(),
            ));
        }
        if self.measured_iters == 0 {
            return Err(HarnessError::Invalid(
                "need at least one measured iteration".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.sameset_prob) {
            return Err(HarnessError::Invalid(format!(
                "same-set probability {} outside [0, 1]",
                self.sameset_prob
            )));
        }
        Ok(())
    }

    /// Loads the graph the spec refers to.
    pub fn load_graph(&self) -> Result<Graph, HarnessError> {
        let g = self.graph.load(self.benchmark == Benchmark::Mst)?;
        info!("loaded {} (n={}, m={})", g.name(), g.n(), g.m());
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub benchmark: &'static str,
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub variant: String,
    pub compaction: &'static str,
    pub sync: &'static str,
    pub ipc: bool,
    pub er: bool,
    pub threads: usize,
    pub iter: usize,
    pub millis: f64,
    pub failed_cas: u64,
    pub find_steps: u64,
    pub ipc_hits: u64,
    pub er_terms: u64,
    pub components: Option<usize>,
    pub mst_weight: Option<u64>,
}

fn variant_label(c: &DsuConfig) -> String {
    match c.variant {
        Variant::CoarseLock => format!("{}/{}", c.variant, c.lock_linking),
        v => v.to_string(),
    }
}

fn count_components(d: &ConcurrentDsu) -> usize {
    (0..d.len()).filter(|&x| d.find(x).index == x).count()
}

/// Validates `spec`, loads its graph and runs it; see [`run_experiment_on`].
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<CsvRow>, HarnessError> {
    spec.validate()?;
    let g = spec.load_graph()?;
    run_experiment_on(spec, &g)
}

/// For each thread count: `warmup_iters` unrecorded runs, then one row per
/// measured run. Every run uses a fresh DSU whose construction is not timed.
pub fn run_experiment_on(spec: &ExperimentSpec, g: &Graph) -> Result<Vec<CsvRow>, HarnessError> {
    spec.validate()?;
    if spec.benchmark == Benchmark::Mst && !g.is_weighted() {
        return Err(crate::error::GraphError::Unweighted.into());
    }
    let expected = if spec.verify {
        Some(match spec.benchmark {
            Benchmark::Cc => oracle_components(g).0 as u64,
            Benchmark::Mst => oracle_mst_weight(g)?,
        })
    } else {
        None
    };
    let threshold = spec.mst_threshold;
    let c = spec.config;
    let mut rows = Vec::with_capacity(spec.threads.len() * spec.measured_iters);
    for &threads in &spec.threads {
        for it in 0..spec.warmup_iters + spec.measured_iters {
            let d = ConcurrentDsu::new(g.n(), c)?;
            let (stats, components, mst_weight) = match spec.benchmark {
                Benchmark::Cc => {
                    let stats = run_cc(g, &d, threads, spec.sameset_prob, spec.seed)?;
                    (stats, Some(count_components(&d)), None)
                }
                Benchmark::Mst => {
                    let r = run_boruvka(g, &d, threads, |n| {
                        threshold.unwrap_or_else(|| default_threshold(n))
                    })?;
                    (r.stats, None, Some(r.weight))
                }
            };
            let Some(iter) = it.checked_sub(spec.warmup_iters) else {
                debug!(
                    "warmup {it} with {threads} threads: {:.3} ms",
                    stats.millis()
                );
                continue;
            };
            if let Some(want) = expected {
                // Same-set queries skip their unions, so only a pure-union
                // stream can be compared with the graph's components.
                let got = match spec.benchmark {
                    Benchmark::Cc if spec.sameset_prob == 0.0 => components.map(|x| x as u64),
                    Benchmark::Cc => None,
                    Benchmark::Mst => mst_weight,
                };
                if let Some(got) = got {
                    if got != want {
                        return Err(HarnessError::Verification(format!(
                            "{} on {} with {c} and {threads} threads: got {got}, oracle {want}",
                            spec.benchmark,
                            g.name()
                        )));
                    }
                }
            }
            info!(
                "{} {} {c} threads={threads} iter={iter}: {:.3} ms",
                spec.benchmark,
                g.name(),
                stats.millis()
            );
            rows.push(CsvRow {
                benchmark: spec.benchmark.as_str(),
                graph: g.name().to_string(),
                n: g.n(),
                m: g.m(),
                variant: variant_label(&c),
                compaction: c.compaction.as_str(),
                sync: c.sync.as_str(),
                ipc: c.ipc,
                er: c.variant == Variant::EarlyRecognition,
                threads,
                iter,
                millis: stats.millis(),
                failed_cas: stats.counters.failed_cas,
                find_steps: stats.counters.find_steps,
                ipc_hits: stats.counters.ipc_hits,
                er_terms: stats.counters.er_terminations,
                components,
                mst_weight,
            });
        }
    }
    Ok(rows)
}

/// One spec per valid configuration, each run once without warmup.
pub fn matrix_specs(base: &ExperimentSpec) -> Vec<ExperimentSpec> {
    DsuConfig::all_valid()
        .into_iter()
        .map(|config| ExperimentSpec {
            config: config.with_seed(base.config.seed),
            er: config.variant == Variant::EarlyRecognition,
            warmup_iters: 0,
            measured_iters: 1,
            ..base.clone()
        })
        .collect()
}

/// Writes the header and `rows` to `out`.
pub fn write_csv<W: Write>(rows: &[CsvRow], out: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Compaction;

    fn small_cc(variant: Variant) -> ExperimentSpec {
        let mut s = ExperimentSpec::new(
            Benchmark::Cc,
            "er:2000:4000:1".parse().unwrap(),
            DsuConfig::new(variant),
        );
        s.threads = vec![1, 2];
        s.warmup_iters = 1;
        s.measured_iters = 3;
        s
    }

    #[test]
    fn parses_graph_sources() {
        assert_eq!(
            "er:1e6:1e7:3".parse::<GraphSource>().unwrap(),
            GraphSource::ErdosRenyi {
                n: 1_000_000,
                m: 10_000_000,
                seed: 3
            }
        );
        assert_eq!(
            "hc:100:200:0".parse::<GraphSource>().unwrap(),
            GraphSource::HighContention {
                n: 100,
                m: 200,
                seed: 0
            }
        );
        assert_eq!(
            "roads/usa.gr.gz".parse::<GraphSource>().unwrap(),
            GraphSource::File("roads/usa.gr.gz".into())
        );
        assert!("er:10:x:1".parse::<GraphSource>().is_err());
        assert!("er:10:20".parse::<GraphSource>().is_err());
        assert_eq!(
            "er:10:20:5".parse::<GraphSource>().unwrap().to_string(),
            "er:10:20:5"
        );
    }

    #[test]
    fn one_row_per_measured_run() {
        let rows = run_experiment(&small_cc(Variant::CasRank)).unwrap();
        assert_eq!(rows.len(), 6);
        let keys: Vec<(usize, usize)> = rows.iter().map(|r| (r.threads, r.iter)).collect();
        assert_eq!(keys, vec![(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]);
        assert!(rows
            .iter()
            .all(|r| r.mst_weight.is_none() && r.components.is_some()));
    }

    #[test]
    fn er_flag_needs_early_recognition() {
        let mut s = small_cc(Variant::CasRank);
        s.er = true;
        assert!(matches!(run_experiment(&s), Err(HarnessError::Invalid(_))));
        let mut s = small_cc(Variant::EarlyRecognition);
        s.config.compaction = Compaction::Compression;
        assert!(matches!(run_experiment(&s), Err(HarnessError::Dsu(_))));
    }

    #[test]
    fn components_column_matches_bfs() {
        let mut s = ExperimentSpec::new(
            Benchmark::Cc,
            "er:10000:100000:7".parse().unwrap(),
            DsuConfig::new(Variant::CasPseudoRandom),
        );
        s.sameset_prob = 0.0;
        s.threads = vec![1, 4];
        s.warmup_iters = 0;
        s.measured_iters = 1;
        s.verify = true;
        let g = s.load_graph().unwrap();
        let want = oracle_components(&g).0;
        let rows = run_experiment_on(&s, &g).unwrap();
        assert!(rows.iter().all(|r| r.components == Some(want)));
    }

    #[test]
    fn mst_rows_carry_weight() {
        let mut s = ExperimentSpec::new(
            Benchmark::Mst,
            "er:3000:12000:2".parse().unwrap(),
            DsuConfig::new(Variant::Rem),
        );
        s.threads = vec![2];
        s.warmup_iters = 0;
        s.measured_iters = 2;
        s.mst_threshold = Some(1);
        s.verify = true;
        let rows = run_experiment(&s).unwrap();
        let g = s.load_graph().unwrap();
        assert!(rows
            .iter()
            .all(|r| r.mst_weight == Some(oracle_mst_weight(&g).unwrap())));
    }

    #[test]
    fn csv_layout() {
        let mut s = small_cc(Variant::CoarseLock);
        s.threads = vec![1];
        s.measured_iters = 1;
        let rows = run_experiment(&s).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 18);
        assert_eq!(&fields[..2], &["cc", "er:2000:4000:1"]);
        assert_eq!(fields[4], "coarse-lock/rank");
        assert_eq!(fields[17], "");
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn matrix_covers_every_valid_config_once() {
        let base = small_cc(Variant::CasRank);
        let specs = matrix_specs(&base);
        assert_eq!(specs.len(), DsuConfig::all_valid().len());
        assert!(specs
            .iter()
            .all(|s| s.validate().is_ok() && s.measured_iters == 1));
    }
}
