//! Self-contained correctness suites, each returning a one-line verdict.
//! The `verify` subcommand runs them at [`Scale::Quick`] or [`Scale::Full`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    canonical_labels, oracle_components, oracle_mst_weight, run_stress, OraclePartition, StressPlan,
};
use crate::concurrent::ConcurrentDsu;
use crate::config::{Compaction, DsuConfig, Linking, SeqConfig};
use crate::graph::{gen_erdos_renyi, Graph};
use crate::priority::{coprime_prime_from, PriorityFn};
use crate::seq::SeqDsu;
use crate::slot::{PackedSlot, SlotView, PAYLOAD_MASK};
use crate::workloads::{run_boruvka, run_cc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} {}", self.name, self.detail)
    }
}

type Check = Result<String, String>;

fn result(name: &'static str, check: Check) -> SuiteResult {
    match check {
        Ok(detail) => SuiteResult {
            name,
            passed: true,
            detail,
        },
        Err(detail) => SuiteResult {
            name,
            passed: false,
            detail,
        },
    }
}

/// Random union/same-set sequences on every sequential combination,
/// compared answer by answer and by final partition with the oracle.
pub fn check_seq_oracle(sequences: usize, max_n: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ops_total = 0usize;
    for s in 0..sequences {
        let n = rng.gen_range(1..=max_n);
        let len = rng.gen_range(0..=3 * n);
        let ops: Vec<(bool, usize, usize)> = (0..len)
            .map(|_| (rng.gen_bool(0.6), rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        let dsu_seed = rng.gen();
        ops_total += len;
        for &linking in Linking::ALL {
            for &compaction in Compaction::ALL {
                let cfg = SeqConfig::new(linking, compaction).with_seed(dsu_seed);
                let mut d = SeqDsu::new(n, cfg).map_err(|e| e.to_string())?;
                let mut oracle = OraclePartition::new(n);
                for (i, &(is_union, a, b)) in ops.iter().enumerate() {
                    let (got, want) = if is_union {
                        (d.union(a, b), oracle.union(a, b))
                    } else {
                        (d.same_set(a, b), oracle.same(a, b))
                    };
                    if got != want {
                        return Err(format!(
                            "sequence {s} ({linking}/{compaction}, n={n}): op {i} on ({a},{b}) returned {got}"
                        ));
                    }
                }
                if canonical_labels(n, |x| d.find(x)) != oracle.labels() {
                    return Err(format!(
                        "sequence {s} ({linking}/{compaction}, n={n}): final partition differs"
                    ));
                }
            }
        }
    }
    Ok(format!(
        "{} combinations x {sequences} sequences ({ops_total} ops per combination)",
        Linking::ALL.len() * Compaction::ALL.len()
    ))
}

/// Packed-slot round trip on `samples` random payloads plus boundary values,
/// and full enumeration of the priority map for every `n <= max_n`.
pub fn check_packing(samples: usize, max_n: u64, pairs: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edge_values = [0, 1, 2, PAYLOAD_MASK - 1, PAYLOAD_MASK];
    let payloads = edge_values
        .into_iter()
        .chain((0..samples).map(|_| rng.gen::<u64>() & PAYLOAD_MASK));
    let mut checked = 0usize;
    for p in payloads {
        let r = PackedSlot::root(p);
        if !r.is_root() || r.priority() != Some(p) || r.view() != (SlotView::Root { priority: p }) {
            return Err(format!("root payload {p:#x} does not round-trip"));
        }
        if PackedSlot::from_raw(r.raw()) != r {
            return Err(format!("raw word {:#x} does not round-trip", r.raw()));
        }
        if p <= usize::MAX as u64 {
            let c = PackedSlot::parent(p as usize);
            if c.is_root() || c.parent_index() != Some(p as usize) || c.raw() != p {
                return Err(format!("parent payload {p:#x} does not round-trip"));
            }
        }
        checked += 1;
    }
    let mut seen = Vec::new();
    for n in 1..=max_n {
        for _ in 0..pairs {
            let shift = rng.gen::<u64>();
            let prime = coprime_prime_from(rng.gen_range(2..u64::MAX / 2), n);
            let f = PriorityFn::new(n, shift, prime).map_err(|e| e.to_string())?;
            seen.clear();
            seen.resize(n as usize, false);
            for x in 0..n {
                let y = f.apply(x);
                if y >= n || std::mem::replace(&mut seen[y as usize], true) {
                    return Err(format!(
                        "priority map n={n} shift={shift} prime={prime} is not a bijection"
                    ));
                }
            }
        }
    }
    Ok(format!(
        "{checked} slot payloads; priority maps for n <= {max_n} x {pairs} pairs"
    ))
}

/// The chain 3 -> 2 -> 1 -> 0: one find from 3 under each compaction.
pub fn check_chain_fixtures() -> Check {
    let expected = [
        (Compaction::Halving, [None, Some(0), Some(1), Some(1)]),
        (Compaction::Splitting, [None, Some(0), Some(0), Some(1)]),
        (Compaction::Compression, [None, Some(0), Some(0), Some(0)]),
        (Compaction::None, [None, Some(0), Some(1), Some(2)]),
    ];
    for (compaction, want) in expected {
        let slots = vec![
            PackedSlot::root(0),
            PackedSlot::parent(0),
            PackedSlot::parent(1),
            PackedSlot::parent(2),
        ];
        let mut d = SeqDsu::from_slots(slots, SeqConfig::new(Linking::Rank, compaction))
            .map_err(|e| e.to_string())?;
        let root = d.find(3);
        let got: Vec<Option<usize>> = d.slots().iter().map(|s| s.parent_index()).collect();
        if root != 0 || got != want {
            return Err(format!(
                "{compaction}: root {root}, parents {got:?}, expected {want:?}"
            ));
        }
    }
    Ok("halving, splitting, compression, none".into())
}

#[derive(Debug, Clone)]
pub struct ConcurrentCheck {
    pub configs: Vec<DsuConfig>,
    pub threads: Vec<usize>,
    pub n: usize,
    pub unions: usize,
    pub queries: usize,
    pub seeds: u64,
    pub yield_one_in: u32,
}

/// Stress runs for every config, thread count and seed; each must match the
/// oracle partition and pass the quiescent audit.
pub fn check_concurrent(c: &ConcurrentCheck) -> Check {
    let mut runs = 0;
    for cfg in &c.configs {
        for &threads in &c.threads {
            for seed in 0..c.seeds {
                let plan = StressPlan {
                    n: c.n,
                    threads,
                    unions_per_thread: c.unions.div_ceil(threads),
                    queries_per_thread: c.queries.div_ceil(threads),
                    seed: seed.wrapping_mul(0x9E37_79B9) ^ threads as u64,
                    yield_one_in: c.yield_one_in,
                };
                let out =
                    run_stress(cfg.with_seed(seed), &plan).map_err(|e| format!("{cfg}: {e}"))?;
                if !out.is_ok() {
                    return Err(format!(
                        "{cfg} threads={threads} seed={seed}: {}",
                        out.summary()
                    ));
                }
                runs += 1;
            }
        }
    }
    Ok(format!(
        "{} configs, {runs} runs, n={}, {} unions each",
        c.configs.len(),
        c.n,
        c.unions
    ))
}

/// Connected components of one generated graph for every config, compared
/// with BFS.
pub fn check_cc_bfs(g: &Graph, configs: &[DsuConfig], threads: &[usize], seed: u64) -> Check {
    let (count, labels) = oracle_components(g);
    for cfg in configs {
        for &t in threads {
            let d = ConcurrentDsu::new(g.n(), *cfg).map_err(|e| e.to_string())?;
            run_cc(g, &d, t, 0.0, seed).map_err(|e| e.to_string())?;
            if canonical_labels(g.n(), |x| d.find(x).index) != labels {
                return Err(format!("{cfg} threads={t}: components differ from BFS"));
            }
        }
    }
    Ok(format!(
        "{}: {count} components, {} configs",
        g.name(),
        configs.len()
    ))
}

/// Boruvka on `graphs` seeded weighted graphs (n drawn up to `max_n`) for
/// each thread count, compared with Kruskal. A threshold of one component
/// keeps the parallel phases running to completion.
pub fn check_boruvka(graphs: usize, max_n: usize, threads: &[usize], seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..graphs {
        let n = rng.gen_range(2..=max_n);
        let m = rng.gen_range(n / 2..=4 * n);
        let g = gen_erdos_renyi(n, m, rng.gen(), true).map_err(|e| e.to_string())?;
        check_boruvka_graph(&g, threads, i as u64).map_err(|e| format!("graph {i}: {e}"))?;
    }
    Ok(format!("{graphs} graphs, threads {threads:?}"))
}

pub fn check_boruvka_graph(g: &Graph, threads: &[usize], seed: u64) -> Check {
    let want = oracle_mst_weight(g).map_err(|e| e.to_string())?;
    let (components, _) = oracle_components(g);
    let configs = DsuConfig::all_valid();
    for (k, &t) in threads.iter().enumerate() {
        let cfg = configs[(seed as usize + k) % configs.len()].with_seed(seed);
        let d = ConcurrentDsu::new(g.n(), cfg).map_err(|e| e.to_string())?;
        let r = run_boruvka(g, &d, t, |_| 1).map_err(|e| e.to_string())?;
        if r.weight != want || r.edges.len() != g.n() - components {
            return Err(format!(
                "{} ({cfg}, threads={t}): weight {} with {} edges, Kruskal {want} with {}",
                g.name(),
                r.weight,
                r.edges.len(),
                g.n() - components
            ));
        }
    }
    Ok(format!("{}: weight {want}", g.name()))
}

pub fn run_suites(scale: Scale) -> Vec<SuiteResult> {
    let full = scale == Scale::Full;
    let all = DsuConfig::all_valid();
    let concurrent = |yield_one_in, n, unions, seeds| ConcurrentCheck {
        configs: all.clone(),
        threads: vec![2, 4, 8],
        n,
        unions,
        queries: unions / 4,
        seeds,
        yield_one_in,
    };
    let mut out = vec![
        result(
            "packing",
            if full {
                check_packing(1 << 16, 4096, 50, 1)
            } else {
                check_packing(1 << 12, 256, 5, 1)
            },
        ),
        result("chain-fixtures", check_chain_fixtures()),
        result(
            "seq-oracle",
            if full {
                check_seq_oracle(10_000, 512, 2)
            } else {
                check_seq_oracle(200, 128, 2)
            },
        ),
    ];
    out.push(result(
        "concurrent-oracle",
        if full {
            check_concurrent(&concurrent(0, 10_000, 100_000, 20))
        } else {
            check_concurrent(&concurrent(0, 1000, 4000, 2))
        },
    ));
    out.push(result(
        "stress-audit",
        if full {
            check_concurrent(&concurrent(64, 10_000, 100_000, 20))
        } else {
            check_concurrent(&concurrent(8, 256, 1000, 2))
        },
    ));
    let cc_graph = if full {
        gen_erdos_renyi(100_000, 1_000_000, 3, false)
    } else {
        gen_erdos_renyi(10_000, 12_000, 3, false)
    };
    out.push(result(
        "cc-bfs",
        cc_graph
            .map_err(|e| e.to_string())
            .and_then(|g| check_cc_bfs(&g, &all, &[1, 4], 5)),
    ));
    out.push(result(
        "boruvka-kruskal",
        if full {
            check_boruvka(100, 10_000, &[1, 2, 4, 8], 6)
        } else {
            check_boruvka(10, 2000, &[1, 2, 4], 6)
        },
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_checks_pass() {
        check_chain_fixtures().unwrap();
        check_packing(256, 64, 2, 0).unwrap();
        check_seq_oracle(20, 64, 0).unwrap();
        check_boruvka(3, 300, &[1, 2], 0).unwrap();
    }

    #[test]
    fn suite_lines_are_machine_readable() {
        let r = result("x", Err("bad".into()));
        assert_eq!(r.to_string(), "FAIL x bad");
        let r = result("y", Ok("fine".into()));
        assert_eq!(r.to_string(), "PASS y fine");
    }
}
