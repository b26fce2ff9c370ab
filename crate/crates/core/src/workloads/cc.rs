//! Connected-components benchmark: edges are shuffled, split evenly between
//! threads and each becomes either a union or a same-set query.

use std::sync::Barrier;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Span;
use crate::concurrent::ConcurrentDsu;
use crate::error::GraphError;
use crate::graph::Graph;
use crate::stats::{Counters, RunStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Union,
    SameSet,
}

const SAME_SET_BIT: u32 = 1 << 31;

/// Edge index with the operation kind in the top bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Op(u32);

impl Op {
    fn new(edge: u32, kind: OpKind) -> Self {
        match kind {
            OpKind::Union => Op(edge),
            OpKind::SameSet => Op(edge | SAME_SET_BIT),
        }
    }

    #[inline]
    pub fn edge(self) -> usize {
        (self.0 & !SAME_SET_BIT) as usize
    }

    #[inline]
    pub fn kind(self) -> OpKind {
        if self.0 & SAME_SET_BIT != 0 {
            OpKind::SameSet
        } else {
            OpKind::Union
        }
    }
}

/// Per-thread operation scripts.
#[derive(Debug, Clone, PartialEq)]
pub struct OpStream {
    pub chunks: Vec<Vec<Op>>,
    pub sameset_prob: f64,
    pub seed: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Kind of the operation issued for `edge`; depends only on `(edge, seed)`.
pub fn op_kind(edge: usize, seed: u64, sameset_prob: f64) -> OpKind {
    let h = splitmix64(edge as u64 ^ splitmix64(seed));
    let unit = (h >> 11) as f64 / (1u64 << 53) as f64;
    if unit < sameset_prob {
        OpKind::SameSet
    } else {
        OpKind::Union
    }
}

impl OpStream {
    pub fn build(
        g: &Graph,
        threads: usize,
        sameset_prob: f64,
        seed: u64,
    ) -> Result<Self, GraphError> {
        assert!(threads >= 1, "need at least one thread");
        if g.m() as u64 >= SAME_SET_BIT as u64 {
            return Err(GraphError::TooManyEdges(g.m()));
        }
        let mut order: Vec<u32> = (0..g.m() as u32).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let per = order.len().div_ceil(threads).max(1);
        let mut chunks: Vec<Vec<Op>> = order
            .chunks(per)
            .map(|c| {
                c.iter()
                    .map(|&e| Op::new(e, op_kind(e as usize, seed, sameset_prob)))
                    .collect()
            })
            .collect();
        chunks.resize_with(threads, Vec::new);
        Ok(OpStream {
            chunks,
            sameset_prob,
            seed,
        })
    }

    pub fn threads(&self) -> usize {
        self.chunks.len()
    }

    pub fn len(&self) -> usize {
        self.chunks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Builds the op stream and runs it; see [`run_ops`].
pub fn run_cc(
    g: &Graph,
    d: &ConcurrentDsu,
    threads: usize,
    sameset_prob: f64,
    seed: u64,
) -> Result<RunStats, GraphError> {
    let ops = OpStream::build(g, threads, sameset_prob, seed)?;
    Ok(run_ops(g, d, &ops))
}

/// Runs one thread per chunk of `ops` against `d`. The reported time spans
/// from the first worker starting its ops to the last one finishing.
pub fn run_ops(g: &Graph, d: &ConcurrentDsu, ops: &OpStream) -> RunStats {
    assert_eq!(d.len(), g.n(), "DSU size must match the graph");
    let start = Barrier::new(ops.threads() + 1);
    std::thread::scope(|s| {
        let workers: Vec<_> = ops
            .chunks
            .iter()
            .map(|chunk| {
                let start = &start;
                s.spawn(move || {
                    let mut session = d.session();
                    start.wait();
                    let t0 = Instant::now();
                    for &op in chunk {
                        let (u, v) = g.edge(op.edge());
                        match op.kind() {
                            OpKind::Union => {
                                session.union(u, v);
                            }
                            OpKind::SameSet => {
                                std::hint::black_box(session.same_set(u, v));
                            }
                        }
                    }
                    (session.counters(), t0, Instant::now())
                })
            })
            .collect();
        start.wait();
        let mut span = Span::default();
        let mut counters = Counters::default();
        for w in workers {
            let (c, t0, t1) = w.join().expect("cc worker panicked");
            counters.merge(&c);
            span.cover(t0, t1);
        }
        RunStats {
            elapsed: span.elapsed(),
            counters,
        }
    })
}
