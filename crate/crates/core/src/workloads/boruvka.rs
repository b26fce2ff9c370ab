//! Parallel Boruvka MST driven by a concurrent DSU.
//!
//! Each round has two phases separated by a barrier:
//!
//! 1. every thread scans its own surviving edges, drops the ones inside a
//!    component and offers the rest to the shortest-edge slot of both
//!    endpoint roots;
//! 2. every thread scans its own range of vertices; each non-empty slot
//!    belongs to a representative at the barrier, and its edge is united and
//!    added to the MST if that union actually linked two sets.
//!
//! Rounds continue while more than `threshold(n)` components remain; the
//! rest is finished sequentially (Kruskal over the surviving edges) outside
//! the timed region.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Barrier;
use std::time::Instant;

use super::Span;
use crate::concurrent::ConcurrentDsu;
use crate::error::GraphError;
use crate::graph::Graph;
use crate::stats::{Counters, RunStats};

/// Atomic `(weight, edge)` minimum. Packing puts the weight in the high half
/// so integer order equals lexicographic order.
#[derive(Debug)]
pub struct ShortestEdgeSlot(AtomicU64);

impl ShortestEdgeSlot {
    pub const EMPTY: u64 = u64::MAX;

    pub fn new() -> Self {
        ShortestEdgeSlot(AtomicU64::new(Self::EMPTY))
    }

    #[inline]
    pub fn pack(weight: u32, edge: u32) -> u64 {
        ((weight as u64) << 32) | edge as u64
    }

    #[inline]
    pub fn unpack(raw: u64) -> (u32, u32) {
        ((raw >> 32) as u32, raw as u32)
    }

    /// Installs the candidate if it is smaller than the current value.
    #[inline]
    pub fn update_if_shorter(&self, weight: u32, edge: u32) {
        let candidate = Self::pack(weight, edge);
        let mut current = self.0.load(Ordering::Relaxed);
        while candidate < current {
            match self.0.compare_exchange_weak(
                current,
                candidate,
                Ordering::AcqRel,
                Ordering::Relaxed,
            ) {
                Ok(_) => return,
                Err(seen) => current = seen,
            }
        }
    }

    pub fn get(&self) -> Option<(u32, u32)> {
        match self.0.load(Ordering::Acquire) {
            Self::EMPTY => None,
            raw => Some(Self::unpack(raw)),
        }
    }

    /// Returns the current value and resets the slot to empty.
    pub fn take(&self) -> Option<(u32, u32)> {
        match self.0.swap(Self::EMPTY, Ordering::AcqRel) {
            Self::EMPTY => None,
            raw => Some(Self::unpack(raw)),
        }
    }
}

impl Default for ShortestEdgeSlot {
    fn default() -> Self {
        Self::new()
    }
}

/// Live-component count below which the parallel rounds stop.
pub fn default_threshold(n: usize) -> usize {
    (n / 64).max(1024)
}

#[derive(Debug, Clone)]
pub struct MstResult {
    pub weight: u64,
    /// Indices into the graph's edge array.
    pub edges: Vec<usize>,
    /// Timing and counters of the parallel part only.
    pub stats: RunStats,
    pub parallel_rounds: usize,
    /// Edges added by the sequential completion.
    pub sequential_edges: usize,
}

pub fn run_boruvka<F>(
    g: &Graph,
    d: &ConcurrentDsu,
    threads: usize,
    threshold: F,
) -> Result<MstResult, GraphError>
where
    F: Fn(usize) -> usize,
{
    assert!(threads >= 1, "need at least one thread");
    assert_eq!(d.len(), g.n(), "DSU size must match the graph");
    let weights = g.weights().ok_or(GraphError::Unweighted)?;
    if g.m() as u64 >= u32::MAX as u64 {
        return Err(GraphError::TooManyEdges(g.m()));
    }
    let n = g.n();
    let stop_at = threshold(n);
    let slots: Vec<ShortestEdgeSlot> = (0..n).map(|_| ShortestEdgeSlot::new()).collect();
    let added = AtomicUsize::new(0);
    let rounds = AtomicUsize::new(0);
    let start = Barrier::new(threads + 1);
    let phase = Barrier::new(threads);

    let per = g.m().div_ceil(threads).max(1);
    let chunks: Vec<Vec<u32>> = (0..threads)
        .map(|t| {
            let lo = (t * per).min(g.m());
            let hi = ((t + 1) * per).min(g.m());
            (lo as u32..hi as u32).collect()
        })
        .collect();

    let (stats, mut mst, survivors) = std::thread::scope(|s| {
        let workers: Vec<_> = chunks
            .into_iter()
            .enumerate()
            .map(|(tid, mut mine)| {
                let (slots, added, rounds, start, phase) =
                    (&slots, &added, &rounds, &start, &phase);
                s.spawn(move || {
                    let mut session = d.session();
                    let mut mst_local = Vec::new();
                    let vlo = tid * n / threads;
                    let vhi = (tid + 1) * n / threads;
                    start.wait();
                    let t0 = Instant::now();
                    loop {
                        let before = added.load(Ordering::Acquire);
                        if n - before <= stop_at {
                            break;
                        }
                        mine.retain(|&e| {
                            let (u, v) = g.edge(e as usize);
                            if session.same_set(u, v) {
                                return false;
                            }
                            let w = weights[e as usize];
                            slots[session.find(u).index].update_if_shorter(w, e);
                            slots[session.find(v).index].update_if_shorter(w, e);
                            true
                        });
                        phase.wait();
                        let mut linked = 0;
                        for slot in &slots[vlo..vhi] {
                            if let Some((_, e)) = slot.take() {
                                let (u, v) = g.edge(e as usize);
                                if session.union(u, v) {
                                    mst_local.push(e as usize);
                                    linked += 1;
                                }
                            }
                        }
                        added.fetch_add(linked, Ordering::AcqRel);
                        if tid == 0 {
                            rounds.fetch_add(1, Ordering::Relaxed);
                        }
                        phase.wait();
                        if added.load(Ordering::Acquire) == before {
                            break;
                        }
                    }
                    (session.counters(), mst_local, mine, t0, Instant::now())
                })
            })
            .collect();
        start.wait();
        let mut span = Span::default();
        let mut counters = Counters::default();
        let mut mst = Vec::new();
        let mut survivors = Vec::new();
        for w in workers {
            let (c, m, rest, t0, t1) = w.join().expect("boruvka worker panicked");
            counters.merge(&c);
            mst.extend(m);
            survivors.extend(rest);
            span.cover(t0, t1);
        }
        let stats = RunStats {
            elapsed: span.elapsed(),
            counters,
        };
        (stats, mst, survivors)
    });

    // Sequential completion.
    let mut survivors = survivors;
    survivors.sort_unstable_by_key(|&e| ShortestEdgeSlot::pack(weights[e as usize], e));
    let mut session = d.session();
    let parallel_edges = mst.len();
    for e in survivors {
        let (u, v) = g.edge(e as usize);
        if session.union(u, v) {
            mst.push(e as usize);
        }
    }
    let sequential_edges = mst.len() - parallel_edges;
    let weight = mst.iter().map(|&e| weights[e] as u64).sum();
    Ok(MstResult {
        weight,
        edges: mst,
        stats,
        parallel_rounds: rounds.load(Ordering::Relaxed),
        sequential_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{DsuConfig, Variant};

    #[test]
    fn packing_orders_lexicographically() {
        let a = ShortestEdgeSlot::pack(5, 7);
        let b = ShortestEdgeSlot::pack(5, 8);
        let c = ShortestEdgeSlot::pack(6, 0);
        assert!(a < b && b < c);
        assert_eq!(ShortestEdgeSlot::unpack(a), (5, 7));
        assert!(c < ShortestEdgeSlot::EMPTY);
    }

    #[test]
    fn slot_updates() {
        let s = ShortestEdgeSlot::new();
        assert_eq!(s.get(), None);
        s.update_if_shorter(5, 7);
        assert_eq!(s.get(), Some((5, 7)));
        s.update_if_shorter(9, 2);
        assert_eq!(s.get(), Some((5, 7)));
        s.update_if_shorter(5, 3);
        assert_eq!(s.take(), Some((5, 3)));
        assert_eq!(s.get(), None);
    }

    #[test]
    fn slot_race_keeps_minimum() {
        for flip in [false, true] {
            for _ in 0..200 {
                let s = ShortestEdgeSlot::new();
                let go = Barrier::new(2);
                let (first, second) = if flip {
                    ((3, 1), (5, 7))
                } else {
                    ((5, 7), (3, 1))
                };
                std::thread::scope(|sc| {
                    for (w, e) in [first, second] {
                        let (s, go) = (&s, &go);
                        sc.spawn(move || {
                            go.wait();
                            s.update_if_shorter(w, e);
                        });
                    }
                });
                assert_eq!(s.get(), Some((3, 1)));
            }
        }
    }

    #[test]
    fn triangle_and_single_edge() {
        let tri = Graph::new("tri", 3, vec![(0, 1), (1, 2), (0, 2)], Some(vec![1, 2, 3])).unwrap();
        for threads in [1, 2, 4] {
            let d = ConcurrentDsu::new(3, DsuConfig::new(Variant::CasRank)).unwrap();
            let r = run_boruvka(&tri, &d, threads, |_| 1).unwrap();
            assert_eq!(r.weight, 3);
            let mut e = r.edges.clone();
            e.sort_unstable();
            assert_eq!(e, vec![0, 1]);
        }
        let one = Graph::new("one", 2, vec![(1, 0)], Some(vec![42])).unwrap();
        let d = ConcurrentDsu::new(2, DsuConfig::new(Variant::Rem)).unwrap();
        let r = run_boruvka(&one, &d, 2, |_| 1).unwrap();
        assert_eq!((r.weight, r.edges.as_slice()), (42, &[0][..]));
    }

    #[test]
    fn equal_weights_do_not_form_cycles() {
        // 4-cycle with identical weights: exactly 3 edges must be chosen.
        let g = Graph::new(
            "sq",
            4,
            vec![(0, 1), (1, 2), (2, 3), (3, 0)],
            Some(vec![1, 1, 1, 1]),
        )
        .unwrap();
        for threads in [1, 2, 4] {
            let d = ConcurrentDsu::new(4, DsuConfig::new(Variant::CasPseudoRandom)).unwrap();
            let r = run_boruvka(&g, &d, threads, |_| 1).unwrap();
            assert_eq!(r.edges.len(), 3);
            assert_eq!(r.weight, 3);
        }
    }

    #[test]
    fn threshold_hands_off_to_sequential() {
        let g = crate::graph::gen_erdos_renyi(500, 3000, 4, true).unwrap();
        let d = ConcurrentDsu::new(500, DsuConfig::new(Variant::CasRank)).unwrap();
        let all_seq = run_boruvka(&g, &d, 2, |n| n).unwrap();
        assert_eq!(all_seq.parallel_rounds, 0);
        let d = ConcurrentDsu::new(500, DsuConfig::new(Variant::CasRank)).unwrap();
        let all_par = run_boruvka(&g, &d, 2, |_| 1).unwrap();
        assert!(all_par.parallel_rounds > 0);
        assert_eq!(all_par.weight, all_seq.weight);
    }

    #[test]
    fn rejects_unweighted() {
        let g = Graph::new("u", 2, vec![(0, 1)], None).unwrap();
        let d = ConcurrentDsu::new(2, DsuConfig::new(Variant::CasRank)).unwrap();
        assert!(matches!(
            run_boruvka(&g, &d, 1, default_threshold),
            Err(GraphError::Unweighted)
        ));
    }
}
