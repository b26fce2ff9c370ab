//! Oracles and auditors used to check every DSU variant and workload.
//!
//! The oracles share no code with the DSU implementations: partitions come
//! from a merge-lists structure, components from BFS, and MST weights from
//! Kruskal over that structure.

mod audit;
mod stress;
pub mod suites;

use std::collections::VecDeque;

use crate::error::GraphError;
use crate::graph::Graph;

pub use audit::{audit_snapshot, quiescent_audit, AuditReport, Violation};
pub use stress::{run_stress, stress_script, ScriptOp, StressOutcome, StressPlan};
pub use suites::{run_suites, Scale, SuiteResult};

/// Naive DSU: every set is an explicit member list and each element stores
/// the id of its list. Merging moves the shorter list into the longer one.
#[derive(Debug, Clone)]
pub struct OraclePartition {
    set_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    sets: usize,
}

impl OraclePartition {
    pub fn new(n: usize) -> Self {
        OraclePartition {
            set_of: (0..n).collect(),
            members: (0..n).map(|x| vec![x]).collect(),
            sets: n,
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut p = Self::new(n);
        for (a, b) in pairs {
            p.union(a, b);
        }
        p
    }

    pub fn len(&self) -> usize {
        self.set_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set_of.is_empty()
    }

    /// Returns true if `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut sa, mut sb) = (self.set_of[a], self.set_of[b]);
        if sa == sb {
            return false;
        }
        if self.members[sa].len() < self.members[sb].len() {
            std::mem::swap(&mut sa, &mut sb);
        }
        let moved = std::mem::take(&mut self.members[sb]);
        for &x in &moved {
            self.set_of[x] = sa;
        }
        self.members[sa].extend(moved);
        self.sets -= 1;
        true
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.set_of[a] == self.set_of[b]
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }

    /// Smallest element of each element's set.
    pub fn labels(&self) -> Vec<usize> {
        canonical_labels(self.len(), |x| self.set_of[x])
    }
}

/// Relabels a partition given by any representative function so that each
/// element maps to the smallest member of its set. Two partitions are equal
/// iff their canonical labels are.
pub fn canonical_labels(n: usize, mut rep: impl FnMut(usize) -> usize) -> Vec<usize> {
    let reps: Vec<usize> = (0..n).map(&mut rep).collect();
    let mut smallest = std::collections::HashMap::with_capacity(n);
    for (x, &r) in reps.iter().enumerate() {
        smallest.entry(r).or_insert(x);
    }
    reps.iter().map(|r| smallest[r]).collect()
}

/// Connected components by BFS. Labels are the smallest vertex of each
/// component.
pub fn oracle_components(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.n();
    let mut offsets = vec![0usize; n + 1];
    for &(u, v) in g.edges() {
        offsets[u as usize + 1] += 1;
        offsets[v as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut fill = offsets.clone();
    let mut adj = vec![0u32; offsets[n]];
    for &(u, v) in g.edges() {
        adj[fill[u as usize]] = v;
        fill[u as usize] += 1;
        adj[fill[v as usize]] = u;
        fill[v as usize] += 1;
    }
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        count += 1;
        label[s] = s;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[offsets[x]..offsets[x + 1]] {
                if label[y as usize] == usize::MAX {
                    label[y as usize] = s;
                    queue.push_back(y as usize);
                }
            }
        }
    }
    (count, label)
}

/// Minimum spanning forest weight by Kruskal.
pub fn oracle_mst_weight(g: &Graph) -> Result<u64, GraphError> {
    let weights = g.weights().ok_or(GraphError::Unweighted)?;
    let mut order: Vec<usize> = (0..g.m()).collect();
    order.sort_by_key(|&e| weights[e]);
    let mut p = OraclePartition::new(g.n());
    let mut total = 0u64;
    for e in order {
        let (u, v) = g.edge(e);
        if p.union(u, v) {
            total += weights[e] as u64;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{DsuConfig, Variant};
    use crate::graph::gen_erdos_renyi;
    use crate::workloads::{run_boruvka, run_cc};

    #[test]
    fn oracle_partition_basics() {
        let mut p = OraclePartition::new(5);
        assert!(p.union(0, 1));
        assert!(p.union(3, 1));
        assert!(!p.union(0, 3));
        assert!(p.same(0, 3));
        assert!(!p.same(0, 4));
        assert_eq!(p.set_count(), 3);
        assert_eq!(p.labels(), vec![0, 0, 2, 0, 4]);
    }

    #[test]
    fn canonical_labels_ignore_representative_choice() {
        let a = canonical_labels(4, |x| [9, 9, 7, 9][x]);
        let b = canonical_labels(4, |x| [1, 1, 2, 1][x]);
        assert_eq!(a, b);
        assert_eq!(a, vec![0, 0, 2, 0]);
    }

    #[test]
    fn components_small() {
        let g = Graph::new("iso", 3, vec![], None).unwrap();
        assert_eq!(oracle_components(&g).0, 3);
        let g = Graph::new("path", 3, vec![(0, 1), (1, 2)], None).unwrap();
        assert_eq!(oracle_components(&g), (1, vec![0, 0, 0]));
    }

    #[test]
    fn components_agree_with_merge_lists() {
        let g = gen_erdos_renyi(1000, 100, 17, false).unwrap();
        let (count, labels) = oracle_components(&g);
        let p = OraclePartition::from_pairs(
            g.n(),
            g.edges().iter().map(|&(u, v)| (u as usize, v as usize)),
        );
        assert_eq!(count, p.set_count());
        assert_eq!(labels, p.labels());
    }

    #[test]
    fn mst_weight_small() {
        let tri = Graph::new("tri", 3, vec![(0, 1), (1, 2), (0, 2)], Some(vec![1, 2, 3])).unwrap();
        assert_eq!(oracle_mst_weight(&tri).unwrap(), 3);
        let one = Graph::new("one", 2, vec![(0, 1)], Some(vec![7])).unwrap();
        assert_eq!(oracle_mst_weight(&one).unwrap(), 7);
        let two = Graph::new("two", 4, vec![(0, 1), (2, 3)], Some(vec![4, 5])).unwrap();
        assert_eq!(oracle_mst_weight(&two).unwrap(), 9);
        let unweighted = Graph::new("u", 2, vec![(0, 1)], None).unwrap();
        assert!(oracle_mst_weight(&unweighted).is_err());
    }

    #[test]
    fn cc_matches_bfs() {
        let g = gen_erdos_renyi(2000, 2500, 5, false).unwrap();
        let (count, labels) = oracle_components(&g);
        for cfg in DsuConfig::all_valid().into_iter().step_by(7) {
            for threads in [1, 3] {
                let d = crate::ConcurrentDsu::new(g.n(), cfg).unwrap();
                run_cc(&g, &d, threads, 0.0, 11).unwrap();
                let got = canonical_labels(g.n(), |x| d.find(x).index);
                assert_eq!(got, labels, "{cfg} threads={threads}");
                assert_eq!(
                    got.iter().enumerate().filter(|&(i, &l)| i == l).count(),
                    count
                );
            }
        }
    }

    #[test]
    fn cc_with_only_queries_leaves_singletons() {
        let g = gen_erdos_renyi(300, 1000, 2, false).unwrap();
        let d = crate::ConcurrentDsu::new(g.n(), DsuConfig::new(Variant::CasRank)).unwrap();
        run_cc(&g, &d, 2, 1.0, 1).unwrap();
        assert!((0..g.n()).all(|x| d.find(x).index == x));
    }

    #[test]
    fn boruvka_matches_kruskal_and_is_a_forest() {
        let g = gen_erdos_renyi(3000, 9000, 8, true).unwrap();
        let expect = oracle_mst_weight(&g).unwrap();
        let (components, _) = oracle_components(&g);
        for threads in [1, 2, 4] {
            let d =
                crate::ConcurrentDsu::new(g.n(), DsuConfig::new(Variant::CasPseudoRandom)).unwrap();
            let r = run_boruvka(&g, &d, threads, |_| 1).unwrap();
            assert_eq!(r.weight, expect, "threads={threads}");
            assert_eq!(r.edges.len(), g.n() - components);
            let mut check = OraclePartition::new(g.n());
            for &e in &r.edges {
                let (u, v) = g.edge(e);
                assert!(check.union(u, v), "edge {e} closes a cycle");
            }
        }
    }
}
