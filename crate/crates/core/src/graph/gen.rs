//! Seeded synthetic graphs. Both generators sample endpoints independently,
//! so duplicate edges and self-loops can occur.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::GraphError;

/// Generated weights are uniform in `1..=MAX_GENERATED_WEIGHT`.
pub const MAX_GENERATED_WEIGHT: u32 = 1_000_000;

// Weights come from their own stream so the topology does not depend on
// whether weights were requested.
const WEIGHT_STREAM: u64 = 0x5745_4947_4854_5321;

fn check_size(n: usize, m: usize, min_n: usize) -> Result<(), GraphError> {
    if n < min_n {
        return Err(GraphError::Generator(format!("need n >= {min_n}, got {n}")));
    }
    if n as u64 > u32::MAX as u64 {
        return Err(GraphError::TooManyVertices(n as u64));
    }
    if m as u64 >= u32::MAX as u64 {
        return Err(GraphError::Generator(format!("edge count {m} too large")));
    }
    Ok(())
}

fn weights(m: usize, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ WEIGHT_STREAM);
    (0..m)
        .map(|_| rng.gen_range(1..=MAX_GENERATED_WEIGHT))
        .collect()
}

/// `m` edges with both endpoints uniform on `0..n`.
pub fn gen_erdos_renyi(n: usize, m: usize, seed: u64, weighted: bool) -> Result<Graph, GraphError> {
    check_size(n, m, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..m)
        .map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32)))
        .collect();
    Graph::new(
        format!("er:{n}:{m}:{seed}"),
        n,
        edges,
        weighted.then(|| weights(m, seed)),
    )
}

/// Size of the hub set used by [`gen_high_contention`].
pub fn hub_count(n: usize) -> usize {
    (n / 1000).max(2)
}

/// Hub-skewed graph: 90% of edges join a hub (one of the first
/// [`hub_count`] vertices) to a uniform vertex, the rest are uniform pairs.
pub fn gen_high_contention(
    n: usize,
    m: usize,
    seed: u64,
    weighted: bool,
) -> Result<Graph, GraphError> {
    check_size(n, m, 16)?;
    let hubs = hub_count(n) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..m)
        .map(|_| {
            if rng.gen_bool(0.9) {
                let hub = rng.gen_range(0..hubs);
                let other = rng.gen_range(0..n as u32);
                if rng.gen() {
                    (hub, other)
                } else {
                    (other, hub)
                }
            } else {
                (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32))
            }
        })
        .collect();
    Graph::new(
        format!("hc:{n}:{m}:{seed}"),
        n,
        edges,
        weighted.then(|| weights(m, seed)),
    )
}
