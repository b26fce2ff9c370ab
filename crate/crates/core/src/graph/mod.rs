//! Immutable graphs for the benchmarks, plus loaders and generators.

mod gen;
mod io;

pub use gen::{gen_erdos_renyi, gen_high_contention, hub_count, MAX_GENERATED_WEIGHT};
pub use io::{load_dimacs, load_edge_list, load_path, write_edge_list, write_path};

use crate::error::GraphError;

/// Vertex count plus an edge array; weights are present for MST inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    name: String,
    n: usize,
    edges: Vec<(u32, u32)>,
    weights: Option<Vec<u32>>,
}

impl Graph {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        edges: Vec<(u32, u32)>,
        weights: Option<Vec<u32>>,
    ) -> Result<Self, GraphError> {
        if n as u64 > u32::MAX as u64 {
            return Err(GraphError::TooManyVertices(n as u64));
        }
        if let Some((i, &(u, v))) = edges
            .iter()
            .enumerate()
            .find(|(_, &(u, v))| u as usize >= n || v as usize >= n)
        {
            return Err(GraphError::Generator(format!(
                "edge {i} = ({u}, {v}) has an endpoint outside 0..{n}"
            )));
        }
        if let Some(w) = &weights {
            if w.len() != edges.len() {
                return Err(GraphError::Generator(format!(
                    "{} weights for {} edges",
                    w.len(),
                    edges.len()
                )));
            }
        }
        Ok(Graph {
            name: name.into(),
            n,
            edges,
            weights,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, i: usize) -> (usize, usize) {
        let (u, v) = self.edges[i];
        (u as usize, v as usize)
    }

    pub fn weights(&self) -> Option<&[u32]> {
        self.weights.as_deref()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    #[inline]
    pub fn weight(&self, i: usize) -> Option<u32> {
        self.weights.as_ref().map(|w| w[i])
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}
