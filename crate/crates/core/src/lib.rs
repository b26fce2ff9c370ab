//! Concurrent union-find: sequential and lock-free DSU variants, graph
//! inputs, the connected-components and parallel Boruvka workloads, and the
//! oracles used to check them.

pub mod concurrent;
pub mod config;
pub mod error;
pub mod graph;
pub mod harness;
pub mod priority;
pub mod seq;
pub mod slot;
pub mod stats;
pub mod verify;
pub mod workloads;

pub use concurrent::{ConcurrentDsu, ForestSnapshot, Root, Session};
pub use config::{
    Compaction, CompactionSync, DsuConfig, Linking, SeqConfig, StressOptions, Variant,
};
pub use error::{DsuError, GraphError, HarnessError};
pub use graph::Graph;
pub use priority::{priority_of, PriorityFn};
pub use seq::SeqDsu;
pub use slot::{PackedSlot, SlotView};
pub use stats::{Counters, RunStats};
