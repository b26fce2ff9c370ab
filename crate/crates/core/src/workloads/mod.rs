//! Benchmark workloads that drive a [`ConcurrentDsu`](crate::ConcurrentDsu)
//! from several threads.

use std::time::{Duration, Instant};

mod boruvka;
mod cc;

pub use boruvka::{default_threshold, run_boruvka, MstResult, ShortestEdgeSlot};
pub use cc::{op_kind, run_cc, run_ops, Op, OpKind, OpStream};

/// Wall-clock extent of a set of worker intervals. Workers stamp their own
/// start after the release barrier, since the coordinating thread may not
/// be scheduled again until they are done.
#[derive(Debug, Default, Clone, Copy)]
struct Span {
    first: Option<Instant>,
    last: Option<Instant>,
}

impl Span {
    fn cover(&mut self, start: Instant, end: Instant) {
        self.first = Some(self.first.map_or(start, |f| f.min(start)));
        self.last = Some(self.last.map_or(end, |l| l.max(end)));
    }

    fn elapsed(&self) -> Duration {
        match (self.first, self.last) {
            (Some(a), Some(b)) => b.saturating_duration_since(a),
            _ => Duration::ZERO,
        }
    }
}
