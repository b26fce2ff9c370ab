//! Early recognition over pseudo-random priorities.
//!
//! Both arguments climb together; the side with the lower priority always
//! moves. The walk ends when the two meet (same set) or when the lower side
//! sits on a root: every element of that root's tree has a lower priority
//! than the other side's current element, so the sets differ.

use super::{ConcurrentDsu, Local};
use crate::config::Compaction;
use crate::slot::PackedSlot;

enum Climb {
    Met,
    /// `root` is a confirmed root with lower priority than `other`.
    Separated {
        root: usize,
        word: PackedSlot,
        other: usize,
    },
}

impl ConcurrentDsu {
    fn er_climb(&self, u: usize, v: usize, l: &mut Local) -> Climb {
        let prio = self
            .priorities
            .as_deref()
            .expect("early-recognition priorities");
        let (mut a, mut b) = (u, v);
        loop {
            if a == b {
                return Climb::Met;
            }
            if prio[a] > prio[b] {
                std::mem::swap(&mut a, &mut b);
            }
            let wa = self.read_checked(a);
            let Some(p) = wa.parent_index() else {
                l.counters.er_terminations += 1;
                return Climb::Separated {
                    root: a,
                    word: wa,
                    other: b,
                };
            };
            l.counters.find_steps += 1;
            a = match self.config.compaction {
                Compaction::Splitting => {
                    let wp = self.read_traverse(p);
                    if let Some(gp) = wp.parent_index() {
                        self.compact(a, wa, gp, l);
                    }
                    p
                }
                Compaction::Halving => {
                    let wp = self.read_traverse(p);
                    match wp.parent_index() {
                        Some(gp) => {
                            l.counters.find_steps += 1;
                            self.compact(a, wa, gp, l);
                            gp
                        }
                        None => p,
                    }
                }
                // Compression is rejected at construction.
                Compaction::None | Compaction::Compression => p,
            };
        }
    }

    pub(super) fn er_union(&self, u: usize, v: usize, l: &mut Local) -> bool {
        loop {
            match self.er_climb(u, v, l) {
                Climb::Met => return false,
                Climb::Separated { root, word, other } => {
                    // Link under the other side's current element, not its root.
                    if self.link(root, word.raw(), PackedSlot::parent(other).raw(), l) {
                        return true;
                    }
                }
            }
        }
    }

    pub(super) fn er_same_set(&self, u: usize, v: usize, l: &mut Local) -> bool {
        matches!(self.er_climb(u, v, l), Climb::Met)
    }
}
