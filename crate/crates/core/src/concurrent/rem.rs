//! Concurrent Rem's algorithm with splitting.
//!
//! Slots hold plain parent indices and a root points at itself. The parent
//! index doubles as the priority, so links always go to a larger index.

use std::sync::atomic::Ordering;

use super::{ConcurrentDsu, Local, Root};

impl ConcurrentDsu {
    #[inline]
    fn rem_parent(&self, x: usize) -> usize {
        self.slots[x].load(Ordering::Acquire) as usize
    }

    pub(super) fn rem_find(&self, u: usize, l: &mut Local) -> Root {
        let mut u = u;
        loop {
            let p = self.rem_parent(u);
            if p == u {
                return Root {
                    index: u,
                    priority: u as u64,
                    word: u as u64,
                };
            }
            l.counters.find_steps += 1;
            let gp = self.rem_parent(p);
            if gp != p {
                self.cas_raw(u, p as u64, gp as u64, l);
            }
            u = p;
        }
    }

    /// Returns true only when this call performed the link.
    pub(super) fn rem_union(&self, u: usize, v: usize, l: &mut Local) -> bool {
        let (mut u, mut v) = (u, v);
        loop {
            let mut up = self.rem_parent(u);
            let mut vp = self.rem_parent(v);
            if u == v || up == vp {
                return false;
            }
            if vp < up {
                std::mem::swap(&mut u, &mut v);
                std::mem::swap(&mut up, &mut vp);
            }
            if u == up {
                if self.link(u, u as u64, vp as u64, l) {
                    return true;
                }
                // u is no longer a root; the splitting CAS below would expect
                // `u` in its own slot and fail, so just re-read.
                continue;
            }
            l.counters.find_steps += 1;
            let next = self.rem_parent(up);
            if up != next {
                self.cas_raw(u, up as u64, next as u64, l);
            }
            u = up;
        }
    }

    pub(super) fn rem_same_set(&self, u: usize, v: usize, l: &mut Local) -> bool {
        let (mut u, mut v) = (u, v);
        loop {
            let mut up = self.rem_parent(u);
            let mut vp = self.rem_parent(v);
            if u == v || up == vp {
                return true;
            }
            if vp < up {
                std::mem::swap(&mut u, &mut v);
                std::mem::swap(&mut up, &mut vp);
            }
            if u == up {
                // Re-check after reading `vp`: if u is still a root now, v's
                // parent (> u) cannot lie in u's tree.
                if self.rem_parent(u) == u {
                    return false;
                }
                continue;
            }
            l.counters.find_steps += 1;
            let next = self.rem_parent(up);
            if up != next {
                self.cas_raw(u, up as u64, next as u64, l);
            }
            u = up;
        }
    }
}
