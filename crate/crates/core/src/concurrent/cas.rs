//! CAS-linked variants over packed slots: rank and pseudo-random priorities.

use super::{ConcurrentDsu, Local};
use crate::config::{Compaction, Variant};
use crate::slot::PackedSlot;

impl ConcurrentDsu {
    /// Priority of a root given the slot word that identified it.
    #[inline]
    pub(super) fn root_priority(&self, root: usize, word: PackedSlot) -> u64 {
        match self.config.variant {
            Variant::CasRank => word.payload(),
            _ => self.element_priority_fast(root),
        }
    }

    #[inline]
    pub(super) fn element_priority_fast(&self, x: usize) -> u64 {
        match &self.priorities {
            Some(p) => p[x],
            None => self.pfn.expect("pseudo-random variant").apply(x as u64),
        }
    }

    /// Climbs from `u` to a root, compacting on the way. Returns the root and
    /// the (confirmed) root word.
    pub(super) fn find_root(&self, u: usize, l: &mut Local) -> (usize, PackedSlot) {
        let mut u = u;
        let mut wu = self.read_checked(u);
        match self.config.compaction {
            Compaction::None => loop {
                let Some(p) = wu.parent_index() else {
                    return (u, wu);
                };
                l.counters.find_steps += 1;
                u = p;
                wu = self.read_checked(u);
            },
            Compaction::Splitting => loop {
                let Some(p) = wu.parent_index() else {
                    return (u, wu);
                };
                l.counters.find_steps += 1;
                let wp = self.read_checked(p);
                let Some(gp) = wp.parent_index() else {
                    return (p, wp);
                };
                self.compact(u, wu, gp, l);
                u = p;
                wu = wp;
            },
            Compaction::Halving => loop {
                let Some(p) = wu.parent_index() else {
                    return (u, wu);
                };
                l.counters.find_steps += 1;
                let wp = self.read_checked(p);
                let Some(gp) = wp.parent_index() else {
                    return (p, wp);
                };
                l.counters.find_steps += 1;
                self.compact(u, wu, gp, l);
                u = gp;
                wu = self.read_checked(u);
            },
            Compaction::Compression => {
                let start = u;
                while let Some(p) = wu.parent_index() {
                    l.counters.find_steps += 1;
                    u = p;
                    wu = self.read_checked(u);
                }
                let (root, root_word) = (u, wu);
                // Second pass: point every visited slot at the root. Slots on
                // the path are non-roots for good, so the walk stops at the
                // root or at whatever root the path now leads to.
                let mut x = start;
                while x != root {
                    let w = self.read_traverse(x);
                    let Some(p) = w.parent_index() else { break };
                    self.compact(x, w, root, l);
                    x = p;
                }
                (root, root_word)
            }
        }
    }

    /// Immediate parent check: same element, or both slots hold the same
    /// parent link.
    #[inline]
    pub(super) fn ipc_same(&self, u: usize, v: usize, l: &mut Local) -> bool {
        let same = u == v || {
            let wu = self.read_traverse(u);
            !wu.is_root() && wu == self.read_traverse(v)
        };
        if same {
            l.counters.ipc_hits += 1;
        }
        same
    }

    pub(super) fn cas_union(&self, u: usize, v: usize, l: &mut Local) -> bool {
        loop {
            let (ru, wu) = self.find_root(u, l);
            self.maybe_yield(l);
            let (rv, wv) = self.find_root(v, l);
            if ru == rv {
                return false;
            }
            let pu = self.root_priority(ru, wu);
            let pv = self.root_priority(rv, wv);
            match self.config.variant {
                Variant::CasRank => {
                    if pu < pv {
                        if self.link(ru, wu.raw(), PackedSlot::parent(rv).raw(), l) {
                            return true;
                        }
                    } else if pu > pv {
                        if self.link(rv, wv.raw(), PackedSlot::parent(ru).raw(), l) {
                            return true;
                        }
                    } else {
                        let (child, wc, parent, wp) = if ru < rv {
                            (ru, wu, rv, wv)
                        } else {
                            (rv, wv, ru, wu)
                        };
                        if self.link(child, wc.raw(), PackedSlot::parent(parent).raw(), l) {
                            // One attempt; losing it only costs balance.
                            self.cas_raw(parent, wp.raw(), PackedSlot::root(pv + 1).raw(), l);
                            return true;
                        }
                    }
                }
                _ => {
                    let (child, wc, parent) = if pu < pv { (ru, wu, rv) } else { (rv, wv, ru) };
                    if self.link(child, wc.raw(), PackedSlot::parent(parent).raw(), l) {
                        return true;
                    }
                }
            }
        }
    }

    pub(super) fn cas_same_set(&self, u: usize, v: usize, l: &mut Local) -> bool {
        loop {
            let (ru, _) = self.find_root(u, l);
            self.maybe_yield(l);
            let (rv, _) = self.find_root(v, l);
            if ru == rv {
                return true;
            }
            if self.read_sync(ru).is_root() {
                return false;
            }
        }
    }
}
