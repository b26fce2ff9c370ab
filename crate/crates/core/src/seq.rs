//! Sequential DSU over packed slots.
//!
//! Covers every linking strategy combined with every compaction strategy.
//! The concurrent coarse-lock variant runs this code under a mutex.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Compaction, Linking, SeqConfig};
use crate::error::DsuError;
use crate::priority::PriorityFn;
use crate::slot::{check_element_count, PackedSlot};

#[derive(Debug, Clone)]
pub struct SeqDsu {
    slots: Vec<PackedSlot>,
    config: SeqConfig,
    pfn: Option<PriorityFn>,
    // Per-element priorities for Random linking. Roots also keep theirs in the slot.
    random_priorities: Option<Vec<u64>>,
    find_steps: u64,
}

impl SeqDsu {
    pub fn new(n: usize, config: SeqConfig) -> Result<Self, DsuError> {
        check_element_count(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut pfn = None;
        let mut random_priorities = None;
        let slots = match config.linking {
            Linking::Rank => vec![PackedSlot::root(0); n],
            Linking::Size => vec![PackedSlot::root(1); n],
            Linking::Random => {
                let mut prio: Vec<u64> = (0..n as u64).collect();
                prio.shuffle(&mut rng);
                let slots = prio.iter().map(|&p| PackedSlot::root(p)).collect();
                random_priorities = Some(prio);
                slots
            }
            Linking::PseudoRandom => {
                pfn = Some(PriorityFn::with_default_prime(n as u64, rng.gen())?);
                vec![PackedSlot::root(0); n]
            }
        };
        Ok(SeqDsu {
            slots,
            config,
            pfn,
            random_priorities,
            find_steps: 0,
        })
    }

    /// Builds a DSU over caller-supplied slots, e.g. a hand-made chain.
    ///
    /// Only index ranges are checked; the caller is responsible for the
    /// slots forming a forest with priorities consistent with the linking.
    pub fn from_slots(slots: Vec<PackedSlot>, config: SeqConfig) -> Result<Self, DsuError> {
        let mut dsu = SeqDsu::new(slots.len(), config)?;
        if let Some(bad) = slots
            .iter()
            .find(|s| s.parent_index().is_some_and(|p| p >= slots.len()))
        {
            return Err(DsuError::Config(format!(
                "slot {bad:?} points outside the forest"
            )));
        }
        dsu.slots = slots;
        Ok(dsu)
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn config(&self) -> SeqConfig {
        self.config
    }

    pub fn slots(&self) -> &[PackedSlot] {
        &self.slots
    }

    pub fn slot(&self, x: usize) -> PackedSlot {
        self.slots[x]
    }

    /// Total parent hops taken by finds so far.
    pub fn find_steps(&self) -> u64 {
        self.find_steps
    }

    pub fn priority_fn(&self) -> Option<&PriorityFn> {
        self.pfn.as_ref()
    }

    /// Fixed priority of any element under Random or PseudoRandom linking.
    pub fn element_priority(&self, x: usize) -> Option<u64> {
        match self.config.linking {
            Linking::Random => self.random_priorities.as_ref().map(|p| p[x]),
            Linking::PseudoRandom => self.pfn.map(|f| f.apply(x as u64)),
            Linking::Rank | Linking::Size => None,
        }
    }

    #[inline]
    fn parent(&self, x: usize) -> Option<usize> {
        self.slots[x].parent_index()
    }

    /// Root of `x` without compacting anything.
    pub fn root_of(&self, mut x: usize) -> usize {
        while let Some(p) = self.parent(x) {
            x = p;
        }
        x
    }

    /// Number of links between `x` and its root.
    pub fn depth(&self, mut x: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent(x) {
            x = p;
            d += 1;
        }
        d
    }

    pub fn find(&mut self, u: usize) -> usize {
        match self.config.compaction {
            Compaction::None => {
                let mut u = u;
                while let Some(p) = self.parent(u) {
                    self.find_steps += 1;
                    u = p;
                }
                u
            }
            Compaction::Halving => {
                let mut u = u;
                loop {
                    let Some(p) = self.parent(u) else { return u };
                    self.find_steps += 1;
                    let Some(gp) = self.parent(p) else { return p };
                    self.find_steps += 1;
                    self.slots[u] = PackedSlot::parent(gp);
                    u = gp;
                }
            }
            Compaction::Splitting => {
                let mut u = u;
                loop {
                    let Some(p) = self.parent(u) else { return u };
                    self.find_steps += 1;
                    let Some(gp) = self.parent(p) else { return p };
                    self.slots[u] = PackedSlot::parent(gp);
                    u = p;
                }
            }
            Compaction::Compression => {
                let mut root = u;
                while let Some(p) = self.parent(root) {
                    self.find_steps += 1;
                    root = p;
                }
                let mut x = u;
                while let Some(p) = self.parent(x) {
                    if p != root {
                        self.slots[x] = PackedSlot::parent(root);
                    }
                    x = p;
                }
                root
            }
        }
    }

    /// Links the sets of `u` and `v`. Returns whether two distinct sets were merged.
    pub fn union(&mut self, u: usize, v: usize) -> bool {
        let ru = self.find(u);
        let rv = self.find(v);
        if ru == rv {
            return false;
        }
        let pu = self.slots[ru].payload();
        let pv = self.slots[rv].payload();
        match self.config.linking {
            Linking::Rank => {
                let (child, parent) = order_with_index_tiebreak(ru, pu, rv, pv);
                self.slots[child] = PackedSlot::parent(parent);
                if pu == pv {
                    self.slots[parent] = PackedSlot::root(pu + 1);
                }
            }
            Linking::Size => {
                let (child, parent) = order_with_index_tiebreak(ru, pu, rv, pv);
                self.slots[child] = PackedSlot::parent(parent);
                self.slots[parent] = PackedSlot::root(pu + pv);
            }
            Linking::Random | Linking::PseudoRandom => {
                let qu = self.element_priority(ru).unwrap_or(pu);
                let qv = self.element_priority(rv).unwrap_or(pv);
                let (child, parent) = if qu < qv { (ru, rv) } else { (rv, ru) };
                self.slots[child] = PackedSlot::parent(parent);
            }
        }
        true
    }

    pub fn same_set(&mut self, u: usize, v: usize) -> bool {
        self.find(u) == self.find(v)
    }
}

/// Lower priority becomes the child; on a tie the lower index does.
#[inline]
fn order_with_index_tiebreak(a: usize, pa: u64, b: usize, pb: u64) -> (usize, usize) {
    if (pa, a) < (pb, b) {
        (a, b)
    } else {
        (b, a)
    }
}
