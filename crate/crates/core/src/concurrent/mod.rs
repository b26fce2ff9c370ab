//! Shared-memory concurrent DSU.
//!
//! All variants except [`Variant::CoarseLock`] keep one `AtomicU64` per
//! element and link roots exclusively with CAS on the losing root's slot.
//! Compaction writes may be downgraded to ordered or plain stores, see
//! [`CompactionSync`].
//!
//! Memory-access contract used throughout:
//!
//! | access               | ordering                         |
//! |----------------------|----------------------------------|
//! | synchronizing read   | `Acquire` load                   |
//! | unordered read       | `Relaxed` load                   |
//! | CAS                  | `AcqRel` / `Acquire` on failure  |
//! | ordered store        | `SeqCst` store                   |
//! | unordered store      | `Relaxed` store                  |
//!
//! Under `PlainWrite` traversal reads are unordered, and any read that
//! reports a root is repeated as a synchronizing read before it is trusted.

mod cas;
mod early;
mod rem;

use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};
use std::sync::{Mutex, MutexGuard};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{CompactionSync, DsuConfig, Linking, SeqConfig, Variant};
use crate::error::DsuError;
use crate::priority::PriorityFn;
use crate::seq::SeqDsu;
use crate::slot::{check_element_count, PackedSlot};
use crate::stats::{Counters, SharedCounters};

/// A root observed by a find, together with the raw slot word that showed it
/// to be a root and its priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Root {
    pub index: usize,
    pub priority: u64,
    /// Raw slot value read when the root was recognised. Packed variants
    /// always have the root flag set here; for Rem it equals `index`.
    pub word: u64,
}

/// Per-thread scratch state: counters plus the yield-injection RNG.
#[derive(Debug, Clone)]
pub(crate) struct Local {
    pub(crate) counters: Counters,
    yield_state: u64,
}

impl Local {
    fn new(seed: u64) -> Self {
        Local {
            counters: Counters::default(),
            // xorshift must not start at zero
            yield_state: seed | 1,
        }
    }
}

pub struct ConcurrentDsu {
    config: DsuConfig,
    n: usize,
    slots: Box<[AtomicU64]>,
    pfn: Option<PriorityFn>,
    // Per-element priorities, only for EarlyRecognition.
    priorities: Option<Box<[u64]>>,
    locked: Option<Mutex<SeqDsu>>,
    links: Option<Box<[AtomicU32]>>,
    totals: SharedCounters,
    session_seq: AtomicU64,
}

impl ConcurrentDsu {
    pub fn new(n: usize, config: DsuConfig) -> Result<Self, DsuError> {
        check_element_count(n)?;
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut pfn = None;
        let mut priorities = None;
        let mut locked = None;
        let slots: Box<[AtomicU64]> = match config.variant {
            Variant::CasRank => (0..n)
                .map(|_| AtomicU64::new(PackedSlot::root(0).raw()))
                .collect(),
            Variant::CasPseudoRandom | Variant::EarlyRecognition => {
                let f = PriorityFn::with_default_prime(n as u64, rng.gen())?;
                if config.variant == Variant::EarlyRecognition {
                    priorities = Some((0..n as u64).map(|x| f.apply(x)).collect());
                }
                pfn = Some(f);
                (0..n)
                    .map(|_| AtomicU64::new(PackedSlot::root(0).raw()))
                    .collect()
            }
            Variant::Rem => (0..n as u64).map(AtomicU64::new).collect(),
            Variant::CoarseLock => {
                let seq = SeqDsu::new(
                    n,
                    SeqConfig::new(config.lock_linking, config.compaction).with_seed(config.seed),
                )?;
                locked = Some(Mutex::new(seq));
                Box::new([])
            }
        };
        // The coarse-lock variant never links through a CAS.
        let links = (config.stress.record_links && config.variant != Variant::CoarseLock)
            .then(|| (0..n).map(|_| AtomicU32::new(0)).collect());
        Ok(ConcurrentDsu {
            config,
            n,
            slots,
            pfn,
            priorities,
            locked,
            links,
            totals: SharedCounters::default(),
            session_seq: AtomicU64::new(0),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn config(&self) -> &DsuConfig {
        &self.config
    }

    /// Per-thread handle; counters are merged into the DSU totals on drop.
    pub fn session(&self) -> Session<'_> {
        let id = self.session_seq.fetch_add(1, Ordering::Relaxed);
        let seed = self.config.seed ^ id.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        Session {
            dsu: self,
            local: Local::new(seed),
        }
    }

    pub fn find(&self, u: usize) -> Root {
        self.session().find(u)
    }

    pub fn union(&self, u: usize, v: usize) -> bool {
        self.session().union(u, v)
    }

    pub fn same_set(&self, u: usize, v: usize) -> bool {
        self.session().same_set(u, v)
    }

    /// Counters merged from all finished sessions.
    pub fn counters(&self) -> Counters {
        self.totals.load()
    }

    /// Fixed priority of `x` for the priority-ordered variants.
    pub fn element_priority(&self, x: usize) -> Option<u64> {
        match self.config.variant {
            Variant::CasPseudoRandom => self.pfn.map(|f| f.apply(x as u64)),
            Variant::EarlyRecognition => self.priorities.as_ref().map(|p| p[x]),
            Variant::Rem => Some(x as u64),
            Variant::CoarseLock => self.lock().element_priority(x),
            Variant::CasRank => None,
        }
    }

    /// Copies the forest for auditing. Only meaningful at quiescence.
    pub fn snapshot(&self) -> ForestSnapshot {
        let (parent, root_priority, root_kind): (Vec<_>, Vec<_>, _) = match self.config.variant {
            Variant::CoarseLock => {
                let seq = self.lock();
                let kind = match self.config.lock_linking {
                    Linking::Rank => RootPriorityKind::Rank,
                    Linking::Size => RootPriorityKind::Size,
                    _ => RootPriorityKind::Other,
                };
                (
                    seq.slots().iter().map(|s| s.parent_index()).collect(),
                    seq.slots().iter().map(|s| s.priority()).collect(),
                    kind,
                )
            }
            Variant::Rem => {
                let parent = (0..self.n)
                    .map(|i| {
                        let p = self.slots[i].load(Ordering::Acquire) as usize;
                        (p != i).then_some(p)
                    })
                    .collect();
                let prio = (0..self.n as u64)
                    .map(|i| (self.slots[i as usize].load(Ordering::Acquire) == i).then_some(i))
                    .collect();
                (parent, prio, RootPriorityKind::Other)
            }
            variant => {
                let words: Vec<PackedSlot> = self
                    .slots
                    .iter()
                    .map(|s| PackedSlot::from_raw(s.load(Ordering::Acquire)))
                    .collect();
                let kind = if variant == Variant::CasRank {
                    RootPriorityKind::Rank
                } else {
                    RootPriorityKind::Other
                };
                (
                    words.iter().map(|w| w.parent_index()).collect(),
                    words.iter().map(|w| w.priority()).collect(),
                    kind,
                )
            }
        };
        let element_priority = if self.config.variant == Variant::CoarseLock {
            let seq = self.lock();
            matches!(
                self.config.lock_linking,
                Linking::Random | Linking::PseudoRandom
            )
            .then(|| {
                (0..self.n)
                    .map(|x| seq.element_priority(x).unwrap())
                    .collect()
            })
        } else {
            self.config.priority_ordered().then(|| {
                (0..self.n)
                    .map(|x| self.element_priority(x).unwrap())
                    .collect()
            })
        };
        ForestSnapshot {
            parent,
            root_priority,
            root_kind,
            element_priority,
            link_counts: self
                .links
                .as_ref()
                .map(|l| l.iter().map(|c| c.load(Ordering::Acquire)).collect()),
        }
    }

    /// Overwrites one slot with a raw word, bypassing every algorithm rule.
    /// Exists to inject faults when testing auditors.
    #[doc(hidden)]
    pub fn store_raw(&self, i: usize, raw: u64) {
        match self.config.variant {
            Variant::CoarseLock => {
                let mut seq = self.lock();
                let mut slots = seq.slots().to_vec();
                slots[i] = PackedSlot::from_raw(raw);
                *seq = SeqDsu::from_slots(slots, seq.config()).expect("slot index in range");
            }
            _ => self.slots[i].store(raw, Ordering::SeqCst),
        }
    }

    fn lock(&self) -> MutexGuard<'_, SeqDsu> {
        // A panic while holding the lock leaves the forest consistent: every
        // sequential mutation is a single slot write.
        match self.locked.as_ref().expect("coarse-lock variant").lock() {
            Ok(g) => g,
            Err(poisoned) => poisoned.into_inner(),
        }
    }

    // --- memory access -------------------------------------------------

    #[inline]
    fn read_sync(&self, i: usize) -> PackedSlot {
        PackedSlot::from_raw(self.slots[i].load(Ordering::Acquire))
    }

    #[inline]
    fn read_traverse(&self, i: usize) -> PackedSlot {
        let order = match self.config.sync {
            CompactionSync::PlainWrite => Ordering::Relaxed,
            _ => Ordering::Acquire,
        };
        PackedSlot::from_raw(self.slots[i].load(order))
    }

    /// Traversal read whose root answers are always confirmed by a
    /// synchronizing read.
    #[inline]
    fn read_checked(&self, i: usize) -> PackedSlot {
        let w = self.read_traverse(i);
        if w.is_root() && self.config.sync == CompactionSync::PlainWrite {
            self.read_sync(i)
        } else {
            w
        }
    }

    #[inline]
    fn cas_raw(&self, i: usize, expected: u64, new: u64, l: &mut Local) -> bool {
        l.counters.cas_attempts += 1;
        let ok = self.slots[i]
            .compare_exchange(expected, new, Ordering::AcqRel, Ordering::Acquire)
            .is_ok();
        if !ok {
            l.counters.failed_cas += 1;
        }
        ok
    }

    /// Linking CAS: the only root-to-child transition.
    #[inline]
    fn link(&self, child: usize, expected: u64, new: u64, l: &mut Local) -> bool {
        self.maybe_yield(l);
        let ok = self.cas_raw(child, expected, new, l);
        if ok {
            if let Some(links) = &self.links {
                links[child].fetch_add(1, Ordering::AcqRel);
            }
        }
        ok
    }

    /// Moves slot `u` from the observed parent link to `target`.
    ///
    /// `observed` must be a parent link read from `u`; a slot that is not a
    /// root never becomes one again, so the store cannot clobber a root.
    #[inline]
    fn compact(&self, u: usize, observed: PackedSlot, target: usize, l: &mut Local) {
        debug_assert!(!observed.is_root());
        if observed.payload() == target as u64 {
            return;
        }
        let new = PackedSlot::parent(target).raw();
        match self.config.sync {
            CompactionSync::Cas => {
                self.cas_raw(u, observed.raw(), new, l);
            }
            CompactionSync::OrderedWrite => self.slots[u].store(new, Ordering::SeqCst),
            CompactionSync::PlainWrite => self.slots[u].store(new, Ordering::Relaxed),
        }
    }

    #[inline]
    fn maybe_yield(&self, l: &mut Local) {
        let k = self.config.stress.yield_one_in;
        if k == 0 {
            return;
        }
        let mut x = l.yield_state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        l.yield_state = x;
        if x.is_multiple_of(k as u64) {
            std::thread::yield_now();
        }
    }

    // --- dispatch --------------------------------------------------------

    fn find_in(&self, u: usize, l: &mut Local) -> Root {
        assert!(u < self.n, "element {u} out of range 0..{}", self.n);
        match self.config.variant {
            Variant::Rem => self.rem_find(u, l),
            Variant::CoarseLock => {
                let mut seq = self.lock();
                let before = seq.find_steps();
                let r = seq.find(u);
                l.counters.find_steps += seq.find_steps() - before;
                let word = seq.slot(r);
                Root {
                    index: r,
                    priority: seq.element_priority(r).unwrap_or(word.payload()),
                    word: word.raw(),
                }
            }
            _ => {
                let (index, word) = self.find_root(u, l);
                Root {
                    index,
                    priority: self.root_priority(index, word),
                    word: word.raw(),
                }
            }
        }
    }

    fn union_in(&self, u: usize, v: usize, l: &mut Local) -> bool {
        assert!(
            u < self.n && v < self.n,
            "element out of range 0..{}",
            self.n
        );
        l.counters.operations += 1;
        if self.config.ipc && self.ipc_same(u, v, l) {
            return false;
        }
        match self.config.variant {
            Variant::CasRank | Variant::CasPseudoRandom => self.cas_union(u, v, l),
            Variant::EarlyRecognition => self.er_union(u, v, l),
            Variant::Rem => self.rem_union(u, v, l),
            Variant::CoarseLock => {
                let mut seq = self.lock();
                let before = seq.find_steps();
                let linked = seq.union(u, v);
                l.counters.find_steps += seq.find_steps() - before;
                linked
            }
        }
    }

    fn same_set_in(&self, u: usize, v: usize, l: &mut Local) -> bool {
        assert!(
            u < self.n && v < self.n,
            "element out of range 0..{}",
            self.n
        );
        l.counters.operations += 1;
        if self.config.ipc && self.ipc_same(u, v, l) {
            return true;
        }
        match self.config.variant {
            Variant::CasRank | Variant::CasPseudoRandom => self.cas_same_set(u, v, l),
            Variant::EarlyRecognition => self.er_same_set(u, v, l),
            Variant::Rem => self.rem_same_set(u, v, l),
            Variant::CoarseLock => {
                let mut seq = self.lock();
                let before = seq.find_steps();
                let same = seq.same_set(u, v);
                l.counters.find_steps += seq.find_steps() - before;
                same
            }
        }
    }
}

/// Per-thread handle onto a [`ConcurrentDsu`].
pub struct Session<'a> {
    dsu: &'a ConcurrentDsu,
    local: Local,
}

impl Session<'_> {
    pub fn find(&mut self, u: usize) -> Root {
        self.dsu.find_in(u, &mut self.local)
    }

    /// Returns whether this call linked two distinct sets.
    pub fn union(&mut self, u: usize, v: usize) -> bool {
        self.dsu.union_in(u, v, &mut self.local)
    }

    pub fn same_set(&mut self, u: usize, v: usize) -> bool {
        self.dsu.same_set_in(u, v, &mut self.local)
    }

    /// Counters gathered by this session and not yet merged.
    pub fn counters(&self) -> Counters {
        self.local.counters
    }

    pub fn dsu(&self) -> &ConcurrentDsu {
        self.dsu
    }
}

impl Drop for Session<'_> {
    fn drop(&mut self) {
        self.dsu.totals.add(&self.local.counters);
    }
}

/// How the priority stored in a root slot relates to its tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootPriorityKind {
    /// Rank: at most log2 of the tree size.
    Rank,
    /// Exact tree size.
    Size,
    Other,
}

/// Quiescent copy of a DSU forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestSnapshot {
    /// `None` marks a root.
    pub parent: Vec<Option<usize>>,
    /// Stored priority of each root, `None` for non-roots.
    pub root_priority: Vec<Option<u64>>,
    pub root_kind: RootPriorityKind,
    /// Fixed priorities, for variants ordered by them.
    pub element_priority: Option<Vec<u64>>,
    /// Successful linking CAS count per slot, when recorded.
    pub link_counts: Option<Vec<u32>>,
}

#[cfg(test)]
mod tests;
