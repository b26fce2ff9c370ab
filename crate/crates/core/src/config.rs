//! Strategy selectors for the sequential and concurrent DSUs.

use std::fmt;
use std::str::FromStr;

use crate::error::DsuError;

macro_rules! named_enum {
    ($(#[$meta:meta])* pub enum $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = DsuError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(DsuError::Config(format!(
                        "unknown {} `{}` (expected one of: {})",
                        stringify!($name),
                        other,
                        [$($text),+].join(", ")
                    ))),
                }
            }
        }
    };
}

named_enum! {
    /// Rule choosing which of two roots becomes the child.
    pub enum Linking {
        Size => "size",
        Rank => "rank",
        Random => "random",
        PseudoRandom => "pseudo-random",
    }
}

named_enum! {
    /// Path shortening applied during find.
    pub enum Compaction {
        Compression => "compression",
        Splitting => "splitting",
        Halving => "halving",
        None => "none",
    }
}

named_enum! {
    /// How compaction writes (and the reads feeding them) are synchronized.
    pub enum CompactionSync {
        Cas => "cas",
        OrderedWrite => "ordered-write",
        PlainWrite => "plain-write",
    }
}

named_enum! {
    /// Concurrent algorithm family.
    pub enum Variant {
        CasRank => "cas-rank",
        CasPseudoRandom => "cas-pseudo-random",
        EarlyRecognition => "early-recognition",
        Rem => "rem",
        CoarseLock => "coarse-lock",
    }
}

/// Configuration of a [`SeqDsu`](crate::seq::SeqDsu).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeqConfig {
    pub linking: Linking,
    pub compaction: Compaction,
    /// Seeds the random permutation (Random) or the shift (PseudoRandom).
    pub seed: u64,
}

impl SeqConfig {
    pub fn new(linking: Linking, compaction: Compaction) -> Self {
        SeqConfig {
            linking,
            compaction,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Testing aids for the concurrent DSU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StressOptions {
    /// When non-zero, yield the thread with probability `1 / yield_one_in`
    /// at each labeled step (after the first find, before a linking CAS).
    pub yield_one_in: u32,
    /// Count successful linking transitions per slot.
    pub record_links: bool,
}

/// Configuration of a [`ConcurrentDsu`](crate::concurrent::ConcurrentDsu).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DsuConfig {
    pub variant: Variant,
    pub compaction: Compaction,
    pub sync: CompactionSync,
    /// Immediate parent check on entry to union and same-set.
    pub ipc: bool,
    /// Linking of the sequential DSU wrapped by [`Variant::CoarseLock`].
    pub lock_linking: Linking,
    pub seed: u64,
    pub stress: StressOptions,
}

impl DsuConfig {
    pub fn new(variant: Variant) -> Self {
        DsuConfig {
            variant,
            compaction: Compaction::Splitting,
            sync: CompactionSync::Cas,
            ipc: false,
            lock_linking: Linking::Rank,
            seed: 0,
            stress: StressOptions::default(),
        }
    }

    pub fn with_compaction(mut self, compaction: Compaction) -> Self {
        self.compaction = compaction;
        self
    }

    pub fn with_sync(mut self, sync: CompactionSync) -> Self {
        self.sync = sync;
        self
    }

    pub fn with_ipc(mut self, ipc: bool) -> Self {
        self.ipc = ipc;
        self
    }

    pub fn with_lock_linking(mut self, linking: Linking) -> Self {
        self.lock_linking = linking;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_stress(mut self, stress: StressOptions) -> Self {
        self.stress = stress;
        self
    }

    /// Whether priorities strictly increase along every parent link.
    pub fn priority_ordered(&self) -> bool {
        matches!(
            self.variant,
            Variant::CasPseudoRandom | Variant::EarlyRecognition | Variant::Rem
        )
    }

    /// Checks the variant compatibility matrix.
    pub fn validate(&self) -> Result<(), DsuError> {
        let bad = |msg: String| Err(DsuError::Config(msg));
        match self.variant {
            Variant::EarlyRecognition if self.compaction == Compaction::Compression => bad(
                "early-recognition climbs stop below the root; use splitting, halving or none"
                    .into(),
            ),
            Variant::Rem if self.compaction != Compaction::Splitting => {
                bad("rem always uses its built-in splitting step".into())
            }
            Variant::Rem if self.sync != CompactionSync::Cas => {
                bad("rem compacts with CAS only".into())
            }
            Variant::Rem if self.ipc => {
                bad("rem performs the parent check at every step; ipc is implied".into())
            }
            Variant::CoarseLock if self.sync != CompactionSync::Cas => {
                bad("coarse-lock runs sequential code; compaction sync does not apply".into())
            }
            Variant::CoarseLock if self.ipc => bad("ipc is not available for coarse-lock".into()),
            _ => Ok(()),
        }
    }

    /// Every valid combination, each once (stress options default, seed 0).
    pub fn all_valid() -> Vec<DsuConfig> {
        let mut out = Vec::new();
        for &variant in Variant::ALL {
            match variant {
                Variant::Rem => out.push(DsuConfig::new(Variant::Rem)),
                Variant::CoarseLock => {
                    for &linking in Linking::ALL {
                        for &compaction in Compaction::ALL {
                            out.push(
                                DsuConfig::new(variant)
                                    .with_lock_linking(linking)
                                    .with_compaction(compaction),
                            );
                        }
                    }
                }
                _ => {
                    for &compaction in Compaction::ALL {
                        for &sync in CompactionSync::ALL {
                            for ipc in [false, true] {
                                let c = DsuConfig::new(variant)
                                    .with_compaction(compaction)
                                    .with_sync(sync)
                                    .with_ipc(ipc);
                                if c.validate().is_ok() {
                                    out.push(c);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for DsuConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            Variant::CoarseLock => {
                write!(f, "coarse-lock[{}/{}]", self.lock_linking, self.compaction)
            }
            Variant::Rem => f.write_str("rem"),
            v => write!(
                f,
                "{v}[{}/{}{}]",
                self.compaction,
                self.sync,
                if self.ipc { "/ipc" } else { "" }
            ),
        }
    }
}
