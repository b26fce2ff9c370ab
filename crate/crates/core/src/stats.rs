//! Diagnostic counters. Threads count into a local [`Counters`] and merge
//! into a [`SharedCounters`] when they are done.

use std::ops::{Add, AddAssign};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    /// CAS attempts of any kind (linking, rank update, compaction).
    pub cas_attempts: u64,
    pub failed_cas: u64,
    /// Parent hops taken while climbing.
    pub find_steps: u64,
    pub ipc_hits: u64,
    pub er_terminations: u64,
    /// Union and same-set calls.
    pub operations: u64,
}

impl Counters {
    pub fn merge(&mut self, other: &Counters) {
        self.cas_attempts += other.cas_attempts;
        self.failed_cas += other.failed_cas;
        self.find_steps += other.find_steps;
        self.ipc_hits += other.ipc_hits;
        self.er_terminations += other.er_terminations;
        self.operations += other.operations;
    }

    /// Failed fraction of all CAS attempts (0 when none were made).
    pub fn failed_cas_ratio(&self) -> f64 {
        if self.cas_attempts == 0 {
            0.0
        } else {
            self.failed_cas as f64 / self.cas_attempts as f64
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Counters::default()
    }
}

impl AddAssign<&Counters> for Counters {
    fn add_assign(&mut self, rhs: &Counters) {
        self.merge(rhs);
    }
}

impl Add for Counters {
    type Output = Counters;

    fn add(mut self, rhs: Counters) -> Counters {
        self.merge(&rhs);
        self
    }
}

impl std::iter::Sum for Counters {
    fn sum<I: Iterator<Item = Counters>>(iter: I) -> Counters {
        iter.fold(Counters::default(), Add::add)
    }
}

#[derive(Debug, Default)]
pub struct SharedCounters {
    cas_attempts: AtomicU64,
    failed_cas: AtomicU64,
    find_steps: AtomicU64,
    ipc_hits: AtomicU64,
    er_terminations: AtomicU64,
    operations: AtomicU64,
}

impl SharedCounters {
    pub fn add(&self, c: &Counters) {
        for (cell, v) in [
            (&self.cas_attempts, c.cas_attempts),
            (&self.failed_cas, c.failed_cas),
            (&self.find_steps, c.find_steps),
            (&self.ipc_hits, c.ipc_hits),
            (&self.er_terminations, c.er_terminations),
            (&self.operations, c.operations),
        ] {
            if v != 0 {
                cell.fetch_add(v, Ordering::Relaxed);
            }
        }
    }

    pub fn load(&self) -> Counters {
        Counters {
            cas_attempts: self.cas_attempts.load(Ordering::Relaxed),
            failed_cas: self.failed_cas.load(Ordering::Relaxed),
            find_steps: self.find_steps.load(Ordering::Relaxed),
            ipc_hits: self.ipc_hits.load(Ordering::Relaxed),
            er_terminations: self.er_terminations.load(Ordering::Relaxed),
            operations: self.operations.load(Ordering::Relaxed),
        }
    }
}

/// Wall time of a measured region plus the counters gathered inside it.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunStats {
    pub elapsed: Duration,
    pub counters: Counters,
}

impl RunStats {
    pub fn millis(&self) -> f64 {
        self.elapsed.as_secs_f64() * 1e3
    }
}
