//! Seeded multi-threaded schedules checked against the oracle at quiescence.

use std::sync::Barrier;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{quiescent_audit, AuditReport, OraclePartition};
use crate::concurrent::ConcurrentDsu;
use crate::config::{DsuConfig, StressOptions};
use crate::error::DsuError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StressPlan {
    pub n: usize,
    pub threads: usize,
    pub unions_per_thread: usize,
    pub queries_per_thread: usize,
    pub seed: u64,
    /// Forwarded to [`StressOptions::yield_one_in`].
    pub yield_one_in: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScriptOp {
    Union(usize, usize),
    SameSet(usize, usize),
}

/// The op script of thread `tid`, a pure function of `(plan, tid)`.
pub fn stress_script(plan: &StressPlan, tid: usize) -> Vec<ScriptOp> {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    rng.set_stream(tid as u64 + 1);
    let n = plan.n;
    let mut ops = Vec::with_capacity(plan.unions_per_thread + plan.queries_per_thread);
    for _ in 0..plan.unions_per_thread {
        ops.push(ScriptOp::Union(rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    for _ in 0..plan.queries_per_thread {
        ops.push(ScriptOp::SameSet(rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    ops.shuffle(&mut rng);
    ops
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StressOutcome {
    pub report: AuditReport,
    /// Same-set answers of true for pairs the full union multiset never joins.
    pub false_positives: usize,
    /// Same-set answers of false for pairs joined by the querying thread's
    /// own earlier unions.
    pub false_negatives: usize,
    /// Unions that reported performing a link.
    pub links_reported: usize,
    /// `n - components` of the oracle partition.
    pub links_expected: usize,
}

impl StressOutcome {
    pub fn is_ok(&self) -> bool {
        self.report.is_clean()
            && self.false_positives == 0
            && self.false_negatives == 0
            && self.links_reported == self.links_expected
    }

    pub fn summary(&self) -> String {
        format!(
            "audit {}; false positives {}; false negatives {}; links {}/{}",
            self.report,
            self.false_positives,
            self.false_negatives,
            self.links_reported,
            self.links_expected
        )
    }
}

/// Runs `plan` against a fresh DSU built from `config` (with link recording
/// and the plan's yield rate enabled), then checks every recorded answer and
/// audits the final forest.
pub fn run_stress(config: DsuConfig, plan: &StressPlan) -> Result<StressOutcome, DsuError> {
    let config = config.with_stress(StressOptions {
        yield_one_in: plan.yield_one_in,
        record_links: true,
    });
    let d = ConcurrentDsu::new(plan.n, config)?;
    let scripts: Vec<Vec<ScriptOp>> = (0..plan.threads).map(|t| stress_script(plan, t)).collect();
    let start = Barrier::new(plan.threads);

    let results: Vec<(Vec<bool>, usize)> = std::thread::scope(|s| {
        let handles: Vec<_> = scripts
            .iter()
            .map(|script| {
                let (d, start) = (&d, &start);
                s.spawn(move || {
                    let mut session = d.session();
                    let mut answers = Vec::new();
                    let mut links = 0;
                    start.wait();
                    for &op in script {
                        match op {
                            ScriptOp::Union(a, b) => links += usize::from(session.union(a, b)),
                            ScriptOp::SameSet(a, b) => answers.push(session.same_set(a, b)),
                        }
                    }
                    (answers, links)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("stress worker panicked"))
            .collect()
    });

    let full = OraclePartition::from_pairs(
        plan.n,
        scripts.iter().flatten().filter_map(|op| match *op {
            ScriptOp::Union(a, b) => Some((a, b)),
            ScriptOp::SameSet(..) => None,
        }),
    );
    let mut false_positives = 0;
    let mut false_negatives = 0;
    for (script, (answers, _)) in scripts.iter().zip(&results) {
        let mut own = OraclePartition::new(plan.n);
        let mut answers = answers.iter();
        for &op in script {
            match op {
                ScriptOp::Union(a, b) => {
                    own.union(a, b);
                }
                ScriptOp::SameSet(a, b) => {
                    let got = *answers.next().unwrap();
                    if got && !full.same(a, b) {
                        false_positives += 1;
                    }
                    if !got && own.same(a, b) {
                        false_negatives += 1;
                    }
                }
            }
        }
    }

    Ok(StressOutcome {
        report: quiescent_audit(&d, Some(&full.labels())),
        false_positives,
        false_negatives,
        links_reported: results.iter().map(|r| r.1).sum(),
        links_expected: plan.n - full.set_count(),
    })
}
