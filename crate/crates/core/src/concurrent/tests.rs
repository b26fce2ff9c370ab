use super::*;
use crate::config::{Compaction, SeqConfig};

fn rank_chain(compaction: Compaction, sync: CompactionSync) -> ConcurrentDsu {
    let d = ConcurrentDsu::new(
        4,
        DsuConfig::new(Variant::CasRank)
            .with_compaction(compaction)
            .with_sync(sync),
    )
    .unwrap();
    d.store_raw(0, PackedSlot::root(2).raw());
    d.store_raw(1, PackedSlot::parent(0).raw());
    d.store_raw(2, PackedSlot::parent(1).raw());
    d.store_raw(3, PackedSlot::parent(2).raw());
    d
}

fn word(d: &ConcurrentDsu, i: usize) -> PackedSlot {
    d.read_sync(i)
}

#[test]
fn find_on_quiescent_chain() {
    for &c in Compaction::ALL {
        for &s in CompactionSync::ALL {
            let d = rank_chain(c, s);
            let r = d.find(3);
            assert_eq!((r.index, r.priority), (0, 2), "{c}/{s}");
            assert!(PackedSlot::from_raw(r.word).is_root());
            // Every element still reaches the same root.
            for x in 0..4 {
                assert_eq!(d.find(x).index, 0);
            }
        }
    }
}

#[test]
fn find_compaction_shapes_match_sequential() {
    let expect = [
        (Compaction::Halving, [None, Some(0), Some(1), Some(1)]),
        (Compaction::Splitting, [None, Some(0), Some(0), Some(1)]),
        (Compaction::Compression, [None, Some(0), Some(0), Some(0)]),
        (Compaction::None, [None, Some(0), Some(1), Some(2)]),
    ];
    for (c, parents) in expect {
        let d = rank_chain(c, CompactionSync::Cas);
        d.find(3);
        let got: Vec<_> = (0..4).map(|i| word(&d, i).parent_index()).collect();
        assert_eq!(got, parents, "{c}");
    }
}

#[test]
fn find_on_root_does_not_mutate() {
    let d = rank_chain(Compaction::Compression, CompactionSync::PlainWrite);
    let before: Vec<_> = (0..4).map(|i| word(&d, i)).collect();
    let r = d.find(0);
    assert_eq!((r.index, r.priority), (0, 2));
    let after: Vec<_> = (0..4).map(|i| word(&d, i)).collect();
    assert_eq!(before, after);
}

#[test]
fn rank_union_from_fresh() {
    let d = ConcurrentDsu::new(4, DsuConfig::new(Variant::CasRank)).unwrap();
    assert!(d.union(0, 1));
    assert_eq!(word(&d, 0), PackedSlot::parent(1));
    assert_eq!(word(&d, 1), PackedSlot::root(1));
    assert!(!d.union(0, 1));
    assert!(!d.union(2, 2));
    assert_eq!(word(&d, 2), PackedSlot::root(0));
}

#[test]
fn same_set_basics_all_variants() {
    for cfg in DsuConfig::all_valid() {
        let d = ConcurrentDsu::new(5, cfg).unwrap();
        assert!(!d.same_set(0, 1), "{cfg}");
        assert!(d.same_set(3, 3), "{cfg}");
        assert!(d.union(0, 1), "{cfg}");
        assert!(d.same_set(0, 1), "{cfg}");
        assert!(d.union(1, 2), "{cfg}");
        assert!(d.same_set(2, 0), "{cfg}");
        assert!(!d.same_set(0, 4), "{cfg}");
        assert!(!d.union(2, 0), "{cfg}");
    }
}

#[test]
fn cas_compaction_without_contention() {
    let d = rank_chain(Compaction::None, CompactionSync::Cas);
    let mut l = Local::new(1);
    d.compact(3, PackedSlot::parent(2), 0, &mut l);
    assert_eq!(word(&d, 3), PackedSlot::parent(0));
    assert_eq!((l.counters.cas_attempts, l.counters.failed_cas), (1, 0));
}

#[test]
fn cas_compaction_loses_race_once() {
    let d = rank_chain(Compaction::None, CompactionSync::Cas);
    let mut winner = Local::new(1);
    let mut loser = Local::new(2);
    // Both threads observed 3 -> 2; the winner moves it first.
    let observed = word(&d, 3);
    d.compact(3, observed, 1, &mut winner);
    d.compact(3, observed, 0, &mut loser);
    assert_eq!(word(&d, 3), PackedSlot::parent(1));
    assert_eq!(winner.counters.failed_cas, 0);
    assert_eq!(loser.counters.failed_cas, 1);
}

#[test]
fn plain_compaction_overwrites_without_cas() {
    for sync in [CompactionSync::OrderedWrite, CompactionSync::PlainWrite] {
        let d = rank_chain(Compaction::None, sync);
        let mut l = Local::new(1);
        d.compact(3, PackedSlot::parent(2), 0, &mut l);
        assert_eq!(word(&d, 3), PackedSlot::parent(0));
        assert_eq!(l.counters.cas_attempts, 0);
    }
}

#[test]
fn ipc_guard_cases() {
    let d = ConcurrentDsu::new(5, DsuConfig::new(Variant::CasRank).with_ipc(true)).unwrap();
    let mut l = Local::new(1);
    assert!(d.ipc_same(3, 3, &mut l));
    assert!(!d.ipc_same(3, 4, &mut l), "distinct roots");
    d.store_raw(0, PackedSlot::parent(2).raw());
    d.store_raw(1, PackedSlot::parent(2).raw());
    d.store_raw(2, PackedSlot::root(1).raw());
    assert!(d.ipc_same(0, 1, &mut l));
    assert!(!d.ipc_same(0, 2, &mut l), "parent and child");
    assert_eq!(l.counters.ipc_hits, 2);

    let mut s = d.session();
    assert!(s.same_set(0, 1));
    assert!(!s.union(1, 0));
    assert_eq!(s.counters().ipc_hits, 2);
    assert_eq!(s.counters().find_steps, 0);
}

fn by_priority(d: &ConcurrentDsu) -> Vec<usize> {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by_key(|&x| d.element_priority(x).unwrap());
    order
}

#[test]
fn early_recognition_stops_at_lca() {
    let d = ConcurrentDsu::new(
        8,
        DsuConfig::new(Variant::EarlyRecognition)
            .with_compaction(Compaction::None)
            .with_seed(11),
    )
    .unwrap();
    let e = by_priority(&d);
    // e[6] root, e[7] a separate singleton; e[5] below e[6] is the LCA of e[1] (via e[4]) and e[2] (via e[3]).
    let links = [(0, 6), (5, 6), (4, 5), (3, 5), (1, 4), (2, 3)];
    for (c, p) in links {
        d.store_raw(e[c], PackedSlot::parent(e[p]).raw());
    }
    let mut s = d.session();
    assert!(s.same_set(e[1], e[2]));
    assert_eq!(s.counters().find_steps, 4, "root must not be reached");
    assert_eq!(s.counters().er_terminations, 0);
    assert!(!s.union(e[2], e[1]));
    assert!(s.same_set(e[1], e[0]));
    assert!(!s.same_set(e[1], e[7]));
    assert_eq!(s.counters().er_terminations, 1);
}

#[test]
fn early_recognition_links_root_under_current_element() {
    let d = ConcurrentDsu::new(6, DsuConfig::new(Variant::EarlyRecognition).with_seed(3)).unwrap();
    let e = by_priority(&d);
    assert!(d.union(e[0], e[1]));
    assert_eq!(word(&d, e[0]), PackedSlot::parent(e[1]));
    // e[2] -> e[4]; uniting e[3] with e[2] climbs e[2] to e[4] and links e[3] there.
    d.store_raw(e[2], PackedSlot::parent(e[4]).raw());
    let mut s = d.session();
    assert!(s.union(e[3], e[2]));
    assert_eq!(word(&d, e[3]), PackedSlot::parent(e[4]));
    assert_eq!(s.counters().er_terminations, 1);
}

#[test]
fn rem_first_union() {
    let d = ConcurrentDsu::new(8, DsuConfig::new(Variant::Rem)).unwrap();
    assert!(d.union(2, 5));
    assert_eq!(d.slots[2].load(Ordering::SeqCst), 5);
    assert!(!d.union(5, 2));
    assert!(d.same_set(2, 2));
    assert!(d.same_set(5, 2));
    assert!(!d.same_set(5, 6));
    let r = d.find(2);
    assert_eq!((r.index, r.priority, r.word), (5, 5, 5));
}

#[test]
fn coarse_lock_matches_sequential_bit_for_bit() {
    for &linking in Linking::ALL {
        for &compaction in crate::config::Compaction::ALL {
            let cfg = DsuConfig::new(Variant::CoarseLock)
                .with_lock_linking(linking)
                .with_compaction(compaction)
                .with_seed(5);
            let d = ConcurrentDsu::new(64, cfg).unwrap();
            let mut seq =
                SeqDsu::new(64, SeqConfig::new(linking, compaction).with_seed(5)).unwrap();
            let mut x = 12345u64;
            for i in 0..500 {
                x = x
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let (a, b) = ((x >> 33) as usize % 64, (x >> 13) as usize % 64);
                if i % 3 == 0 {
                    assert_eq!(d.same_set(a, b), seq.same_set(a, b));
                } else {
                    assert_eq!(d.union(a, b), seq.union(a, b));
                }
            }
            assert_eq!(d.lock().slots(), seq.slots());
            assert_eq!(d.counters().find_steps, seq.find_steps());
        }
    }
}

#[test]
fn counters_merge_on_session_drop() {
    let d = ConcurrentDsu::new(16, DsuConfig::new(Variant::CasPseudoRandom)).unwrap();
    {
        let mut s = d.session();
        for i in 1..16 {
            s.union(i - 1, i);
        }
        assert!(d.counters().is_zero());
    }
    let c = d.counters();
    assert_eq!(c.operations, 15);
    assert!(c.cas_attempts >= 15);
    assert!(c.failed_cas <= c.cas_attempts);
}

#[test]
fn rejects_bad_configs_and_sizes() {
    assert!(ConcurrentDsu::new(0, DsuConfig::new(Variant::Rem)).is_err());
    assert!(ConcurrentDsu::new(
        4,
        DsuConfig::new(Variant::EarlyRecognition).with_compaction(Compaction::Compression)
    )
    .is_err());
}

#[test]
fn link_transitions_are_recorded() {
    let cfg = DsuConfig::new(Variant::CasRank).with_stress(crate::config::StressOptions {
        yield_one_in: 0,
        record_links: true,
    });
    let d = ConcurrentDsu::new(4, cfg).unwrap();
    d.union(0, 1);
    d.union(2, 3);
    d.union(0, 3);
    let snap = d.snapshot();
    let counts = snap.link_counts.unwrap();
    assert_eq!(counts.iter().sum::<u32>(), 3);
    assert!(counts.iter().all(|&c| c <= 1));
}
