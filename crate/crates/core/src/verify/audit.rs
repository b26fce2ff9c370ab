use std::fmt;

use super::canonical_labels;
use crate::concurrent::{ConcurrentDsu, ForestSnapshot, RootPriorityKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    ParentOutOfRange {
        element: usize,
        parent: usize,
    },
    /// `element` lies on a parent cycle.
    Cycle {
        element: usize,
    },
    /// A child whose fixed priority is not below its parent's.
    PriorityOrder {
        child: usize,
        parent: usize,
    },
    RankTooLarge {
        root: usize,
        rank: u64,
        size: usize,
    },
    SizeMismatch {
        root: usize,
        stored: u64,
        size: usize,
    },
    LinkCount {
        element: usize,
        count: u32,
        is_root: bool,
    },
    Partition {
        element: usize,
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::LengthMismatch { expected, found } => {
                write!(f, "forest has {found} elements, expected {expected}")
            }
            Violation::ParentOutOfRange { element, parent } => {
                write!(f, "element {element} points to {parent}, out of range")
            }
            Violation::Cycle { element } => write!(f, "element {element} is on a parent cycle"),
            Violation::PriorityOrder { child, parent } => {
                write!(
                    f,
                    "child {child} does not have lower priority than parent {parent}"
                )
            }
            Violation::RankTooLarge { root, rank, size } => {
                write!(f, "root {root} has rank {rank} but only {size} members")
            }
            Violation::SizeMismatch { root, stored, size } => {
                write!(f, "root {root} stores size {stored}, tree has {size}")
            }
            Violation::LinkCount {
                element,
                count,
                is_root,
            } => write!(
                f,
                "element {element} ({}) was linked {count} times",
                if is_root { "root" } else { "child" }
            ),
            Violation::Partition {
                element,
                expected,
                found,
            } => write!(
                f,
                "element {element} is grouped with {found}, oracle groups it with {expected}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            return write!(f, "clean");
        }
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in self.violations.iter().take(10) {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}

/// Audits a quiescent DSU. `expected` holds canonical partition labels
/// (see [`canonical_labels`]) to compare against, if any.
pub fn quiescent_audit(d: &ConcurrentDsu, expected: Option<&[usize]>) -> AuditReport {
    audit_snapshot(&d.snapshot(), expected)
}

pub fn audit_snapshot(s: &ForestSnapshot, expected: Option<&[usize]>) -> AuditReport {
    let n = s.parent.len();
    let mut out = Vec::new();

    for (x, p) in s.parent.iter().enumerate() {
        if let Some(p) = *p {
            if p >= n {
                out.push(Violation::ParentOutOfRange {
                    element: x,
                    parent: p,
                });
            }
        }
    }
    if !out.is_empty() {
        return AuditReport { violations: out };
    }

    // Resolve roots with an explicit stack; 0 = unseen, 1 = on stack, 2 = done.
    let mut root = vec![usize::MAX; n];
    let mut state = vec![0u8; n];
    let mut stack = Vec::new();
    for start in 0..n {
        let mut x = start;
        while state[x] == 0 {
            state[x] = 1;
            stack.push(x);
            match s.parent[x] {
                Some(p) => x = p,
                None => {
                    root[x] = x;
                    break;
                }
            }
        }
        let r = if state[x] == 1 && s.parent[x].is_some() {
            // Closed a cycle at x.
            let pos = stack.iter().position(|&y| y == x).unwrap();
            for &y in &stack[pos..] {
                out.push(Violation::Cycle { element: y });
            }
            usize::MAX
        } else {
            root[x]
        };
        for y in stack.drain(..) {
            root[y] = r;
            state[y] = 2;
        }
    }

    if let Some(prio) = &s.element_priority {
        for (x, p) in s.parent.iter().enumerate() {
            if let Some(p) = *p {
                if prio[x] >= prio[p] {
                    out.push(Violation::PriorityOrder {
                        child: x,
                        parent: p,
                    });
                }
            }
        }
    }

    let mut size = vec![0usize; n];
    for &r in &root {
        if r != usize::MAX {
            size[r] += 1;
        }
    }
    for r in 0..n {
        if s.parent[r].is_some() {
            continue;
        }
        let stored = s.root_priority[r].unwrap_or(0);
        match s.root_kind {
            RootPriorityKind::Rank => {
                if stored >= 64 || (1usize << stored) > size[r] {
                    out.push(Violation::RankTooLarge {
                        root: r,
                        rank: stored,
                        size: size[r],
                    });
                }
            }
            RootPriorityKind::Size => {
                if stored != size[r] as u64 {
                    out.push(Violation::SizeMismatch {
                        root: r,
                        stored,
                        size: size[r],
                    });
                }
            }
            RootPriorityKind::Other => {}
        }
    }

    if let Some(links) = &s.link_counts {
        for (x, &count) in links.iter().enumerate() {
            let is_root = s.parent[x].is_none();
            if count != u32::from(!is_root) {
                out.push(Violation::LinkCount {
                    element: x,
                    count,
                    is_root,
                });
            }
        }
    }

    if let Some(expected) = expected {
        if expected.len() != n {
            out.push(Violation::LengthMismatch {
                expected: expected.len(),
                found: n,
            });
        } else if !root.contains(&usize::MAX) {
            let found = canonical_labels(n, |x| root[x]);
            for x in 0..n {
                if found[x] != expected[x] {
                    out.push(Violation::Partition {
                        element: x,
                        expected: expected[x],
                        found: found[x],
                    });
                }
            }
        }
    }

    AuditReport { violations: out }
}
