//! Single-word slot encoding shared by the sequential and concurrent DSUs.
//!
//! A slot holds either a parent index (non-root) or a priority (root). The
//! most significant bit distinguishes the two: set means root.

use std::fmt;

use crate::error::DsuError;

/// Flag bit marking a root slot.
pub const ROOT_FLAG: u64 = 1 << 63;

/// Largest value storable in either view of a slot.
pub const PAYLOAD_MASK: u64 = ROOT_FLAG - 1;

/// Exclusive upper bound on the number of elements a packed DSU can hold.
pub const MAX_ELEMENTS: u64 = ROOT_FLAG;

/// Decoded view of a [`PackedSlot`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotView {
    Root { priority: u64 },
    Child { parent: usize },
}

/// One machine word holding either a parent link or a root priority.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
#[repr(transparent)]
pub struct PackedSlot(u64);

impl PackedSlot {
    #[inline]
    pub const fn from_raw(raw: u64) -> Self {
        PackedSlot(raw)
    }

    #[inline]
    pub const fn raw(self) -> u64 {
        self.0
    }

    /// Encodes a parent link. `parent` must be below [`MAX_ELEMENTS`].
    #[inline]
    pub fn parent(parent: usize) -> Self {
        debug_assert!((parent as u64) < MAX_ELEMENTS);
        PackedSlot(parent as u64)
    }

    /// Encodes a root with the given priority. `priority` must be below [`MAX_ELEMENTS`].
    #[inline]
    pub fn root(priority: u64) -> Self {
        debug_assert!(priority <= PAYLOAD_MASK);
        PackedSlot(ROOT_FLAG | priority)
    }

    #[inline]
    pub const fn is_root(self) -> bool {
        self.0 & ROOT_FLAG != 0
    }

    /// Payload without the flag: the parent index or the priority.
    #[inline]
    pub const fn payload(self) -> u64 {
        self.0 & PAYLOAD_MASK
    }

    #[inline]
    pub fn parent_index(self) -> Option<usize> {
        (!self.is_root()).then_some(self.0 as usize)
    }

    #[inline]
    pub fn priority(self) -> Option<u64> {
        self.is_root().then_some(self.payload())
    }

    #[inline]
    pub fn view(self) -> SlotView {
        if self.is_root() {
            SlotView::Root {
                priority: self.payload(),
            }
        } else {
            SlotView::Child {
                parent: self.0 as usize,
            }
        }
    }
}

impl fmt::Debug for PackedSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.view() {
            SlotView::Root { priority } => write!(f, "Root({priority})"),
            SlotView::Child { parent } => write!(f, "Parent({parent})"),
        }
    }
}

/// Rejects element counts that are zero or too large for the flag-bit encoding.
pub fn check_element_count(n: usize) -> Result<(), DsuError> {
    if n == 0 {
        return Err(DsuError::Empty);
    }
    if n as u64 >= MAX_ELEMENTS {
        return Err(DsuError::TooLarge(n as u64));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn views_are_distinguished() {
        assert!(PackedSlot::root(0).is_root());
        assert!(!PackedSlot::parent(0).is_root());
        assert_eq!(
            PackedSlot::parent(17).view(),
            SlotView::Child { parent: 17 }
        );
        assert_eq!(PackedSlot::root(3).view(), SlotView::Root { priority: 3 });
        assert_eq!(PackedSlot::root(3).parent_index(), None);
        assert_eq!(PackedSlot::parent(3).priority(), None);
    }

    #[test]
    fn extreme_payloads() {
        let max = PAYLOAD_MASK;
        assert_eq!(PackedSlot::root(max).priority(), Some(max));
        assert_eq!(
            PackedSlot::parent(max as usize).parent_index(),
            Some(max as usize)
        );
    }

    #[test]
    fn element_count_limits() {
        assert_eq!(check_element_count(0), Err(DsuError::Empty));
        assert!(check_element_count(1).is_ok());
        assert!(check_element_count((MAX_ELEMENTS - 1) as usize).is_ok());
        assert_eq!(
            check_element_count(MAX_ELEMENTS as usize),
            Err(DsuError::TooLarge(MAX_ELEMENTS))
        );
    }

    proptest! {
        #[test]
        fn encode_decode(x in 0..MAX_ELEMENTS) {
            prop_assert_eq!(PackedSlot::parent(x as usize).parent_index(), Some(x as usize));
            prop_assert_eq!(PackedSlot::root(x).priority(), Some(x));
            prop_assert_eq!(PackedSlot::from_raw(PackedSlot::root(x).raw()), PackedSlot::root(x));
        }
    }
}
