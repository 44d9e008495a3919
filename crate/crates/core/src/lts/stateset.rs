use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

/// A set of states of one transition system, stored as a fixed-width bit
/// vector. All binary operations require both operands to have the same
/// width.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    bits: FixedBitSet,
}

impl StateSet {
    pub fn empty(width: usize) -> Self {
        StateSet {
            bits: FixedBitSet::with_capacity(width),
        }
    }

    pub fn full(width: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(width);
        bits.insert_range(..);
        StateSet { bits }
    }

    pub fn singleton(width: usize, state: usize) -> Self {
        let mut s = Self::empty(width);
        s.insert(state);
        s
    }

    pub fn from_states(width: usize, states: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(width);
        for q in states {
            s.insert(q);
        }
        s
    }

    /// Number of states of the underlying system.
    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, state: usize) -> bool {
        self.bits.contains(state)
    }

    /// Panics if `state` is outside the width.
    pub fn insert(&mut self, state: usize) -> bool {
        assert!(
            state < self.width(),
            "state {state} outside a set of width {}",
            self.width()
        );
        !self.bits.put(state)
    }

    pub fn remove(&mut self, state: usize) {
        self.bits.set(state, false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.width()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest state outside the set.
    pub fn first_missing(&self) -> Option<usize> {
        self.bits.zeroes().next()
    }

    fn check_width(&self, other: &StateSet) {
        assert_eq!(
            self.width(),
            other.width(),
            "state sets of different systems combined"
        );
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.check_width(other);
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        self.check_width(other);
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &StateSet) {
        self.check_width(other);
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> StateSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        StateSet { bits }
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.check_width(other);
        self.bits.is_subset(&other.bits)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateSet/{}", self.width())?;
        f.debug_set().entries(self.iter()).finish()
    }
}

/// `{0, 3, 7}`.
impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for StateSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        let a = StateSet::from_states(5, [0, 2]);
        let b = StateSet::from_states(5, [2, 3]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 2, 3]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.complement().to_vec(), vec![1, 3, 4]);
        assert_eq!(a.difference(&b).to_vec(), vec![0]);
        assert!(StateSet::from_states(5, [2]).is_subset(&a));
        assert_eq!(a.first_missing(), Some(1));
        assert_eq!(StateSet::full(5).first_missing(), None);
        assert_eq!(a.to_string(), "{0, 2}");
    }

    #[test]
    fn complement_of_empty_width_zero() {
        let s = StateSet::empty(0);
        assert!(s.complement().is_empty());
        assert!(s.is_full());
    }

    #[test]
    #[should_panic(expected = "different systems")]
    fn mixing_widths_panics() {
        let mut a = StateSet::empty(3);
        a.union_with(&StateSet::empty(4));
    }
}
