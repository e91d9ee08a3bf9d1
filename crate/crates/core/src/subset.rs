use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{QgError, Result};

/// A set of elements of an order-`n` structure, stored as a bit set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSubset {
    parent_order: usize,
    bits: FixedBitSet,
}

impl ElementSubset {
    pub fn empty(parent_order: usize) -> Self {
        ElementSubset {
            parent_order,
            bits: FixedBitSet::with_capacity(parent_order),
        }
    }

    pub fn full(parent_order: usize) -> Self {
        let mut s = Self::empty(parent_order);
        s.bits.insert_range(..);
        s
    }

    pub fn from_elements<I>(parent_order: usize, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = Self::empty(parent_order);
        for x in elements {
            if x >= parent_order {
                return Err(QgError::Precondition(format!(
                    "element {x} is outside 0..{parent_order}"
                )));
            }
            s.bits.insert(x);
        }
        Ok(s)
    }

    #[cfg(test)]
    pub(crate) fn from_predicate(parent_order: usize, pred: impl Fn(usize) -> bool) -> Self {
        let mut s = Self::empty(parent_order);
        for x in (0..parent_order).filter(|&x| pred(x)) {
            s.bits.insert(x);
        }
        s
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    /// Inserts `x`, returning whether it was newly added.
    ///
    /// Panics if `x` is not below the parent order.
    pub fn insert(&mut self, x: usize) -> bool {
        !self.bits.put(x)
    }

    pub fn remove(&mut self, x: usize) {
        self.bits.set(x, false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn intersection(&self, other: &ElementSubset) -> ElementSubset {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        ElementSubset {
            parent_order: self.parent_order,
            bits,
        }
    }

    pub fn is_subset(&self, other: &ElementSubset) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn min(&self) -> Option<usize> {
        self.bits.minimum()
    }
}

impl fmt::Debug for ElementSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ElementSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_operations() {
        let a = ElementSubset::from_elements(6, [0, 2, 4]).unwrap();
        let b = ElementSubset::from_elements(6, [2, 3, 4, 5]).unwrap();
        assert_eq!(a.intersection(&b).to_vec(), vec![2, 4]);
        assert!(!a.is_subset(&b));
        assert!(a.intersection(&b).is_subset(&b));
        assert_eq!(ElementSubset::full(6).len(), 6);
        assert!(ElementSubset::empty(6).is_empty());
        assert_eq!(a.to_string(), "{0, 2, 4}");
        assert_eq!(b.min(), Some(2));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(ElementSubset::from_elements(3, [3]).is_err());
    }

    #[test]
    fn insert_reports_novelty() {
        let mut s = ElementSubset::empty(4);
        assert!(s.insert(1));
        assert!(!s.insert(1));
        s.remove(1);
        assert!(s.is_empty());
    }
}
