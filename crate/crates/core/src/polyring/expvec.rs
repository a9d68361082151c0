use std::cmp::Ordering;
use std::fmt;
use std::ops::{Index, IndexMut};

use smallvec::SmallVec;

/// Exponent vector `nu` of a parameter monomial `[nu]`.
///
/// Ordered graded-lexicographically: lower total degree first, then within a
/// degree the variable with the smaller index is the larger one
/// (`e_1 < e_2 < ...` in iteration order, i.e. `a`-block monomials first).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExpVec(SmallVec<[u16; 12]>);

impl ExpVec {
    pub fn zeros(len: usize) -> Self {
        ExpVec(SmallVec::from_elem(0, len))
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = ExpVec::zeros(len);
        v.0[index] = 1;
        v
    }

    pub fn from_slice(entries: &[u16]) -> Self {
        ExpVec(SmallVec::from_slice(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.0
    }

    /// `|nu|`
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.len(), other.len());
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `nu + e_index`
    pub fn incremented(&self, index: usize) -> ExpVec {
        let mut v = self.clone();
        v.0[index] += 1;
        v
    }

    /// `nu - e_index`, or `None` when that leaves the non-negative orthant.
    pub fn decremented(&self, index: usize) -> Option<ExpVec> {
        if self.0[index] == 0 {
            return None;
        }
        let mut v = self.clone();
        v.0[index] -= 1;
        Some(v)
    }
}

impl Index<usize> for ExpVec {
    type Output = u16;
    fn index(&self, i: usize) -> &u16 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ExpVec {
    fn index_mut(&mut self, i: usize) -> &mut u16 {
        &mut self.0[i]
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order() {
        let e1 = ExpVec::unit(3, 0);
        let e2 = ExpVec::unit(3, 1);
        let zero = ExpVec::zeros(3);
        let sq = ExpVec::from_slice(&[0, 0, 2]);
        assert!(zero < e1);
        assert!(e1 < e2);
        assert!(e2 < sq);
        assert_eq!(e1.add(&e2), ExpVec::from_slice(&[1, 1, 0]));
        assert_eq!(e1.decremented(1), None);
        assert_eq!(e1.decremented(0), Some(zero));
    }
}
