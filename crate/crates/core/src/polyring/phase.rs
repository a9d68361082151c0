use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use super::ParamPoly;
use crate::cyclotomic::CycQ;

/// Coefficient ring of a [`PhasePoly`].
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale_int(&self, k: i64) -> Self;
}

impl Coefficient for CycQ {
    fn is_zero(&self) -> bool {
        CycQ::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale_int(&self, k: i64) -> Self {
        CycQ::scale_int(self, k)
    }
}

impl Coefficient for ParamPoly {
    fn is_zero(&self) -> bool {
        ParamPoly::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self = &*self + other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale_int(&self, k: i64) -> Self {
        self.scale(&CycQ::from_int(k))
    }
}

/// Exponent `(a1, a2, a3)` of a phase monomial `x1^a1 x2^a2 x3^a3`,
/// ordered by total degree, then lexicographically with `x1` largest.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub [u32; 3]);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    /// `(k, k, k) + e_m`, the resonant monomial of component `m` (0-based) at level `k`.
    pub fn resonant(k: u32, m: usize) -> Mono {
        let mut a = [k; 3];
        a[m] += 1;
        Mono(a)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `x1, x2, x3` truncated at total degree `max_degree`.
#[derive(Clone, PartialEq, Debug)]
pub struct PhasePoly<C> {
    max_degree: u32,
    terms: BTreeMap<Mono, C>,
}

impl<C: Coefficient> PhasePoly<C> {
    pub fn zero(max_degree: u32) -> Self {
        PhasePoly {
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(max_degree: u32, mono: Mono, c: C) -> Self {
        let mut p = PhasePoly::zero(max_degree);
        p.add_term(mono, c);
        p
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Mono) -> Option<&C> {
        self.terms.get(mono)
    }

    /// Adds `c * x^mono`; terms above the truncation degree are discarded.
    pub fn add_term(&mut self, mono: Mono, c: C) {
        if mono.degree() > self.max_degree || c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.max_degree = self.max_degree.min(other.max_degree);
        out.terms.retain(|m, _| m.degree() <= other.max_degree);
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        PhasePoly {
            max_degree: self.max_degree,
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg_ref())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Self {
        let max_degree = self.max_degree.min(other.max_degree);
        let mut out = PhasePoly::zero(max_degree);
        for (m1, c1) in &self.terms {
            let d1 = m1.degree();
            for (m2, c2) in &other.terms {
                if d1 + m2.degree() > max_degree {
                    continue;
                }
                out.add_term(m1.mul(m2), c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = PhasePoly::zero(self.max_degree);
        for (m, v) in &self.terms {
            out.add_term(*m, v.mul_ref(c));
        }
        out
    }

    /// `d/dx_var` for `var` in `0..3`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = PhasePoly::zero(self.max_degree);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut d = *m;
            d.0[var] -= 1;
            out.add_term(d, c.scale_int(e as i64));
        }
        out
    }

    /// The derivation `sum_i field[i] * d/dx_i` applied to `self`, truncated.
    pub fn apply_field(&self, field: &[PhasePoly<C>; 3]) -> Self {
        let mut out = PhasePoly::zero(self.max_degree);
        for (i, component) in field.iter().enumerate() {
            let term = component.mul(&self.derivative(i));
            out = out.add(&term);
        }
        out.max_degree = self.max_degree;
        out
    }

    /// Keeps only the terms of total degree at most `degree`.
    pub fn truncate(&self, degree: u32) -> Self {
        PhasePoly {
            max_degree: degree.min(self.max_degree),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= degree)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonant_monomial_is_annihilated_by_linear_field() {
        let n = 6;
        let field = [
            PhasePoly::monomial(n, Mono([1, 0, 0]), CycQ::one()),
            PhasePoly::monomial(n, Mono([0, 1, 0]), CycQ::zeta()),
            PhasePoly::monomial(n, Mono([0, 0, 1]), CycQ::zeta_pow(2)),
        ];
        let xyz = PhasePoly::monomial(n, Mono([1, 1, 1]), CycQ::one());
        assert!(xyz.apply_field(&field).is_zero());
    }

    #[test]
    fn derivative_along_x1() {
        let n = 4;
        let field = [
            PhasePoly::monomial(n, Mono([1, 0, 0]), CycQ::one()),
            PhasePoly::zero(n),
            PhasePoly::zero(n),
        ];
        let sq = PhasePoly::monomial(n, Mono([2, 0, 0]), CycQ::one());
        assert_eq!(
            sq.apply_field(&field),
            PhasePoly::monomial(n, Mono([2, 0, 0]), CycQ::from_int(2))
        );
    }

    #[test]
    fn truncation_is_respected() {
        let n = 3;
        let p = PhasePoly::monomial(n, Mono([1, 1, 0]), CycQ::one()).add(&PhasePoly::monomial(
            n,
            Mono([1, 0, 0]),
            CycQ::one(),
        ));
        let sq = p.mul(&p);
        assert!(sq.terms().all(|(m, _)| m.degree() <= n));
        // (x1 + x1 x2)^2 = x1^2 + 2 x1^2 x2 + (degree 4, dropped)
        assert_eq!(sq.len(), 2);
        assert_eq!(sq.coeff(&Mono([2, 1, 0])), Some(&CycQ::from_int(2)));
        // out-of-range insertions vanish
        let mut q = PhasePoly::<CycQ>::zero(2);
        q.add_term(Mono([3, 0, 0]), CycQ::one());
        assert!(q.is_zero());
    }
}
