use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ExpVec;
use crate::cyclotomic::{format_rational, parse_rational, CycQ};
use crate::error::{Error, Result};

/// Sparse polynomial in the system parameters with coefficients in Q(z).
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamPoly {
    nvars: usize,
    terms: BTreeMap<ExpVec, CycQ>,
}

/// One term of the JSON form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u16>,
    pub re: String,
    pub ze: String,
}

impl ParamPoly {
    pub fn zero(nvars: usize) -> Self {
        ParamPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: CycQ) -> Self {
        let mut p = ParamPoly::zero(nvars);
        p.add_term(ExpVec::zeros(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        ParamPoly::constant(nvars, CycQ::one())
    }

    /// The parameter with index `index`.
    pub fn var(nvars: usize, index: usize) -> Self {
        ParamPoly::monomial(ExpVec::unit(nvars, index), CycQ::one())
    }

    pub fn monomial(exps: ExpVec, c: CycQ) -> Self {
        let mut p = ParamPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `|Supp(p)|`
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Number of terms once each coefficient is written in the basis `{1, z}`:
    /// a monomial counts once for each nonzero coordinate of its coefficient.
    pub fn expanded_term_count(&self) -> usize {
        self.terms
            .values()
            .map(|c| usize::from(!c.re().is_zero()) + usize::from(!c.ze().is_zero()))
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &ExpVec) -> Option<&CycQ> {
        self.terms.get(exps)
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &CycQ)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExpVec> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, exps: ExpVec, c: CycQ) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Inserts terms known to have distinct exponents not yet present.
    pub(crate) fn extend_nonzero(&mut self, terms: impl IntoIterator<Item = (ExpVec, CycQ)>) {
        for (e, c) in terms {
            if !c.is_zero() {
                debug_assert_eq!(e.len(), self.nvars);
                let prev = self.terms.insert(e, c);
                debug_assert!(prev.is_none());
            }
        }
    }

    /// `self += factor * [e_var] * src`
    pub fn add_shifted_scaled(&mut self, src: &ParamPoly, var: usize, factor: &CycQ) {
        debug_assert_eq!(src.nvars, self.nvars);
        if factor.is_zero() {
            return;
        }
        for (exps, c) in &src.terms {
            self.add_term(exps.incremented(var), c * factor);
        }
    }

    fn check_dims(&self, other: &ParamPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &ParamPoly) -> Result<ParamPoly> {
        self.check_dims(other)?;
        let mut out = ParamPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CycQ) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero(self.nvars);
        }
        ParamPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut acc = ParamPoly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `point` for the parameters.
    pub fn eval(&self, point: &[CycQ]) -> Result<CycQ> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut powers: Vec<Vec<CycQ>> =
            point.iter().map(|x| vec![CycQ::one(), x.clone()]).collect();
        let mut acc = CycQ::zero();
        for (exps, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in exps.as_slice().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = &table[table.len() - 1] * &point[i];
                    table.push(next);
                }
                t *= &table[e as usize];
                if t.is_zero() {
                    break;
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Substitutes the parameters that have a value, keeping the others symbolic.
    pub fn partial_eval(&self, point: &[Option<CycQ>]) -> Result<ParamPoly> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut out = ParamPoly::zero(self.nvars);
        for (exps, c) in &self.terms {
            let mut t = c.clone();
            let mut rest = exps.clone();
            for (i, value) in point.iter().enumerate() {
                if let Some(v) = value {
                    if rest[i] > 0 {
                        t *= &v.pow(rest[i] as u32);
                        rest[i] = 0;
                    }
                }
            }
            out.add_term(rest, t);
        }
        Ok(out)
    }

    /// Text form: `(coeff) * name^e * ...`, terms joined by ` + ` in graded-lex order.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (exps, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            write!(out, "({c})").unwrap();
            for (j, &e) in exps.as_slice().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(out, " * {}", names[j]).unwrap(),
                    _ => write!(out, " * {}^{}", names[j], e).unwrap(),
                }
            }
        }
        out
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(e, c)| TermJson {
                exps: e.as_slice().to_vec(),
                re: format_rational(c.re()),
                ze: format_rational(c.ze()),
            })
            .collect()
    }

    pub fn from_json_terms(nvars: usize, terms: &[TermJson]) -> Result<ParamPoly> {
        let mut p = ParamPoly::zero(nvars);
        for t in terms {
            if t.exps.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: t.exps.len(),
                });
            }
            let c = CycQ::new(parse_rational(&t.re)?, parse_rational(&t.ze)?);
            p.add_term(ExpVec::from_slice(&t.exps), c);
        }
        Ok(p)
    }

    /// Drops every term that contains one of the masked parameters, i.e.
    /// sets those parameters to zero.
    pub fn restrict_to_zero(&self, zero_mask: &[bool]) -> ParamPoly {
        ParamPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| {
                    e.as_slice()
                        .iter()
                        .zip(zero_mask)
                        .all(|(&x, &masked)| x == 0 || !masked)
                })
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        self.try_add(rhs).expect("parameter count mismatch")
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self.try_sub(rhs).expect("parameter count mismatch")
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        self.try_mul(rhs).expect("parameter count mismatch")
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::rational;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    #[test]
    fn zero_is_neutral() {
        let p = &ParamPoly::var(3, 0) + &ParamPoly::constant(3, CycQ::zeta());
        assert_eq!(&p + &ParamPoly::zero(3), p);
        assert_eq!(ParamPoly::zero(3).term_count(), 0);
    }

    #[test]
    fn monomial_product() {
        let m1 = ParamPoly::monomial(ExpVec::from_slice(&[1, 0, 2]), CycQ::from_int(3));
        let m2 = ParamPoly::monomial(ExpVec::from_slice(&[0, 1, 1]), CycQ::zeta());
        let prod = &m1 * &m2;
        assert_eq!(prod.term_count(), 1);
        assert_eq!(
            prod.coeff(&ExpVec::from_slice(&[1, 1, 3])),
            Some(&CycQ::zeta().scale_int(3))
        );
    }

    #[test]
    fn difference_of_squares() {
        let a = ParamPoly::var(2, 0);
        let b = ParamPoly::var(2, 1);
        let lhs = &(&a - &b) * &(&a + &b);
        let rhs = &(&a * &a) - &(&b * &b);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.term_count(), 2);
    }

    #[test]
    fn dimension_mismatch() {
        let a = ParamPoly::var(2, 0);
        let b = ParamPoly::var(3, 0);
        assert_eq!(
            a.try_add(&b),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
        assert!(a.try_mul(&b).is_err());
        assert!(a.eval(&[CycQ::one()]).is_err());
    }

    #[test]
    fn evaluation() {
        let one = ParamPoly::one(3);
        let pt = vec![CycQ::from_int(5), CycQ::zeta(), CycQ::from_int(-2)];
        assert_eq!(one.eval(&pt).unwrap(), CycQ::one());
        assert_eq!(ParamPoly::var(3, 0).eval(&pt).unwrap(), CycQ::from_int(5));
        let p = &(&ParamPoly::var(3, 1) * &ParamPoly::var(3, 2)) + &ParamPoly::var(3, 0);
        // z * (-2) + 5
        assert_eq!(
            p.eval(&pt).unwrap(),
            CycQ::new(rational(5, 1), rational(-2, 1))
        );
    }

    #[test]
    fn partial_evaluation() {
        let a = ParamPoly::var(2, 0);
        let b = ParamPoly::var(2, 1);
        let p = &(&a * &b) + &(&a * &a);
        let q = p.partial_eval(&[Some(CycQ::from_int(2)), None]).unwrap();
        let expected = &b.scale(&CycQ::from_int(2)) + &ParamPoly::constant(2, CycQ::from_int(4));
        assert_eq!(q, expected);
    }

    #[test]
    fn text_and_json() {
        let p = &ParamPoly::var(2, 0).pow(2)
            + &ParamPoly::constant(2, CycQ::new(rational(1, 2), rational(-1, 1)));
        assert_eq!(p.to_text(&names(2)), "(1/2 - 1*z) + (1) * p0^2");
        let json = p.to_json_terms();
        assert_eq!(ParamPoly::from_json_terms(2, &json).unwrap(), p);
        assert_eq!(ParamPoly::zero(2).to_text(&names(2)), "0");
    }

    #[test]
    fn restriction_drops_masked_variables() {
        let a = ParamPoly::var(2, 0);
        let b = ParamPoly::var(2, 1);
        let p = &(&a * &b) + &a;
        assert_eq!(p.restrict_to_zero(&[false, true]), a);
    }
}
