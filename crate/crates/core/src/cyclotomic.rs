//! Exact arithmetic in the cyclotomic field Q(z), z^2 + z + 1 = 0.
//!
//! Elements are stored on the basis {1, z}; `a + b z` is the pair `(a, b)`.
//! Products are reduced eagerly with `z^2 = -1 - z`, so the representation is
//! unique and equality is componentwise.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds the rational `num / den`. Panics if `den == 0`.
pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` (optional sign, optional surrounding whitespace).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::parse(format!("invalid integer `{num}` in rational `{s}`")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::parse(format!("invalid integer `{den}` in rational `{s}`")))?;
    if den.is_zero() {
        return Err(Error::parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(num, den))
}

/// An element `re + ze * z` of Q(z).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CycQ {
    re: Rational,
    ze: Rational,
}

impl CycQ {
    pub fn new(re: Rational, ze: Rational) -> Self {
        CycQ { re, ze }
    }

    pub fn zero() -> Self {
        CycQ::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        CycQ::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        CycQ::new(Rational::from_integer(n.into()), Rational::zero())
    }

    pub fn from_rational(r: Rational) -> Self {
        CycQ::new(r, Rational::zero())
    }

    /// The primitive cube root of unity `z`.
    pub fn zeta() -> Self {
        CycQ::new(Rational::zero(), Rational::one())
    }

    /// `z^n` for any integer `n`, using `z^3 = 1`.
    pub fn zeta_pow(n: i64) -> Self {
        match n.rem_euclid(3) {
            0 => CycQ::one(),
            1 => CycQ::zeta(),
            _ => CycQ::new(-Rational::one(), -Rational::one()),
        }
    }

    /// `k1 + k2 z + k3 z^2 = (k1 - k3) + (k2 - k3) z`.
    pub fn eval_divisor(k1: i64, k2: i64, k3: i64) -> Self {
        CycQ::new(
            Rational::from_integer((k1 - k3).into()),
            Rational::from_integer((k2 - k3).into()),
        )
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn ze(&self) -> &Rational {
        &self.ze
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.ze.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.ze.is_zero()
    }

    /// Field norm `N(a + b z) = a^2 - a b + b^2`, the squared complex modulus.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re - &self.re * &self.ze + &self.ze * &self.ze
    }

    /// Complex conjugate `a + b z^2 = (a - b) - b z`.
    pub fn conj(&self) -> Self {
        CycQ::new(&self.re - &self.ze, -&self.ze)
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conj();
        Ok(CycQ::new(c.re / &n, c.ze / n))
    }

    pub fn div(&self, other: &CycQ) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CycQ::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale_int(&self, k: i64) -> Self {
        if k == 0 {
            return CycQ::zero();
        }
        let k = Rational::from_integer(k.into());
        CycQ::new(&self.re * &k, &self.ze * k)
    }

    /// Complex approximation, for display only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let a = self.re.to_f64().unwrap_or(f64::NAN);
        let b = self.ze.to_f64().unwrap_or(f64::NAN);
        (a - 0.5 * b, b * 3f64.sqrt() / 2.0)
    }
}

impl From<i64> for CycQ {
    fn from(n: i64) -> Self {
        CycQ::from_int(n)
    }
}

impl From<Rational> for CycQ {
    fn from(r: Rational) -> Self {
        CycQ::from_rational(r)
    }
}

impl<'a> Add<&'a CycQ> for &'a CycQ {
    type Output = CycQ;
    fn add(self, rhs: &CycQ) -> CycQ {
        CycQ::new(&self.re + &rhs.re, &self.ze + &rhs.ze)
    }
}

impl Add for CycQ {
    type Output = CycQ;
    fn add(mut self, rhs: CycQ) -> CycQ {
        self += &rhs;
        self
    }
}

impl AddAssign<&CycQ> for CycQ {
    fn add_assign(&mut self, rhs: &CycQ) {
        self.re += &rhs.re;
        self.ze += &rhs.ze;
    }
}

impl<'a> Sub<&'a CycQ> for &'a CycQ {
    type Output = CycQ;
    fn sub(self, rhs: &CycQ) -> CycQ {
        CycQ::new(&self.re - &rhs.re, &self.ze - &rhs.ze)
    }
}

impl Sub for CycQ {
    type Output = CycQ;
    fn sub(mut self, rhs: CycQ) -> CycQ {
        self -= &rhs;
        self
    }
}

impl SubAssign<&CycQ> for CycQ {
    fn sub_assign(&mut self, rhs: &CycQ) {
        self.re -= &rhs.re;
        self.ze -= &rhs.ze;
    }
}

impl<'a> Mul<&'a CycQ> for &'a CycQ {
    type Output = CycQ;
    // (a1 + a2 z)(b1 + b2 z) = (a1 b1 - a2 b2) + (a1 b2 + a2 b1 - a2 b2) z
    fn mul(self, rhs: &CycQ) -> CycQ {
        if self.ze.is_zero() {
            return CycQ::new(&self.re * &rhs.re, &self.re * &rhs.ze);
        }
        if rhs.ze.is_zero() {
            return CycQ::new(&self.re * &rhs.re, &self.ze * &rhs.re);
        }
        let a2b2 = &self.ze * &rhs.ze;
        CycQ::new(
            &self.re * &rhs.re - &a2b2,
            &self.re * &rhs.ze + &self.ze * &rhs.re - a2b2,
        )
    }
}

impl Mul for CycQ {
    type Output = CycQ;
    fn mul(self, rhs: CycQ) -> CycQ {
        &self * &rhs
    }
}

impl MulAssign<&CycQ> for CycQ {
    fn mul_assign(&mut self, rhs: &CycQ) {
        *self = &*self * rhs;
    }
}

impl Neg for CycQ {
    type Output = CycQ;
    fn neg(self) -> CycQ {
        CycQ::new(-self.re, -self.ze)
    }
}

impl Neg for &CycQ {
    type Output = CycQ;
    fn neg(self) -> CycQ {
        CycQ::new(-&self.re, -&self.ze)
    }
}

impl fmt::Display for CycQ {
    /// `p/q`, `r/s*z` or `p/q + r/s*z`; negative `z` parts are written with `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.ze.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) => write!(f, "{}*z", format_rational(&self.ze)),
            (false, false) => {
                let sign = if self.ze.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{} {} {}*z",
                    format_rational(&self.re),
                    sign,
                    format_rational(&self.ze.abs())
                )
            }
        }
    }
}

impl fmt::Debug for CycQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycQ({self})")
    }
}

impl FromStr for CycQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::parse("empty field element"));
        }
        // split into signed terms; a sign directly after another operator is
        // part of the next term (e.g. `1+-2*z`)
        let bytes = compact.as_bytes();
        let mut terms = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-')
                && !matches!(bytes[i - 1], b'+' | b'-' | b'*' | b'/')
            {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut out = CycQ::zero();
        for term in terms {
            let (negative, body) = strip_signs(term);
            let (coeff, is_z) = if body == "z" {
                (Rational::one(), true)
            } else if let Some(c) = body.strip_suffix("*z") {
                (parse_rational(c)?, true)
            } else if let Some(c) = body.strip_prefix("z*") {
                (parse_rational(c)?, true)
            } else {
                (parse_rational(body)?, false)
            };
            let coeff = if negative { -coeff } else { coeff };
            if is_z {
                out.ze += coeff;
            } else {
                out.re += coeff;
            }
        }
        Ok(out)
    }
}

fn strip_signs(term: &str) -> (bool, &str) {
    let mut negative = false;
    let mut rest = term;
    while let Some(c) = rest.chars().next() {
        match c {
            '+' => rest = &rest[1..],
            '-' => {
                negative = !negative;
                rest = &rest[1..];
            }
            _ => break,
        }
    }
    (negative, rest)
}
