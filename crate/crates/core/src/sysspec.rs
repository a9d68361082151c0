//! The system family
//!
//! ```text
//! x1' = x1 + sum_S a[p,q,r] x1^(p+1) x2^q x3^r
//! x2' = z  (x2 + sum_S b[r,p,q] x1^r x2^(p+1) x3^q)
//! x3' = z^2 (x3 + sum_S c[q,r,p] x1^q x2^r x3^(p+1))
//! ```
//!
//! indexed by an ordered set `S` of triples `(p, q, r)`. Parameters are laid
//! out as the `a` block (indices `0..l`), then the `b` block (`l..2l`), then
//! the `c` block (`2l..3l`), each block following the order of `S`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycQ;
use crate::error::{Error, Result};
use crate::polyring::{ExpVec, Mono};

/// A member `(p, q, r)` of `S`: `p >= -1`, `q, r >= 0`, `p + q + r >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct STriple {
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

impl STriple {
    pub fn new(p: i64, q: i64, r: i64) -> Result<Self> {
        let t = STriple { p, q, r };
        if p < -1 || q < 0 || r < 0 {
            return Err(Error::Validation(format!(
                "triple {t} out of range (need p >= -1, q >= 0, r >= 0)"
            )));
        }
        if p + q + r < 1 {
            return Err(Error::Validation(format!(
                "triple {t} violates p + q + r >= 1"
            )));
        }
        Ok(t)
    }

    pub fn degree(&self) -> i64 {
        self.p + self.q + self.r
    }
}

impl fmt::Display for STriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.p, self.q, self.r)
    }
}

/// `L(nu)`
pub type LValue = [i64; 3];

/// One monomial of the nonlinear part of the vector field:
/// `factor * param * x^mono` in component `component`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldTerm {
    pub component: usize,
    pub mono: Mono,
    pub param: usize,
    pub factor: CycQ,
}

/// An ordered set `S`, its parameter naming, and optional parameter values.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    triples: Vec<STriple>,
    names: Vec<String>,
    values: Vec<Option<CycQ>>,
}

#[derive(Deserialize)]
struct SpecFile {
    #[serde(rename = "S")]
    s: Vec<Vec<i64>>,
    #[serde(default)]
    values: Option<BTreeMap<String, String>>,
}

impl SystemSpec {
    pub fn new(triples: Vec<STriple>) -> Result<Self> {
        if triples.is_empty() {
            return Err(Error::Validation("S must not be empty".into()));
        }
        let mut seen = HashSet::new();
        for t in &triples {
            STriple::new(t.p, t.q, t.r)?;
            if !seen.insert(*t) {
                return Err(Error::Validation(format!("duplicate triple {t} in S")));
            }
        }
        let names = triples
            .iter()
            .map(|t| format!("a[{},{},{}]", t.p, t.q, t.r))
            .chain(
                triples
                    .iter()
                    .map(|t| format!("b[{},{},{}]", t.r, t.p, t.q)),
            )
            .chain(
                triples
                    .iter()
                    .map(|t| format!("c[{},{},{}]", t.q, t.r, t.p)),
            )
            .collect::<Vec<_>>();
        let values = vec![None; names.len()];
        Ok(SystemSpec {
            triples,
            names,
            values,
        })
    }

    pub fn from_triples(triples: &[(i64, i64, i64)]) -> Result<Self> {
        let ts = triples
            .iter()
            .map(|&(p, q, r)| STriple::new(p, q, r))
            .collect::<Result<Vec<_>>>()?;
        SystemSpec::new(ts)
    }

    /// `S = {(1,0,0), (0,1,0), (0,0,1)}`: the quadratic family.
    pub fn quadratic_family() -> Self {
        SystemSpec::from_triples(&[(1, 0, 0), (0, 1, 0), (0, 0, 1)]).expect("valid set")
    }

    /// `S1 = {(2,0,0), (1,0,0), (0,1,0), (0,0,1)}`
    pub fn s1() -> Self {
        SystemSpec::from_triples(&[(2, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]).expect("valid set")
    }

    /// `S2`, equal to the quadratic family.
    pub fn s2() -> Self {
        SystemSpec::quadratic_family()
    }

    /// `S3 = {(1,0,0), (0,0,1)}`
    pub fn s3() -> Self {
        SystemSpec::from_triples(&[(1, 0, 0), (0, 0, 1)]).expect("valid set")
    }

    /// Parses the JSON spec file format
    /// `{"S": [[p,q,r], ...], "values": {"a[1,0,0]": "1/2", ...}}`.
    pub fn parse(text: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut triples = Vec::with_capacity(file.s.len());
        for (i, t) in file.s.iter().enumerate() {
            if t.len() != 3 {
                return Err(Error::Validation(format!(
                    "entry {i} of S has {} components, expected 3",
                    t.len()
                )));
            }
            triples.push(STriple::new(t[0], t[1], t[2])?);
        }
        let mut spec = SystemSpec::new(triples)?;
        if let Some(values) = file.values {
            for (name, value) in values {
                let index = spec.param_index(&name)?;
                let v: CycQ = value.parse().map_err(|e| match e {
                    Error::Parse { message, .. } => {
                        Error::Validation(format!("value of {name}: {message}"))
                    }
                    other => other,
                })?;
                spec.values[index] = Some(v);
            }
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let s: Vec<[i64; 3]> = self.triples.iter().map(|t| [t.p, t.q, t.r]).collect();
        let mut obj = serde_json::Map::new();
        obj.insert("S".into(), serde_json::json!(s));
        if self.values.iter().any(Option::is_some) {
            let mut vals = serde_json::Map::new();
            for (name, v) in self.names.iter().zip(&self.values) {
                if let Some(v) = v {
                    vals.insert(name.clone(), serde_json::Value::String(v.to_string()));
                }
            }
            obj.insert("values".into(), serde_json::Value::Object(vals));
        }
        serde_json::Value::Object(obj)
    }

    /// `l = |S|`
    pub fn l(&self) -> usize {
        self.triples.len()
    }

    /// `3 l`
    pub fn nparams(&self) -> usize {
        3 * self.triples.len()
    }

    pub fn triples(&self) -> &[STriple] {
        &self.triples
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Which block (0 = a, 1 = b, 2 = c) parameter `index` belongs to.
    pub fn block(&self, index: usize) -> usize {
        index / self.l()
    }

    pub fn triple_of(&self, index: usize) -> STriple {
        self.triples[index % self.l()]
    }

    /// Contribution of parameter `index` to `L`: `(p,q,r)`, `(r,p,q)` or
    /// `(q,r,p)` depending on the block.
    pub fn shift(&self, index: usize) -> LValue {
        let t = self.triple_of(index);
        match self.block(index) {
            0 => [t.p, t.q, t.r],
            1 => [t.r, t.p, t.q],
            _ => [t.q, t.r, t.p],
        }
    }

    /// The map `L(nu) = sum_j nu_j * shift(j)`.
    pub fn l_map(&self, nu: &ExpVec) -> Result<LValue> {
        if nu.len() != self.nparams() {
            return Err(Error::DimensionMismatch {
                expected: self.nparams(),
                found: nu.len(),
            });
        }
        Ok(self.l_map_unchecked(nu.as_slice()))
    }

    pub(crate) fn l_map_unchecked(&self, nu: &[u16]) -> LValue {
        let mut out = [0i64; 3];
        for (j, &e) in nu.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let s = self.shift(j);
            for i in 0..3 {
                out[i] += e as i64 * s[i];
            }
        }
        out
    }

    /// Resolves a parameter name: canonical `a[p,q,r]` (spaces allowed), or a
    /// digit alias such as `a100` when every index is a single digit.
    pub fn param_index(&self, name: &str) -> Result<usize> {
        let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(i) = self.names.iter().position(|n| *n == compact) {
            return Ok(i);
        }
        let bytes = compact.as_bytes();
        if bytes.len() == 4 && bytes[1..].iter().all(u8::is_ascii_digit) {
            let canonical = format!(
                "{}[{},{},{}]",
                bytes[0] as char, bytes[1] as char, bytes[2] as char, bytes[3] as char
            );
            if let Some(i) = self.names.iter().position(|n| *n == canonical) {
                return Ok(i);
            }
        }
        Err(Error::Validation(format!("unknown parameter `{name}`")))
    }

    pub fn values(&self) -> &[Option<CycQ>] {
        &self.values
    }

    pub fn has_values(&self) -> bool {
        self.values.iter().any(Option::is_some)
    }

    pub fn set_value(&mut self, index: usize, v: CycQ) {
        self.values[index] = Some(v);
    }

    pub fn with_values(mut self, point: &[CycQ]) -> Result<Self> {
        if point.len() != self.nparams() {
            return Err(Error::DimensionMismatch {
                expected: self.nparams(),
                found: point.len(),
            });
        }
        self.values = point.iter().cloned().map(Some).collect();
        Ok(self)
    }

    /// The full concrete parameter point, or an error naming missing parameters.
    pub fn point(&self) -> Result<Vec<CycQ>> {
        let missing: Vec<&str> = self
            .names
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| v.is_none())
            .map(|(n, _)| n.as_str())
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingValues(missing.join(", ")));
        }
        Ok(self.values.iter().map(|v| v.clone().unwrap()).collect())
    }

    /// Nonlinear monomials of the vector field, one per parameter, with the
    /// `1`, `z`, `z^2` prefactor of the component folded into `factor`.
    pub fn field_terms(&self) -> Vec<FieldTerm> {
        (0..self.nparams())
            .map(|j| {
                let block = self.block(j);
                let s = self.shift(j);
                // x^(shift + e_block)
                let mut e = [s[0], s[1], s[2]];
                e[block] += 1;
                FieldTerm {
                    component: block,
                    mono: Mono([e[0] as u32, e[1] as u32, e[2] as u32]),
                    param: j,
                    factor: CycQ::zeta_pow(block as i64),
                }
            })
            .collect()
    }

    /// Largest total degree `p + q + r + 1` of a nonlinear monomial.
    pub fn field_degree(&self) -> u32 {
        self.triples
            .iter()
            .map(|t| t.degree() + 1)
            .max()
            .unwrap_or(1) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_s3() {
        let spec = SystemSpec::parse(r#"{"S": [[1,0,0],[0,0,1]]}"#).unwrap();
        assert_eq!(spec.l(), 2);
        assert_eq!(spec.nparams(), 6);
        assert_eq!(spec, SystemSpec::s3());
    }

    #[test]
    fn parses_s1() {
        let spec = SystemSpec::parse(r#"{"S": [[2,0,0],[1,0,0],[0,1,0],[0,0,1]]}"#).unwrap();
        assert_eq!(spec.l(), 4);
        assert_eq!(spec.nparams(), 12);
    }

    #[test]
    fn rejects_bad_triples() {
        let err = SystemSpec::parse(r#"{"S": [[0,0,0]]}"#).unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("[0,0,0]")));
        assert!(SystemSpec::parse(r#"{"S": [[-2,3,0]]}"#).is_err());
        assert!(SystemSpec::parse(r#"{"S": [[1,-1,1]]}"#).is_err());
        assert!(SystemSpec::parse(r#"{"S": [[1,0,0],[1,0,0]]}"#).is_err());
        assert!(SystemSpec::parse(r#"{"S": [[1,0]]}"#).is_err());
        assert!(SystemSpec::parse(r#"{"S": []}"#).is_err());
        // p = -1 is allowed
        assert!(SystemSpec::parse(r#"{"S": [[-1,1,1]]}"#).is_ok());
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = SystemSpec::parse("{\n  \"S\": [[1,0,0],\n}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn quadratic_layout() {
        let q = SystemSpec::quadratic_family();
        assert_eq!(q.nparams(), 9);
        let names: Vec<&str> = q.names().iter().map(String::as_str).collect();
        assert_eq!(
            names,
            [
                "a[1,0,0]", "a[0,1,0]", "a[0,0,1]", "b[0,1,0]", "b[0,0,1]", "b[1,0,0]", "c[0,0,1]",
                "c[1,0,0]", "c[0,1,0]"
            ]
        );
        assert_eq!(q.param_index("b100").unwrap(), 5);
        assert_eq!(q.param_index("b[1, 0, 0]").unwrap(), 5);
        assert!(q.param_index("d100").is_err());
    }

    #[test]
    fn l_map_values() {
        let q = SystemSpec::quadratic_family();
        assert_eq!(q.l_map(&ExpVec::zeros(9)).unwrap(), [0, 0, 0]);
        // the b[1,0,0] slot (1-based index 6)
        assert_eq!(q.l_map(&ExpVec::unit(9, 5)).unwrap(), [1, 0, 0]);
        assert!(q.l_map(&ExpVec::zeros(4)).is_err());
    }

    #[test]
    fn values_and_aliases() {
        let spec = SystemSpec::parse(
            r#"{"S": [[1,0,0],[0,1,0],[0,0,1]], "values": {"a100": "1/2", "b[0,1,0]": "1 + 1*z"}}"#,
        )
        .unwrap();
        assert_eq!(spec.values()[0], Some("1/2".parse().unwrap()));
        assert_eq!(spec.values()[3], Some("1+z".parse().unwrap()));
        assert!(matches!(spec.point(), Err(Error::MissingValues(_))));
        let back = SystemSpec::parse(&spec.to_json().to_string()).unwrap();
        assert_eq!(back, spec);
        assert!(SystemSpec::parse(r#"{"S": [[1,0,0]], "values": {"a[1,0,0]": "x"}}"#).is_err());
    }

    #[test]
    fn field_terms_of_quadratic_family() {
        let q = SystemSpec::quadratic_family();
        let terms = q.field_terms();
        // b[0,1,0] multiplies x2^2 in the second component
        assert_eq!(terms[3].component, 1);
        assert_eq!(terms[3].mono, Mono([0, 2, 0]));
        assert_eq!(terms[3].factor, CycQ::zeta());
        // c[1,0,0] multiplies x1 x3 in the third component
        assert_eq!(terms[7].mono, Mono([1, 0, 1]));
        assert_eq!(q.field_degree(), 2);
    }
}
