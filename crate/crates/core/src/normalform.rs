//! Distinguished Poincaré–Dulac normal form of a system with concrete
//! parameter values.
//!
//! The substitution `x = y + h(y)` brings `x' = Zx + F(x)` to
//! `y' = Zy + G(y)` with `G_m = y_m Y_m(y1 y2 y3)`. Writing both sides of
//! `(I + Dh)(Zy + G) = Z(y + h) + F(y + h)` at a monomial `y^a` of
//! component `m` gives the homological equation
//!
//! ```text
//! ((a, kappa) - kappa_m) h_m^a + G_m^a = [F(y + h) - Dh G]_m^a
//! ```
//!
//! whose right-hand side at degree `d` only involves `h` and `G` of lower
//! degree. Resonant monomials `(k,k,k) + e_m` go to `G`, all others to `h`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclotomic::{CycQ, Rational};
use crate::error::{Error, Result};
use crate::polyring::{Mono, PhasePoly};
use crate::sysspec::SystemSpec;

/// Default truncation degree; resonant levels `1..=7`.
pub const DEFAULT_ORDER: u32 = 22;

/// Resonant coefficients `Y_1^(k+1,k,k)`, `Y_2^(k,k+1,k)`, `Y_3^(k,k,k+1)`
/// for `k = 1..=K`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResonantSeries {
    pub y1: Vec<CycQ>,
    pub y2: Vec<CycQ>,
    pub y3: Vec<CycQ>,
}

impl ResonantSeries {
    pub fn zero(levels: usize) -> Self {
        ResonantSeries {
            y1: vec![CycQ::zero(); levels],
            y2: vec![CycQ::zero(); levels],
            y3: vec![CycQ::zero(); levels],
        }
    }

    pub fn levels(&self) -> usize {
        self.y1.len()
    }

    pub fn component(&self, m: usize) -> &[CycQ] {
        match m {
            0 => &self.y1,
            1 => &self.y2,
            _ => &self.y3,
        }
    }

    fn component_mut(&mut self, m: usize) -> &mut Vec<CycQ> {
        match m {
            0 => &mut self.y1,
            1 => &mut self.y2,
            _ => &mut self.y3,
        }
    }

    /// Every resonant coefficient vanishes: the truncated normal form is linear.
    pub fn is_linear(&self) -> bool {
        (0..3).all(|m| self.component(m).iter().all(CycQ::is_zero))
    }

    /// Indices `m` (0-based) with `Y_m` identically zero through the computed order.
    pub fn vanishing_components(&self) -> Vec<usize> {
        (0..3)
            .filter(|&m| self.component(m).iter().all(CycQ::is_zero))
            .collect()
    }

    /// 1-based level of the first nonzero coefficient of `Y_1 + Y_2 + Y_3`.
    pub fn first_nonzero_sum_level(&self) -> Option<usize> {
        integrability_residual(self)
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| i + 1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let text = |v: &[CycQ]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        let sum = integrability_residual(self);
        let report = NormalFormJson {
            resonant_order: self.levels(),
            y1: text(&self.y1),
            y2: text(&self.y2),
            y3: text(&self.y3),
            linear_through_order: self.is_linear(),
            integrable_through_order: sum.iter().all(CycQ::is_zero),
            sum: text(&sum),
        };
        serde_json::to_value(report).expect("plain data serializes")
    }
}

#[derive(Serialize)]
struct NormalFormJson {
    resonant_order: usize,
    #[serde(rename = "Y1")]
    y1: Vec<String>,
    #[serde(rename = "Y2")]
    y2: Vec<String>,
    #[serde(rename = "Y3")]
    y3: Vec<String>,
    sum: Vec<String>,
    linear_through_order: bool,
    integrable_through_order: bool,
}

/// The nonlinear part `h` of the distinguished normalizing transformation.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizingMap {
    pub h: [PhasePoly<CycQ>; 3],
}

impl NormalizingMap {
    /// Resonant monomials found in `h`; empty for a distinguished normalization.
    pub fn resonant_terms(&self) -> Vec<(usize, Mono)> {
        let mut out = Vec::new();
        for (m, hm) in self.h.iter().enumerate() {
            for (mono, _) in hm.terms() {
                if is_resonant(mono.0, m + 1) {
                    out.push((m, *mono));
                }
            }
        }
        out
    }
}

/// `(a, kappa) - kappa_m` for `kappa = (1, z, z^2)` and `m` in `1..=3`.
pub fn divisor(alpha: [u32; 3], m: usize) -> CycQ {
    let mut k = [alpha[0] as i64, alpha[1] as i64, alpha[2] as i64];
    k[m - 1] -= 1;
    CycQ::eval_divisor(k[0], k[1], k[2])
}

/// `alpha = (k,k,k) + e_m` for some `k >= 1`.
pub fn is_resonant(alpha: [u32; 3], m: usize) -> bool {
    let mut k = alpha;
    if k[m - 1] == 0 {
        return false;
    }
    k[m - 1] -= 1;
    let pattern = k[0] == k[1] && k[1] == k[2] && k[0] >= 1;
    debug_assert_eq!(
        pattern,
        alpha.iter().sum::<u32>() >= 2 && divisor(alpha, m).is_zero(),
        "resonance pattern disagrees with the divisor at {alpha:?}, m = {m}"
    );
    pattern
}

/// `(Y_1 + Y_2 + Y_3)` level by level.
pub fn integrability_residual(rs: &ResonantSeries) -> Vec<CycQ> {
    (0..rs.levels())
        .map(|k| &(&rs.y1[k] + &rs.y2[k]) + &rs.y3[k])
        .collect()
}

type Homogeneous = HashMap<Mono, CycQ>;

/// A homogeneous part written over one common denominator:
/// `(re + ze z) / den` for each monomial. Convolutions in this form need no
/// gcd per product; coefficients are reduced once when converting back.
#[derive(Clone, Debug, Default)]
struct IntPart {
    den: BigInt,
    terms: Vec<(Mono, BigInt, BigInt)>,
}

impl IntPart {
    fn from_part(part: &Homogeneous) -> Self {
        let mut den = BigInt::one();
        for c in part.values() {
            den = den.lcm(c.re().denom()).lcm(c.ze().denom());
        }
        let scale = |r: &Rational| r.numer() * (&den / r.denom());
        let mut terms: Vec<(Mono, BigInt, BigInt)> = part
            .iter()
            .map(|(m, c)| (*m, scale(c.re()), scale(c.ze())))
            .collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        IntPart { den, terms }
    }
}

/// `sum_j left[j] * right[j]`, each pair a product of homogeneous parts.
fn convolve(pairs: &[(&IntPart, &IntPart)]) -> Homogeneous {
    let mut den = BigInt::one();
    for (l, r) in pairs {
        if !l.terms.is_empty() && !r.terms.is_empty() {
            den = den.lcm(&(&l.den * &r.den));
        }
    }
    let mut acc: HashMap<Mono, (BigInt, BigInt)> = HashMap::new();
    for (l, r) in pairs {
        if l.terms.is_empty() || r.terms.is_empty() {
            continue;
        }
        let f = &den / (&l.den * &r.den);
        for (ml, a, b) in &l.terms {
            let (a, b) = (a * &f, b * &f);
            let ab = &a + &b;
            for (mr, c, d) in &r.terms {
                // (a + b z)(c + d z) = (ac - bd) + ((a + b)(c + d) - ac - 2bd) z
                let ac = &a * c;
                let bd = &b * d;
                let cross = &ab * (c + d);
                let e = acc.entry(ml.mul(mr)).or_default();
                e.0 += &ac - &bd;
                e.1 += cross - ac - &bd - bd;
            }
        }
    }
    acc.into_iter()
        .filter(|(_, (re, ze))| !re.is_zero() || !ze.is_zero())
        .map(|(m, (re, ze))| {
            let c = CycQ::new(
                Rational::new(re, den.clone()),
                Rational::new(ze, den.clone()),
            );
            (m, c)
        })
        .collect()
}

/// A power product `x^beta` of `x = y + h(y)`, built as `x^(beta - e_var) * x_var`.
struct Node {
    degree: u32,
    parent: usize,
    var: usize,
    /// Homogeneous parts by degree.
    parts: Vec<Homogeneous>,
    /// The same parts over common denominators, filled as they are produced.
    int_parts: Vec<IntPart>,
}

struct Powers {
    nodes: Vec<Node>,
    index: HashMap<[u32; 3], usize>,
}

impl Powers {
    fn new(monos: &[Mono], max_degree: u32) -> Self {
        let mut powers = Powers {
            nodes: Vec::new(),
            index: HashMap::new(),
        };
        for i in 0..3 {
            let mut e = [0; 3];
            e[i] = 1;
            let mut parts = vec![Homogeneous::new(); max_degree as usize + 1];
            parts[1].insert(Mono(e), CycQ::one());
            let mut int_parts = vec![IntPart::default(); max_degree as usize + 1];
            int_parts[1] = IntPart::from_part(&parts[1]);
            powers.index.insert(e, i);
            powers.nodes.push(Node {
                degree: 1,
                parent: usize::MAX,
                var: i,
                parts,
                int_parts,
            });
        }
        let mut monos: Vec<Mono> = monos.to_vec();
        monos.sort();
        for m in monos {
            powers.insert(m.0, max_degree);
        }
        // parents always get smaller ids than their children
        powers
    }

    fn insert(&mut self, beta: [u32; 3], max_degree: u32) -> usize {
        if let Some(&i) = self.index.get(&beta) {
            return i;
        }
        let var = (0..3).find(|&i| beta[i] > 0).expect("nonconstant monomial");
        let mut parent = beta;
        parent[var] -= 1;
        let parent = self.insert(parent, max_degree);
        let id = self.nodes.len();
        self.nodes.push(Node {
            degree: beta.iter().sum(),
            parent,
            var,
            parts: vec![Homogeneous::new(); max_degree as usize + 1],
            int_parts: vec![IntPart::default(); max_degree as usize + 1],
        });
        self.index.insert(beta, id);
        id
    }

    /// Fills the degree-`d` part of every product node from lower-degree data.
    fn extend(&mut self, d: u32) {
        for id in 3..self.nodes.len() {
            let node = &self.nodes[id];
            if node.degree > d {
                continue;
            }
            let (parent, var, deg) = (node.parent, node.var, node.degree);
            let pairs: Vec<(&IntPart, &IntPart)> = (1..=(d + 1 - deg))
                .map(|j| {
                    (
                        &self.nodes[parent].int_parts[(d - j) as usize],
                        &self.nodes[var].int_parts[j as usize],
                    )
                })
                .collect();
            let out = convolve(&pairs);
            self.set_part(id, d, out);
        }
    }

    fn set_part(&mut self, id: usize, d: u32, part: Homogeneous) {
        self.nodes[id].int_parts[d as usize] = IntPart::from_part(&part);
        self.nodes[id].parts[d as usize] = part;
    }

    fn part(&self, beta: [u32; 3], d: u32) -> &Homogeneous {
        &self.nodes[self.index[&beta]].parts[d as usize]
    }
}

/// Computes the distinguished normal form through degree `order`.
pub fn compute_normal_form(
    spec: &SystemSpec,
    order: u32,
) -> Result<(ResonantSeries, NormalizingMap)> {
    if order < 4 {
        return Err(Error::InvalidArgument(format!(
            "normal form order {order} contains no resonant level (need at least 4)"
        )));
    }
    let point = spec.point()?;
    let levels = ((order - 1) / 3) as usize;

    // (component, monomial, coefficient) of F
    let field: Vec<(usize, Mono, CycQ)> = spec
        .field_terms()
        .into_iter()
        .filter(|t| !point[t.param].is_zero())
        .map(|t| (t.component, t.mono, &t.factor * &point[t.param]))
        .collect();
    let monos: Vec<Mono> = field.iter().map(|t| t.1).collect();
    let mut powers = Powers::new(&monos, order);

    let mut series = ResonantSeries::zero(levels);
    let mut h: [Vec<Homogeneous>; 3] =
        std::array::from_fn(|_| vec![Homogeneous::new(); order as usize + 1]);

    for d in 2..=order {
        powers.extend(d);
        for m in 0..3 {
            let mut rhs = Homogeneous::new();
            for (comp, mono, c) in &field {
                if *comp != m || mono.degree() > d {
                    continue;
                }
                for (mo, v) in powers.part(mono.0, d) {
                    *rhs.entry(*mo).or_insert_with(CycQ::zero) += &(c * v);
                }
            }
            // Dh G: y_i dh_m/dy_i picks up a_i, G_i = y_i sum_k Y_i^k (y1 y2 y3)^k
            for k in 1..=levels as u32 {
                if d < 3 * k + 2 {
                    break;
                }
                let ys = [
                    &series.y1[k as usize - 1],
                    &series.y2[k as usize - 1],
                    &series.y3[k as usize - 1],
                ];
                if ys.iter().all(|y| y.is_zero()) {
                    continue;
                }
                for (mo, c) in &h[m][(d - 3 * k) as usize] {
                    let mut w = CycQ::zero();
                    for i in 0..3 {
                        w += &ys[i].scale_int(mo.0[i] as i64);
                    }
                    *rhs.entry(mo.mul(&Mono([k, k, k])))
                        .or_insert_with(CycQ::zero) -= &(c * &w);
                }
            }

            let mut entries: Vec<(Mono, CycQ)> =
                rhs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            for (mo, r) in entries {
                if is_resonant(mo.0, m + 1) {
                    let k = mo.0[(m + 1) % 3] as usize;
                    if k <= levels {
                        series.component_mut(m)[k - 1] = r;
                    }
                    continue;
                }
                let div = divisor(mo.0, m + 1);
                debug_assert!(div.norm() >= One::one(), "small divisor at {mo:?}");
                let coeff = &r * &div.inv()?;
                h[m][d as usize].insert(mo, coeff);
            }
        }
        for m in 0..3 {
            powers.set_part(m, d, h[m][d as usize].clone());
        }
    }

    let map = NormalizingMap {
        h: std::array::from_fn(|m| {
            let mut p = PhasePoly::zero(order);
            for part in &h[m] {
                for (mo, c) in part {
                    p.add_term(*mo, c.clone());
                }
            }
            p
        }),
    };
    Ok((series, map))
}

/// Substitutes `x = y + h(y)` into the system and compares with
/// `(I + Dh)(Zy + G)` through degree `order`, using plain truncated
/// polynomial products. Returns the nonzero differences.
pub fn reconstruction_residual(
    spec: &SystemSpec,
    series: &ResonantSeries,
    map: &NormalizingMap,
    order: u32,
) -> Result<Vec<(usize, Mono, CycQ)>> {
    let point = spec.point()?;
    let kappa = [CycQ::one(), CycQ::zeta(), CycQ::zeta_pow(2)];
    let var = |i: usize| {
        let mut e = [0; 3];
        e[i] = 1;
        Mono(e)
    };
    let h: Vec<PhasePoly<CycQ>> = map.h.iter().map(|p| p.truncate(order)).collect();
    let x: Vec<PhasePoly<CycQ>> = (0..3)
        .map(|i| PhasePoly::monomial(order, var(i), CycQ::one()).add(&h[i]))
        .collect();

    // normal form vector field Zy + G
    let nf: [PhasePoly<CycQ>; 3] = std::array::from_fn(|m| {
        let mut p = PhasePoly::monomial(order, var(m), kappa[m].clone());
        for (k, y) in series.component(m).iter().enumerate() {
            p.add_term(Mono::resonant(k as u32 + 1, m), y.clone());
        }
        p
    });

    let mut power_cache: HashMap<[u32; 3], PhasePoly<CycQ>> = HashMap::new();
    let mut out = Vec::new();
    for m in 0..3 {
        // (I + Dh)(Zy + G), component m
        let lhs = nf[m].add(&h[m].apply_field(&nf));
        let mut rhs = x[m].scale(&kappa[m]);
        for t in spec.field_terms() {
            if t.component != m || point[t.param].is_zero() {
                continue;
            }
            let pw = power_cache
                .entry(t.mono.0)
                .or_insert_with(|| {
                    let mut acc = PhasePoly::monomial(order, Mono([0, 0, 0]), CycQ::one());
                    for (i, xi) in x.iter().enumerate() {
                        for _ in 0..t.mono.0[i] {
                            acc = acc.mul(xi);
                        }
                    }
                    acc
                })
                .clone();
            rhs = rhs.add(&pw.scale(&(&t.factor * &point[t.param])));
        }
        for (mo, c) in lhs.sub(&rhs).terms() {
            out.push((m, *mo, c.clone()));
        }
    }
    Ok(out)
}

/// Outcome of the exhaustive small-divisor check.
#[derive(Clone, Debug, Serialize)]
pub struct DivisorReport {
    pub max_degree: u32,
    pub checked: usize,
    /// Nonresonant pairs whose divisor has norm below 1.
    pub violations: Vec<([u32; 3], usize)>,
    /// Which of the unit classes `±1`, `±z`, `±z^2` occur as divisors.
    pub unit_classes: [bool; 3],
}

impl DivisorReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.unit_classes.iter().all(|&b| b)
    }
}

/// Checks `|(a, kappa) - kappa_m| >= 1` for every nonresonant `(a, m)` with
/// `2 <= |a| <= max_degree`, and records which units attain the bound.
pub fn check_divisors(max_degree: u32) -> DivisorReport {
    let one: num_rational::BigRational = One::one();
    let units = [CycQ::one(), CycQ::zeta(), CycQ::zeta_pow(2)];
    let mut report = DivisorReport {
        max_degree,
        checked: 0,
        violations: Vec::new(),
        unit_classes: [false; 3],
    };
    for total in 2..=max_degree {
        for a in 0..=total {
            for b in 0..=(total - a) {
                let alpha = [a, b, total - a - b];
                for m in 1..=3 {
                    let div = divisor(alpha, m);
                    if div.is_zero() {
                        continue;
                    }
                    report.checked += 1;
                    let n = div.norm();
                    if n < one {
                        report.violations.push((alpha, m));
                    } else if n == one {
                        for (slot, u) in units.iter().enumerate() {
                            if &div == u || div == -u {
                                report.unit_classes[slot] = true;
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::rational;

    fn quadratic_point(values: &[i64]) -> SystemSpec {
        let point: Vec<CycQ> = values.iter().map(|&v| CycQ::from_int(v)).collect();
        SystemSpec::quadratic_family().with_values(&point).unwrap()
    }

    #[test]
    fn resonance_pattern() {
        assert!(is_resonant([2, 1, 1], 1));
        assert!(!is_resonant([2, 1, 1], 2));
        assert!(is_resonant([3, 3, 4], 3));
        assert!(!is_resonant([1, 0, 0], 1));
    }

    #[test]
    fn resonance_matches_divisor() {
        for total in 2..=12u32 {
            for a in 0..=total {
                for b in 0..=(total - a) {
                    let alpha = [a, b, total - a - b];
                    for m in 1..=3 {
                        assert_eq!(
                            is_resonant(alpha, m),
                            divisor(alpha, m).is_zero(),
                            "{alpha:?} {m}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn zero_system_has_trivial_form() {
        let spec = quadratic_point(&[0; 9]);
        let (rs, map) = compute_normal_form(&spec, 10).unwrap();
        assert_eq!(rs.levels(), 3);
        assert!(rs.is_linear());
        assert!(map.h.iter().all(PhasePoly::is_zero));
    }

    #[test]
    fn rejects_low_order_and_missing_values() {
        let spec = quadratic_point(&[0; 9]);
        assert!(compute_normal_form(&spec, 3).is_err());
        assert!(matches!(
            compute_normal_form(&SystemSpec::quadratic_family(), 10),
            Err(Error::MissingValues(_))
        ));
    }

    #[test]
    fn generic_point_reconstructs() {
        let spec = quadratic_point(&[1, -2, 3, 1, 0, 2, -1, 0, 1]);
        let (rs, map) = compute_normal_form(&spec, 10).unwrap();
        assert!(map.resonant_terms().is_empty());
        assert!(!rs.is_linear());
        let residual = reconstruction_residual(&spec, &rs, &map, 10).unwrap();
        assert!(
            residual.is_empty(),
            "{:?}",
            &residual[..residual.len().min(4)]
        );
    }

    #[test]
    fn corrupted_coefficient_breaks_reconstruction() {
        let spec = quadratic_point(&[1, -2, 3, 1, 0, 2, -1, 0, 1]);
        let (mut rs, map) = compute_normal_form(&spec, 7).unwrap();
        rs.y2[0] += &CycQ::from_rational(rational(1, 2));
        assert!(!reconstruction_residual(&spec, &rs, &map, 7)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn divisor_bound_small_range() {
        let report = check_divisors(8);
        assert!(report.passed(), "{report:?}");
    }
}
