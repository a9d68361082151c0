use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet};

use super::{check_level, GList};
use crate::cyclotomic::{CycQ, Rational};
use crate::error::{Error, Result};
use crate::polyring::{ExpVec, ParamPoly};
use crate::sysspec::{LValue, SystemSpec};

/// Coefficients `v_(k1,k2,k3)` of `Psi`, indexed by `(k1, k2, k3)`.
///
/// Only indices reachable from `(0,0,0)` by the parameter shifts and with
/// `k1 + k2 + k3 <= 3 * max_level` are stored; every other coefficient is zero.
#[derive(Clone, Debug)]
pub struct VTable {
    pub spec: SystemSpec,
    pub max_level: usize,
    pub entries: BTreeMap<LValue, ParamPoly>,
}

impl VTable {
    pub fn get(&self, index: &LValue) -> Option<&ParamPoly> {
        self.entries.get(index)
    }

    /// Checks `L(nu) = index` for every stored coefficient.
    pub fn check_structure(&self) -> Result<()> {
        for (index, v) in &self.entries {
            for nu in v.support() {
                let l = self.spec.l_map(nu)?;
                if l != *index {
                    return Err(Error::Validation(format!(
                        "v{index:?} contains [{nu:?}] with L = {l:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The value domain the recurrence runs over: symbolic polynomials, or field
/// elements for a fixed parameter point.
trait Values {
    type Value: Clone;
    type Acc;
    fn one(&self) -> Self::Value;
    fn zero(&self) -> Self::Value;
    fn is_zero(&self, v: &Self::Value) -> bool;
    fn new_acc(&self) -> Self::Acc;
    /// `acc += weight * z^block * param_j * v`
    fn accumulate(
        &self,
        acc: &mut Self::Acc,
        param: usize,
        block: usize,
        weight: i64,
        v: &Self::Value,
    );
    fn finish(&self, acc: Self::Acc) -> Self::Value;
    fn finish_scaled(&self, acc: Self::Acc, c: &CycQ) -> Self::Value;
}

/// `weight * z^block * c`, with multiplication by `z` done as a rotation of
/// the coordinates: `z (a + b z) = -b + (a - b) z`.
fn rotate_scale(c: &CycQ, block: usize, weight: i64) -> CycQ {
    let w = Rational::from_integer(weight.into());
    let (a, b) = (c.re() * &w, c.ze() * &w);
    match block {
        0 => CycQ::new(a, b),
        1 => {
            let d = &a - &b;
            CycQ::new(-b, d)
        }
        _ => {
            // z^2 (a + b z) = (b - a) - a z
            let d = &b - &a;
            CycQ::new(d, -a)
        }
    }
}

struct Symbolic(usize);

impl Values for Symbolic {
    type Value = ParamPoly;
    type Acc = HashMap<ExpVec, CycQ>;
    fn one(&self) -> ParamPoly {
        ParamPoly::one(self.0)
    }
    fn zero(&self) -> ParamPoly {
        ParamPoly::zero(self.0)
    }
    fn is_zero(&self, v: &ParamPoly) -> bool {
        v.is_zero()
    }
    fn new_acc(&self) -> Self::Acc {
        HashMap::new()
    }
    fn accumulate(
        &self,
        acc: &mut Self::Acc,
        param: usize,
        block: usize,
        weight: i64,
        v: &ParamPoly,
    ) {
        for (exps, c) in v.terms() {
            let t = rotate_scale(c, block, weight);
            match acc.entry(exps.incremented(param)) {
                Entry::Vacant(e) => {
                    e.insert(t);
                }
                Entry::Occupied(mut e) => *e.get_mut() += &t,
            }
        }
    }
    fn finish(&self, acc: Self::Acc) -> ParamPoly {
        let mut p = ParamPoly::zero(self.0);
        p.extend_nonzero(acc);
        p
    }
    fn finish_scaled(&self, acc: Self::Acc, c: &CycQ) -> ParamPoly {
        let mut p = ParamPoly::zero(self.0);
        p.extend_nonzero(
            acc.into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(e, v)| (e, &v * c)),
        );
        p
    }
}

struct AtPoint<'a>(&'a [CycQ]);

impl Values for AtPoint<'_> {
    type Value = CycQ;
    type Acc = CycQ;
    fn one(&self) -> CycQ {
        CycQ::one()
    }
    fn zero(&self) -> CycQ {
        CycQ::zero()
    }
    fn is_zero(&self, v: &CycQ) -> bool {
        v.is_zero()
    }
    fn new_acc(&self) -> CycQ {
        CycQ::zero()
    }
    fn accumulate(&self, acc: &mut CycQ, param: usize, block: usize, weight: i64, v: &CycQ) {
        let p = &self.0[param];
        if p.is_zero() {
            return;
        }
        *acc += &rotate_scale(&(p * v), block, weight);
    }
    fn finish(&self, acc: CycQ) -> CycQ {
        acc
    }
    fn finish_scaled(&self, acc: CycQ, c: &CycQ) -> CycQ {
        &acc * c
    }
}

/// Indices `(k1,k2,k3)` reachable from the origin with all `ki >= -1` and
/// total degree at most `max_total`, sorted by total degree.
fn reachable_indices(shifts: &[LValue], max_total: i64) -> HashSet<LValue> {
    let mut seen: HashSet<LValue> = HashSet::new();
    let mut frontier = vec![[0i64; 3]];
    seen.insert([0, 0, 0]);
    while let Some(idx) = frontier.pop() {
        for s in shifts {
            let next = [idx[0] + s[0], idx[1] + s[1], idx[2] + s[2]];
            if next.iter().any(|&c| c < -1) || next.iter().sum::<i64>() > max_total {
                continue;
            }
            if seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    seen
}

/// Indices from which some `(k,k,k)`, `1 <= k <= max_level`, is reachable.
/// Coefficients outside this set never feed into a `g_kkk`.
fn relevant_indices(shifts: &[LValue], max_level: usize) -> HashSet<LValue> {
    let mut seen: HashSet<LValue> = HashSet::new();
    let mut frontier: Vec<LValue> = (1..=max_level as i64).map(|k| [k, k, k]).collect();
    seen.extend(frontier.iter().copied());
    while let Some(idx) = frontier.pop() {
        for s in shifts {
            let prev = [idx[0] - s[0], idx[1] - s[1], idx[2] - s[2]];
            if prev.iter().any(|&c| c < -1) || prev.iter().sum::<i64>() < 0 {
                continue;
            }
            if seen.insert(prev) {
                frontier.push(prev);
            }
        }
    }
    seen
}

fn run<V: Values>(
    spec: &SystemSpec,
    max_level: usize,
    prune: bool,
    vals: &V,
) -> (HashMap<LValue, V::Value>, Vec<V::Value>) {
    let shifts: Vec<LValue> = (0..spec.nparams()).map(|j| spec.shift(j)).collect();
    let blocks: Vec<usize> = (0..spec.nparams()).map(|j| spec.block(j)).collect();
    let mut indices = reachable_indices(&shifts, 3 * max_level as i64);
    if prune {
        let relevant = relevant_indices(&shifts, max_level);
        indices.retain(|k| relevant.contains(k));
    }
    let mut indices: Vec<LValue> = indices.into_iter().collect();
    indices.sort_by_key(|k| (k.iter().sum::<i64>(), *k));

    let mut table: HashMap<LValue, V::Value> = HashMap::with_capacity(indices.len());
    let mut g = vec![vals.zero(); max_level];
    table.insert([0, 0, 0], vals.one());

    for index in indices.into_iter().skip(1) {
        let mut acc = vals.new_acc();
        for (j, s) in shifts.iter().enumerate() {
            let prev = [index[0] - s[0], index[1] - s[1], index[2] - s[2]];
            let Some(v) = table.get(&prev) else { continue };
            if vals.is_zero(v) {
                continue;
            }
            let b = blocks[j];
            // (k_b + 1 - p) where p is the b-th entry of the shift
            let weight = prev[b] + 1;
            if weight == 0 {
                continue;
            }
            vals.accumulate(&mut acc, j, b, weight, v);
        }
        if index[0] == index[1] && index[1] == index[2] {
            let k = index[0] as usize;
            g[k - 1] = vals.finish(acc);
            table.insert(index, vals.zero());
        } else {
            let divisor = CycQ::eval_divisor(index[0], index[1], index[2]);
            let factor = -divisor.inv().expect("off-diagonal divisor is nonzero");
            table.insert(index, vals.finish_scaled(acc, &factor));
        }
    }
    (table, g)
}

/// Runs the `v` / `g` recurrence symbolically through level `k_max`, keeping
/// every coefficient of total degree at most `3 k_max`.
pub fn alg1_compute(spec: &SystemSpec, k_max: usize) -> Result<(VTable, GList)> {
    check_level(k_max)?;
    let (table, g) = run(spec, k_max, false, &Symbolic(spec.nparams()));
    let vt = VTable {
        spec: spec.clone(),
        max_level: k_max,
        entries: table.into_iter().collect(),
    };
    let gl = GList {
        spec: spec.clone(),
        quantities: g,
    };
    Ok((vt, gl))
}

/// Same recurrence, restricted to the coefficients that feed some `g_kkk`.
pub fn alg1_quantities(spec: &SystemSpec, k_max: usize) -> Result<GList> {
    check_level(k_max)?;
    let (_, g) = run(spec, k_max, true, &Symbolic(spec.nparams()));
    Ok(GList {
        spec: spec.clone(),
        quantities: g,
    })
}

/// Runs the same recurrence with the parameters fixed to `point`, returning
/// the values `g_111(point), ..., g_KKK(point)` without building polynomials.
pub fn alg1_at_point(spec: &SystemSpec, point: &[CycQ], k_max: usize) -> Result<Vec<CycQ>> {
    check_level(k_max)?;
    if point.len() != spec.nparams() {
        return Err(Error::DimensionMismatch {
            expected: spec.nparams(),
            found: point.len(),
        });
    }
    Ok(run(spec, k_max, true, &AtPoint(point)).1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::rational;

    #[test]
    fn first_step_of_quadratic_family() {
        let spec = SystemSpec::quadratic_family();
        let (vt, _) = alg1_compute(&spec, 1).unwrap();
        // v_100 = -(a100 + z b100 + z^2 c100)
        let mut expected = ParamPoly::zero(9);
        expected.add_term(ExpVec::unit(9, 0), CycQ::from_int(-1));
        expected.add_term(ExpVec::unit(9, 5), -CycQ::zeta());
        expected.add_term(ExpVec::unit(9, 7), -CycQ::zeta_pow(2));
        assert_eq!(vt.get(&[1, 0, 0]).unwrap(), &expected);
        assert_eq!(vt.get(&[0, 0, 0]).unwrap(), &ParamPoly::one(9));
        vt.check_structure().unwrap();
    }

    #[test]
    fn diagonal_entries_vanish() {
        let (vt, g) = alg1_compute(&SystemSpec::s3(), 3).unwrap();
        for k in 1..=3 {
            assert!(vt.get(&[k, k, k]).map_or(true, ParamPoly::is_zero));
        }
        g.check_structure().unwrap();
    }

    #[test]
    fn s3_g111_term_counts() {
        let (_, g) = alg1_compute(&SystemSpec::s3(), 1).unwrap();
        assert_eq!(g.get(1).term_count(), 3);
        assert_eq!(g.get(1).expanded_term_count(), 4);
    }

    #[test]
    fn zero_point_gives_zero_quantities() {
        for spec in [SystemSpec::s1(), SystemSpec::s2(), SystemSpec::s3()] {
            let (_, g) = alg1_compute(&spec, 2).unwrap();
            let zero = vec![CycQ::zero(); spec.nparams()];
            for q in &g.quantities {
                assert!(q.eval(&zero).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn pointwise_recurrence_matches_symbolic_evaluation() {
        let spec = SystemSpec::quadratic_family();
        let (_, g) = alg1_compute(&spec, 3).unwrap();
        let point: Vec<CycQ> = (0..9)
            .map(|i| CycQ::new(rational(i as i64 - 4, 3), rational(1, (i + 1) as i64)))
            .collect();
        let direct = alg1_at_point(&spec, &point, 3).unwrap();
        for (k, gk) in g.quantities.iter().enumerate() {
            assert_eq!(gk.eval(&point).unwrap(), direct[k], "level {}", k + 1);
        }
        assert!(alg1_at_point(&spec, &point[..3], 3).is_err());
    }

    #[test]
    fn rejects_level_zero() {
        assert!(alg1_compute(&SystemSpec::s3(), 0).is_err());
    }

    #[test]
    fn negative_first_exponent_is_supported() {
        let spec = SystemSpec::from_triples(&[(-1, 1, 1), (1, 0, 0)]).unwrap();
        let (vt, g) = alg1_compute(&spec, 2).unwrap();
        assert!(vt.entries.keys().all(|k| k.iter().all(|&c| c >= -1)));
        vt.check_structure().unwrap();
        g.check_structure().unwrap();
    }
}
