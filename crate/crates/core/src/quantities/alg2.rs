use std::collections::HashMap;

use super::{check_level, GList};
use crate::cyclotomic::CycQ;
use crate::error::Result;
use crate::polyring::{ExpVec, ParamPoly};
use crate::sysspec::{LValue, SystemSpec};

/// Memo table for the universal coefficients `V(nu)`.
#[derive(Clone, Debug, Default)]
pub struct VCache {
    memo: HashMap<ExpVec, CycQ>,
}

impl VCache {
    pub fn new() -> Self {
        VCache::default()
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    pub fn get(&self, nu: &ExpVec) -> Option<&CycQ> {
        self.memo.get(nu)
    }
}

/// The three-block sum shared by `V(nu)` and `g_kkk^(nu)`:
///
/// `sum_b z^b sum_{j in block b} V~(nu - e_j) (L_b(nu - e_j) + 1)`
fn block_sum(spec: &SystemSpec, nu: &ExpVec, l: &LValue, cache: &mut VCache) -> CycQ {
    let mut acc = CycQ::zero();
    for j in 0..spec.nparams() {
        let Some(prev) = nu.decremented(j) else {
            continue;
        };
        let b = spec.block(j);
        let weight = l[b] - spec.shift(j)[b] + 1;
        if weight == 0 {
            continue;
        }
        let v = coefficient(spec, &prev, cache);
        if v.is_zero() {
            continue;
        }
        acc += &(&CycQ::zeta_pow(b as i64) * &v.scale_int(weight));
    }
    acc
}

fn coefficient(spec: &SystemSpec, nu: &ExpVec, cache: &mut VCache) -> CycQ {
    if let Some(v) = cache.memo.get(nu) {
        return v.clone();
    }
    let value = if nu.is_zero() {
        CycQ::one()
    } else {
        let l = spec.l_map_unchecked(nu.as_slice());
        if l[0] == l[1] && l[1] == l[2] {
            CycQ::zero()
        } else {
            let sum = block_sum(spec, nu, &l, cache);
            if sum.is_zero() {
                sum
            } else {
                let divisor = CycQ::eval_divisor(l[0], l[1], l[2]);
                -sum.div(&divisor).expect("off-diagonal divisor is nonzero")
            }
        }
    };
    cache.memo.insert(nu.clone(), value.clone());
    value
}

/// `V(nu)`: the coefficient of `[nu]` in `v_L(nu)`, memoized in `cache`.
pub fn alg2_coefficient(spec: &SystemSpec, nu: &ExpVec, cache: &mut VCache) -> Result<CycQ> {
    spec.l_map(nu)?;
    Ok(coefficient(spec, nu, cache))
}

/// The coefficient of `[nu]` in `g_kkk`, where `L(nu) = (k,k,k)`.
pub fn alg2_g_coefficient(spec: &SystemSpec, nu: &ExpVec, cache: &mut VCache) -> Result<CycQ> {
    let l = spec.l_map(nu)?;
    Ok(block_sum(spec, nu, &l, cache))
}

/// All `nu` with `L(nu) = (k,k,k)`, in graded-lex order.
///
/// Every parameter adds `p + q + r >= 1` to `L1 + L2 + L3`, so the search
/// is bounded by `|nu| <= 3k`. A branch is also cut once a coordinate of the
/// partial sum exceeds `k` and no remaining parameter can lower it (only
/// triples with `p = -1` contribute negatively).
pub fn enumerate_level(spec: &SystemSpec, k: usize) -> Vec<ExpVec> {
    let n = spec.nparams();
    let shifts: Vec<LValue> = (0..n).map(|j| spec.shift(j)).collect();
    let degrees: Vec<i64> = shifts.iter().map(|s| s.iter().sum()).collect();
    // can_decrease[j][i]: some parameter with index >= j lowers coordinate i
    let mut can_decrease = vec![[false; 3]; n + 1];
    for j in (0..n).rev() {
        for i in 0..3 {
            can_decrease[j][i] = can_decrease[j + 1][i] || shifts[j][i] < 0;
        }
    }
    let target = k as i64;
    let mut out = Vec::new();
    let mut current = ExpVec::zeros(n);
    search(
        0,
        [0; 3],
        0,
        3 * target,
        target,
        &shifts,
        &degrees,
        &can_decrease,
        &mut current,
        &mut out,
    );
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    j: usize,
    partial: LValue,
    total: i64,
    budget: i64,
    target: i64,
    shifts: &[LValue],
    degrees: &[i64],
    can_decrease: &[[bool; 3]],
    current: &mut ExpVec,
    out: &mut Vec<ExpVec>,
) {
    for i in 0..3 {
        if partial[i] > target && !can_decrease[j][i] {
            return;
        }
    }
    if j == shifts.len() {
        if partial == [target; 3] {
            out.push(current.clone());
        }
        return;
    }
    let mut count = 0u16;
    let mut p = partial;
    let mut t = total;
    loop {
        current[j] = count;
        search(
            j + 1,
            p,
            t,
            budget,
            target,
            shifts,
            degrees,
            can_decrease,
            current,
            out,
        );
        t += degrees[j];
        if t > budget {
            break;
        }
        for i in 0..3 {
            p[i] += shifts[j][i];
        }
        count += 1;
    }
    current[j] = 0;
}

/// Assembles `g_111, ..., g_KKK` coefficient by coefficient.
pub fn alg2_compute(spec: &SystemSpec, k_max: usize) -> Result<GList> {
    check_level(k_max)?;
    let mut cache = VCache::new();
    let mut quantities = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut g = ParamPoly::zero(spec.nparams());
        for nu in enumerate_level(spec, k) {
            let l = [k as i64; 3];
            let c = block_sum(spec, &nu, &l, &mut cache);
            g.add_term(nu, c);
        }
        quantities.push(g);
    }
    Ok(GList {
        spec: spec.clone(),
        quantities,
    })
}
