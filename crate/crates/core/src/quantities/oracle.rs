use serde::Serialize;

use super::{GList, VTable};
use crate::cyclotomic::CycQ;
use crate::error::{Error, Result};
use crate::polyring::{Mono, ParamPoly, PhasePoly};
use crate::sysspec::SystemSpec;

/// Outcome of the brute-force check of `X(Psi) = sum_k g_kkk (x1 x2 x3)^(k+1)`.
///
/// `Psi` is truncated at phase degree `truncation = 3K + 3`, the degree of
/// the last resonant monomial `(x1 x2 x3)^(K+1)`. Every nonlinear term of the
/// field raises the phase degree by `p + q + r >= 1`, so the coefficient of a
/// degree-`d` monomial of `X(Psi)` only involves coefficients of `Psi` of
/// degree `<= d`. With every `v` of degree `<= 3K + 3` present, the residual
/// is therefore exact, and must vanish, through degree `guaranteed_degree = 3K + 3`.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub truncation: u32,
    pub guaranteed_degree: u32,
    pub passed: bool,
    /// `(monomial exponent, coefficient as text)` of violating residual terms,
    /// lowest degree first; at most a handful are kept.
    pub violations: Vec<([u32; 3], String)>,
}

const MAX_REPORTED: usize = 8;

/// The vector field as three phase polynomials with parameter coefficients.
pub(crate) fn symbolic_field(spec: &SystemSpec, degree: u32) -> [PhasePoly<ParamPoly>; 3] {
    let n = spec.nparams();
    let mut field = [
        PhasePoly::monomial(degree, Mono([1, 0, 0]), ParamPoly::one(n)),
        PhasePoly::monomial(
            degree,
            Mono([0, 1, 0]),
            ParamPoly::constant(n, CycQ::zeta()),
        ),
        PhasePoly::monomial(
            degree,
            Mono([0, 0, 1]),
            ParamPoly::constant(n, CycQ::zeta_pow(2)),
        ),
    ];
    for t in spec.field_terms() {
        let c = ParamPoly::var(n, t.param).scale(&t.factor);
        field[t.component].add_term(t.mono, c);
    }
    field
}

/// Rebuilds `Psi` from `vt`, applies the vector field, subtracts the
/// resonant terms built from `g`, and reports any surviving term of degree
/// at most `3K + 3`.
pub fn oracle_verify(
    spec: &SystemSpec,
    k_max: usize,
    vt: &VTable,
    g: &GList,
) -> Result<OracleReport> {
    if vt.max_level < k_max || g.k() < k_max {
        return Err(Error::InvalidArgument(format!(
            "tables computed through level {} / {}, oracle asked for {k_max}",
            vt.max_level,
            g.k()
        )));
    }
    let truncation = 3 * k_max as u32 + 3;

    let mut psi = PhasePoly::zero(truncation);
    for (index, v) in &vt.entries {
        let mono = [index[0] + 1, index[1] + 1, index[2] + 1];
        let mono = Mono([mono[0] as u32, mono[1] as u32, mono[2] as u32]);
        psi.add_term(mono, v.clone());
    }

    let field = symbolic_field(spec, truncation);
    let mut residual = psi.apply_field(&field);
    for k in 1..=k_max {
        let e = k as u32 + 1;
        residual.add_term(Mono([e, e, e]), -g.get(k));
    }
    let residual = residual.truncate(truncation);

    let violations: Vec<([u32; 3], String)> = residual
        .terms()
        .take(MAX_REPORTED)
        .map(|(m, c)| (m.0, c.to_text(spec.names())))
        .collect();
    Ok(OracleReport {
        truncation,
        guaranteed_degree: truncation,
        passed: violations.is_empty(),
        violations,
    })
}
