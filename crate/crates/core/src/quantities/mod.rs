//! Integrability quantities `g_kkk`.
//!
//! The formal series `Psi = x1 x2 x3 + sum v_(i-1,j-1,k-1) x1^i x2^j x3^k`
//! is chosen so that `X(Psi) = sum_k g_kkk (x1 x2 x3)^(k+1)`. Two independent
//! routes compute the `g_kkk`:
//!
//! * [`alg1_compute`] runs the recurrence for the coefficients `v` directly
//!   on parameter polynomials;
//! * [`alg2_compute`] computes each coefficient of `[nu]` separately from the
//!   universal values `V(nu)`.
//!
//! [`oracle_verify`] checks a result against the defining identity by brute
//! force in the phase variables.

mod alg1;
mod alg2;
mod oracle;

pub use alg1::{alg1_at_point, alg1_compute, alg1_quantities, VTable};
pub use alg2::{alg2_coefficient, alg2_compute, alg2_g_coefficient, enumerate_level, VCache};
pub use oracle::{oracle_verify, OracleReport};

use crate::error::{Error, Result};
use crate::polyring::ParamPoly;
use crate::sysspec::SystemSpec;

/// `g_111, ..., g_KKK` for one system family.
#[derive(Clone, Debug, PartialEq)]
pub struct GList {
    pub spec: SystemSpec,
    pub quantities: Vec<ParamPoly>,
}

impl GList {
    pub fn k(&self) -> usize {
        self.quantities.len()
    }

    /// `g_kkk` for `k >= 1`.
    pub fn get(&self, k: usize) -> &ParamPoly {
        &self.quantities[k - 1]
    }

    pub fn term_counts(&self) -> Vec<usize> {
        self.quantities.iter().map(ParamPoly::term_count).collect()
    }

    /// Term counts over the basis `{1, z}`, see [`ParamPoly::expanded_term_count`].
    pub fn expanded_term_counts(&self) -> Vec<usize> {
        self.quantities
            .iter()
            .map(ParamPoly::expanded_term_count)
            .collect()
    }

    /// Checks that every support monomial of `g_kkk` has `L(nu) = (k,k,k)`.
    pub fn check_structure(&self) -> Result<()> {
        for (i, g) in self.quantities.iter().enumerate() {
            let k = i as i64 + 1;
            for nu in g.support() {
                let l = self.spec.l_map(nu)?;
                if l != [k, k, k] {
                    return Err(Error::Validation(format!(
                        "g_{k}{k}{k} contains [{nu:?}] with L = {l:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn check_level(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    Ok(())
}
