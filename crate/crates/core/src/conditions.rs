//! Reversibility and the integrability components of the quadratic family.
//!
//! Parameters of the quadratic family are ordered
//! `a100, a010, a001, b010, b001, b100, c001, c100, c010`; the subfamily
//! studied here fixes `b001 = c100 = 0` and `b010 = 1`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclotomic::{rational, CycQ};
use crate::error::{Error, Result};
use crate::polyring::{Mono, ParamPoly};
use crate::quantities::alg1_at_point;
use crate::sysspec::SystemSpec;

const A100: usize = 0;
const A010: usize = 1;
const A001: usize = 2;
const B010: usize = 3;
const B001: usize = 4;
const B100: usize = 5;
const C001: usize = 6;
const C100: usize = 7;
const C010: usize = 8;

/// Number of quantities evaluated by [`check_necessary_conditions`].
pub const CONDITION_LEVELS: usize = 5;

const MAX_RETRIES: usize = 64;

/// The matrix `A = [[0, alpha, 0], [0, 0, beta], [gamma, 0, 0]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RevMatrix {
    alpha: CycQ,
    beta: CycQ,
    gamma: CycQ,
}

impl RevMatrix {
    pub fn new(alpha: CycQ, beta: CycQ, gamma: CycQ) -> Result<Self> {
        let product = &(&alpha * &beta) * &gamma;
        if !product.is_one() {
            return Err(Error::InvalidArgument(format!(
                "alpha * beta * gamma = {product}, expected 1"
            )));
        }
        Ok(RevMatrix { alpha, beta, gamma })
    }

    /// `gamma` is solved from `alpha * beta * gamma = 1`.
    pub fn from_alpha_beta(alpha: CycQ, beta: CycQ) -> Result<Self> {
        let gamma = (&alpha * &beta).inv()?;
        RevMatrix::new(alpha, beta, gamma)
    }

    pub fn alpha(&self) -> &CycQ {
        &self.alpha
    }

    pub fn beta(&self) -> &CycQ {
        &self.beta
    }

    pub fn gamma(&self) -> &CycQ {
        &self.gamma
    }

    /// `(z alpha, z beta, z gamma)`, again with product 1.
    pub fn zeta_scaled(&self) -> RevMatrix {
        let z = CycQ::zeta();
        RevMatrix {
            alpha: &z * &self.alpha,
            beta: &z * &self.beta,
            gamma: &z * &self.gamma,
        }
    }
}

/// One coefficient of `A F(x) - z F(Ax)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivarianceResidual {
    pub component: usize,
    pub mono: Mono,
    pub value: CycQ,
}

/// Coefficients of `A F(x) - z F(Ax)` over every monomial that occurs on
/// either side. All of them vanish exactly when the system is z-reversible
/// with this `A`.
pub fn check_equivariance(spec: &SystemSpec, a: &RevMatrix) -> Result<Vec<EquivarianceResidual>> {
    let point = spec.point()?;
    let mut f: [BTreeMap<Mono, CycQ>; 3] = Default::default();
    for m in 0..3 {
        let mut e = [0; 3];
        e[m] = 1;
        f[m].insert(Mono(e), CycQ::zeta_pow(m as i64));
    }
    for t in spec.field_terms() {
        let c = &t.factor * &point[t.param];
        *f[t.component].entry(t.mono).or_insert_with(CycQ::zero) += &c;
    }

    // F(Ax): x1 -> alpha x2, x2 -> beta x3, x3 -> gamma x1
    let substitute = |mono: &Mono, c: &CycQ| {
        let [e1, e2, e3] = mono.0;
        let w = &(&a.alpha.pow(e1) * &a.beta.pow(e2)) * &a.gamma.pow(e3);
        (Mono([e3, e1, e2]), c * &w)
    };
    let rows = [&a.alpha, &a.beta, &a.gamma];
    let z = CycQ::zeta();

    let mut out = Vec::new();
    for m in 0..3 {
        // (A F)_m = A[m][m+1] F_(m+1)
        let mut diff: BTreeMap<Mono, CycQ> = BTreeMap::new();
        for (mono, c) in &f[(m + 1) % 3] {
            *diff.entry(*mono).or_insert_with(CycQ::zero) += &(c * rows[m]);
        }
        for (mono, c) in &f[m] {
            let (mono, c) = substitute(mono, c);
            *diff.entry(mono).or_insert_with(CycQ::zero) -= &(&z * &c);
        }
        out.extend(diff.into_iter().map(|(mono, value)| EquivarianceResidual {
            component: m,
            mono,
            value,
        }));
    }
    Ok(out)
}

/// The quadratic family point forced by the generators of `I^(z)`:
/// `b010 = z alpha a100`, `b001 = z beta a010`, `b100 = z gamma a001`,
/// `c010 = z alpha b100`, `c001 = z beta b010`, `c100 = z gamma b001`.
/// It is z-reversible with respect to `a.zeta_scaled()`.
pub fn reversible_point(a100: CycQ, a010: CycQ, a001: CycQ, a: &RevMatrix) -> Vec<CycQ> {
    let z = CycQ::zeta();
    let za = &z * &a.alpha;
    let zb = &z * &a.beta;
    let zg = &z * &a.gamma;
    let b010 = &za * &a100;
    let b001 = &zb * &a010;
    let b100 = &zg * &a001;
    let c010 = &za * &b100;
    let c001 = &zb * &b010;
    let c100 = &zg * &b001;
    vec![a100, a010, a001, b010, b001, b100, c001, c100, c010]
}

/// A seeded reversibility-chain point together with its matrix.
pub fn sample_reversible(seed: u64) -> Result<(Vec<CycQ>, RevMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = draw_nonzero(&mut rng)?;
    let beta = draw_nonzero(&mut rng)?;
    let a = RevMatrix::from_alpha_beta(alpha, beta)?;
    let free: Vec<CycQ> = (0..3).map(|_| draw(&mut rng)).collect();
    let point = reversible_point(free[0].clone(), free[1].clone(), free[2].clone(), &a);
    Ok((point, a))
}

/// Builders for generator polynomials over the nine quadratic-family parameters.
fn var(i: usize) -> ParamPoly {
    ParamPoly::var(9, i)
}

fn cst(c: CycQ) -> ParamPoly {
    ParamPoly::constant(9, c)
}

fn z() -> CycQ {
    CycQ::zeta()
}

fn z1() -> CycQ {
    &CycQ::zeta() + &CycQ::one()
}

/// The nine generators of the elimination ideal `I_z`.
pub fn izeta_generators() -> Vec<ParamPoly> {
    let pairs = [
        ((B010, B100), (A100, C010)),
        ((B001, B100), (A001, C100)),
        ((A010, B100), (C010, C100)),
        ((B001, B010), (A010, C001)),
        ((A001, B010), (C001, C010)),
        ((A100, B001), (C001, C100)),
        ((A010, A100), (B010, C100)),
        ((A001, A100), (B100, C001)),
        ((A001, A010), (B001, C010)),
    ];
    pairs
        .iter()
        .map(|((i, j), (k, l))| &(&var(*i) * &var(*j)) - &(&var(*k) * &var(*l)))
        .collect()
}

/// Evaluates the generators of `I_z` at a quadratic family point.
pub fn eval_izeta(point: &[CycQ]) -> Result<Vec<CycQ>> {
    izeta_generators().iter().map(|g| g.eval(point)).collect()
}

/// One of the nine components `J_1 ... J_9` of the integrability variety
/// of the subfamily.
#[derive(Clone, Debug)]
pub struct ComponentId {
    pub id: u8,
    pub generators: Vec<ParamPoly>,
}

impl ComponentId {
    pub fn new(id: u8) -> Result<Self> {
        let generators = match id {
            1 => vec![var(C001), var(A001)],
            2 => vec![
                &var(C010) + &cst(z()),
                &var(A010) - &cst(&z().scale_int(2) + &CycQ::one()),
                &(&(&var(A001) * &var(A100)) - &(&var(A001) * &var(B100)).scale(&z()))
                    + &(&var(B100) * &var(C001)),
            ],
            3 => vec![
                &var(C010) + &cst(z()),
                &var(A001) + &var(C001).scale(&z()),
                &(&(&var(A010) * &var(A100)) - &var(A100).scale(&z1())) + &var(B100).scale(&z()),
            ],
            4 => vec![var(B100), var(A100)],
            5 => vec![var(B100), var(A001)],
            6 => vec![
                &(&(&var(A010) * &var(C001)) - &(&var(C001) * &var(C010)).scale(&z1()))
                    + &var(A001).scale(&z1()),
                &(&(&var(A010) * &var(A100)) - &(&var(A100) * &var(C010)).scale(&z1()))
                    + &var(B100).scale(&z1()),
                &(&var(A001) * &var(A100)) - &(&var(B100) * &var(C001)),
            ],
            7 => vec![
                var(C010),
                &(&var(A010) * &var(A100)) + &var(B100).scale(&z1()),
            ],
            8 => vec![var(C010), var(A001)],
            9 => vec![var(B100), &var(A010) - &var(C010).scale(&z())],
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "component id {id} is not in 1..=9"
                )))
            }
        };
        Ok(ComponentId { id, generators })
    }

    pub fn all() -> Vec<ComponentId> {
        (1..=9)
            .map(|id| ComponentId::new(id).expect("valid id"))
            .collect()
    }

    pub fn contains(&self, point: &[CycQ]) -> Result<bool> {
        for g in &self.generators {
            if !g.eval(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Components whose varieties consist of linearizable systems.
    pub fn is_linearizable_family(&self) -> bool {
        matches!(self.id, 1 | 4 | 5 | 8 | 9)
    }
}

fn draw(rng: &mut ChaCha8Rng) -> CycQ {
    let num = rng.gen_range(-9..=9);
    let den = rng.gen_range(1..=9);
    CycQ::from_rational(rational(num, den))
}

fn draw_nonzero(rng: &mut ChaCha8Rng) -> Result<CycQ> {
    for _ in 0..MAX_RETRIES {
        let v = draw(rng);
        if !v.is_zero() {
            return Ok(v);
        }
    }
    Err(Error::Sampling("no nonzero value drawn".into()))
}

/// A point of the subfamily with every free parameter set to zero.
fn subfamily_base() -> Vec<CycQ> {
    let mut p = vec![CycQ::zero(); 9];
    p[B010] = CycQ::one();
    p
}

/// Checks `b001 = c100 = 0` and `b010 = 1`.
pub fn check_subfamily(point: &[CycQ]) -> Result<()> {
    if point.len() != 9 {
        return Err(Error::DimensionMismatch {
            expected: 9,
            found: point.len(),
        });
    }
    if !point[B001].is_zero() || !point[C100].is_zero() || !point[B010].is_one() {
        return Err(Error::Validation(
            "point is not in the subfamily b001 = c100 = 0, b010 = 1".into(),
        ));
    }
    Ok(())
}

/// A seeded point on `V(J_id)` inside the subfamily.
///
/// Free parameters come from rationals `n/d` with `|n| <= 9`, `1 <= d <= 9`.
/// The dependent parameters are solved from the generators:
///
/// * `J_2`: `c010 = -z`, `a010 = 2z + 1`, `c001 = a001 (z b100 - a100) / b100`, `b100 != 0`;
/// * `J_3`: `c010 = -z`, `a001 = -z c001`, `b100 = z^2 a100 (z + 1 - a010)`;
/// * `J_6`: `a001 = c001 ((z+1) c010 - a010) / (z+1)`,
///   `b100 = a100 ((z+1) c010 - a010) / (z+1)`, which kills the third generator;
/// * `J_7`: `c010 = 0`, `b100 = -a010 a100 / (z+1)`;
/// * the remaining components set their generating parameters to zero
///   (`J_9` also `a010 = z c010`).
pub fn sample_component(id: u8, seed: u64) -> Result<Vec<CycQ>> {
    let component = ComponentId::new(id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z1inv = z1().inv()?;
    for _ in 0..MAX_RETRIES {
        let mut p = subfamily_base();
        for i in [A100, A010, A001, B100, C001, C010] {
            p[i] = draw(&mut rng);
        }
        match id {
            1 => {
                p[C001] = CycQ::zero();
                p[A001] = CycQ::zero();
            }
            2 => {
                if p[B100].is_zero() {
                    continue;
                }
                p[C010] = -z();
                p[A010] = &z().scale_int(2) + &CycQ::one();
                let t = &(&z() * &p[B100]) - &p[A100];
                p[C001] = (&(&p[A001] * &t)).div(&p[B100])?;
            }
            3 => {
                p[C010] = -z();
                p[A001] = -(&z() * &p[C001]);
                let t = &z1() - &p[A010];
                p[B100] = &(&CycQ::zeta_pow(2) * &p[A100]) * &t;
            }
            4 => {
                p[B100] = CycQ::zero();
                p[A100] = CycQ::zero();
            }
            5 => {
                p[B100] = CycQ::zero();
                p[A001] = CycQ::zero();
            }
            6 => {
                let t = &(&(&z1() * &p[C010]) - &p[A010]) * &z1inv;
                p[A001] = &p[C001] * &t;
                p[B100] = &p[A100] * &t;
            }
            7 => {
                p[C010] = CycQ::zero();
                p[B100] = -(&(&(&p[A010] * &p[A100]) * &z1inv));
            }
            8 => {
                p[C010] = CycQ::zero();
                p[A001] = CycQ::zero();
            }
            9 => {
                p[B100] = CycQ::zero();
                p[A010] = &z() * &p[C010];
            }
            _ => unreachable!("id validated above"),
        }
        if !component.contains(&p)? {
            return Err(Error::Sampling(format!(
                "sample for J{id} does not satisfy its generators"
            )));
        }
        return Ok(p);
    }
    Err(Error::Sampling(format!(
        "no admissible sample for J{id} after {MAX_RETRIES} draws"
    )))
}

/// A seeded point of the subfamily with every free parameter drawn independently.
pub fn sample_generic(seed: u64) -> Vec<CycQ> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = subfamily_base();
    for i in [A100, A010, A001, B100, C001, C010] {
        p[i] = draw(&mut rng);
    }
    p
}

/// Result of evaluating the necessary integrability conditions at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionsReport {
    pub point: Vec<CycQ>,
    pub components_satisfied: Vec<u8>,
    pub g_values: Vec<CycQ>,
    pub izeta_zero: bool,
}

impl ConditionsReport {
    pub fn quantities_vanish(&self) -> bool {
        self.g_values.iter().all(CycQ::is_zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let names = SystemSpec::quadratic_family().names().to_vec();
        let point: serde_json::Map<String, serde_json::Value> = names
            .into_iter()
            .zip(&self.point)
            .map(|(n, v)| (n, serde_json::Value::String(v.to_string())))
            .collect();
        let json = ReportJson {
            point,
            components_satisfied: self.components_satisfied.clone(),
            g_values: self.g_values.iter().map(ToString::to_string).collect(),
            izeta_zero: self.izeta_zero,
        };
        serde_json::to_value(json).expect("plain data serializes")
    }
}

#[derive(Serialize)]
struct ReportJson {
    point: serde_json::Map<String, serde_json::Value>,
    components_satisfied: Vec<u8>,
    g_values: Vec<String>,
    izeta_zero: bool,
}

/// Evaluates `g_111 ... g_555` and every component's generators at a point
/// of the subfamily.
pub fn check_necessary_conditions(point: &[CycQ]) -> Result<ConditionsReport> {
    check_subfamily(point)?;
    let spec = SystemSpec::quadratic_family();
    let g_values = alg1_at_point(&spec, point, CONDITION_LEVELS)?;
    let mut components_satisfied = Vec::new();
    for c in ComponentId::all() {
        if c.contains(point)? {
            components_satisfied.push(c.id);
        }
    }
    let izeta_zero = eval_izeta(point)?.iter().all(CycQ::is_zero);
    Ok(ConditionsReport {
        point: point.to_vec(),
        components_satisfied,
        g_values,
        izeta_zero,
    })
}
