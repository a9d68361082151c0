use proptest::prelude::*;
use resint::cyclotomic::rational;
use resint::quantities::{
    alg1_at_point, alg1_compute, alg1_quantities, alg2_compute, alg2_g_coefficient,
    enumerate_level, oracle_verify, VCache,
};
use resint::{CycQ, SystemSpec};

#[test]
fn both_algorithms_and_the_oracle_agree_on_s1() {
    let spec = SystemSpec::s1();
    let (vt, g1) = alg1_compute(&spec, 2).unwrap();
    let g2 = alg2_compute(&spec, 2).unwrap();
    assert_eq!(g1, g2);
    assert_eq!(alg1_quantities(&spec, 2).unwrap(), g1);
    let report = oracle_verify(&spec, 2, &vt, &g1).unwrap();
    assert!(report.passed, "{:?}", report.violations);
    assert_eq!(g1.expanded_term_counts(), vec![12, 384]);
    assert_eq!(g1.term_counts(), vec![9, 216]);
    g1.check_structure().unwrap();
    vt.check_structure().unwrap();
}

#[test]
fn pruned_and_full_tables_agree() {
    for spec in [
        SystemSpec::s2(),
        SystemSpec::s3(),
        SystemSpec::quadratic_family(),
    ] {
        let (_, full) = alg1_compute(&spec, 3).unwrap();
        assert_eq!(alg1_quantities(&spec, 3).unwrap(), full);
    }
}

#[test]
fn s2_and_s3_published_counts() {
    let g = alg1_quantities(&SystemSpec::s3(), 5).unwrap();
    assert_eq!(g.expanded_term_counts(), vec![4, 32, 100, 214, 388]);
    assert_eq!(g.term_counts(), vec![3, 18, 51, 108, 195]);
    let g = alg2_compute(&SystemSpec::s2(), 3).unwrap();
    assert_eq!(g.expanded_term_counts(), vec![12, 280, 1676]);
}

/// With only `a100` nonzero the system is `x1' = x1 + a x1^2`,
/// `x2' = z x2`, `x3' = z^2 x3`, which has the first integral
/// `x1 x2 x3 / (1 + a x1)`; hence `v_(n,0,0) = (-a)^n`, every other
/// coefficient vanishes, and so does every `g_kkk`.
#[test]
fn closed_form_first_integral() {
    let spec = SystemSpec::quadratic_family();
    let a = CycQ::from_rational(rational(-2, 3));
    let mut point = vec![CycQ::zero(); 9];
    point[0] = a.clone();
    let (vt, g) = alg1_compute(&spec, 3).unwrap();
    for (index, v) in &vt.entries {
        let value = v.eval(&point).unwrap();
        let expected = if index[1] == 0 && index[2] == 0 {
            (-&a).pow(index[0] as u32)
        } else {
            CycQ::zero()
        };
        assert_eq!(value, expected, "v{index:?}");
    }
    for k in 1..=3 {
        assert!(g.get(k).eval(&point).unwrap().is_zero());
    }
}

#[test]
fn pointwise_quantities_match_symbolic() {
    let spec = SystemSpec::s2();
    let point: Vec<CycQ> = (0..spec.nparams())
        .map(|i| CycQ::new(rational(i as i64 - 3, 2), rational(1, i as i64 + 1)))
        .collect();
    let g = alg2_compute(&spec, 2).unwrap();
    let at = alg1_at_point(&spec, &point, 2).unwrap();
    for k in 1..=2 {
        assert_eq!(g.get(k).eval(&point).unwrap(), at[k - 1]);
    }
}

#[test]
fn single_coefficients_match_the_full_quantity() {
    let spec = SystemSpec::s3();
    let g = alg1_quantities(&spec, 3).unwrap();
    let mut cache = VCache::new();
    for nu in enumerate_level(&spec, 3) {
        let c = alg2_g_coefficient(&spec, &nu, &mut cache).unwrap();
        assert_eq!(g.get(3).coeff(&nu).cloned().unwrap_or_else(CycQ::zero), c);
    }
}

#[test]
fn negative_first_exponent() {
    let spec = SystemSpec::from_triples(&[(-1, 1, 1), (1, 0, 0), (0, 1, 0)]).unwrap();
    let (vt, g1) = alg1_compute(&spec, 2).unwrap();
    assert_eq!(g1, alg2_compute(&spec, 2).unwrap());
    assert!(oracle_verify(&spec, 2, &vt, &g1).unwrap().passed);
}

fn triple() -> impl Strategy<Value = (i64, i64, i64)> {
    (-1i64..=2, 0i64..=2, 0i64..=2).prop_filter("p + q + r >= 1", |(p, q, r)| p + q + r >= 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Random small families: both algorithms agree and satisfy the
    /// defining identity of the first integral.
    #[test]
    fn random_families_pass_the_oracle(
        triples in prop::collection::btree_set(triple(), 1..=3),
    ) {
        let triples: Vec<_> = triples.into_iter().collect();
        let spec = SystemSpec::from_triples(&triples).unwrap();
        let (vt, g1) = alg1_compute(&spec, 2).unwrap();
        prop_assert_eq!(&g1, &alg2_compute(&spec, 2).unwrap());
        prop_assert_eq!(&g1, &alg1_quantities(&spec, 2).unwrap());
        let report = oracle_verify(&spec, 2, &vt, &g1).unwrap();
        prop_assert!(report.passed, "{:?}", report.violations);
    }
}
