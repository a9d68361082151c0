use proptest::prelude::*;
use resint::cyclotomic::rational;
use resint::{CycQ, ExpVec, ParamPoly, SystemSpec};

fn cycq() -> impl Strategy<Value = CycQ> {
    (-20i64..=20, 1i64..=12, -20i64..=20, 1i64..=12)
        .prop_map(|(a, b, c, d)| CycQ::new(rational(a, b), rational(c, d)))
}

fn nonzero_cycq() -> impl Strategy<Value = CycQ> {
    cycq().prop_filter("nonzero", |c| !c.is_zero())
}

const NVARS: usize = 4;

fn poly() -> impl Strategy<Value = ParamPoly> {
    prop::collection::vec((prop::collection::vec(0u16..3, NVARS), cycq()), 0..6).prop_map(|terms| {
        let mut p = ParamPoly::zero(NVARS);
        for (e, c) in terms {
            p.add_term(ExpVec::from_slice(&e), c);
        }
        p
    })
}

fn point() -> impl Strategy<Value = Vec<CycQ>> {
    prop::collection::vec(cycq(), NVARS)
}

proptest! {
    #[test]
    fn field_axioms(a in cycq(), b in cycq(), c in cycq()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, CycQ::zero());
    }

    #[test]
    fn inverses(a in nonzero_cycq()) {
        prop_assert!((&a * &a.inv().unwrap()).is_one());
        // the norm is multiplicative and positive
        prop_assert!(a.norm() > rational(0, 1));
        let b = &a * &CycQ::zeta();
        prop_assert_eq!(b.norm(), a.norm());
    }

    #[test]
    fn text_round_trip(a in cycq()) {
        let back: CycQ = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn term_count_is_subadditive(p in poly(), q in poly()) {
        prop_assert!((&p + &q).term_count() <= p.term_count() + q.term_count());
        prop_assert!(p.expanded_term_count() <= 2 * p.term_count());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), x in point()) {
        let (pv, qv) = (p.eval(&x).unwrap(), q.eval(&x).unwrap());
        prop_assert_eq!((&p + &q).eval(&x).unwrap(), &pv + &qv);
        prop_assert_eq!((&p * &q).eval(&x).unwrap(), &pv * &qv);
    }

    #[test]
    fn json_round_trip(p in poly()) {
        let back = ParamPoly::from_json_terms(NVARS, &p.to_json_terms()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn l_map_is_additive(
        nu in prop::collection::vec(0u16..4, 12),
        mu in prop::collection::vec(0u16..4, 12),
    ) {
        let spec = SystemSpec::s1();
        let (nu, mu) = (ExpVec::from_slice(&nu), ExpVec::from_slice(&mu));
        let sum = spec.l_map(&nu.add(&mu)).unwrap();
        let (a, b) = (spec.l_map(&nu).unwrap(), spec.l_map(&mu).unwrap());
        prop_assert_eq!(sum, [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    }
}
