//! Property suites over random exact data.

use crtwist::geom::{SeparableMetric, WeightFunction};
use crtwist::poly::{
    count_roots, harmonic_pairing, int, mobius_inverse, mobius_transform, poisson_bracket, quadratic_pairing, rat,
    PaperQuadratic, Polynomial, Rational,
};
use crtwist::ruled::{decide_existence, pab_polynomial, RuledSurfaceSpec};
use crtwist::twist::{twist, TwistVariant};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn polynomial(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(rational(), 1..=max_deg + 1).prop_map(|c| Polynomial::new("x", c))
}

fn quadratic() -> impl Strategy<Value = PaperQuadratic> {
    (rational(), rational(), rational()).prop_map(|(a, b, c)| PaperQuadratic::new(a, b, c))
}

fn positive(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (lo * 8..=hi * 8).prop_map(|n| rat(n, 8))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(p in polynomial(5), q in polynomial(5), r in polynomial(3)) {
        prop_assert_eq!(&(&p + &q) - &q, p.clone());
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in polynomial(5), q in polynomial(5), x in rational()) {
        prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!(p.compose(&q).eval(&x), p.eval(&q.eval(&x)));
    }

    #[test]
    fn leibniz(p in polynomial(5), q in polynomial(5)) {
        prop_assert_eq!((&p * &q).derive(), &(&p.derive() * &q) + &(&p * &q.derive()));
    }

    #[test]
    fn division_identity(p in polynomial(6), d in polynomial(3)) {
        prop_assume!(!d.is_zero());
        let (quo, rem) = p.div_rem(&d);
        prop_assert_eq!(&(&quo * &d) + &rem, p);
        prop_assert!(rem.is_zero() || rem.deg0() < d.deg0());
    }

    #[test]
    fn mobius_round_trip(p in polynomial(4), m in prop::array::uniform4(-5i64..=5)) {
        let m = [int(m[0]), int(m[1]), int(m[2]), int(m[3])];
        let det = &m[0] * &m[3] - &m[1] * &m[2];
        prop_assume!(det != int(0));
        let d = 4;
        let inv = mobius_inverse(&m);
        let once = mobius_transform(&p, [&m[0], &m[1], &m[2], &m[3]], d).unwrap();
        let back = mobius_transform(&once, [&inv[0], &inv[1], &inv[2], &inv[3]], d).unwrap();
        let mut scale = int(1);
        for _ in 0..d {
            scale = &scale * &det;
        }
        prop_assert_eq!(back, p.scale(&scale));
    }

    #[test]
    fn pairings_are_symmetric_and_bilinear(p in quadratic(), q in quadratic(), r in quadratic(), s in rational()) {
        for f in [quadratic_pairing, harmonic_pairing] {
            prop_assert_eq!(f(&p, &q), f(&q, &p));
            let sum = PaperQuadratic::new(&q.q0 + &r.q0, &q.q1 + &r.q1, &q.q2 + &r.q2);
            prop_assert_eq!(f(&p, &sum), f(&p, &q) + f(&p, &r));
            prop_assert_eq!(f(&p.scale(&s), &q), f(&p, &q) * &s);
        }
    }

    #[test]
    fn bracket_is_antisymmetric_and_a_derivation(p in polynomial(3), q in polynomial(3), r in polynomial(3)) {
        prop_assert_eq!(poisson_bracket(&p, &q), -&poisson_bracket(&q, &p));
        prop_assert_eq!(
            poisson_bracket(&p, &(&q * &r)),
            &(&poisson_bracket(&p, &q) * &r) - &(&(&p * &q) * &r.derive())
        );
    }

    #[test]
    fn sturm_counts_planted_roots(roots in prop::collection::btree_set(-20i64..=20, 1..=5), c in positive(1, 3)) {
        let mut p = Polynomial::constant("x", c);
        for &r in &roots {
            p = &p * &Polynomial::linear_root("x", &rat(r, 10));
        }
        // a double root must not be counted twice
        let first = rat(*roots.iter().next().unwrap(), 10);
        let q = &p * &Polynomial::linear_root("x", &first);
        prop_assert_eq!(count_roots(&p, &int(-3), &int(3)), roots.len());
        prop_assert_eq!(count_roots(&q, &int(-3), &int(3)), roots.len());
    }

    #[test]
    fn polynomial_json_round_trip(p in polynomial(6)) {
        let s = serde_json::to_string(&p).unwrap();
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn ruled_boundary_identities(
        genus in 0u64..5,
        ell in 1u64..6,
        a in (9i64..=48).prop_map(|n| rat(n, 8)),
        b in (9i64..=48).prop_map(|n| rat(n, 8)),
        flip in any::<bool>(),
    ) {
        let b = if flip { -b } else { b };
        let spec = RuledSurfaceSpec::new(genus, ell, a, b).unwrap();
        let p = pab_polynomial(&spec).unwrap();
        prop_assert!(p.eval(&int(1)) == int(0) && p.eval(&int(-1)) == int(0));
        let v = decide_existence(&spec).unwrap();
        prop_assert!(v.boundary_checks.all());
        if genus <= 1 {
            prop_assert!(v.is_stable());
        }
    }

    #[test]
    fn product_twist_round_trip(
        m in 1usize..=3,
        coeffs in prop::collection::vec(positive(1, 3), 3),
        b0 in positive(2, 4),
        b in prop::collection::vec((-4i64..=4).prop_map(|n| rat(n, 8)), 3),
    ) {
        let a: Vec<Polynomial> = (0..m)
            .map(|j| Polynomial::new("x", vec![coeffs[j].clone(), int(0), -coeffs[j].clone()]))
            .collect();
        let metric = SeparableMetric::product(a);
        let f = WeightFunction::product(b0, b[..m].to_vec());
        let there = twist(&metric, &f, &TwistVariant::Origin).unwrap();
        let back = twist(&there.metric, &there.inverse_weight(), &TwistVariant::Origin).unwrap();
        prop_assert_eq!(back.metric, metric);
    }

    #[test]
    fn profile_twist_round_trip(c in positive(1, 3), a0 in positive(2, 4), a1 in (-8i64..=8).prop_map(|n| rat(n, 8))) {
        let a = Polynomial::new("z", vec![c.clone(), int(0), -c]);
        let metric = SeparableMetric::profile(crtwist::poly::RatFn::from_poly(a), int(-1), int(1));
        let f = WeightFunction::product(a0, vec![a1]);
        for v in [TwistVariant::Origin, TwistVariant::IntervalPreserving] {
            let there = twist(&metric, &f, &v).unwrap();
            let back = twist(&there.metric, &there.inverse_weight(), &v).unwrap();
            let (SeparableMetric::Profile1D(x), SeparableMetric::Profile1D(y)) = (&back.metric, &metric) else {
                return Err(TestCaseError::fail("kind changed"));
            };
            prop_assert_eq!(&x.interval, &y.interval);
            prop_assert_eq!(&x.a, &y.a);
        }
    }

    #[test]
    fn metric_json_round_trip(m in 2usize..=3, c in prop::collection::vec(rational(), 4)) {
        let a: Vec<Polynomial> = (0..m).map(|j| Polynomial::new("x", c.iter().skip(j % 2).cloned().collect())).collect();
        for metric in [SeparableMetric::orthotoric(a.clone()), SeparableMetric::product(a.clone())] {
            let s = serde_json::to_string(&metric).unwrap();
            let back: SeparableMetric = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, metric);
        }
    }
}
