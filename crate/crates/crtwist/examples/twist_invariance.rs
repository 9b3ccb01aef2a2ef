//! Twisting a one-dimensional profile and checking `Scal_{f_b,3}(g) = f_a · Scal_{f̃_b,3}(g̃)∘φ` exactly.

use crtwist::geom::{weighted_scal_definitional, Profile1D, SeparableMetric, WeightFunction};
use crtwist::poly::{int, Polynomial, RatFn};
use crtwist::twist::{twist, twist_factor, TwistVariant};

fn main() {
    let g = SeparableMetric::Profile1D(Profile1D {
        interval: vec![int(-1), int(1)],
        a: RatFn::from_poly(Polynomial::from_ints("z", &[2, 1, -1, -2])),
    });
    let f_a = WeightFunction::parse_affine("3 + z", 1).unwrap();
    let f_b = WeightFunction::parse_affine("2 - z", 1).unwrap();
    let nu = int(3);

    for variant in [TwistVariant::Origin, TwistVariant::IntervalPreserving] {
        let t = twist(&g, &f_a, &variant).unwrap();
        let SeparableMetric::Profile1D(p) = &t.metric else { unreachable!() };
        println!("{variant:?}: {}", t.map.coords.describe());
        println!("  A~ = {} on [{}, {}]", p.a, p.interval[0], p.interval[1]);

        let lhs = weighted_scal_definitional(&g, &f_b, &nu).unwrap();
        let rhs = weighted_scal_definitional(&t.metric, &t.induced_weight(&f_b), &nu).unwrap();
        let rhs = t.pullback(&rhs).unwrap().mul(&twist_factor(&g, &t));
        println!("  identity holds exactly: {}", lhs.equals(&rhs));

        let back = twist(&t.metric, &t.inverse_weight(), &variant).unwrap();
        println!("  twisting back by 1/f~_a recovers A: {}", back.metric == g);
    }
}
