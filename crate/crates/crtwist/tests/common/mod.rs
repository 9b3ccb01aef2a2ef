//! Seeded random generators for test corpora.
#![allow(dead_code)]

use crtwist::geom::{AmbiSign, CalabiBundle1D, SeparableMetric, WeightFunction};
use crtwist::poly::{int, rat, PaperQuadratic, Polynomial, RatFn, Rational};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Uniform rational in `[lo, hi]` with denominator `den`.
pub fn r(rng: &mut StdRng, lo: i64, hi: i64, den: i64) -> Rational {
    rat(rng.gen_range(lo * den..=hi * den), den)
}

pub fn x(c: &[i64]) -> Polynomial {
    Polynomial::from_ints("x", c)
}

pub fn poly(var: &str, c: Vec<Rational>) -> Polynomial {
    Polynomial::new(var, c)
}

/// `(1 - v²)(c0 + c1 v + c2 v²)` with `c0 ≥ 1` dominating: positive on `(-1, 1)`.
pub fn compact_profile(rng: &mut StdRng, var: &str) -> Polynomial {
    let c0 = r(rng, 1, 3, 4);
    let c1 = r(rng, -2, 2, 10) / int(5);
    let c2 = r(rng, -2, 2, 10) / int(5);
    let base = poly(var, vec![int(1), int(0), int(-1)]);
    &base * &poly(var, vec![c0, c1, c2])
}

/// Sign-definite on `[-1, 1]`: `s·(c0 + c1 v + c2 v² + c3 v³)` with `c0 ≥ 2`, `|c_i| ≤ 1/2`.
pub fn definite_cubic(rng: &mut StdRng, var: &str, sign: i64) -> Polynomial {
    let c = vec![r(rng, 2, 3, 4), r(rng, -1, 1, 8) / int(2), r(rng, -1, 1, 8) / int(2), r(rng, -1, 1, 8) / int(2)];
    poly(var, c).scale(&int(sign))
}

/// `b0 + Σ b_j x_j` with `b0 ∈ [2, 4]`, `|b_j| ≤ 1/2`.
pub fn positive_affine(rng: &mut StdRng, m: usize) -> WeightFunction {
    WeightFunction::product(r(rng, 2, 4, 4), (0..m).map(|_| r(rng, -1, 1, 6) / int(2)).collect())
}

/// `Σ q_r σ_r` with `q0 ∈ [3, 4]`, small higher coefficients: positive on `[-1, 1]^m`.
pub fn positive_polarized(rng: &mut StdRng, m: usize) -> WeightFunction {
    let mut q = vec![r(rng, 3, 4, 4)];
    for _ in 0..m {
        q.push(r(rng, -1, 1, 6) / int(4));
    }
    WeightFunction::polarized(q)
}

pub fn nu_choice(rng: &mut StdRng) -> Rational {
    [rat(5, 2), int(3), int(4), rat(7, 3), int(5)][rng.gen_range(0..5)].clone()
}

pub fn random_profile1d(rng: &mut StdRng) -> SeparableMetric {
    SeparableMetric::profile(RatFn::from_poly(compact_profile(rng, "z")), int(-1), int(1))
}

pub fn random_product(rng: &mut StdRng, m: usize, twisted: bool) -> SeparableMetric {
    let a = (0..m).map(|_| compact_profile(rng, "x")).collect();
    let b = if twisted { positive_affine(rng, m) } else { WeightFunction::one(m) };
    SeparableMetric::twisted_product(a, b)
}

/// Orthotoric profiles need `A_j/Δ_j > 0` on `x_1 > … > x_m`, i.e. sign `(-1)^{j-1}`.
pub fn random_orthotoric(rng: &mut StdRng, m: usize) -> SeparableMetric {
    let a = (0..m).map(|j| definite_cubic(rng, "x", if j % 2 == 0 { 1 } else { -1 })).collect();
    SeparableMetric::orthotoric(a)
}

pub fn random_twisted_orthotoric(rng: &mut StdRng, m: usize) -> SeparableMetric {
    let a = (0..m).map(|j| definite_cubic(rng, "x", if j % 2 == 0 { 1 } else { -1 })).collect();
    SeparableMetric::twisted_orthotoric(a, positive_polarized(rng, m))
}

pub fn random_calabi(rng: &mut StdRng) -> SeparableMetric {
    SeparableMetric::CalabiBundle1D(CalabiBundle1D {
        base_scal: r(rng, -2, 2, 3),
        base_dim: rng.gen_range(1..=2),
        a0: r(rng, 2, 4, 4),
        a1: r(rng, -1, 1, 4),
        a: RatFn::from_poly(compact_profile(rng, "z")),
        interval: vec![int(-1), int(1)],
    })
}

pub fn random_quadratic_positive(rng: &mut StdRng) -> PaperQuadratic {
    PaperQuadratic::new(r(rng, 3, 4, 4), r(rng, -1, 1, 6) / int(4), r(rng, -1, 1, 6) / int(4))
}

pub fn random_ambitoric(rng: &mut StdRng, sign: AmbiSign) -> SeparableMetric {
    SeparableMetric::ambitoric(
        random_quadratic_positive(rng),
        definite_cubic(rng, "x", 1),
        definite_cubic(rng, "x", 1),
        sign,
    )
}
