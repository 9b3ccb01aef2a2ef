//! Projective changes of variable and the classical pairings on binary forms.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{int, serde_rat, Rational};
use super::univariate::Polynomial;
use super::PolyError;

/// `Q(z) = (γz+δ)^d · P((αz+β)/(γz+δ))`.
pub fn mobius_transform(p: &Polynomial, map: [&Rational; 4], d: usize) -> Result<Polynomial, PolyError> {
    let [a, b, c, dd] = map;
    if (a * dd - b * c).is_zero() {
        return Err(PolyError::SingularMap);
    }
    if p.deg0() > d {
        return Err(PolyError::DegreeTooHigh { degree: p.deg0(), weight: d });
    }
    let var = p.var.as_str();
    let num = Polynomial::new(var, vec![b.clone(), a.clone()]);
    let den = Polynomial::new(var, vec![dd.clone(), c.clone()]);
    let mut out = Polynomial::zero(var);
    for (i, ci) in p.coeffs.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        let term = &num.pow(i as u32) * &den.pow((d - i) as u32);
        out = &out + &term.scale(ci);
    }
    Ok(out)
}

/// Owned-argument convenience wrapper around [`mobius_transform`].
pub fn mobius(p: &Polynomial, map: &[Rational; 4], d: usize) -> Result<Polynomial, PolyError> {
    mobius_transform(p, [&map[0], &map[1], &map[2], &map[3]], d)
}

/// Inverse Möbius matrix (adjugate).
pub fn mobius_inverse(map: &[Rational; 4]) -> [Rational; 4] {
    [map[3].clone(), -map[1].clone(), -map[2].clone(), map[0].clone()]
}

pub fn mobius_det(map: &[Rational; 4]) -> Rational {
    &map[0] * &map[3] - &map[1] * &map[2]
}

/// `q(x) = q0 + 2 q1 x + q2 x²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PaperQuadratic {
    #[serde(with = "serde_rat")]
    pub q0: Rational,
    #[serde(with = "serde_rat")]
    pub q1: Rational,
    #[serde(with = "serde_rat")]
    pub q2: Rational,
}

impl PaperQuadratic {
    pub fn new(q0: Rational, q1: Rational, q2: Rational) -> Self {
        PaperQuadratic { q0, q1, q2 }
    }

    pub fn one() -> Self {
        Self::new(Rational::one(), Rational::zero(), Rational::zero())
    }

    pub fn to_polynomial(&self, var: &str) -> Polynomial {
        Polynomial::new(var, vec![self.q0.clone(), &self.q1 * int(2), self.q2.clone()])
    }

    pub fn from_polynomial(p: &Polynomial) -> Result<Self, PolyError> {
        if p.deg0() > 2 {
            return Err(PolyError::DegreeTooHigh { degree: p.deg0(), weight: 2 });
        }
        Ok(Self::new(p.coeff(0), p.coeff(1) / int(2), p.coeff(2)))
    }

    /// Coefficients of the polarization `q0 + q1 (x1+x2) + q2 x1 x2` in the σ basis.
    pub fn polarized(&self) -> Vec<Rational> {
        vec![self.q0.clone(), self.q1.clone(), self.q2.clone()]
    }

    pub fn eval_polarized(&self, x1: f64, x2: f64) -> f64 {
        use super::rational::to_f64;
        to_f64(&self.q0) + to_f64(&self.q1) * (x1 + x2) + to_f64(&self.q2) * x1 * x2
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(&self.q0 * s, &self.q1 * s, &self.q2 * s)
    }

    pub fn is_zero(&self) -> bool {
        self.q0.is_zero() && self.q1.is_zero() && self.q2.is_zero()
    }
}

/// `⟨p, q⟩ = p0 q2 − p1 q1 + p2 q0`.
pub fn quadratic_pairing(p: &PaperQuadratic, q: &PaperQuadratic) -> Rational {
    &p.q0 * &q.q2 - &p.q1 * &q.q1 + &p.q2 * &q.q0
}

/// `p0 q2 − 2 p1 q1 + p2 q0`: the polar form of the discriminant in the `q0 + 2 q1 x + q2 x²`
/// normalization. Vanishes iff the roots of `p` and `q` separate each other harmonically.
pub fn harmonic_pairing(p: &PaperQuadratic, q: &PaperQuadratic) -> Rational {
    &p.q0 * &q.q2 - &p.q1 * &q.q1 * int(2) + &p.q2 * &q.q0
}

/// `{p, r} = p′ r − p r′`.
pub fn poisson_bracket(p: &Polynomial, r: &Polynomial) -> Polynomial {
    &(&p.derive() * r) - &(p * &r.derive())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransvectantVariant {
    /// `p P″ − 3 p′ P + 6 p″ P`, as printed.
    Verbatim,
    /// `p P″ − 3 p′ P′ + 6 p″ P`, the classical second transvectant.
    Classical,
}

impl TransvectantVariant {
    pub const ALL: [TransvectantVariant; 2] = [TransvectantVariant::Verbatim, TransvectantVariant::Classical];
}

pub fn transvectant2_variant(p: &Polynomial, big_p: &Polynomial, v: TransvectantVariant) -> Polynomial {
    let pp = p.derive();
    let ppp = pp.derive();
    let first = p * &big_p.nth_derivative(2);
    let middle = match v {
        TransvectantVariant::Verbatim => &pp * big_p,
        TransvectantVariant::Classical => &pp * &big_p.derive(),
    };
    let last = &ppp * big_p;
    &(&first - &middle.scale(&int(3))) + &last.scale(&int(6))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transvectants {
    pub verbatim: Polynomial,
    pub classical: Polynomial,
}

pub fn transvectant2(p: &Polynomial, big_p: &Polynomial) -> Transvectants {
    Transvectants {
        verbatim: transvectant2_variant(p, big_p, TransvectantVariant::Verbatim),
        classical: transvectant2_variant(p, big_p, TransvectantVariant::Classical),
    }
}
