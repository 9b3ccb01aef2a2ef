//! The separable metric kinds and their static data.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::rational::serde_rat;
use crate::poly::{int, to_f64, MPoly, PaperQuadratic, Polynomial, RatFn, Rational};

use super::{GeomError, WeightFunction};

/// `g = dz²/A(z) + A(z) dt²` on an interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile1D {
    #[serde(with = "serde_rat::vec")]
    pub interval: Vec<Rational>,
    #[serde(rename = "A")]
    pub a: RatFn,
}

/// Product of `m` toric surfaces `dx²/A_j + A_j dt²`, CR-twisted by `f_b = b0 + Σ b_j x_j`.
/// `b = (1, 0, …, 0)` is the plain product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedProduct {
    pub m: usize,
    #[serde(rename = "A")]
    pub a: Vec<Polynomial>,
    pub b: WeightFunction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orthotoric {
    pub m: usize,
    #[serde(rename = "A")]
    pub a: Vec<Polynomial>,
}

/// Orthotoric data twisted by the polarized weight `f_q`; the separable
/// coordinates and the `A_j` are those of the untwisted metric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedOrthotoric {
    pub m: usize,
    #[serde(rename = "A")]
    pub a: Vec<Polynomial>,
    pub q: WeightFunction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AmbiSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ambitoric {
    pub q: PaperQuadratic,
    #[serde(rename = "A")]
    pub a: Polynomial,
    #[serde(rename = "B")]
    pub b: Polynomial,
    pub sign: AmbiSign,
}

/// Calabi ansatz with a one-dimensional fibre over a product of `base_dim`
/// constant-curvature surfaces of total scalar curvature `base_scal`:
/// `g = (a0 + a1 z) g_B + dz²/A + A θ²`, `dθ = a1 ω_B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalabiBundle1D {
    #[serde(with = "serde_rat")]
    pub base_scal: Rational,
    pub base_dim: usize,
    #[serde(with = "serde_rat")]
    pub a0: Rational,
    #[serde(with = "serde_rat")]
    pub a1: Rational,
    #[serde(rename = "A")]
    pub a: RatFn,
    #[serde(with = "serde_rat::vec", default = "unit_interval")]
    pub interval: Vec<Rational>,
}

pub fn unit_interval() -> Vec<Rational> {
    vec![int(-1), int(1)]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SeparableMetric {
    Profile1D(Profile1D),
    TwistedProduct(TwistedProduct),
    Orthotoric(Orthotoric),
    TwistedOrthotoric(TwistedOrthotoric),
    Ambitoric(Ambitoric),
    CalabiBundle1D(CalabiBundle1D),
}

/// Which functions count as Killing potentials, after clearing the kind's denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KillingBasis {
    /// `1, x_1, …, x_m`
    Affine,
    /// `σ_0, …, σ_m`
    Elementary,
}

impl SeparableMetric {
    pub fn profile(a: RatFn, lo: Rational, hi: Rational) -> Self {
        SeparableMetric::Profile1D(Profile1D { interval: vec![lo, hi], a })
    }

    pub fn sphere() -> Self {
        Self::profile(RatFn::from_poly(Polynomial::from_ints("z", &[1, 0, -1])), int(-1), int(1))
    }

    pub fn product(a: Vec<Polynomial>) -> Self {
        let m = a.len();
        SeparableMetric::TwistedProduct(TwistedProduct { m, a, b: WeightFunction::one(m) })
    }

    pub fn twisted_product(a: Vec<Polynomial>, b: WeightFunction) -> Self {
        SeparableMetric::TwistedProduct(TwistedProduct { m: a.len(), a, b })
    }

    pub fn orthotoric(a: Vec<Polynomial>) -> Self {
        SeparableMetric::Orthotoric(Orthotoric { m: a.len(), a })
    }

    pub fn twisted_orthotoric(a: Vec<Polynomial>, q: WeightFunction) -> Self {
        SeparableMetric::TwistedOrthotoric(TwistedOrthotoric { m: a.len(), a, q })
    }

    pub fn ambitoric(q: PaperQuadratic, a: Polynomial, b: Polynomial, sign: AmbiSign) -> Self {
        SeparableMetric::Ambitoric(Ambitoric { q, a, b, sign })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SeparableMetric::Profile1D(_) => "Profile1D",
            SeparableMetric::TwistedProduct(_) => "TwistedProduct",
            SeparableMetric::Orthotoric(_) => "Orthotoric",
            SeparableMetric::TwistedOrthotoric(_) => "TwistedOrthotoric",
            SeparableMetric::Ambitoric(_) => "Ambitoric",
            SeparableMetric::CalabiBundle1D(_) => "CalabiBundle1D",
        }
    }

    /// Number of separable variables.
    pub fn nvars(&self) -> usize {
        match self {
            SeparableMetric::Profile1D(_) | SeparableMetric::CalabiBundle1D(_) => 1,
            SeparableMetric::TwistedProduct(t) => t.m,
            SeparableMetric::Orthotoric(o) => o.m,
            SeparableMetric::TwistedOrthotoric(o) => o.m,
            SeparableMetric::Ambitoric(_) => 2,
        }
    }

    /// Complex dimension; the CR-natural weight is `ν = dim + 2`.
    pub fn complex_dim(&self) -> usize {
        match self {
            SeparableMetric::CalabiBundle1D(c) => c.base_dim + 1,
            _ => self.nvars(),
        }
    }

    /// Real dimension of the coordinate patch used by [`super::evaluate_metric`].
    pub fn real_dim(&self) -> usize {
        2 * self.complex_dim()
    }

    /// Coordinates the metric actually depends on (they come first).
    pub fn active_dim(&self) -> usize {
        match self {
            SeparableMetric::CalabiBundle1D(c) => 1 + c.base_dim,
            _ => self.nvars(),
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        crate::poly::mpoly::default_names(self.nvars())
    }

    pub fn killing_basis(&self) -> KillingBasis {
        match self {
            SeparableMetric::Orthotoric(_) | SeparableMetric::TwistedOrthotoric(_) | SeparableMetric::Ambitoric(_) => {
                KillingBasis::Elementary
            }
            _ => KillingBasis::Affine,
        }
    }

    /// `Dm`: Killing potentials are `(basis combination) / Dm`.
    pub fn killing_denominator(&self) -> MPoly {
        let n = self.nvars();
        match self {
            SeparableMetric::TwistedProduct(t) => t.b.to_mpoly(),
            SeparableMetric::TwistedOrthotoric(o) => o.q.to_mpoly(),
            SeparableMetric::Ambitoric(a) => match a.sign {
                AmbiSign::Plus => WeightFunction::from_quadratic(&a.q).to_mpoly(),
                AmbiSign::Minus => MPoly::var(2, 0).sub(&MPoly::var(2, 1)),
            },
            _ => MPoly::one(n),
        }
    }

    /// Plain (untwisted) kinds have `Dm ≡ 1`.
    pub fn is_twisted(&self) -> bool {
        !self.killing_denominator().is_constant() || !self.killing_denominator().constant_value().unwrap().is_one()
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        let bad = |s: String| Err(GeomError::InvalidMetric(s));
        let check_interval = |iv: &[Rational]| {
            if iv.len() != 2 || iv[0] >= iv[1] {
                return Err(GeomError::InvalidMetric("interval must be [lo, hi] with lo < hi".into()));
            }
            Ok(())
        };
        let nonzero = |a: &[Polynomial]| {
            if a.iter().any(|p| p.is_zero()) {
                return Err(GeomError::InvalidMetric("profile polynomial is zero".into()));
            }
            Ok(())
        };
        match self {
            SeparableMetric::Profile1D(p) => {
                check_interval(&p.interval)?;
                if p.a.is_zero() {
                    return bad("A is zero".into());
                }
            }
            SeparableMetric::TwistedProduct(t) => {
                if t.m == 0 || t.a.len() != t.m {
                    return bad(format!("expected {} profile polynomials, got {}", t.m, t.a.len()));
                }
                nonzero(&t.a)?;
                match &t.b {
                    WeightFunction::ProductAffine { b, .. } if b.len() == t.m => {}
                    _ => return bad("b must be ProductAffine with m slopes".into()),
                }
            }
            SeparableMetric::Orthotoric(o) => {
                if o.m < 2 || o.a.len() != o.m {
                    return bad("orthotoric needs m ≥ 2 and m profile polynomials".into());
                }
                nonzero(&o.a)?;
            }
            SeparableMetric::TwistedOrthotoric(o) => {
                if o.m < 2 || o.a.len() != o.m {
                    return bad("orthotoric needs m ≥ 2 and m profile polynomials".into());
                }
                nonzero(&o.a)?;
                match &o.q {
                    WeightFunction::Polarized { q } if q.len() == o.m + 1 && q.iter().any(|c| !c.is_zero()) => {}
                    _ => return bad("q must be a nonzero Polarized weight of length m+1".into()),
                }
            }
            SeparableMetric::Ambitoric(a) => {
                nonzero(&[a.a.clone(), a.b.clone()])?;
                if a.q.is_zero() {
                    return bad("q is zero".into());
                }
            }
            SeparableMetric::CalabiBundle1D(c) => {
                check_interval(&c.interval)?;
                if c.base_dim == 0 {
                    return bad("base_dim must be ≥ 1".into());
                }
                if c.a.is_zero() {
                    return bad("A is zero".into());
                }
                let p = |z: &Rational| &c.a0 + &c.a1 * z;
                if !p(&c.interval[0]).is_positive() || !p(&c.interval[1]).is_positive() {
                    return bad("a0 + a1 z must be positive on the interval".into());
                }
            }
        }
        Ok(())
    }

    /// Checks that `w` has a form this kind can interpret.
    pub fn check_weight(&self, w: &WeightFunction) -> Result<(), GeomError> {
        let n = self.nvars();
        let ok = match (self, w) {
            (_, w) if w.is_constant() && w.m() == n => true,
            (SeparableMetric::Profile1D(_) | SeparableMetric::CalabiBundle1D(_), w) => w.m() == 1,
            (SeparableMetric::TwistedProduct(_), w) => w.m() == n,
            (
                SeparableMetric::Orthotoric(_) | SeparableMetric::TwistedOrthotoric(_) | SeparableMetric::Ambitoric(_),
                WeightFunction::Polarized { q },
            ) => q.len() == n + 1,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(GeomError::IncompatibleWeight(format!(
                "{} weight with {} coefficients does not fit {} in {} variables",
                if w.is_polarized() { "Polarized" } else { "ProductAffine" },
                w.coeffs().len(),
                self.kind_name(),
                n
            )))
        }
    }

    /// Profile polynomials in slot order (`A_2 = -B` for positive ambitoric, `B` for negative).
    pub fn slot_profiles(&self) -> Vec<RatFn> {
        let wrap = |v: &[Polynomial]| v.iter().map(|p| RatFn::from_poly(p.clone())).collect();
        match self {
            SeparableMetric::Profile1D(p) => vec![p.a.clone()],
            SeparableMetric::CalabiBundle1D(c) => vec![c.a.clone()],
            SeparableMetric::TwistedProduct(t) => wrap(&t.a),
            SeparableMetric::Orthotoric(o) => wrap(&o.a),
            SeparableMetric::TwistedOrthotoric(o) => wrap(&o.a),
            SeparableMetric::Ambitoric(a) => {
                let b = match a.sign {
                    AmbiSign::Plus => -&a.b,
                    AmbiSign::Minus => a.b.clone(),
                };
                vec![RatFn::from_poly(a.a.clone()), RatFn::from_poly(b)]
            }
        }
    }

    /// Weight function value at a point of the separable variables: `f_w / Dm`.
    pub fn weight_value(&self, w: &WeightFunction, x: &[f64]) -> f64 {
        w.eval_f64(&x[..self.nvars()]) / self.killing_denominator().eval_f64(&x[..self.nvars()])
    }

    /// Positive ambitoric data seen as a twisted orthotoric metric in `(A, -B)`.
    pub fn ambitoric_as_twisted_orthotoric(a: &Ambitoric) -> SeparableMetric {
        Self::twisted_orthotoric(vec![a.a.clone(), -&a.b], WeightFunction::from_quadratic(&a.q))
    }

    pub fn interval(&self) -> Option<(f64, f64)> {
        match self {
            SeparableMetric::Profile1D(p) => Some((to_f64(&p.interval[0]), to_f64(&p.interval[1]))),
            SeparableMetric::CalabiBundle1D(c) => Some((to_f64(&c.interval[0]), to_f64(&c.interval[1]))),
            _ => None,
        }
    }
}
