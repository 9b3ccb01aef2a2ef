//! CR twists: rescaling the Reeb direction by a positive Killing potential `f_a`
//! and re-reading the quotient metric in the same (or Möbius-related) separable
//! coordinates.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::geom::{
    check_weight_positive, weight_expr, AffineChart, AmbiSign, Ambitoric, CalabiBundle1D, GeomError, Orthotoric,
    Profile1D, SeparableMetric, TwistedOrthotoric, TwistedProduct, WeightFunction,
};
use crate::legendre::{LegendreError, PotentialFunction};
use crate::poly::rational::serde_rat;
use crate::poly::{int, mobius, to_f64, PaperQuadratic, PolyError, Polynomial, RatFn, Rational, RationalExpr};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TwistError {
    #[error("twisting weight vanishes or changes sign on the domain: {0}")]
    WeightVanishes(String),
    #[error("a0 = 0: re-chart by a translation first")]
    ZeroA0,
    #[error("unsupported twist: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Legendre(#[from] LegendreError),
}

/// How the new fibre coordinate is normalized in one dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum TwistVariant {
    /// `z̃ = z/(a0 + a1 z)`.
    Origin,
    /// `z̃ = (a0 z + a1)/(a0 + a1 z)`, which fixes `±1`.
    IntervalPreserving,
    /// The origin map followed by `z̃ ↦ λ z̃ + κ`.
    General {
        #[serde(with = "serde_rat")]
        lambda: Rational,
        #[serde(with = "serde_rat")]
        kappa: Rational,
    },
}

impl TwistVariant {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "origin" => Some(TwistVariant::Origin),
            "interval" | "interval_preserving" => Some(TwistVariant::IntervalPreserving),
            _ => None,
        }
    }
}

/// Separable-coordinate part of a twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum CoordinateMap {
    Identity,
    /// `z̃ = (αz + β)/(γz + δ)` with `forward = (α, β, γ, δ)`; `translation` is the
    /// re-chart shift `c` (the map already includes it, `z′ = z − c`).
    Mobius {
        #[serde(with = "serde_rat::vec")]
        forward: Vec<Rational>,
        #[serde(with = "serde_rat::vec")]
        inverse: Vec<Rational>,
        #[serde(with = "serde_rat")]
        translation: Rational,
    },
}

fn arr(v: &[Rational]) -> [Rational; 4] {
    [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]
}

fn apply_mobius(m: &[Rational], z: &Rational) -> Rational {
    (&m[0] * z + &m[1]) / (&m[2] * z + &m[3])
}

fn apply_mobius_f64(m: &[Rational], z: f64) -> f64 {
    let m: Vec<f64> = m.iter().map(to_f64).collect();
    (m[0] * z + m[1]) / (m[2] * z + m[3])
}

impl CoordinateMap {
    pub fn forward_f64(&self, x: &[f64]) -> Vec<f64> {
        match self {
            CoordinateMap::Identity => x.to_vec(),
            CoordinateMap::Mobius { forward, .. } => {
                let mut y = x.to_vec();
                y[0] = apply_mobius_f64(forward, x[0]);
                y
            }
        }
    }

    pub fn inverse_f64(&self, x: &[f64]) -> Vec<f64> {
        match self {
            CoordinateMap::Identity => x.to_vec(),
            CoordinateMap::Mobius { inverse, .. } => {
                let mut y = x.to_vec();
                y[0] = apply_mobius_f64(inverse, x[0]);
                y
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CoordinateMap::Identity => "separable coordinates unchanged".into(),
            CoordinateMap::Mobius { forward: f, translation, .. } => {
                let mut s = format!("z~ = (({})*z + ({})) / (({})*z + ({}))", f[0], f[1], f[2], f[3]);
                if !translation.is_zero() {
                    s.push_str(&format!(", after re-charting z' = z - {translation}"));
                }
                s
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistMap {
    /// The twisting weight `f_a`, read on the source metric.
    pub weight: WeightFunction,
    pub chart_in: AffineChart,
    pub chart_out: AffineChart,
    pub variant: TwistVariant,
    pub coords: CoordinateMap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Twisted {
    pub metric: SeparableMetric,
    pub map: TwistMap,
    inverse: WeightFunction,
}

impl Twisted {
    /// `φ` on separable coordinates.
    pub fn point_map(&self, x: &[f64]) -> Vec<f64> {
        self.map.coords.forward_f64(x)
    }

    /// The weight on the twisted metric representing `(f_b / f_a) ∘ φ⁻¹`.
    pub fn induced_weight(&self, f_b: &WeightFunction) -> WeightFunction {
        match &self.map.coords {
            CoordinateMap::Identity => f_b.clone(),
            CoordinateMap::Mobius { inverse, .. } => {
                let a = self.map.weight.coeffs();
                let b = f_b.coeffs();
                let (c0, c1) = induced_affine(&a, &b, inverse);
                WeightFunction::product(c0, vec![c1])
            }
        }
    }

    /// `1/f̃_a`: twisting the result by it undoes this twist.
    pub fn inverse_weight(&self) -> WeightFunction {
        self.inverse.clone()
    }

    /// Exact pull-back `e ∘ φ` of an expression on the twisted metric.
    pub fn pullback(&self, e: &RationalExpr) -> Option<RationalExpr> {
        match &self.map.coords {
            CoordinateMap::Identity => Some(e.clone()),
            CoordinateMap::Mobius { forward, .. } => {
                let r = RatFn::from_rexpr(e, 0, "z")?;
                Some(r.compose_mobius(&arr(forward)).ok()?.to_rexpr(1, 0))
            }
        }
    }
}

/// Coefficients of `f_b/f_a` in `z̃`, where `z = N(z̃)`; the `z̃`-denominator cancels.
fn induced_affine(a: &[Rational], b: &[Rational], n: &[Rational]) -> (Rational, Rational) {
    let (p, q, r, s) = (&n[0], &n[1], &n[2], &n[3]);
    debug_assert!((&a[0] * r + &a[1] * p).is_zero());
    let d = &a[0] * s + &a[1] * q;
    ((&b[0] * s + &b[1] * q) / &d, (&b[0] * r + &b[1] * p) / &d)
}

fn mat_mul(x: &[Rational; 4], y: &[Rational; 4]) -> [Rational; 4] {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

/// One-dimensional twist data.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileTwist {
    pub a: RatFn,
    pub interval: Vec<Rational>,
    pub coords: CoordinateMap,
}

/// `Ã(z̃) = J² f_a A` with `J = dz̃/dz`, which is `a0² A/f_a³` (origin) or
/// `(a0² − a1²)² A/f_a³` (interval preserving).
pub fn twist_profile_1d(
    a: &RatFn,
    interval: &[Rational],
    a0: &Rational,
    a1: &Rational,
    variant: &TwistVariant,
) -> Result<ProfileTwist, TwistError> {
    let fa = |z: &Rational| a0 + a1 * z;
    let (lo, hi) = (&interval[0], &interval[1]);
    let (flo, fhi) = (fa(lo), fa(hi));
    if !flo.is_positive() || !fhi.is_positive() {
        return Err(TwistError::WeightVanishes(format!("{a0} + {a1} z on [{lo}, {hi}]")));
    }
    let mut c = Rational::zero();
    let mut b0 = a0.clone();
    if a0.is_zero() {
        if *variant == TwistVariant::IntervalPreserving {
            return Err(TwistError::WeightVanishes("interval-preserving twist needs |a0| > |a1|".into()));
        }
        while b0.is_zero() {
            c += Rational::one();
            b0 = a0 + a1 * &c;
        }
    }
    let origin = [Rational::one(), Rational::zero(), a1.clone(), b0.clone()];
    let (lam, kap) = match variant {
        TwistVariant::Origin => (Rational::one(), Rational::zero()),
        TwistVariant::IntervalPreserving => {
            if a0.abs() <= a1.abs() {
                return Err(TwistError::WeightVanishes("interval-preserving twist needs |a0| > |a1|".into()));
            }
            ((a0 * a0 - a1 * a1) / a0, a1 / a0)
        }
        TwistVariant::General { lambda, kappa } => {
            if lambda.is_zero() {
                return Err(TwistError::Unsupported("lambda = 0".into()));
            }
            (lambda.clone(), kappa.clone())
        }
    };
    let affine = [lam, kap, Rational::zero(), Rational::one()];
    let shift = [Rational::one(), -c.clone(), Rational::zero(), Rational::one()];
    let fwd = mat_mul(&affine, &mat_mul(&origin, &shift));
    let inv = [fwd[3].clone(), -&fwd[1], -&fwd[2], fwd[0].clone()];
    let det = &inv[0] * &inv[3] - &inv[1] * &inv[2];
    let d = a0 * &inv[3] + a1 * &inv[1];
    let at = a.mobius_weighted(&inv, 3)?.scale(&(d / (&det * &det)));
    let mut iv = vec![apply_mobius(&fwd, lo), apply_mobius(&fwd, hi)];
    iv.sort();
    Ok(ProfileTwist {
        a: at.with_var("z"),
        interval: iv,
        coords: CoordinateMap::Mobius { forward: fwd.to_vec(), inverse: inv.to_vec(), translation: c },
    })
}

fn affine_1d(w: &WeightFunction) -> Result<(Rational, Rational), TwistError> {
    let c = w.coeffs();
    if c.len() != 2 {
        return Err(GeomError::IncompatibleWeight(format!("expected an affine weight in one variable, got {} coefficients", c.len())).into());
    }
    Ok((c[0].clone(), c[1].clone()))
}

fn twisted_1d(metric: SeparableMetric, w: &WeightFunction, variant: &TwistVariant, coords: CoordinateMap) -> Twisted {
    let map = TwistMap {
        weight: w.clone(),
        chart_in: AffineChart::standard(1),
        chart_out: AffineChart::standard(1),
        variant: variant.clone(),
        coords,
    };
    let mut t = Twisted { metric, map, inverse: WeightFunction::one(1) };
    t.inverse = t.induced_weight(&WeightFunction::one(1));
    t
}

/// Separable coordinates fixed; `old` is the source's own denominator weight.
fn twisted_fixed(metric: SeparableMetric, w: &WeightFunction, m: usize, old: WeightFunction) -> Twisted {
    let map = TwistMap {
        weight: w.clone(),
        chart_in: AffineChart::standard(m),
        chart_out: AffineChart::standard(m),
        variant: TwistVariant::Origin,
        coords: CoordinateMap::Identity,
    };
    Twisted { metric, map, inverse: old }
}

/// Twists a `Profile1D` metric by `f_a = a0 + a1 z`.
pub fn twist_profile(p: &Profile1D, w: &WeightFunction, variant: &TwistVariant) -> Result<Twisted, TwistError> {
    let (a0, a1) = affine_1d(w)?;
    let t = twist_profile_1d(&p.a, &p.interval, &a0, &a1, variant)?;
    Ok(twisted_1d(SeparableMetric::Profile1D(Profile1D { interval: t.interval, a: t.a }), w, variant, t.coords))
}

/// Twists `TwistedProduct{A, b}` by the function `f_w/f_b`: the result is `TwistedProduct{A, w}`.
pub fn twist_twisted_product(t: &TwistedProduct, w: &WeightFunction) -> Result<Twisted, TwistError> {
    let src = SeparableMetric::TwistedProduct(t.clone());
    match w {
        WeightFunction::ProductAffine { b, .. } if b.len() == t.m => {}
        _ => return Err(GeomError::IncompatibleWeight("twisted product needs a ProductAffine weight in m variables".into()).into()),
    }
    check_weight_positive(&src, w)?;
    let out = SeparableMetric::TwistedProduct(TwistedProduct { m: t.m, a: t.a.clone(), b: w.clone() });
    Ok(twisted_fixed(out, w, t.m, t.b.clone()))
}

/// Twists orthotoric data (plain, already twisted, or positive ambitoric) by the
/// polarized weight read on it. Twisting plain orthotoric data by `σ_0` returns it unchanged.
pub fn twist_orthotoric(metric: &SeparableMetric, q: &WeightFunction) -> Result<Twisted, TwistError> {
    let (m, a, old) = match metric {
        SeparableMetric::Orthotoric(o) => (o.m, o.a.clone(), WeightFunction::polarized_one(o.m)),
        SeparableMetric::TwistedOrthotoric(o) => (o.m, o.a.clone(), o.q.clone()),
        SeparableMetric::Ambitoric(a) if a.sign == AmbiSign::Plus => {
            (2, vec![a.a.clone(), -&a.b], WeightFunction::from_quadratic(&a.q))
        }
        _ => return Err(TwistError::Unsupported(format!("orthotoric twist of {}", metric.kind_name()))),
    };
    match q {
        WeightFunction::Polarized { q } if q.len() == m + 1 => {}
        _ => return Err(GeomError::IncompatibleWeight(format!("need a Polarized weight with {} coefficients", m + 1)).into()),
    }
    check_weight_positive(metric, q)?;
    let out = if q.is_one() {
        SeparableMetric::Orthotoric(Orthotoric { m, a })
    } else if let SeparableMetric::Ambitoric(amb) = metric {
        let c = q.coeffs();
        SeparableMetric::Ambitoric(Ambitoric {
            q: PaperQuadratic::new(c[0].clone(), c[1].clone(), c[2].clone()),
            a: amb.a.clone(),
            b: amb.b.clone(),
            sign: AmbiSign::Plus,
        })
    } else {
        SeparableMetric::TwistedOrthotoric(TwistedOrthotoric { m, a, q: q.clone() })
    };
    Ok(twisted_fixed(out, q, m, old))
}

/// Twists a Calabi bundle by the fibrewise weight `c0 + c1 z`; the base factor
/// `a0 + a1 z` becomes `(a0 + a1 z)/(c0 + c1 z)` in the new fibre coordinate.
pub fn twist_calabi(c: &CalabiBundle1D, w: &WeightFunction, variant: &TwistVariant) -> Result<Twisted, TwistError> {
    let (c0, c1) = affine_1d(w)?;
    let t = twist_profile_1d(&c.a, &c.interval, &c0, &c1, variant)?;
    let CoordinateMap::Mobius { inverse, .. } = &t.coords else { unreachable!() };
    let (p0, p1) = induced_affine(&[c0, c1], &[c.a0.clone(), c.a1.clone()], inverse);
    let out = SeparableMetric::CalabiBundle1D(CalabiBundle1D {
        base_scal: c.base_scal.clone(),
        base_dim: c.base_dim,
        a0: p0,
        a1: p1,
        a: t.a,
        interval: t.interval,
    });
    Ok(twisted_1d(out, w, variant, t.coords))
}

/// The Kähler product `g_B + dz²/A + A dt²` this bundle is a twist of (twist by `a0 + a1 z`).
pub fn calabi_to_product(c: &CalabiBundle1D, variant: &TwistVariant) -> Result<Twisted, TwistError> {
    twist_calabi(c, &WeightFunction::product(c.a0.clone(), vec![c.a1.clone()]), variant)
}

/// The product `g_B + dz²/A + A dt²` twisted by `f_b`: a Calabi bundle with base factor `1/f_b`.
pub fn product_to_calabi(
    base_scal: Rational,
    base_dim: usize,
    a: RatFn,
    interval: Vec<Rational>,
    f_b: &WeightFunction,
    variant: &TwistVariant,
) -> Result<Twisted, TwistError> {
    let product = CalabiBundle1D { base_scal, base_dim, a0: Rational::one(), a1: Rational::zero(), a, interval };
    twist_calabi(&product, f_b, variant)
}

/// Dispatches on the metric kind.
pub fn twist(metric: &SeparableMetric, w: &WeightFunction, variant: &TwistVariant) -> Result<Twisted, TwistError> {
    metric.validate()?;
    match metric {
        SeparableMetric::Profile1D(p) => twist_profile(p, w, variant),
        SeparableMetric::CalabiBundle1D(c) => twist_calabi(c, w, variant),
        SeparableMetric::TwistedProduct(t) => twist_twisted_product(t, w),
        SeparableMetric::Orthotoric(_) | SeparableMetric::TwistedOrthotoric(_) => twist_orthotoric(metric, w),
        SeparableMetric::Ambitoric(a) if a.sign == AmbiSign::Plus => twist_orthotoric(metric, w),
        SeparableMetric::Ambitoric(_) => Err(TwistError::Unsupported("negative ambitoric data".into())),
    }
}

/// `f_a` as an expression on the source metric.
pub fn twist_factor(source: &SeparableMetric, tw: &Twisted) -> RationalExpr {
    weight_expr(source, &tw.map.weight)
}

/// Orthotoric data in the inverted variables `x̃ = 1/x`: `Ã_j(x̃) = (−1)^{m−1} x̃^{m+2} A_j(1/x̃)`.
/// Twisting by `σ_m` gives a metric isometric to this one.
pub fn orthotoric_inversion(o: &Orthotoric) -> Result<Orthotoric, TwistError> {
    let w = o.m + 2;
    let map = [Rational::zero(), Rational::one(), Rational::one(), Rational::zero()];
    let sign = if o.m % 2 == 1 { int(1) } else { int(-1) };
    let a = o.a.iter().map(|p| Ok(mobius(p, &map, w)?.scale(&sign))).collect::<Result<Vec<Polynomial>, PolyError>>()?;
    Ok(Orthotoric { m: o.m, a })
}

/// Potential-level twist: `ũ(z̃) = u(z)/f_a(z)` with `z = a0 z̃/(1 − Σ a_k z̃_k)`.
#[derive(Clone, Debug)]
pub struct PotentialTwist {
    pub potential: PotentialFunction,
    pub a: Vec<f64>,
}

impl PotentialTwist {
    /// `z̃ = z/f_a(z)`; the momenta transform as `μ̃ = μ/f_a`.
    pub fn forward(&self, z: &[f64]) -> Vec<f64> {
        let f = self.a[0] + z.iter().zip(&self.a[1..]).map(|(x, y)| x * y).sum::<f64>();
        z.iter().map(|v| v / f).collect()
    }

    pub fn inverse(&self, zt: &[f64]) -> Vec<f64> {
        inverse_point(&self.a, zt)
    }

    /// `t̃_j = t_j − (a_j/a0) t_0`, `j = 1..m`.
    pub fn angles(&self, t: &[f64]) -> Vec<f64> {
        (1..t.len()).map(|j| t[j] - self.a[j] / self.a[0] * t[0]).collect()
    }
}

fn inverse_point(a: &[f64], zt: &[f64]) -> Vec<f64> {
    let d = 1.0 - zt.iter().zip(&a[1..]).map(|(x, y)| x * y).sum::<f64>();
    zt.iter().map(|v| a[0] * v / d).collect()
}

pub fn twist_potential(u: &PotentialFunction, f_a: &WeightFunction) -> Result<PotentialTwist, TwistError> {
    let a: Vec<f64> = f_a.coeffs().iter().map(to_f64).collect();
    if a.len() != u.m() + 1 {
        return Err(GeomError::IncompatibleWeight("weight does not match the potential's dimension".into()).into());
    }
    if a[0] == 0.0 {
        return Err(TwistError::ZeroA0);
    }
    let (inner, dom) = (u.clone(), u.clone());
    let (aa, ad) = (a.clone(), a.clone());
    let fa = move |a: &[f64], z: &[f64]| a[0] + z.iter().zip(&a[1..]).map(|(x, y)| x * y).sum::<f64>();
    let potential = PotentialFunction::callable(u.m(), move |zt| {
        let z = inverse_point(&aa, zt);
        inner.value(&z).map(|v| v / fa(&aa, &z)).unwrap_or(f64::NAN)
    })
    .with_domain(move |zt| {
        let d = 1.0 - zt.iter().zip(&ad[1..]).map(|(x, y)| x * y).sum::<f64>();
        if d == 0.0 || !(d / ad[0] > 0.0) {
            return false;
        }
        let z = inverse_point(&ad, zt);
        dom.value(&z).is_ok()
    });
    Ok(PotentialTwist { potential, a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{evaluate_metric, scal, weighted_scal_definitional};
    use crate::legendre::{chart_change_matrix, differential_lift, projective_hessian};
    use crate::poly::rat;

    fn z(c: &[i64]) -> Polynomial {
        Polynomial::from_ints("z", c)
    }

    fn sphere_a() -> RatFn {
        RatFn::from_poly(z(&[1, 0, -1]))
    }

    fn unit() -> Vec<Rational> {
        vec![int(-1), int(1)]
    }

    #[test]
    fn identity_twist() {
        for v in [TwistVariant::Origin, TwistVariant::IntervalPreserving] {
            let t = twist_profile_1d(&sphere_a(), &unit(), &int(1), &int(0), &v).unwrap();
            assert_eq!(t.a, sphere_a());
            assert_eq!(t.interval, unit());
        }
    }

    #[test]
    fn interval_preserving_value() {
        let t = twist_profile_1d(&sphere_a(), &unit(), &int(2), &int(1), &TwistVariant::IntervalPreserving).unwrap();
        assert_eq!(t.a.eval(&rat(1, 2)).unwrap(), rat(9, 8));
        assert_eq!(t.interval, unit());
        assert!(t.a.as_polynomial().unwrap().deg0() <= 3);
        // weight-3 Möbius cross-check
        let m = [int(2), int(-1), int(-1), int(2)];
        let direct = mobius(&z(&[1, 0, -1]), &m, 3).unwrap().scale(&rat(1, 3));
        assert_eq!(t.a.as_polynomial().unwrap(), &direct);
    }

    #[test]
    fn interval_preserving_involution() {
        let a = RatFn::from_poly(z(&[2, -1, -1, 1]));
        let (a0, a1) = (int(3), int(1));
        let v = TwistVariant::IntervalPreserving;
        let t1 = twist_profile_1d(&a, &unit(), &a0, &a1, &v).unwrap();
        let t2 = twist_profile_1d(&t1.a, &t1.interval, &a0, &-&a1, &v).unwrap();
        assert_eq!(t2.a, a.scale(&(&a0 * &a0 - &a1 * &a1)));
    }

    #[test]
    fn twist_then_inverse_weight_is_identity() {
        let p = Profile1D { interval: unit(), a: RatFn::from_poly(z(&[3, 1, -2, -1])) };
        for v in [TwistVariant::Origin, TwistVariant::IntervalPreserving] {
            let w = WeightFunction::parse_affine("3 - z", 1).unwrap();
            let t = twist_profile(&p, &w, &v).unwrap();
            let SeparableMetric::Profile1D(q) = &t.metric else { panic!() };
            let back = twist_profile(q, &t.inverse_weight(), &v).unwrap();
            assert_eq!(back.metric, SeparableMetric::Profile1D(p.clone()));
        }
    }

    #[test]
    fn zero_a0_is_recharted() {
        let p = Profile1D { interval: vec![int(1), int(3)], a: RatFn::from_poly(z(&[-3, 4, -1])) };
        let w = WeightFunction::parse_affine("z", 1).unwrap();
        let t = twist_profile(&p, &w, &TwistVariant::Origin).unwrap();
        let CoordinateMap::Mobius { translation, .. } = &t.map.coords else { panic!() };
        assert_eq!(*translation, int(1));
        // weighted-scalar invariance holds through the re-chart
        let fb = WeightFunction::parse_affine("1 + z", 1).unwrap();
        check_exact_invariance(&SeparableMetric::Profile1D(p), &t, &fb);
        assert!(twist_profile_1d(&sphere_a(), &vec![int(1), int(2)], &int(0), &int(1), &TwistVariant::IntervalPreserving).is_err());
    }

    #[test]
    fn vanishing_weight_rejected() {
        let r = twist_profile_1d(&sphere_a(), &unit(), &int(1), &int(2), &TwistVariant::Origin);
        assert!(matches!(r, Err(TwistError::WeightVanishes(_))));
    }

    fn check_exact_invariance(src: &SeparableMetric, t: &Twisted, fb: &WeightFunction) {
        let nu = int(src.complex_dim() as i64 + 2);
        let lhs = weighted_scal_definitional(src, fb, &nu).unwrap();
        let rhs = weighted_scal_definitional(&t.metric, &t.induced_weight(fb), &nu).unwrap();
        let rhs = t.pullback(&rhs).unwrap().mul(&twist_factor(src, t));
        assert!(lhs.equals(&rhs), "{} vs {}", lhs.format_with(&src.var_names()), rhs.format_with(&src.var_names()));
    }

    #[test]
    fn profile_invariance_exact() {
        let p = SeparableMetric::Profile1D(Profile1D { interval: unit(), a: RatFn::from_poly(z(&[2, 1, -1, -2])) });
        let fb = WeightFunction::parse_affine("2 - z", 1).unwrap();
        for v in [TwistVariant::Origin, TwistVariant::IntervalPreserving, TwistVariant::General { lambda: rat(-3, 2), kappa: int(5) }] {
            let t = twist(&p, &WeightFunction::parse_affine("3 + z", 1).unwrap(), &v).unwrap();
            check_exact_invariance(&p, &t, &fb);
        }
    }

    #[test]
    fn twisted_product_example() {
        let a = vec![Polynomial::from_ints("x1", &[1, 0, -1]), Polynomial::from_ints("x2", &[1, 0, -1])];
        let prod = SeparableMetric::product(a.clone());
        let SeparableMetric::TwistedProduct(tp) = &prod else { panic!() };
        let f = WeightFunction::product(int(2), vec![int(1), int(0)]);
        let t = twist_twisted_product(tp, &f).unwrap();
        assert_eq!(t.metric, SeparableMetric::twisted_product(a.clone(), f.clone()));
        let fb = WeightFunction::product(int(3), vec![int(1), int(-1)]);
        check_exact_invariance(&prod, &t, &fb);
        // and back
        let SeparableMetric::TwistedProduct(tp2) = &t.metric else { panic!() };
        let back = twist_twisted_product(tp2, &t.inverse_weight()).unwrap();
        assert_eq!(back.metric, prod);
        // constant weights only rescale
        let c = twist_twisted_product(tp, &WeightFunction::constant(2, int(4))).unwrap();
        let s0 = scal(&prod).unwrap();
        let s1 = scal(&c.metric).unwrap();
        assert!(s1.equals(&s0.scale(&int(4))));
    }

    #[test]
    fn orthotoric_unit_weight_is_identity() {
        let o = SeparableMetric::orthotoric(vec![Polynomial::from_ints("x1", &[1, 0, -1]), Polynomial::from_ints("x2", &[-1, 0, 1])]);
        let t = twist_orthotoric(&o, &WeightFunction::polarized_one(2)).unwrap();
        assert_eq!(t.metric, o);
    }

    #[test]
    fn orthotoric_inversion_matches_sigma_m_twist() {
        for (m, ps) in [
            (2usize, vec![vec![1, 2, -1, 1], vec![-1, 1, 1]]),
            (3, vec![vec![1, 0, 1, 2, -1], vec![2, -1, 0, 1], vec![-1, 1, 1, 0, 1]]),
        ] {
            let a: Vec<Polynomial> = ps.iter().enumerate().map(|(j, c)| Polynomial::from_ints(&format!("x{}", j + 1), c)).collect();
            let o = Orthotoric { m, a: a.clone() };
            let mut q = vec![Rational::zero(); m + 1];
            q[m] = Rational::one();
            let tw = SeparableMetric::twisted_orthotoric(a, WeightFunction::polarized(q));
            let inv = SeparableMetric::Orthotoric(orthotoric_inversion(&o).unwrap());
            let (s_tw, s_inv) = (scal(&tw).unwrap(), scal(&inv).unwrap());
            let pts: &[&[f64]] = &[&[0.9, 0.5, 0.3], &[0.8, 0.4, 0.25], &[0.7, 0.35, 0.2]];
            for p in pts {
                let x = &p[..m];
                let xi: Vec<f64> = x.iter().map(|v| 1.0 / v).collect();
                let (u, v) = (s_tw.eval_f64(x), s_inv.eval_f64(&xi));
                assert!((u - v).abs() < 1e-9 * (1.0 + u.abs()), "m={m} {u} {v}");
            }
        }
    }

    #[test]
    fn ambitoric_from_orthotoric_twist() {
        let (a, b) = (Polynomial::from_ints("x1", &[2, 1, -1, 1]), Polynomial::from_ints("x2", &[2, 1, -1]));
        let q = PaperQuadratic::new(int(3), int(1), int(1));
        let amb = SeparableMetric::ambitoric(q.clone(), a.clone(), b.clone(), AmbiSign::Plus);
        let ortho = SeparableMetric::orthotoric(vec![a, -&b]);
        let t = twist_orthotoric(&ortho, &WeightFunction::from_quadratic(&q)).unwrap();
        for i in 0..10 {
            let x1 = 0.9 - 0.02 * i as f64;
            let x2 = -0.6 + 0.05 * i as f64;
            let p = [x1, x2, 0.0, 0.0];
            let g1 = evaluate_metric(&t.metric, &p).unwrap();
            let g2 = evaluate_metric(&amb, &p).unwrap();
            assert!((g1 - g2).abs().max() < 1e-12);
        }
        // twisting ambitoric data again moves q
        let t2 = twist_orthotoric(&amb, &WeightFunction::polarized(vec![int(2), int(0), int(-1)])).unwrap();
        let SeparableMetric::Ambitoric(a2) = &t2.metric else { panic!() };
        assert_eq!(a2.q, PaperQuadratic::new(int(2), int(0), int(-1)));
    }

    #[test]
    fn calabi_fibre_parameters() {
        let (k, n, l) = (1i64, 3i64, 2i64);
        let a0 = rat(2 * n, k) - int(l);
        assert_eq!((a0, int(l)), (int(4), int(2)));
    }

    #[test]
    fn calabi_round_trip() {
        let c = CalabiBundle1D {
            base_scal: int(4),
            base_dim: 2,
            a0: int(3),
            a1: int(1),
            a: RatFn::from_poly(z(&[1, 1, -1, -1])),
            interval: unit(),
        };
        for v in [TwistVariant::Origin, TwistVariant::IntervalPreserving] {
            let prod = calabi_to_product(&c, &v).unwrap();
            let SeparableMetric::CalabiBundle1D(p) = &prod.metric else { panic!() };
            assert_eq!((p.a0.clone(), p.a1.clone()), (int(1), int(0)));
            let back = twist_calabi(p, &prod.inverse_weight(), &v).unwrap();
            assert_eq!(back.metric, SeparableMetric::CalabiBundle1D(c.clone()));
        }
        // a1 = 0: the product is unchanged
        let id = product_to_calabi(int(2), 1, sphere_a(), unit(), &WeightFunction::one(1), &TwistVariant::Origin).unwrap();
        let SeparableMetric::CalabiBundle1D(p) = &id.metric else { panic!() };
        assert_eq!((p.a0.clone(), p.a1.clone(), p.a.clone()), (int(1), int(0), sphere_a()));
    }

    #[test]
    fn calabi_invariance_exact() {
        let c = SeparableMetric::CalabiBundle1D(CalabiBundle1D {
            base_scal: int(2),
            base_dim: 1,
            a0: int(2),
            a1: int(1),
            a: RatFn::from_poly(z(&[1, 0, -1])),
            interval: unit(),
        });
        let t = twist(&c, &WeightFunction::parse_affine("3 + z", 1).unwrap(), &TwistVariant::IntervalPreserving).unwrap();
        check_exact_invariance(&c, &t, &WeightFunction::parse_affine("2 - z", 1).unwrap());
    }

    #[test]
    fn potential_twist_hessian() {
        let u = PotentialFunction::profile(z(&[1, 0, -1]), int(-1), int(1)).unwrap();
        let f = WeightFunction::parse_affine("2 + z", 1).unwrap();
        let pt = twist_potential(&u, &f).unwrap();
        let at = twist_profile_1d(&sphere_a(), &unit(), &int(2), &int(1), &TwistVariant::Origin).unwrap().a;
        for i in 0..10 {
            let zz = -0.8 + 0.17 * i as f64;
            let zt = pt.forward(&[zz]);
            let h = projective_hessian(&pt.potential, &zt).unwrap()[(0, 0)];
            let expect = 1.0 / at.eval_f64(zt[0]);
            assert!((h - expect).abs() < 1e-5 * expect.abs().max(1.0), "{zz} {h} {expect}");
            // lifts agree up to the chart change
            let l = differential_lift(&u, &[zz]).unwrap();
            let lt = differential_lift(&pt.potential, &zt).unwrap();
            let p = chart_change_matrix(&pt.a).transpose() * nalgebra::DVector::from_vec(l);
            for k in 0..2 {
                assert!((p[k] - lt[k]).abs() < 1e-6, "{k} {} {}", p[k], lt[k]);
            }
        }
        let one = twist_potential(&u, &WeightFunction::one(1)).unwrap();
        assert!((one.potential.value(&[0.3]).unwrap() - u.value(&[0.3]).unwrap()).abs() < 1e-15);
        let zero = WeightFunction::parse_affine("z", 1).unwrap();
        assert!(matches!(twist_potential(&u, &zero), Err(TwistError::ZeroA0)));
    }

    #[test]
    fn affine_potential_stays_affine() {
        let u = PotentialFunction::callable(2, |z| 1.0 + 2.0 * z[0] - z[1]);
        let pt = twist_potential(&u, &WeightFunction::product(int(3), vec![int(1), int(-1)])).unwrap();
        let l1 = differential_lift(&pt.potential, &[0.1, 0.2]).unwrap();
        let l2 = differential_lift(&pt.potential, &[-0.2, 0.05]).unwrap();
        for k in 0..3 {
            assert!((l1[k] - l2[k]).abs() < 1e-7);
        }
        assert_eq!(pt.angles(&[1.0, 2.0, 3.0]), vec![2.0 - 1.0 / 3.0, 3.0 + 1.0 / 3.0]);
    }
}
