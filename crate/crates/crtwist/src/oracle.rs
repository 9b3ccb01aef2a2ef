//! Finite-difference curvature of arbitrary coordinate metrics (fourth-order central stencils).
//!
//! Everything here is plain `f64` and independent of the symbolic code in
//! [`crate::geom`]; it exists to check it.

use nalgebra::DMatrix;

use crate::geom::{evaluate_metric, GeomError, SeparableMetric, WeightFunction};
use crate::twist::Twisted;

pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("singular metric at {0:?}")]
    SingularMetric(Vec<f64>),
    #[error("weight {0} is not positive")]
    NonPositiveWeight(f64),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

type MetricFn<'a> = Box<dyn Fn(&[f64]) -> Result<DMatrix<f64>, OracleError> + Sync + 'a>;

/// A metric on an open set of `ℝ^dim` that depends only on the first `active` coordinates.
pub struct CoordinateMetricField<'a> {
    pub dim: usize,
    pub active: usize,
    g: MetricFn<'a>,
}

impl<'a> CoordinateMetricField<'a> {
    pub fn new(dim: usize, active: usize, g: impl Fn(&[f64]) -> Result<DMatrix<f64>, OracleError> + Sync + 'a) -> Self {
        CoordinateMetricField { dim, active, g: Box::new(g) }
    }

    pub fn from_metric(metric: &'a SeparableMetric) -> Self {
        Self::new(metric.real_dim(), metric.active_dim(), move |p| Ok(evaluate_metric(metric, p)?))
    }

    /// Constant-coefficient metric.
    pub fn flat(g: DMatrix<f64>) -> CoordinateMetricField<'static> {
        let n = g.nrows();
        CoordinateMetricField::new(n, n, move |_| Ok(g.clone()))
    }

    pub fn eval(&self, p: &[f64]) -> Result<DMatrix<f64>, OracleError> {
        (self.g)(p)
    }

    /// `φ · g` for a positive function `φ` of the point.
    pub fn conformal<'b>(&'b self, phi: impl Fn(&[f64]) -> f64 + Sync + 'b) -> CoordinateMetricField<'b> {
        CoordinateMetricField::new(self.dim, self.active, move |p| Ok(self.eval(p)? * phi(p)))
    }
}

fn shifted(p: &[f64], k: usize, h: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q[k] += h;
    q
}

/// Fourth-order central first derivative in direction `k`.
fn d1<T, F>(f: F, p: &[f64], k: usize, h: f64) -> Result<T, OracleError>
where
    F: Fn(&[f64]) -> Result<T, OracleError>,
    T: std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let a = f(&shifted(p, k, h))? - f(&shifted(p, k, -h))?;
    let b = f(&shifted(p, k, 2.0 * h))? - f(&shifted(p, k, -2.0 * h))?;
    Ok(a * (8.0 / (12.0 * h)) + b * (-1.0 / (12.0 * h)))
}

fn inverse(g: &DMatrix<f64>, p: &[f64]) -> Result<DMatrix<f64>, OracleError> {
    g.clone().try_inverse().ok_or_else(|| OracleError::SingularMetric(p.to_vec()))
}

/// `Γ^a_{bc}` as `gamma[a][(b, c)]`.
fn christoffel(field: &CoordinateMetricField, p: &[f64], h: f64) -> Result<Vec<DMatrix<f64>>, OracleError> {
    let n = field.dim;
    let g = field.eval(p)?;
    let gi = inverse(&g, p)?;
    let mut dg = vec![DMatrix::zeros(n, n); n];
    for (k, d) in dg.iter_mut().enumerate().take(field.active) {
        *d = d1(|q| field.eval(q), p, k, h)?;
    }
    let mut gamma = vec![DMatrix::zeros(n, n); n];
    for b in 0..n {
        for c in b..n {
            // lowered: Γ_{d,bc} = ½(∂_b g_dc + ∂_c g_db - ∂_d g_bc)
            let low: Vec<f64> = (0..n).map(|d| 0.5 * (dg[b][(d, c)] + dg[c][(d, b)] - dg[d][(b, c)])).collect();
            for (a, ga) in gamma.iter_mut().enumerate() {
                let v: f64 = (0..n).map(|d| gi[(a, d)] * low[d]).sum();
                ga[(b, c)] = v;
                ga[(c, b)] = v;
            }
        }
    }
    Ok(gamma)
}

/// Scalar curvature from central-difference Christoffel symbols and the Ricci contraction.
pub fn scal_fd(field: &CoordinateMetricField, p: &[f64], h: f64) -> Result<f64, OracleError> {
    let n = field.dim;
    let g = field.eval(p)?;
    let gi = inverse(&g, p)?;
    let gamma = christoffel(field, p, h)?;
    let mut dgamma: Vec<Option<Vec<DMatrix<f64>>>> = vec![None; n];
    for (k, slot) in dgamma.iter_mut().enumerate().take(field.active) {
        let at = |q: &[f64]| christoffel(field, q, h);
        let (p1, m1, p2, m2) = (at(&shifted(p, k, h))?, at(&shifted(p, k, -h))?, at(&shifted(p, k, 2.0 * h))?, at(&shifted(p, k, -2.0 * h))?);
        *slot = Some(
            (0..n).map(|a| ((&p1[a] - &m1[a]) * 8.0 - (&p2[a] - &m2[a])) / (12.0 * h)).collect(),
        );
    }
    let dg = |k: usize, a: usize, b: usize, c: usize| dgamma[k].as_ref().map_or(0.0, |d| d[a][(b, c)]);
    let mut s = 0.0;
    for b in 0..n {
        for c in 0..n {
            if gi[(b, c)] == 0.0 {
                continue;
            }
            let mut r = 0.0;
            for a in 0..n {
                r += dg(a, a, b, c) - dg(c, a, a, b);
                for d in 0..n {
                    r += gamma[a][(a, d)] * gamma[d][(b, c)] - gamma[a][(c, d)] * gamma[d][(a, b)];
                }
            }
            s += gi[(b, c)] * r;
        }
    }
    Ok(s)
}

fn gradient(field: &CoordinateMetricField, f: &dyn Fn(&[f64]) -> f64, p: &[f64], h: f64) -> Vec<f64> {
    (0..field.dim)
        .map(|k| if k < field.active { d1(|q| Ok(f(q)), p, k, h).unwrap() } else { 0.0 })
        .collect()
}

/// `g^{ij} ∂_i f ∂_j f`.
pub fn grad_norm_fd(field: &CoordinateMetricField, f: &dyn Fn(&[f64]) -> f64, p: &[f64], h: f64) -> Result<f64, OracleError> {
    let gi = inverse(&field.eval(p)?, p)?;
    let df = gradient(field, f, p, h);
    let mut s = 0.0;
    for i in 0..field.dim {
        for j in 0..field.dim {
            s += gi[(i, j)] * df[i] * df[j];
        }
    }
    Ok(s)
}

/// Positive laplacian `-(g^{ij} ∂_i∂_j f - g^{ij} Γ^k_{ij} ∂_k f)`.
pub fn laplacian_fd(field: &CoordinateMetricField, f: &dyn Fn(&[f64]) -> f64, p: &[f64], h: f64) -> Result<f64, OracleError> {
    let n = field.dim;
    let gi = inverse(&field.eval(p)?, p)?;
    let gamma = christoffel(field, p, h)?;
    let df = gradient(field, f, p, h);
    let f0 = f(p);
    let mut s = 0.0;
    for i in 0..field.active {
        for j in 0..field.active {
            if gi[(i, j)] == 0.0 {
                continue;
            }
            let hess = if i == j {
                let v = |t: f64| f(&shifted(p, i, t * h));
                (-v(2.0) + 16.0 * v(1.0) - 30.0 * f0 + 16.0 * v(-1.0) - v(-2.0)) / (12.0 * h * h)
            } else {
                d1(|q| d1(|r| Ok(f(r)), q, j, h), p, i, h)?
            };
            s += gi[(i, j)] * hess;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if gi[(i, j)] == 0.0 {
                continue;
            }
            let c: f64 = (0..field.active).map(|k| gamma[k][(i, j)] * df[k]).sum();
            s -= gi[(i, j)] * c;
        }
    }
    Ok(-s)
}

/// `f² Scal - 2(ν-1) f Δf - ν(ν-1) |df|²` from the three finite-difference pieces.
pub fn weighted_scal_fd(
    field: &CoordinateMetricField,
    f: &dyn Fn(&[f64]) -> f64,
    nu: f64,
    p: &[f64],
    h: f64,
) -> Result<f64, OracleError> {
    let f0 = f(p);
    if !(f0 > 0.0) {
        return Err(OracleError::NonPositiveWeight(f0));
    }
    let s = scal_fd(field, p, h)?;
    let lap = laplacian_fd(field, f, p, h)?;
    let gn = grad_norm_fd(field, f, p, h)?;
    Ok(f0 * f0 * s - 2.0 * (nu - 1.0) * f0 * lap - nu * (nu - 1.0) * gn)
}

/// The weight of a separable metric as a function of full coordinate points.
pub fn weight_fn<'a>(metric: &'a SeparableMetric, w: &'a WeightFunction) -> impl Fn(&[f64]) -> f64 + Sync + 'a {
    let e = crate::geom::weight_expr(metric, w);
    let n = metric.nvars();
    move |p: &[f64]| e.eval_f64(&p[..n])
}

/// Pads a point of the separable variables with zeros up to the full coordinate dimension.
pub fn full_point(metric: &SeparableMetric, x: &[f64]) -> Vec<f64> {
    let mut p = x.to_vec();
    p.resize(metric.real_dim(), 0.0);
    p
}

/// `Scal_{w,ν}` of a separable metric at a point of its separable variables.
pub fn weighted_scal_at(metric: &SeparableMetric, w: &WeightFunction, nu: f64, x: &[f64], h: f64) -> Result<f64, OracleError> {
    let field = CoordinateMetricField::from_metric(metric);
    let f = weight_fn(metric, w);
    weighted_scal_fd(&field, &f, nu, &full_point(metric, x), h)
}

/// Tolerance multiplier: the metric's condition number over `10³` when it exceeds `10³`, else 1.
pub fn condition_scale(g: &DMatrix<f64>) -> f64 {
    let ev = g.clone().symmetric_eigenvalues();
    let (lo, hi) = ev.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v.abs()), hi.max(v.abs())));
    (hi / lo / 1e3).max(1.0)
}

/// Largest `|Scal_{f_b,m+2}(g) − f_a · Scal_{f̃_b,m+2}(g̃)∘φ| / max(1, |·|)` over `points`,
/// each term divided by the larger condition scale of the two metrics there.
pub fn invariance_probe(
    metric: &SeparableMetric,
    tw: &Twisted,
    f_b: &WeightFunction,
    points: &[Vec<f64>],
    h: f64,
) -> Result<f64, OracleError> {
    let nu = metric.complex_dim() as f64 + 2.0;
    let fb_t = tw.induced_weight(f_b);
    let mut worst = 0.0f64;
    for x in points {
        let y = tw.point_map(x);
        let lhs = weighted_scal_at(metric, f_b, nu, x, h)?;
        let fa = metric.weight_value(&tw.map.weight, x);
        let rhs = fa * weighted_scal_at(&tw.metric, &fb_t, nu, &y, h)?;
        let k = condition_scale(&evaluate_metric(metric, &full_point(metric, x))?)
            .max(condition_scale(&evaluate_metric(&tw.metric, &full_point(&tw.metric, &y))?));
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0) / k);
    }
    Ok(worst)
}

/// `|a - b| ≤ tol · max(1, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_plane_is_flat() {
        let f = CoordinateMetricField::flat(DMatrix::identity(2, 2));
        assert!(scal_fd(&f, &[0.3, -0.2], DEFAULT_STEP).unwrap().abs() < 1e-9);
    }

    #[test]
    fn round_sphere_is_two() {
        let m = SeparableMetric::sphere();
        let field = CoordinateMetricField::from_metric(&m);
        let s = scal_fd(&field, &[0.3, 0.0], DEFAULT_STEP).unwrap();
        assert!((s - 2.0).abs() < 1e-6, "{s}");
    }

    #[test]
    fn sphere_laplacian_sign() {
        let m = SeparableMetric::sphere();
        let field = CoordinateMetricField::from_metric(&m);
        let z = |p: &[f64]| p[0];
        let p = [0.5, 0.0];
        let l = laplacian_fd(&field, &z, &p, DEFAULT_STEP).unwrap();
        assert!((l - 1.0).abs() < 1e-6, "{l}");
        assert!((grad_norm_fd(&field, &z, &p, DEFAULT_STEP).unwrap() - 0.75).abs() < 1e-6);
        let c = |_: &[f64]| 3.0;
        assert_eq!(laplacian_fd(&field, &c, &p, DEFAULT_STEP).unwrap(), 0.0);
    }

    #[test]
    fn invariance_on_the_sphere() {
        use crate::twist::{twist, TwistVariant};
        let m = SeparableMetric::sphere();
        let pts: Vec<Vec<f64>> = (0..7).map(|i| vec![-0.6 + 0.2 * i as f64]).collect();
        let fb = WeightFunction::parse_affine("3+z", 1).unwrap();
        let id = twist(&m, &WeightFunction::one(1), &TwistVariant::Origin).unwrap();
        assert_eq!(invariance_probe(&m, &id, &fb, &pts, DEFAULT_STEP).unwrap(), 0.0);
        let t = twist(&m, &WeightFunction::parse_affine("2+z", 1).unwrap(), &TwistVariant::Origin).unwrap();
        let d = invariance_probe(&m, &t, &fb, &pts, DEFAULT_STEP).unwrap();
        assert!(d <= 1e-5, "{d}");
    }

    #[test]
    fn weighted_sphere_zero_at_quarter() {
        let m = SeparableMetric::sphere();
        let w = WeightFunction::parse_affine("z+2", 1).unwrap();
        let v = weighted_scal_at(&m, &w, 3.0, &[0.25], DEFAULT_STEP).unwrap();
        assert!(v.abs() < 1e-5, "{v}");
    }
}
