//! Symplectic potentials in an affine chart, their differential lift to `𝔥`,
//! the projective hessian and the integrability residual of a candidate hessian.
//!
//! Points are chart coordinates `z = (z_1, …, z_m)`; the lift is written in the
//! basis `(e_0, e_1, …, e_m)` with `e_0 = ε`, so `⟨(1, z), L(u)⟩ = u(z)`.

use std::num::NonZeroUsize;
use std::sync::{Arc, OnceLock};

use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;

use crate::geom::AffineChart;
use crate::poly::{positive_on_open_interval, to_f64, Polynomial, Positivity, Rational};

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type DomainFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Finite-difference step for callables without an analytic gradient.
pub const FD_STEP: f64 = 1e-4;
/// Absolute tolerance of the adaptive quadrature.
pub const QUAD_TOL: f64 = 1e-12;

/// Step for hessians of potentials given by values only.
pub const VALUE_STEP: f64 = 1e-2;

/// Fourth-order first-derivative weights (times `12h`).
const STENCIL: [(f64, f64); 4] = [(1.0, 8.0), (-1.0, -8.0), (2.0, -1.0), (-2.0, 1.0)];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LegendreError {
    #[error("point {0:?} is not interior to the domain")]
    DomainBoundary(Vec<f64>),
    #[error("hessian is degenerate at {0:?}")]
    DegenerateHessian(Vec<f64>),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

#[derive(Clone)]
pub enum Representation {
    /// User-supplied `u`, optionally with its gradient. Must be safe to call concurrently.
    Callable { u: ScalarFn, grad: Option<VectorFn> },
    /// `u(z) = ∫_{basepoint}^{z} (z − x)/A(x) dx` on an interval where `A > 0`.
    Profile1DIntegral { a: Polynomial, basepoint: Rational, interval: (Rational, Rational) },
}

#[derive(Clone)]
pub struct PotentialFunction {
    pub repr: Representation,
    pub chart: AffineChart,
    domain: Option<DomainFn>,
    dim: usize,
}

impl std::fmt::Debug for PotentialFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.repr {
            Representation::Callable { .. } => write!(f, "PotentialFunction(callable, m={})", self.dim),
            Representation::Profile1DIntegral { a, basepoint, interval } => write!(
                f,
                "PotentialFunction(∫(z-x)/A, A={a}, base={basepoint}, interval=({}, {}))",
                interval.0, interval.1
            ),
        }
    }
}

fn gl() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(16).unwrap()))
}

/// Adaptive bisection on a fixed 16-point Gauss–Legendre rule.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let l = gl().integrate(a, m, f);
        let r = gl().integrate(m, b, f);
        if depth == 0 || (l + r - whole).abs() <= tol {
            return l + r;
        }
        rec(f, a, m, l, 0.5 * tol, depth - 1) + rec(f, m, b, r, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    rec(f, a, b, gl().integrate(a, b, f), tol, 40)
}

impl PotentialFunction {
    pub fn callable(m: usize, u: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        PotentialFunction {
            repr: Representation::Callable { u: Arc::new(u), grad: None },
            chart: AffineChart::standard(m),
            domain: None,
            dim: m,
        }
    }

    pub fn with_gradient(mut self, g: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        if let Representation::Callable { grad, .. } = &mut self.repr {
            *grad = Some(Arc::new(g));
        }
        self
    }

    /// Restricts the callable to the open set where `inside` holds.
    pub fn with_domain(mut self, inside: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Self {
        self.domain = Some(Arc::new(inside));
        self
    }

    /// The potential of `dz²/A + A dt²`, basepoint at the midpoint of the interval.
    pub fn profile(a: Polynomial, lo: Rational, hi: Rational) -> Result<Self, LegendreError> {
        let mid = (&lo + &hi) / crate::poly::int(2);
        Self::profile_with_basepoint(a, lo, hi, mid)
    }

    pub fn profile_with_basepoint(a: Polynomial, lo: Rational, hi: Rational, base: Rational) -> Result<Self, LegendreError> {
        if lo >= hi || base <= lo || base >= hi {
            return Err(LegendreError::InvalidProfile("need lo < basepoint < hi".into()));
        }
        match positive_on_open_interval(&a, &lo, &hi) {
            Ok(Positivity::Positive) => {}
            _ => return Err(LegendreError::InvalidProfile(format!("A = {a} is not positive on ({lo}, {hi})"))),
        }
        Ok(PotentialFunction {
            repr: Representation::Profile1DIntegral { a, basepoint: base, interval: (lo, hi) },
            chart: AffineChart::standard(1),
            domain: None,
            dim: 1,
        })
    }

    /// Number of chart coordinates.
    pub fn m(&self) -> usize {
        self.dim
    }

    fn check(&self, z: &[f64]) -> Result<(), LegendreError> {
        let inside = z.len() == self.dim
            && z.iter().all(|v| v.is_finite())
            && match &self.repr {
                Representation::Profile1DIntegral { interval, .. } => to_f64(&interval.0) < z[0] && z[0] < to_f64(&interval.1),
                Representation::Callable { .. } => self.domain.as_ref().map_or(true, |d| d(z)),
            };
        if inside {
            Ok(())
        } else {
            Err(LegendreError::DomainBoundary(z.to_vec()))
        }
    }

    pub fn value(&self, z: &[f64]) -> Result<f64, LegendreError> {
        self.check(z)?;
        let v = match &self.repr {
            Representation::Callable { u, .. } => u(z),
            Representation::Profile1DIntegral { a, basepoint, .. } => {
                let x0 = z[0];
                integrate(&|x| (x0 - x) / a.eval_f64(x), to_f64(basepoint), x0, QUAD_TOL)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(LegendreError::DomainBoundary(z.to_vec()))
        }
    }

    pub fn gradient(&self, z: &[f64]) -> Result<Vec<f64>, LegendreError> {
        self.check(z)?;
        match &self.repr {
            Representation::Callable { grad: Some(g), .. } => Ok(g(z)),
            Representation::Callable { .. } => (0..self.dim).map(|k| self.partial(z, k)).collect(),
            Representation::Profile1DIntegral { a, basepoint, .. } => {
                Ok(vec![integrate(&|x| 1.0 / a.eval_f64(x), to_f64(basepoint), z[0], QUAD_TOL)])
            }
        }
    }

    fn partial(&self, z: &[f64], k: usize) -> Result<f64, LegendreError> {
        let h = FD_STEP;
        let at = |s: f64| {
            let mut p = z.to_vec();
            p[k] += s * h;
            self.value(&p)
        };
        Ok((8.0 * (at(1.0)? - at(-1.0)?) - (at(2.0)? - at(-2.0)?)) / (12.0 * h))
    }

    /// `Hess(u)` in the chart.
    pub fn hessian(&self, z: &[f64]) -> Result<DMatrix<f64>, LegendreError> {
        self.check(z)?;
        let m = self.dim;
        if let Representation::Profile1DIntegral { a, .. } = &self.repr {
            return Ok(DMatrix::from_element(1, 1, 1.0 / a.eval_f64(z[0])));
        }
        if let Representation::Callable { grad: Some(g), .. } = &self.repr {
            let mut hm = DMatrix::zeros(m, m);
            let h = FD_STEP;
            for k in 0..m {
                let at = |s: f64| {
                    let mut p = z.to_vec();
                    p[k] += s * h;
                    self.check(&p).map(|_| g(&p))
                };
                let (p1, m1, p2, m2) = (at(1.0)?, at(-1.0)?, at(2.0)?, at(-2.0)?);
                for i in 0..m {
                    hm[(i, k)] = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h);
                }
            }
            return Ok(0.5 * (&hm + hm.transpose()));
        }
        // the larger step has less rounding noise; keep it only where truncation is
        // invisible, i.e. where it agrees with the smaller one
        let fine = self.value_hessian(z, VALUE_STEP / 10.0)?;
        match self.value_hessian(z, VALUE_STEP) {
            Ok(coarse) if (&coarse - &fine).amax() <= 1e-7 * fine.amax().max(1.0) => Ok(coarse),
            Ok(_) | Err(LegendreError::DomainBoundary(_)) => Ok(fine),
            Err(e) => Err(e),
        }
    }

    fn value_hessian(&self, z: &[f64], h: f64) -> Result<DMatrix<f64>, LegendreError> {
        let m = self.dim;
        let mut hm = DMatrix::zeros(m, m);
        let at = |d: &[(usize, f64)]| {
            let mut p = z.to_vec();
            for &(k, s) in d {
                p[k] += s * h;
            }
            self.value(&p)
        };
        let c = at(&[])?;
        for i in 0..m {
            hm[(i, i)] = (-(at(&[(i, 2.0)])? + at(&[(i, -2.0)])?) + 16.0 * (at(&[(i, 1.0)])? + at(&[(i, -1.0)])?)
                - 30.0 * c)
                / (12.0 * h * h);
            for j in 0..i {
                let mut v = 0.0;
                for (a, wa) in STENCIL {
                    for (b, wb) in STENCIL {
                        v += wa * wb * at(&[(i, a), (j, b)])?;
                    }
                }
                v /= 144.0 * h * h;
                hm[(i, j)] = v;
                hm[(j, i)] = v;
            }
        }
        Ok(0.5 * (&hm + hm.transpose()))
    }
}

/// `L(u)(z) = (u − Σ z_j ∂_j u, ∂_1 u, …, ∂_m u)`.
pub fn differential_lift(u: &PotentialFunction, z: &[f64]) -> Result<Vec<f64>, LegendreError> {
    let v = u.value(z)?;
    let g = u.gradient(z)?;
    let u0 = v - z.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>();
    Ok(std::iter::once(u0).chain(g).collect())
}

/// `dL(u)` as an `(m+1) × m` matrix: row 0 is `−Σ_j z_j H_jk`, rows `1..` are `H`.
pub fn lift_differential(u: &PotentialFunction, z: &[f64]) -> Result<DMatrix<f64>, LegendreError> {
    let h = u.hessian(z)?;
    let m = z.len();
    let mut d = DMatrix::zeros(m + 1, m);
    for k in 0..m {
        d[(0, k)] = -(0..m).map(|j| z[j] * h[(j, k)]).sum::<f64>();
        for j in 0..m {
            d[(j + 1, k)] = h[(j, k)];
        }
    }
    Ok(d)
}

/// Central-difference `dL(u)`, independent of [`lift_differential`].
pub fn lift_differential_fd(u: &PotentialFunction, z: &[f64], h: f64) -> Result<DMatrix<f64>, LegendreError> {
    let m = z.len();
    let mut d = DMatrix::zeros(m + 1, m);
    for k in 0..m {
        let mut p = z.to_vec();
        p[k] += h;
        let lp = differential_lift(u, &p)?;
        p[k] -= 2.0 * h;
        let lm = differential_lift(u, &p)?;
        for i in 0..=m {
            d[(i, k)] = (lp[i] - lm[i]) / (2.0 * h);
        }
    }
    Ok(d)
}

/// `L_a(u) = L(u) + 2(⟨a, (1, z)⟩ e_0 − a)`: the lift with `⟨z, L_a⟩ = u` and
/// `⟨z, dL_a⟩ = 2⟨a, dz⟩`.
pub fn modified_lift(u: &PotentialFunction, a: &[f64], z: &[f64]) -> Result<Vec<f64>, LegendreError> {
    let h = u.hessian(z)?;
    let scale = h.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
    if h.determinant().abs() <= 1e-12 * scale.powi(z.len() as i32) {
        return Err(LegendreError::DegenerateHessian(z.to_vec()));
    }
    let fa = a[0] + z.iter().zip(&a[1..]).map(|(x, y)| x * y).sum::<f64>();
    let mut l = differential_lift(u, z)?;
    l[0] += 2.0 * fa;
    for (li, ai) in l.iter_mut().zip(a) {
        *li -= 2.0 * ai;
    }
    Ok(l)
}

/// `dL_a(u) = dL(u) + 2 e_0 ⊗ (a_1, …, a_m)`.
pub fn modified_lift_differential(u: &PotentialFunction, a: &[f64], z: &[f64]) -> Result<DMatrix<f64>, LegendreError> {
    let mut d = lift_differential(u, z)?;
    for k in 0..z.len() {
        d[(0, k)] += 2.0 * a[k + 1];
    }
    Ok(d)
}

/// The hessian of `u` in its chart.
pub fn projective_hessian(u: &PotentialFunction, z: &[f64]) -> Result<DMatrix<f64>, LegendreError> {
    u.hessian(z)
}

/// `R[i][j][k] = ∂_k G_ij − ∂_j G_ik` by fourth-order central differences.
pub fn integrability_residual(g: &dyn Fn(&[f64]) -> DMatrix<f64>, z: &[f64]) -> Vec<Vec<Vec<f64>>> {
    let m = z.len();
    let h = 1e-3;
    let dg: Vec<DMatrix<f64>> = (0..m)
        .map(|k| {
            let at = |s: f64| {
                let mut p = z.to_vec();
                p[k] += s * h;
                g(&p)
            };
            (at(1.0) - at(-1.0)) * (8.0 / (12.0 * h)) - (at(2.0) - at(-2.0)) * (1.0 / (12.0 * h))
        })
        .collect();
    (0..m)
        .map(|i| (0..m).map(|j| (0..m).map(|k| dg[k][(i, j)] - dg[j][(i, k)]).collect()).collect())
        .collect()
}

pub fn max_residual(r: &[Vec<Vec<f64>>]) -> f64 {
    r.iter().flatten().flatten().fold(0.0f64, |s, v| s.max(v.abs()))
}

/// The linear map `P` with `P(1, z̃) = (1, z)/f_a` on the chart `⟨a, μ⟩ = 1`;
/// lifts transform as `L̃ = Pᵀ L`.
pub fn chart_change_matrix(a: &[f64]) -> DMatrix<f64> {
    let n = a.len();
    let mut p = DMatrix::identity(n, n);
    p[(0, 0)] = 1.0 / a[0];
    for k in 1..n {
        p[(0, k)] = -a[k] / a[0];
    }
    p
}

/// Symbolic lift of a polynomial potential in one variable: `(u − z u′, u′)`.
pub fn polynomial_lift(u: &Polynomial) -> (Polynomial, Polynomial) {
    let du = u.derive();
    let z = Polynomial::x(&u.var);
    (u - &(&z * &du), du)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    fn sphere() -> PotentialFunction {
        PotentialFunction::profile(Polynomial::from_ints("z", &[1, 0, -1]), int(-1), int(1)).unwrap()
    }

    #[test]
    fn sphere_potential_closed_form() {
        let u = sphere();
        let l = differential_lift(&u, &[0.0]).unwrap();
        assert!(l[0].abs() < 1e-14 && l[1].abs() < 1e-14);
        for z in [-0.9, -0.3, 0.4, 0.8] {
            let exact = 0.5 * ((1.0 + z) * (1.0f64 + z).ln() + (1.0 - z) * (1.0f64 - z).ln());
            assert!((u.value(&[z]).unwrap() - exact).abs() < 1e-11, "{z}");
            assert!((u.gradient(&[z]).unwrap()[0] - 0.5 * ((1.0 + z) / (1.0 - z)).ln()).abs() < 1e-11);
        }
        assert_eq!(projective_hessian(&u, &[0.0]).unwrap()[(0, 0)], 1.0);
        assert!(matches!(u.value(&[1.0]), Err(LegendreError::DomainBoundary(_))));
    }

    #[test]
    fn quadratic_potential_lift() {
        let u = PotentialFunction::callable(1, |z| z[0] * z[0] / 2.0);
        for z in [-1.5, 0.2, 3.0] {
            let l = differential_lift(&u, &[z]).unwrap();
            assert!((l[0] + z * z / 2.0).abs() < 1e-8 && (l[1] - z).abs() < 1e-8);
        }
    }

    #[test]
    fn affine_potential_has_constant_lift() {
        let u = PotentialFunction::callable(2, |z| 3.0 - z[0] + 2.0 * z[1]);
        for p in [[0.1, 0.2], [-1.0, 4.0]] {
            let l = differential_lift(&u, &p).unwrap();
            for (a, b) in l.iter().zip([3.0, -1.0, 2.0]) {
                assert!((a - b).abs() < 1e-8);
            }
            assert!(projective_hessian(&u, &p).unwrap().iter().all(|v| v.abs() < 1e-6));
        }
    }

    #[test]
    fn zero_a_is_plain_lift() {
        let u = sphere();
        let a = modified_lift(&u, &[0.0, 0.0], &[0.3]).unwrap();
        assert_eq!(a, differential_lift(&u, &[0.3]).unwrap());
    }

    #[test]
    fn modified_lift_envelope() {
        // u = z log z on z > 0
        let u = PotentialFunction::callable(1, |z| z[0] * z[0].ln()).with_domain(|z| z[0] > 0.0);
        for a in [[0.5, 0.0], [0.0, 0.5], [1.0, -2.0]] {
            for z in [0.3, 1.0, 2.5] {
                let l = modified_lift(&u, &a, &[z]).unwrap();
                assert!((l[0] + z * l[1] - u.value(&[z]).unwrap()).abs() < 1e-9);
                let h = 1e-4;
                let lp = modified_lift(&u, &a, &[z + h]).unwrap();
                let lm = modified_lift(&u, &a, &[z - h]).unwrap();
                let pair = (lp[0] - lm[0]) / (2.0 * h) + z * (lp[1] - lm[1]) / (2.0 * h);
                assert!((pair - 2.0 * a[1]).abs() < 1e-5, "{a:?} {z} {pair}");
                assert_eq!(modified_lift_differential(&u, &a, &[z]).unwrap().rank(1e-10), 1);
            }
        }
        let flat = PotentialFunction::callable(1, |z| 2.0 * z[0]);
        assert!(matches!(modified_lift(&flat, &[0.5, 0.0], &[1.0]), Err(LegendreError::DegenerateHessian(_))));
    }

    #[test]
    fn homogeneous_sum_of_f_log_f() {
        // f1 = μ1, f2 = μ0 − μ1, f3 = −μ0: the a's sum to zero
        let u = |p: &[f64]| {
            let fs = [p[1], p[0] - p[1], -p[0]];
            fs.iter().map(|f| f * f.abs().ln()).sum::<f64>()
        };
        for p in [[0.7, 0.2], [1.3, 0.4]] {
            for lam in [0.5, 2.0, 7.0] {
                let q = [lam * p[0], lam * p[1]];
                assert!((u(&q) - lam * u(&p)).abs() < 1e-12 * (1.0 + u(&q).abs()));
            }
        }
    }

    #[test]
    fn residual_detects_non_hessian() {
        let g = |z: &[f64]| DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, z[0]]);
        let r = integrability_residual(&g, &[0.3, 0.5]);
        assert!((r[1][1][0] - 1.0).abs() < 1e-9);
        let u = PotentialFunction::callable(2, |z| z[0].powi(4) + z[0] * z[1] * z[1] + (1.0 + z[1]).exp());
        let v = PotentialFunction::callable(2, |z| z[0] * z[0] * z[1]);
        let hs = |z: &[f64]| projective_hessian(&u, z).unwrap() + projective_hessian(&v, z).unwrap();
        assert!(max_residual(&integrability_residual(&hs, &[0.2, -0.4])) < 1e-6);
    }

    #[test]
    fn symbolic_lift_one_variable() {
        let u = Polynomial::from_ints("z", &[1, -2, 3, 0, 5]);
        let (u0, u1) = polynomial_lift(&u);
        let z = Polynomial::x("z");
        assert_eq!(&u0 + &(&z * &u1), u);
        // dL = u″ (−z, 1) dz
        let upp = u.nth_derivative(2);
        assert_eq!(u0.derive(), -&(&z * &upp));
        assert_eq!(u1.derive(), upp);
    }
}
