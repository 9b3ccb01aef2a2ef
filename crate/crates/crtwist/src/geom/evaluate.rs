//! Pointwise metric matrices and probe grids.

use nalgebra::{DMatrix, DVector};

use crate::poly::to_f64;

use super::metric::{AmbiSign, SeparableMetric};
use super::{GeomError, WeightFunction};

/// `σ_0..σ_n` of the given numbers.
pub fn elementary_f64(x: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; x.len() + 1];
    e[0] = 1.0;
    for (i, &xi) in x.iter().enumerate() {
        for r in (1..=i + 1).rev() {
            e[r] += e[r - 1] * xi;
        }
    }
    e
}

fn degenerate(s: impl Into<String>) -> GeomError {
    GeomError::DegeneratePoint(s.into())
}

/// Index of the largest `|q_r|`; that angle is dropped from the `m+1` redundant ones.
pub fn dropped_angle(q: &[f64]) -> usize {
    let mut best = 0;
    for (r, v) in q.iter().enumerate() {
        if v.abs() > q[best].abs() {
            best = r;
        }
    }
    best
}

/// The metric's active coordinates from a user point (`[z]` is accepted for Calabi data).
pub fn active_point(metric: &SeparableMetric, point: &[f64]) -> Result<Vec<f64>, GeomError> {
    let n = metric.nvars();
    let a = metric.active_dim();
    if point.len() < n {
        return Err(degenerate(format!("point has {} coordinates, need at least {n}", point.len())));
    }
    let mut p: Vec<f64> = point.iter().take(a).copied().collect();
    p.resize(a, 0.0);
    Ok(p)
}

/// The coordinate metric in `(x, angles)`; see the crate docs for the angle conventions.
pub fn evaluate_metric(metric: &SeparableMetric, point: &[f64]) -> Result<DMatrix<f64>, GeomError> {
    let x = active_point(metric, point)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(degenerate("non-finite coordinate"));
    }
    match metric {
        SeparableMetric::Profile1D(p) => {
            let a = p.a.eval_f64(x[0]);
            if !(a > 0.0) {
                return Err(degenerate(format!("A({}) = {a} is not positive", x[0])));
            }
            Ok(DMatrix::from_diagonal(&DVector::from_vec(vec![1.0 / a, a])))
        }
        SeparableMetric::TwistedProduct(t) => {
            let m = t.m;
            let c = t.b.to_f64();
            if c[0] == 0.0 {
                return Err(degenerate("b0 = 0: re-chart before evaluating"));
            }
            let f = t.b.eval_f64(&x);
            if !(f > 0.0) {
                return Err(degenerate(format!("f_b = {f} is not positive")));
            }
            let mut g = DMatrix::zeros(2 * m, 2 * m);
            for i in 0..m {
                let a = t.a[i].eval_f64(x[i]);
                if !(a > 0.0) {
                    return Err(degenerate(format!("A_{}({}) = {a} is not positive", i + 1, x[i])));
                }
                g[(i, i)] = 1.0 / (f * a);
                // α_i = dτ_i - (b_i/f) Σ_k x_k dτ_k
                let row: Vec<f64> = (0..m).map(|k| if i == k { 1.0 } else { 0.0 } - c[i + 1] * x[k] / f).collect();
                for k in 0..m {
                    for l in 0..m {
                        g[(m + k, m + l)] += a / f * row[k] * row[l];
                    }
                }
            }
            Ok(g)
        }
        SeparableMetric::Orthotoric(o) => twisted_orthotoric(&o.a_f64(&x), &WeightFunction::polarized_one(o.m), &x),
        SeparableMetric::TwistedOrthotoric(o) => twisted_orthotoric(&o.a_f64(&x), &o.q, &x),
        SeparableMetric::Ambitoric(a) => {
            let (x1, x2) = (x[0], x[1]);
            if !(x1 > x2) {
                return Err(degenerate("ambitoric needs x1 > x2"));
            }
            let q = [to_f64(&a.q.q0), to_f64(&a.q.q1), to_f64(&a.q.q2)];
            let f = q[0] + q[1] * (x1 + x2) + q[2] * x1 * x2;
            let (av, bv) = (a.a.eval_f64(x1), a.b.eval_f64(x2));
            if !(f > 0.0 && av > 0.0 && bv > 0.0) {
                return Err(degenerate(format!("need f_q, A, B > 0; got {f}, {av}, {bv}")));
            }
            let conf = match a.sign {
                AmbiSign::Plus => (x1 - x2) / f,
                AmbiSign::Minus => f / (x1 - x2),
            };
            // dτ0 + 2x dτ1 + x² dτ2 in the angles t_r, with
            // τ0 = -q1 t0 + q0 t1, 2τ1 = -q2 t0 + q0 t2, τ2 = -q2 t1 + q1 t2
            let v = |x: f64| [-q[1] - q[2] * x, q[0] - q[2] * x * x, q[0] * x + q[1] * x * x];
            let skip = dropped_angle(&q);
            let keep: Vec<usize> = (0..3).filter(|&r| r != skip).collect();
            let s = (x1 - x2) * f;
            let alpha1: Vec<f64> = keep.iter().map(|&r| v(x2)[r] / s).collect();
            let alpha2: Vec<f64> = keep.iter().map(|&r| v(x1)[r] / s).collect();
            let mut g = DMatrix::zeros(4, 4);
            g[(0, 0)] = conf / av;
            g[(1, 1)] = conf / bv;
            for k in 0..2 {
                for l in 0..2 {
                    g[(2 + k, 2 + l)] = conf * (av * alpha1[k] * alpha1[l] + bv * alpha2[k] * alpha2[l]);
                }
            }
            Ok(g)
        }
        SeparableMetric::CalabiBundle1D(c) => {
            let d = c.base_dim;
            let z = x[0];
            let p = to_f64(&c.a0) + to_f64(&c.a1) * z;
            let a = c.a.eval_f64(z);
            if !(p > 0.0 && a > 0.0) {
                return Err(degenerate(format!("need a0 + a1 z > 0 and A > 0; got {p}, {a}")));
            }
            let sb = to_f64(&c.base_scal);
            let a1 = to_f64(&c.a1);
            let n = 2 + 2 * d;
            let t = 1 + d;
            let mut g = DMatrix::zeros(n, n);
            g[(0, 0)] = 1.0 / a;
            // θ = dt + a1 Σ y_i ds_i
            let mut theta = vec![0.0; n];
            theta[t] = 1.0;
            for i in 0..d {
                let y = x[1 + i];
                let bq = 1.0 - sb / (2.0 * d as f64) * y * y;
                if !(bq > 0.0) {
                    return Err(degenerate(format!("base profile {bq} is not positive at y = {y}")));
                }
                g[(1 + i, 1 + i)] = p / bq;
                g[(t + 1 + i, t + 1 + i)] = p * bq;
                theta[t + 1 + i] = a1 * y;
            }
            for k in t..n {
                for l in t..n {
                    g[(k, l)] += a * theta[k] * theta[l];
                }
            }
            Ok(g)
        }
    }
}

fn twisted_orthotoric(a: &[f64], q: &WeightFunction, x: &[f64]) -> Result<DMatrix<f64>, GeomError> {
    let m = x.len();
    let qc = q.to_f64();
    let sig = elementary_f64(x);
    let f: f64 = qc.iter().zip(&sig).map(|(q, s)| q * s).sum();
    if !(f > 0.0) {
        return Err(degenerate(format!("f_q = {f} is not positive")));
    }
    let skip = dropped_angle(&qc);
    let keep: Vec<usize> = (0..=m).filter(|&r| r != skip).collect();
    let mut g = DMatrix::zeros(2 * m, 2 * m);
    for j in 0..m {
        let others: Vec<f64> = (0..m).filter(|&k| k != j).map(|k| x[k]).collect();
        let delta: f64 = others.iter().map(|xk| x[j] - xk).product();
        if delta.abs() < 1e-12 {
            return Err(degenerate("coincident separable coordinates"));
        }
        let c = f * a[j] / delta;
        if !(c > 0.0) {
            return Err(degenerate(format!("A_{}/Δ_{} is not positive", j + 1, j + 1)));
        }
        g[(j, j)] = 1.0 / c;
        let hat = elementary_f64(&others);
        // ∂_j σ_r = σ_{r-1}(x̂_j)
        let ds = |r: usize| if r == 0 { 0.0 } else { hat[r - 1] };
        let fj: f64 = (0..=m).map(|r| qc[r] * ds(r)).sum();
        let theta: Vec<f64> = keep.iter().map(|&r| (ds(r) * f - sig[r] * fj) / (f * f)).collect();
        for k in 0..m {
            for l in 0..m {
                g[(m + k, m + l)] += c * theta[k] * theta[l];
            }
        }
    }
    Ok(g)
}

trait ProfilesF64 {
    fn a_f64(&self, x: &[f64]) -> Vec<f64>;
}

impl ProfilesF64 for super::metric::Orthotoric {
    fn a_f64(&self, x: &[f64]) -> Vec<f64> {
        self.a.iter().zip(x).map(|(p, &v)| p.eval_f64(v)).collect()
    }
}

impl ProfilesF64 for super::metric::TwistedOrthotoric {
    fn a_f64(&self, x: &[f64]) -> Vec<f64> {
        self.a.iter().zip(x).map(|(p, &v)| p.eval_f64(v)).collect()
    }
}

/// Radical inverse in base `b`.
pub fn halton(i: usize, b: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let mut i = i;
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

/// Minimum spacing of orthotoric-type probe coordinates; closer points make the metric badly conditioned.
const MIN_GAP: f64 = 0.3;

const PRIMES: [usize; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Up to `count` low-discrepancy points of the separable variables at which the metric is valid.
/// The box is the interval for one-variable kinds and `[-0.95, 0.95]^n` otherwise; orthotoric-type
/// points are sorted so that `x_1 > x_2 > …`.
pub fn probe_points(metric: &SeparableMetric, count: usize) -> Vec<Vec<f64>> {
    let n = metric.nvars();
    let (lo, hi) = match metric.interval() {
        Some((lo, hi)) => {
            let pad = 0.02 * (hi - lo);
            (lo + pad, hi - pad)
        }
        None => (-0.95, 0.95),
    };
    let sort = !matches!(metric, SeparableMetric::Profile1D(_) | SeparableMetric::CalabiBundle1D(_) | SeparableMetric::TwistedProduct(_));
    let mut out = vec![];
    for i in 1..=count * 40 {
        let mut p: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * halton(i, PRIMES[k % 8])).collect();
        if sort {
            p.sort_by(|a, b| b.partial_cmp(a).unwrap());
            if p.windows(2).any(|w| w[0] - w[1] < MIN_GAP) {
                continue;
            }
        }
        if evaluate_metric(metric, &p).is_ok() {
            out.push(p);
            if out.len() == count {
                break;
            }
        }
    }
    out
}

/// The probe grid used for weight positivity: 17 points per separable variable.
pub fn default_probes(metric: &SeparableMetric) -> Vec<Vec<f64>> {
    probe_points(metric, 17 * metric.nvars())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, Polynomial};

    #[test]
    fn sphere_at_equator() {
        let g = evaluate_metric(&SeparableMetric::sphere(), &[0.0]).unwrap();
        assert_eq!(g, DMatrix::identity(2, 2));
    }

    #[test]
    fn twisted_product_m1() {
        let m = SeparableMetric::twisted_product(
            vec![Polynomial::from_ints("x", &[1, 0, -1])],
            WeightFunction::product(int(2), vec![int(1)]),
        );
        let g = evaluate_metric(&m, &[0.0]).unwrap();
        assert!((g[(0, 0)] - 0.5).abs() < 1e-15 && (g[(1, 1)] - 0.5).abs() < 1e-15);
        assert_eq!(g[(0, 1)], 0.0);
    }

    #[test]
    fn orthotoric_entry() {
        let m = SeparableMetric::orthotoric(vec![
            Polynomial::from_ints("x", &[0, 0, 0, 1]),
            Polynomial::from_ints("x", &[0, 0, 0, -1]),
        ]);
        let g = evaluate_metric(&m, &[2.0, 1.0]).unwrap();
        assert!((g[(0, 0)] - 0.125).abs() < 1e-15);
    }

    #[test]
    fn positive_ambitoric_is_twisted_orthotoric() {
        use crate::geom::metric::Ambitoric;
        use crate::poly::PaperQuadratic;
        let a = Ambitoric {
            q: PaperQuadratic::new(int(3), int(1), int(-1)),
            a: Polynomial::from_ints("x", &[2, 1, -1]),
            b: Polynomial::from_ints("x", &[3, -1, 0, 1]),
            sign: AmbiSign::Plus,
        };
        let tw = SeparableMetric::ambitoric_as_twisted_orthotoric(&a);
        let am = SeparableMetric::Ambitoric(a);
        for p in probe_points(&am, 10) {
            let g1 = evaluate_metric(&am, &p).unwrap();
            let g2 = evaluate_metric(&tw, &p).unwrap();
            assert!((g1 - g2).amax() < 1e-12);
        }
    }

    #[test]
    fn elementary_values() {
        assert_eq!(elementary_f64(&[1.0, 2.0, 3.0]), vec![1.0, 6.0, 11.0, 6.0]);
    }
}
