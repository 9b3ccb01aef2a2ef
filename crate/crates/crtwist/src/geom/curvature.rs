//! Scalar and weighted scalar curvature, and the Killing-potential test.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::rational::serde_rat;
use crate::poly::{int, MPoly, Rational, RationalExpr};

use super::engine::SeparableData;
use super::evaluate::default_probes;
use super::metric::{AmbiSign, KillingBasis, SeparableMetric};
use super::{GeomError, WeightFunction};

pub fn scal(metric: &SeparableMetric) -> Result<RationalExpr, GeomError> {
    metric.validate()?;
    Ok(SeparableData::new(metric).scal())
}

/// The weight as a function of the separable variables: `f_w / Dm`.
pub fn weight_expr(metric: &SeparableMetric, w: &WeightFunction) -> RationalExpr {
    let n = metric.nvars();
    let mut fw = w.to_mpoly();
    if fw.nvars() != n {
        // constant weight written with the wrong arity
        fw = MPoly::constant(n, fw.constant_value().unwrap_or_else(Rational::zero));
    }
    let dm = metric.killing_denominator();
    match dm.constant_value() {
        Some(c) => RationalExpr::from_poly(fw.scale(&(Rational::one() / c))),
        None => RationalExpr::new(fw, vec![(dm, 1)]),
    }
}

/// Fails with `NonPositiveWeightSample` if the weight is `≤ 0` at any probe point.
pub fn check_weight_positive(metric: &SeparableMetric, w: &WeightFunction) -> Result<(), GeomError> {
    let e = weight_expr(metric, w);
    for p in default_probes(metric) {
        let v = e.eval_f64(&p);
        if !(v > 0.0) {
            return Err(GeomError::NonPositiveWeightSample { point: p, value: v });
        }
    }
    Ok(())
}

/// `Scal_{f,ν}` by the definitional three-piece assembly.
pub fn weighted_scal_definitional(
    metric: &SeparableMetric,
    w: &WeightFunction,
    nu: &Rational,
) -> Result<RationalExpr, GeomError> {
    metric.validate()?;
    metric.check_weight(w)?;
    Ok(SeparableData::new(metric).weighted_scal(&weight_expr(metric, w), nu))
}

/// `-Σ (f^{ν+1}/Δ_j) ∂_j²(A_j / f^{ν-1})` for a polynomial `f` affine in each variable.
fn closed_core(f: &MPoly, a: &[RationalExpr], deltas: Option<&[MPoly]>, nu: &Rational) -> Option<RationalExpr> {
    let n = f.nvars();
    let k = nu - int(1);
    let fe = RationalExpr::from_poly(f.clone());
    let mut out = RationalExpr::zero(n);
    for j in 0..n {
        let fj = f.deriv(j);
        if !fj.deriv(j).is_zero() {
            return None;
        }
        let fje = RationalExpr::from_poly(fj);
        let a1 = a[j].deriv(j);
        let a2 = a1.deriv(j);
        let term = fe
            .mul(&fe)
            .mul(&a2)
            .sub(&fe.mul(&fje).mul(&a1).scale(&(int(2) * &k)))
            .add(&fje.mul(&fje).mul(&a[j]).scale(&(&k * (&k + int(1)))));
        let term = match deltas {
            Some(d) => term.div(&RationalExpr::from_poly(d[j].clone())),
            None => term,
        };
        out = out.sub(&term);
    }
    Some(out)
}

fn deltas(n: usize) -> Vec<MPoly> {
    (0..n)
        .map(|j| {
            (0..n).filter(|&k| k != j).fold(MPoly::one(n), |acc, k| acc.mul(&MPoly::var(n, j).sub(&MPoly::var(n, k))))
        })
        .collect()
}

/// Closed-form route where one exists:
/// plain kinds directly, twisted kinds at `ν = m + 2` through the twist identity
/// `Scal_{w,m+2}(g_b) = Scal_{w,m+2}(g_1) / f_b`, and constant twists for every ν.
pub fn weighted_scal_closed_form(metric: &SeparableMetric, w: &WeightFunction, nu: &Rational) -> Option<RationalExpr> {
    let n = metric.nvars();
    let profiles: Vec<RationalExpr> = metric.slot_profiles().iter().enumerate().map(|(j, a)| a.to_rexpr(n, j)).collect();
    let fw = weight_expr(metric, &w.clone()).mul_poly(&metric.killing_denominator());
    let fw = fw.as_polynomial()?.clone();
    let natural = nu == &int(n as i64 + 2);
    let ortho = matches!(metric.killing_basis(), KillingBasis::Elementary);
    let d = deltas(n);
    let dref = if ortho { Some(d.as_slice()) } else { None };
    match metric {
        SeparableMetric::CalabiBundle1D(_) => None,
        SeparableMetric::Ambitoric(a) if a.sign == AmbiSign::Minus => None,
        SeparableMetric::Profile1D(_) | SeparableMetric::Orthotoric(_) => closed_core(&fw, &profiles, dref, nu),
        _ => {
            let dm = metric.killing_denominator();
            if let Some(c) = dm.constant_value() {
                let scaled: Vec<RationalExpr> = profiles.iter().map(|a| a.scale(&c)).collect();
                return closed_core(&fw.scale(&(Rational::one() / &c)), &scaled, dref, nu);
            }
            if !natural {
                return None;
            }
            closed_core(&fw, &profiles, dref, nu).map(|e| e.div(&RationalExpr::from_poly(dm)))
        }
    }
}

/// `Scal_{f,ν}`: closed form when available, otherwise the definitional assembly.
pub fn weighted_scal(metric: &SeparableMetric, w: &WeightFunction, nu: &Rational) -> Result<RationalExpr, GeomError> {
    metric.validate()?;
    metric.check_weight(w)?;
    check_weight_positive(metric, w)?;
    match weighted_scal_closed_form(metric, w, nu) {
        Some(e) => Ok(e),
        None => Ok(SeparableData::new(metric).weighted_scal(&weight_expr(metric, w), nu)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum AffineVerdict {
    /// Coefficients in the kind's Killing basis (`1, x_j` or `σ_r`).
    Affine {
        #[serde(with = "serde_rat::vec")]
        c: Vec<Rational>,
    },
    NotAffine { witness: String },
}

impl AffineVerdict {
    pub fn is_affine(&self) -> bool {
        matches!(self, AffineVerdict::Affine { .. })
    }

    pub fn coeffs(&self) -> Option<&[Rational]> {
        match self {
            AffineVerdict::Affine { c } => Some(c),
            AffineVerdict::NotAffine { .. } => None,
        }
    }
}

/// Decides whether `expr` is a Killing potential of `metric`: after multiplying by the
/// kind's denominator it must lie in `span{1, x_j}` or `span{σ_r}`.
pub fn is_affine_in_momenta(expr: &RationalExpr, metric: &SeparableMetric) -> AffineVerdict {
    let n = metric.nvars();
    let names = metric.var_names();
    let cleared = expr.mul_poly(&metric.killing_denominator());
    let Some(p) = cleared.as_polynomial() else {
        return AffineVerdict::NotAffine { witness: format!("non-polynomial after clearing: {}", cleared.format_with(&names)) };
    };
    let mono = |e: &[u32]| MPoly::monomial(n, e.to_vec(), Rational::one()).format_with(&names);
    match metric.killing_basis() {
        KillingBasis::Affine => {
            let mut c = vec![Rational::zero(); n + 1];
            for (e, v) in p.terms() {
                let deg: u32 = e.iter().sum();
                if deg > 1 {
                    return AffineVerdict::NotAffine { witness: mono(e) };
                }
                match e.iter().position(|&k| k == 1) {
                    None => c[0] = v.clone(),
                    Some(j) => c[j + 1] = v.clone(),
                }
            }
            AffineVerdict::Affine { c }
        }
        KillingBasis::Elementary => {
            let vars: Vec<usize> = (0..n).collect();
            let mut c = vec![];
            let mut rest = p.clone();
            for r in 0..=n {
                let e: Vec<u32> = (0..n).map(|k| u32::from(k < r)).collect();
                let cr = p.coeff(&e);
                rest = rest.sub(&MPoly::elementary(n, &vars, r).scale(&cr));
                c.push(cr);
            }
            match rest.leading() {
                None => AffineVerdict::Affine { c },
                Some((e, _)) => AffineVerdict::NotAffine { witness: mono(e) },
            }
        }
    }
}
