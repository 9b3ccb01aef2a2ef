//! Curvature of separable metrics `Σ dx_j²/h_j + (angular block)`.
//!
//! With `h_j = g^{jj}`, `λ_j = ∂_j log √det g` and `γ_j = ∂_j log det(angular block)`:
//!
//! ```text
//! |dF|²  =  Σ h_j (∂_j F)²
//! Δ F    = -Σ [λ_j h_j ∂_j F + ∂_j(h_j ∂_j F)]
//! Scal   = -Σ [λ_j h_j γ_j   + ∂_j(h_j γ_j)]    + extra
//! ```
//!
//! `extra` is the base contribution for Calabi data. Δ is the positive laplacian.

use crate::poly::{int, MPoly, Rational, RationalExpr};

use super::metric::{AmbiSign, SeparableMetric};
use super::WeightFunction;

#[derive(Clone, Debug)]
pub struct SeparableData {
    pub n: usize,
    pub h: Vec<RationalExpr>,
    pub dlogvol: Vec<RationalExpr>,
    pub dloggram: Vec<RationalExpr>,
    pub extra: RationalExpr,
}

/// `Σ_{k≠j} 1/(x_j - x_k)` and `Δ_j = Π_{k≠j}(x_j - x_k)`.
fn orthotoric_pieces(n: usize, j: usize) -> (RationalExpr, MPoly) {
    let mut s = RationalExpr::zero(n);
    let mut d = MPoly::one(n);
    for k in 0..n {
        if k != j {
            let diff = MPoly::var(n, j).sub(&MPoly::var(n, k));
            s = s.add(&RationalExpr::recip_poly(&diff));
            d = d.mul(&diff);
        }
    }
    (s, d)
}

impl SeparableData {
    pub fn new(metric: &SeparableMetric) -> Self {
        let n = metric.nvars();
        let profiles: Vec<RationalExpr> =
            metric.slot_profiles().iter().enumerate().map(|(j, a)| a.to_rexpr(n, j)).collect();
        let dlog_a: Vec<RationalExpr> = profiles.iter().enumerate().map(|(j, a)| a.deriv(j).div(a)).collect();
        let zero = RationalExpr::zero(n);
        match metric {
            SeparableMetric::Profile1D(_) => SeparableData {
                n,
                h: profiles,
                dlogvol: vec![zero.clone()],
                dloggram: dlog_a,
                extra: zero,
            },
            SeparableMetric::CalabiBundle1D(c) => {
                let p = MPoly::affine(1, &c.a0, &[c.a1.clone()]);
                let d = int(c.base_dim as i64);
                let dlp = RationalExpr::dlog(&p, 0).scale(&d);
                SeparableData {
                    n,
                    h: profiles,
                    dlogvol: vec![dlp.clone()],
                    dloggram: vec![dlp.add(&dlog_a[0])],
                    extra: RationalExpr::recip_poly(&p).scale(&c.base_scal),
                }
            }
            SeparableMetric::TwistedProduct(t) => {
                let f = t.b.to_mpoly();
                Self::twisted(n, &f, profiles, dlog_a, vec![zero; n])
            }
            SeparableMetric::Orthotoric(_) => {
                let f = MPoly::one(n);
                let pieces: Vec<_> = (0..n).map(|j| orthotoric_pieces(n, j)).collect();
                let h = profiles.iter().zip(&pieces).map(|(a, (_, d))| a.div(&RationalExpr::from_poly(d.clone()))).collect();
                Self::twisted(n, &f, h, dlog_a, pieces.into_iter().map(|(s, _)| s).collect())
            }
            SeparableMetric::TwistedOrthotoric(_) | SeparableMetric::Ambitoric(_) => {
                let f = metric.killing_denominator();
                if let SeparableMetric::Ambitoric(a) = metric {
                    if a.sign == AmbiSign::Minus {
                        return Self::ambitoric_minus(&WeightFunction::from_quadratic(&a.q).to_mpoly(), profiles, dlog_a);
                    }
                }
                let pieces: Vec<_> = (0..n).map(|j| orthotoric_pieces(n, j)).collect();
                let h = profiles.iter().zip(&pieces).map(|(a, (_, d))| a.div(&RationalExpr::from_poly(d.clone()))).collect();
                Self::twisted(n, &f, h, dlog_a, pieces.into_iter().map(|(s, _)| s).collect())
            }
        }
    }

    /// `h_j = f h⁰_j`, `λ_j = λ⁰_j - (n+1) ∂_j log f`, `γ_j = γ⁰_j - (n+2) ∂_j log f`.
    fn twisted(
        n: usize,
        f: &MPoly,
        h0: Vec<RationalExpr>,
        gram0: Vec<RationalExpr>,
        vol0: Vec<RationalExpr>,
    ) -> Self {
        let fe = RationalExpr::from_poly(f.clone());
        let mut h = vec![];
        let mut dlogvol = vec![];
        let mut dloggram = vec![];
        for j in 0..n {
            let dlf = if f.is_constant() { RationalExpr::zero(n) } else { RationalExpr::dlog(f, j) };
            h.push(h0[j].mul(&fe));
            dlogvol.push(vol0[j].sub(&dlf.scale(&int(n as i64 + 1))));
            dloggram.push(gram0[j].sub(&dlf.scale(&int(n as i64 + 2))));
        }
        SeparableData { n, h, dlogvol, dloggram, extra: RationalExpr::zero(n) }
    }

    /// `g_- = (f/(x1-x2)) (dx1²/A + dx2²/B + A α1² + B α2²)`.
    fn ambitoric_minus(f: &MPoly, profiles: Vec<RationalExpr>, dlog_a: Vec<RationalExpr>) -> Self {
        let n = 2;
        let d = MPoly::var(n, 0).sub(&MPoly::var(n, 1));
        let de = RationalExpr::from_poly(d.clone());
        let fe = RationalExpr::from_poly(f.clone());
        let mut h = vec![];
        let mut dlogvol = vec![];
        let mut dloggram = vec![];
        for j in 0..n {
            let dld = RationalExpr::dlog(&d, j);
            h.push(profiles[j].mul(&de).div(&fe));
            // √det g = f/(x1-x2)^3, angular determinant AB/(x1-x2)^4
            dlogvol.push(RationalExpr::dlog(f, j).sub(&dld.scale(&int(3))));
            dloggram.push(dlog_a[j].sub(&dld.scale(&int(4))));
        }
        SeparableData { n, h, dlogvol, dloggram, extra: RationalExpr::zero(n) }
    }

    pub fn scal(&self) -> RationalExpr {
        let mut s = self.extra.clone();
        for j in 0..self.n {
            let hg = self.h[j].mul(&self.dloggram[j]);
            s = s.sub(&self.dlogvol[j].mul(&hg)).sub(&hg.deriv(j));
        }
        s
    }

    pub fn laplacian(&self, f: &RationalExpr) -> RationalExpr {
        let mut s = RationalExpr::zero(self.n);
        for j in 0..self.n {
            let hf = self.h[j].mul(&f.deriv(j));
            s = s.sub(&self.dlogvol[j].mul(&hf)).sub(&hf.deriv(j));
        }
        s
    }

    pub fn grad_norm(&self, f: &RationalExpr) -> RationalExpr {
        let mut s = RationalExpr::zero(self.n);
        for j in 0..self.n {
            let d = f.deriv(j);
            s = s.add(&self.h[j].mul(&d).mul(&d));
        }
        s
    }

    /// `F² Scal - 2(ν-1) F ΔF - ν(ν-1) |dF|²`.
    pub fn weighted_scal(&self, f: &RationalExpr, nu: &Rational) -> RationalExpr {
        let k = nu - int(1);
        let scal = self.scal();
        let mut out = f.mul(f).mul(&scal);
        if !f.numerator().is_constant() || f.denominator_factors().next().is_some() {
            out = out
                .sub(&f.mul(&self.laplacian(f)).scale(&(int(2) * &k)))
                .sub(&self.grad_norm(f).scale(&(nu * &k)));
        }
        out
    }
}
