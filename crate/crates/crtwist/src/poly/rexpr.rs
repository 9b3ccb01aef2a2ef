//! Multivariate rational functions with a factored denominator.
//!
//! The denominator is kept as a product of monic, non-constant factors with
//! multiplicities. Factors are never factored further; after every operation
//! the numerator is divided by each factor as often as it goes. That is enough
//! to decide polynomiality exactly.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use super::mpoly::{default_names, MPoly};
use super::rational::{int, Rational};
use super::univariate::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalExpr {
    num: MPoly,
    den: BTreeMap<MPoly, u32>,
}

impl RationalExpr {
    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    pub fn from_poly(p: MPoly) -> Self {
        RationalExpr { num: p, den: BTreeMap::new() }
    }

    /// `num / Π den_i^{k_i}`; constant factors are folded into the numerator.
    pub fn new(num: MPoly, den: Vec<(MPoly, u32)>) -> Self {
        let mut out = RationalExpr { num, den: BTreeMap::new() };
        for (f, k) in den {
            assert!(!f.is_zero(), "zero denominator factor");
            if k == 0 {
                continue;
            }
            let (lc, m) = f.monic();
            let inv = Rational::one() / super::rational::pow(&lc, k);
            out.num = out.num.scale(&inv);
            if m.is_constant() {
                continue;
            }
            *out.den.entry(m).or_insert(0) += k;
        }
        out.reduce();
        out
    }

    /// `1 / f`.
    pub fn recip_poly(f: &MPoly) -> Self {
        Self::new(MPoly::one(f.nvars()), vec![(f.clone(), 1)])
    }

    /// `∂_j f / f`.
    pub fn dlog(f: &MPoly, j: usize) -> Self {
        Self::new(f.deriv(j), vec![(f.clone(), 1)])
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> impl Iterator<Item = (&MPoly, &u32)> {
        self.den.iter()
    }

    pub fn denominator(&self) -> MPoly {
        self.den.iter().fold(MPoly::one(self.nvars()), |acc, (f, &k)| acc.mul(&f.pow(k)))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_polynomial(&self) -> Option<&MPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let keys: Vec<MPoly> = self.den.keys().cloned().collect();
        for f in keys {
            loop {
                let k = self.den[&f];
                if k == 0 {
                    break;
                }
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        *self.den.get_mut(&f).unwrap() -= 1;
                    }
                    None => break,
                }
            }
            if self.den[&f] == 0 {
                self.den.remove(&f);
            }
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = self.clone();
        out.num = out.num.scale(s);
        if out.num.is_zero() {
            out.den.clear();
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let mut den = self.den.clone();
        for (f, &k) in &o.den {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let lift = |x: &Self| {
            let mut n = x.num.clone();
            for (f, &k) in &den {
                let have = x.den.get(f).copied().unwrap_or(0);
                if k > have {
                    n = n.mul(&f.pow(k - have));
                }
            }
            n
        };
        let mut out = RationalExpr { num: lift(self).add(&lift(o)), den };
        out.reduce();
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.nvars());
        }
        let mut den = self.den.clone();
        for (f, &k) in &o.den {
            *den.entry(f.clone()).or_insert(0) += k;
        }
        let mut out = RationalExpr { num: self.num.mul(&o.num), den };
        out.reduce();
        out
    }

    pub fn mul_poly(&self, p: &MPoly) -> Self {
        self.mul(&Self::from_poly(p.clone()))
    }

    /// Division; panics if `o` is zero.
    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by zero rational expression");
        // o = n / Π f^k  ⇒ 1/o = Π f^k / n
        let mut inv_num = MPoly::one(self.nvars());
        for (f, &k) in &o.den {
            inv_num = inv_num.mul(&f.pow(k));
        }
        let inv = Self::new(inv_num, vec![(o.num.clone(), 1)]);
        self.mul(&inv)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars()), |acc, _| acc.mul(self))
    }

    pub fn deriv(&self, j: usize) -> Self {
        // (N / Π F^k)' = (N' Π F - N Σ k F' Π_{l≠i} F) / Π F^{k+1}, over factors depending on x_j
        let active: Vec<(&MPoly, u32)> =
            self.den.iter().filter(|(f, _)| f.depends_on(j)).map(|(f, &k)| (f, k)).collect();
        let prod_all = active.iter().fold(MPoly::one(self.nvars()), |acc, (f, _)| acc.mul(f));
        let mut num = self.num.deriv(j).mul(&prod_all);
        for (i, (f, k)) in active.iter().enumerate() {
            let mut t = self.num.mul(&f.deriv(j)).scale(&int(*k as i64));
            for (l, (g, _)) in active.iter().enumerate() {
                if l != i {
                    t = t.mul(g);
                }
            }
            num = num.sub(&t);
        }
        let mut den = self.den.clone();
        for (f, _) in &active {
            *den.get_mut(*f).unwrap() += 1;
        }
        let mut out = RationalExpr { num, den };
        out.reduce();
        out
    }

    /// Exact evaluation; `None` where a denominator factor vanishes.
    pub fn eval(&self, x: &[Rational]) -> Option<Rational> {
        let mut d = Rational::one();
        for (f, &k) in &self.den {
            let v = f.eval(x);
            if v.is_zero() {
                return None;
            }
            d *= super::rational::pow(&v, k);
        }
        Some(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let mut d = 1.0;
        for (f, &k) in &self.den {
            d *= f.eval_f64(x).powi(k as i32);
        }
        self.num.eval_f64(x) / d
    }

    /// Exact equality as rational functions.
    pub fn equals(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// Numerator and expanded denominator as univariate polynomials in slot `j`.
    pub fn to_univariate(&self, j: usize, var: &str) -> Option<(Polynomial, Polynomial)> {
        Some((self.num.to_univariate(j, var)?, self.denominator().to_univariate(j, var)?))
    }

    pub fn format_with(&self, names: &[String]) -> String {
        let n = self.num.format_with(names);
        if self.den.is_empty() {
            return n;
        }
        let d: Vec<String> = self
            .den
            .iter()
            .map(|(f, &k)| {
                let s = f.format_with(names);
                let s = if f.n_terms() > 1 { format!("({s})") } else { s };
                if k == 1 {
                    s
                } else {
                    format!("{s}^{k}")
                }
            })
            .collect();
        format!("({n}) / ({})", d.join("*"))
    }

    pub fn max_abs_f64(&self, points: &[Vec<f64>]) -> f64 {
        points.iter().map(|p| self.eval_f64(p).abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&default_names(self.nvars())))
    }
}
