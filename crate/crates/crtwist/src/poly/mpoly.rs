//! Sparse multivariate polynomials over the rationals, lex order.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use super::rational::{format_rational, int, to_f64, Rational};
use super::univariate::Polynomial;

pub type Exponents = Vec<u32>;

/// Terms keyed by exponent vectors; the lex-largest key is the leading term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, e: Exponents, c: Rational) -> Self {
        assert_eq!(e.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// A univariate polynomial placed in slot `j`.
    pub fn from_univariate(nvars: usize, j: usize, p: &Polynomial) -> Self {
        let mut out = Self::zero(nvars);
        for (i, c) in p.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; nvars];
                e[j] = i as u32;
                out.terms.insert(e, c.clone());
            }
        }
        out
    }

    /// Affine form `c0 + Σ c_j x_j`.
    pub fn affine(nvars: usize, c0: &Rational, c: &[Rational]) -> Self {
        let mut out = Self::constant(nvars, c0.clone());
        for (j, cj) in c.iter().enumerate() {
            out = out.add(&Self::var(nvars, j).scale(cj));
        }
        out
    }

    /// Elementary symmetric polynomial σ_r of the given variable indices.
    pub fn elementary(nvars: usize, vars: &[usize], r: usize) -> Self {
        let mut out = Self::zero(nvars);
        let n = vars.len();
        if r > n {
            return out;
        }
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            let mut e = vec![0; nvars];
            for &i in &idx {
                e[vars[i]] += 1;
            }
            *out.terms.entry(e).or_insert_with(Rational::zero) += Rational::one();
            // next combination
            let mut k = r;
            loop {
                if k == 0 {
                    out.terms.retain(|_, c| !c.is_zero());
                    return out;
                }
                k -= 1;
                if idx[k] != k + n - r {
                    idx[k] += 1;
                    for l in k + 1..r {
                        idx[l] = idx[l - 1] + 1;
                    }
                    break;
                }
            }
            if r == 0 {
                return out;
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|e| e[j]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, j: usize) -> bool {
        self.terms.keys().any(|e| e[j] > 0)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    fn add_assign_scaled(&mut self, o: &MPoly, s: &Rational) {
        for (e, c) in &o.terms {
            let v = c * s;
            match self.terms.get_mut(e) {
                Some(x) => {
                    *x += v;
                    if x.is_zero() {
                        self.terms.remove(e);
                    }
                }
                None => {
                    self.terms.insert(e.clone(), v);
                }
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(o, &Rational::one());
        out
    }

    pub fn sub(&self, o: &MPoly) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(o, &-Rational::one());
        out
    }

    pub fn mul(&self, o: &MPoly) -> Self {
        let mut terms: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn deriv(&self, j: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[j] > 0 {
                let mut e2 = e.clone();
                e2[j] -= 1;
                terms.insert(e2, c * int(e[j] as i64));
            }
        }
        MPoly { nvars: self.nvars, terms }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    t *= &x[k];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = to_f64(c);
                for (k, &p) in e.iter().enumerate() {
                    t *= x[k].powi(p as i32);
                }
                t
            })
            .sum()
    }

    /// Substitutes `x_j = value` and keeps the variable count.
    pub fn substitute(&self, j: usize, value: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let p = e2[j];
            e2[j] = 0;
            let mut v = c.clone();
            for _ in 0..p {
                v *= value;
            }
            out.add_assign_scaled(&MPoly::monomial(self.nvars, e2, Rational::one()), &v);
        }
        out
    }

    /// Converts a polynomial in the single variable `j` to univariate form.
    pub fn to_univariate(&self, j: usize, var: &str) -> Option<Polynomial> {
        let mut coeffs = vec![Rational::zero(); self.degree_in(j) as usize + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(k, &p)| k != j && p > 0) {
                return None;
            }
            coeffs[e[j] as usize] = c.clone();
        }
        Some(Polynomial::new(var, coeffs))
    }

    /// Exact quotient `self / d` when `d` divides `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (ld, lc) = d.leading()?;
        let (ld, lc) = (ld.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quo = Self::zero(self.nvars);
        while let Some((lr, cr)) = rem.leading() {
            if lr.iter().zip(&ld).any(|(a, b)| a < b) {
                return None;
            }
            let e: Exponents = lr.iter().zip(&ld).map(|(a, b)| a - b).collect();
            let c = cr / &lc;
            let t = MPoly::monomial(self.nvars, e, c);
            rem = rem.sub(&t.mul(d));
            quo = quo.add(&t);
        }
        Some(quo)
    }

    /// Monic normalization: returns `(leading coefficient, self / lc)`.
    pub fn monic(&self) -> (Rational, MPoly) {
        match self.leading() {
            None => (Rational::one(), self.clone()),
            Some((_, lc)) => {
                let lc = lc.clone();
                (lc.clone(), self.scale(&(Rational::one() / lc)))
            }
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| to_f64(&c.abs())).fold(0.0, f64::max)
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(k, &p)| if p == 1 { names[k].clone() } else { format!("{}^{}", names[k], p) })
                .collect();
            if mono.is_empty() {
                s.push_str(&format_rational(&a));
            } else {
                if !a.is_one() {
                    s.push_str(&format_rational(&a));
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

pub fn default_names(nvars: usize) -> Vec<String> {
    if nvars == 1 {
        vec!["z".into()]
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&default_names(self.nvars)))
    }
}
