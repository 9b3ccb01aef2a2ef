//! Univariate rational functions `num / den`, kept in lowest terms with monic denominator.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::invariants::mobius;
use super::mpoly::MPoly;
use super::rational::Rational;
use super::rexpr::RationalExpr;
use super::univariate::Polynomial;
use super::PolyError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Polynomial,
    den: Polynomial,
}

impl RatFn {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        let var = num.var.clone();
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_zero() || g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = d.leading();
        n = n.scale(&(Rational::one() / &lc)).with_var(&var);
        d = d.monic().with_var(&var);
        if n.is_zero() {
            d = Polynomial::one(&var);
        }
        Ok(RatFn { num: n, den: d })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let var = p.var.clone();
        RatFn { num: p, den: Polynomial::one(&var) }
    }

    pub fn var(&self) -> &str {
        &self.num.var
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_constant().then_some(&self.num)
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn derive(&self) -> Self {
        let n = &(&self.num.derive() * &self.den) - &(&self.num * &self.den.derive());
        let d = &self.den * &self.den;
        Self::new(n, d).expect("nonzero denominator")
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.num.scale(s), self.den.clone()).unwrap()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).unwrap()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        Self::new(&self.num * p, self.den.clone()).unwrap()
    }

    pub fn div_poly(&self, p: &Polynomial) -> Result<Self, PolyError> {
        Self::new(self.num.clone(), &self.den * p)
    }

    /// `(γz+δ)^w · R((αz+β)/(γz+δ))`.
    pub fn mobius_weighted(&self, map: &[Rational; 4], w: i64) -> Result<Self, PolyError> {
        let dn = self.num.deg0();
        let dd = self.den.deg0();
        let n = mobius(&self.num, map, dn)?;
        let d = mobius(&self.den, map, dd)?;
        // R∘M = n/d · (γz+δ)^{dd-dn}
        let lin = Polynomial::new(self.var(), vec![map[3].clone(), map[2].clone()]);
        let e = w + dd as i64 - dn as i64;
        let (n, d) = if e >= 0 { (&n * &lin.pow(e as u32), d) } else { (n, &d * &lin.pow((-e) as u32)) };
        Self::new(n, d)
    }

    /// `R((αz+β)/(γz+δ))`.
    pub fn compose_mobius(&self, map: &[Rational; 4]) -> Result<Self, PolyError> {
        self.mobius_weighted(map, 0)
    }

    /// As a rational expression in slot `j` of `nvars` variables.
    pub fn to_rexpr(&self, nvars: usize, j: usize) -> RationalExpr {
        let n = MPoly::from_univariate(nvars, j, &self.num);
        if self.den.is_constant() {
            return RationalExpr::from_poly(n.scale(&(Rational::one() / self.den.coeff(0))));
        }
        RationalExpr::new(n, vec![(MPoly::from_univariate(nvars, j, &self.den), 1)])
    }

    pub fn from_rexpr(e: &RationalExpr, j: usize, var: &str) -> Option<Self> {
        let (n, d) = e.to_univariate(j, var)?;
        Self::new(n, d).ok()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn with_var(self, var: &str) -> Self {
        RatFn { num: self.num.with_var(var), den: self.den.with_var(var) }
    }

    pub fn second_derivative(&self) -> Self {
        self.derive().derive()
    }
}

impl std::fmt::Display for RatFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// JSON: a plain polynomial, or `{"num": ..., "den": ...}`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RatFnRepr {
    Quotient { num: Polynomial, den: Polynomial },
    Poly(Polynomial),
}

impl Serialize for RatFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.den.is_constant() && self.den.coeff(0) == Rational::one() {
            self.num.serialize(s)
        } else {
            RatFnRepr::Quotient { num: self.num.clone(), den: self.den.clone() }.serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for RatFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RatFnRepr::deserialize(d)? {
            RatFnRepr::Poly(p) => Ok(RatFn::from_poly(p)),
            RatFnRepr::Quotient { num, den } => {
                let var = num.var.clone();
                RatFn::new(num, den.with_var(&var)).map_err(serde::de::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn z(c: &[i64]) -> Polynomial {
        Polynomial::from_ints("z", c)
    }

    #[test]
    fn lowest_terms() {
        let r = RatFn::new(&z(&[-1, 0, 1]) * &z(&[3]), &z(&[1, 1]) * &z(&[2])).unwrap();
        assert_eq!(r.as_polynomial().unwrap(), &z(&[-3, 3]).scale(&rat(1, 2)));
    }

    #[test]
    fn mobius_of_quotient() {
        // A = (1-z^2)/(z+2); check weighted transform pointwise
        let a = RatFn::new(z(&[1, 0, -1]), z(&[2, 1])).unwrap();
        let m = [int(2), int(-1), int(-1), int(2)];
        let t = a.mobius_weighted(&m, 3).unwrap();
        let s = rat(1, 5);
        let lin = &m[2] * &s + &m[3];
        let zz = (&m[0] * &s + &m[1]) / &lin;
        let expect = &lin * &lin * &lin * a.eval(&zz).unwrap();
        assert_eq!(t.eval(&s).unwrap(), expect);
    }

    #[test]
    fn json_forms() {
        let p: RatFn = serde_json::from_str(r#"{"var":"z","coeffs":["1","0","-1"]}"#).unwrap();
        assert_eq!(p.as_polynomial().unwrap(), &z(&[1, 0, -1]));
        let q: RatFn = serde_json::from_str(
            r#"{"num":{"var":"z","coeffs":["1","0","-1"]},"den":{"var":"z","coeffs":["2","1"]}}"#,
        )
        .unwrap();
        let s = serde_json::to_string(&q).unwrap();
        let back: RatFn = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn derivative() {
        let a = RatFn::new(z(&[1]), z(&[0, 1])).unwrap(); // 1/z
        let d = a.derive();
        assert_eq!(d.eval(&int(2)).unwrap(), rat(-1, 4));
    }
}
