//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, int, serde_rat, to_f64, Rational};
use super::PolyError;

/// `coeffs[i]` is the coefficient of `var^i`; trailing zeros are trimmed.
/// The variable tag is informational; only [`arith`] enforces it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "PolyRepr")]
pub struct Polynomial {
    pub var: String,
    #[serde(with = "serde_rat::vec")]
    pub coeffs: Vec<Rational>,
}

#[derive(Deserialize)]
struct PolyRepr {
    #[serde(default = "default_var")]
    var: String,
    #[serde(with = "serde_rat::vec")]
    coeffs: Vec<Rational>,
}

impl From<PolyRepr> for Polynomial {
    fn from(r: PolyRepr) -> Self {
        Polynomial::new(&r.var, r.coeffs)
    }
}

fn default_var() -> String {
    "z".to_string()
}

impl Polynomial {
    pub fn new(var: &str, coeffs: Vec<Rational>) -> Self {
        let mut p = Polynomial { var: var.to_string(), coeffs };
        p.trim();
        p
    }

    pub fn from_ints(var: &str, c: &[i64]) -> Self {
        Self::new(var, c.iter().map(|&x| int(x)).collect())
    }

    pub fn zero(var: &str) -> Self {
        Self::new(var, vec![])
    }

    pub fn constant(var: &str, c: Rational) -> Self {
        Self::new(var, vec![c])
    }

    pub fn one(var: &str) -> Self {
        Self::constant(var, Rational::one())
    }

    /// The identity polynomial `var`.
    pub fn x(var: &str) -> Self {
        Self::new(var, vec![Rational::zero(), Rational::one()])
    }

    pub fn monomial(var: &str, c: Rational, deg: usize) -> Self {
        let mut v = vec![Rational::zero(); deg + 1];
        v[deg] = c;
        Self::new(var, v)
    }

    /// `(x - r)`.
    pub fn linear_root(var: &str, r: &Rational) -> Self {
        Self::new(var, vec![-r.clone(), Rational::one()])
    }

    pub fn with_var(mut self, var: &str) -> Self {
        self.var = var.to_string();
        self
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as degree 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + to_f64(c);
        }
        acc
    }

    /// Coefficients as floats, for hot numeric loops.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    pub fn derive(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * int(i as i64))
            .collect();
        Self::new(&self.var, c)
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derive())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(&self.var, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(&self.var);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &Polynomial) -> Self {
        let mut acc = Self::zero(&other.var);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &Self::constant(&other.var, c.clone());
        }
        acc.with_var(&other.var)
    }

    /// `self(x + h)`.
    pub fn shift(&self, h: &Rational) -> Self {
        self.compose(&Self::new(&self.var, vec![h.clone(), Rational::one()]))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.deg0();
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n < dd + 1 {
            return (Self::zero(&self.var), self.clone());
        }
        let mut quo = vec![Rational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
            }
            quo[k] = c;
        }
        rem.truncate(dd);
        (Self::new(&self.var, quo), Self::new(&self.var, rem))
    }

    /// Exact quotient if `d` divides `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.leading();
        self.scale(&(Rational::one() / l))
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree part, monic.
    pub fn squarefree(&self) -> Polynomial {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derive());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| to_f64(&c.abs())).fold(0.0, f64::max)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{}", format_rational(&a))?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}{}", if show_coeff { "*" } else { "" }, self.var)?,
                _ => write!(f, "{}{}^{}", if show_coeff { "*" } else { "" }, self.var, i)?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        Polynomial::new(&self.var, c)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect();
        Polynomial::new(&self.var, c)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero(&self.var);
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial::new(&self.var, c)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(&self.var, self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, o: Polynomial) -> Polynomial {
                (&self).$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Derive,
    Compose,
}

/// Tag-checked arithmetic. `Derive` ignores `q`; `Compose` returns `p(q)`.
pub fn arith(p: &Polynomial, q: &Polynomial, op: ArithOp) -> Result<Polynomial, PolyError> {
    match op {
        ArithOp::Add | ArithOp::Mul if p.var != q.var => {
            Err(PolyError::VarMismatch(p.var.clone(), q.var.clone()))
        }
        ArithOp::Add => Ok(p + q),
        ArithOp::Mul => Ok(p * q),
        ArithOp::Derive => Ok(p.derive()),
        ArithOp::Compose => Ok(p.compose(q)),
    }
}
