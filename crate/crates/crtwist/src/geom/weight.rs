//! Weights: positive affine-in-momenta functions.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::rational::serde_rat;
use crate::poly::{int, parse_rational, to_f64, MPoly, PaperQuadratic, Rational};

use super::GeomError;

/// `ProductAffine`: `b0 + Σ b_j x_j`. `Polarized`: `Σ_r q_r σ_r(x)`, `σ_0 = 1`.
///
/// On a twisted kind (`TwistedProduct`, `TwistedOrthotoric`, `Ambitoric`) the
/// actual function is this polynomial divided by the kind's own denominator,
/// see [`super::SeparableMetric::killing_denominator`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "form")]
pub enum WeightFunction {
    ProductAffine {
        #[serde(with = "serde_rat")]
        b0: Rational,
        #[serde(with = "serde_rat::vec")]
        b: Vec<Rational>,
    },
    Polarized {
        #[serde(with = "serde_rat::vec")]
        q: Vec<Rational>,
    },
}

impl WeightFunction {
    pub fn product(b0: Rational, b: Vec<Rational>) -> Self {
        WeightFunction::ProductAffine { b0, b }
    }

    pub fn polarized(q: Vec<Rational>) -> Self {
        WeightFunction::Polarized { q }
    }

    /// The constant `c` written as a product-form weight in `m` variables.
    pub fn constant(m: usize, c: Rational) -> Self {
        Self::product(c, vec![Rational::zero(); m])
    }

    pub fn one(m: usize) -> Self {
        Self::constant(m, Rational::one())
    }

    /// `σ_0` in polarized form.
    pub fn polarized_one(m: usize) -> Self {
        let mut q = vec![Rational::zero(); m + 1];
        q[0] = Rational::one();
        Self::polarized(q)
    }

    pub fn from_quadratic(q: &PaperQuadratic) -> Self {
        Self::polarized(q.polarized())
    }

    pub fn m(&self) -> usize {
        match self {
            WeightFunction::ProductAffine { b, .. } => b.len(),
            WeightFunction::Polarized { q } => q.len().saturating_sub(1),
        }
    }

    /// Coefficient vector: `(b0, b_1..b_m)` or `(q_0..q_m)`.
    pub fn coeffs(&self) -> Vec<Rational> {
        match self {
            WeightFunction::ProductAffine { b0, b } => std::iter::once(b0.clone()).chain(b.iter().cloned()).collect(),
            WeightFunction::Polarized { q } => q.clone(),
        }
    }

    pub fn is_polarized(&self) -> bool {
        matches!(self, WeightFunction::Polarized { .. })
    }

    /// Same form with the coefficient vector replaced.
    pub fn with_coeffs(&self, c: Vec<Rational>) -> Self {
        match self {
            WeightFunction::ProductAffine { .. } => Self::product(c[0].clone(), c[1..].to_vec()),
            WeightFunction::Polarized { .. } => Self::polarized(c),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs()[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.coeffs()[0].is_one()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        self.with_coeffs(self.coeffs().iter().map(|c| c * s).collect())
    }

    /// The polynomial in `x_1..x_m`.
    pub fn to_mpoly(&self) -> MPoly {
        let m = self.m();
        match self {
            WeightFunction::ProductAffine { b0, b } => MPoly::affine(m, b0, b),
            WeightFunction::Polarized { q } => {
                let vars: Vec<usize> = (0..m).collect();
                q.iter()
                    .enumerate()
                    .fold(MPoly::zero(m), |acc, (r, qr)| acc.add(&MPoly::elementary(m, &vars, r).scale(qr)))
            }
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.to_mpoly().eval_f64(x)
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.to_mpoly().eval(x)
    }

    /// Unpolarized `q(x) = f_q(x, …, x)` for polarized weights.
    pub fn unpolarized(&self, x: &Rational) -> Rational {
        let m = self.m();
        self.eval(&vec![x.clone(); m])
    }

    /// Reads `"2 + z"`, `"1 + x1 - 3/2*x2"`; `z` is an alias for `x1`.
    pub fn parse_affine(s: &str, m: usize) -> Result<Self, GeomError> {
        let bad = |msg: &str| GeomError::Parse(format!("{msg} in weight {s:?}"));
        let mut b0 = Rational::zero();
        let mut b = vec![Rational::zero(); m];
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty expression"));
        }
        // split keeping signs
        let mut terms = vec![];
        let mut cur = String::new();
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(r) => (-Rational::one(), r),
                None => (Rational::one(), t.strip_prefix('+').unwrap_or(&t)),
            };
            let (coef, var) = match body.find(|c: char| c.is_ascii_alphabetic()) {
                None => (body, None),
                Some(p) => {
                    let c = body[..p].trim_end_matches('*');
                    (if c.is_empty() { "1" } else { c }, Some(&body[p..]))
                }
            };
            let c = parse_rational(coef).map_err(|_| bad("bad coefficient"))? * sign;
            match var {
                None => b0 += c,
                Some(v) => {
                    let j = if v == "z" || v == "x" {
                        0
                    } else {
                        let n: usize = v.strip_prefix('x').and_then(|d| d.parse().ok()).ok_or_else(|| bad("unknown variable"))?;
                        if n == 0 {
                            return Err(bad("variables start at x1"));
                        }
                        n - 1
                    };
                    if j >= m {
                        return Err(bad("variable out of range"));
                    }
                    b[j] += c;
                }
            }
        }
        Ok(Self::product(b0, b))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs().iter().map(to_f64).collect()
    }

    /// `e_0`: the weight whose function is `1/Dm` on a twisted kind.
    pub fn unit_like(&self) -> Self {
        let mut c = vec![Rational::zero(); self.coeffs().len()];
        c[0] = int(1);
        self.with_coeffs(c)
    }
}
