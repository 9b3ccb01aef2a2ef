//! Sturm sequences: exact root counting, isolation and open-interval positivity.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{int, rat, serde_rat, Rational};
use super::univariate::Polynomial;
use super::PolyError;

/// A closed rational interval `[lo, hi]` containing exactly one root; `lo == hi` is an exact root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInterval {
    #[serde(with = "serde_rat")]
    pub lo: Rational,
    #[serde(with = "serde_rat")]
    pub hi: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "roots")]
pub enum Positivity {
    Positive,
    /// No root inside but the polynomial is negative there.
    Negative,
    HasRootAt(Vec<RootInterval>),
}

impl Positivity {
    pub fn is_positive(&self) -> bool {
        matches!(self, Positivity::Positive)
    }
}

pub fn sturm_chain(p: &Polynomial) -> Vec<Polynomial> {
    let mut chain = vec![p.clone(), p.derive()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    chain
}

fn sign_changes(chain: &[Polynomial], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for p in chain {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// Number of distinct real roots in the half-open interval `(lo, hi]`.
pub fn count_roots(p: &Polynomial, lo: &Rational, hi: &Rational) -> usize {
    let chain = sturm_chain(&p.squarefree());
    sign_changes(&chain, lo) - sign_changes(&chain, hi)
}

/// Removes every factor `(x - r)` from `p`.
fn strip_root(mut p: Polynomial, r: &Rational) -> Polynomial {
    let lin = Polynomial::linear_root(&p.var, r);
    while !p.is_zero() && p.eval(r).is_zero() {
        p = p.div_exact(&lin).expect("root divides");
    }
    p
}

/// Isolating intervals for the distinct roots of `p` strictly inside `(lo, hi)`,
/// in increasing order, each of width at most `width` (or exact).
pub fn isolate_roots(p: &Polynomial, lo: &Rational, hi: &Rational, width: &Rational) -> Vec<RootInterval> {
    let q = strip_root(strip_root(p.squarefree(), lo), hi);
    if q.is_constant() {
        return vec![];
    }
    let chain = sturm_chain(&q);
    let mut out = vec![];
    let mut stack = vec![(lo.clone(), hi.clone())];
    // Invariant: neither endpoint of a stacked interval is a root of q, except `lo`/`hi` themselves, which were stripped.
    while let Some((a, b)) = stack.pop() {
        let n = sign_changes(&chain, &a) - sign_changes(&chain, &b);
        if n == 0 {
            continue;
        }
        if n == 1 && &b - &a <= *width {
            out.push(RootInterval { lo: a, hi: b });
            continue;
        }
        let mid = (&a + &b) / int(2);
        if q.eval(&mid).is_zero() {
            out.push(RootInterval { lo: mid.clone(), hi: mid.clone() });
            // shrink around the exact root so neighbours stay separated
            let mut eps = (&b - &a) / int(4);
            loop {
                let l = &mid - &eps;
                let r = &mid + &eps;
                let nl = sign_changes(&chain, &l) - sign_changes(&chain, &mid);
                let nr = sign_changes(&chain, &mid) - sign_changes(&chain, &r);
                if nl == 1 && nr == 0 && !q.eval(&l).is_zero() && !q.eval(&r).is_zero() {
                    stack.push((a.clone(), l));
                    stack.push((r, b.clone()));
                    break;
                }
                eps /= int(2);
            }
            continue;
        }
        stack.push((mid.clone(), b));
        stack.push((a, mid));
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Exact verdict on the open interval; endpoint zeros are ignored.
pub fn positive_on_open_interval(p: &Polynomial, lo: &Rational, hi: &Rational) -> Result<Positivity, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if lo >= hi {
        return Err(PolyError::BadInterval);
    }
    // Isolation width: a hundredth of the interval is plenty for reporting.
    let width = (hi - lo) / int(100);
    let roots = isolate_roots(p, lo, hi, &width);
    if !roots.is_empty() {
        return Ok(Positivity::HasRootAt(roots));
    }
    let mid = (lo + hi) / int(2);
    Ok(if p.eval(&mid).is_positive() { Positivity::Positive } else { Positivity::Negative })
}

/// Refines an isolating interval of a root of `p` by bisection to width `width`.
pub fn refine_root(p: &Polynomial, iv: &RootInterval, width: &Rational) -> RootInterval {
    let q = p.squarefree();
    let (mut a, mut b) = (iv.lo.clone(), iv.hi.clone());
    if a == b {
        return iv.clone();
    }
    let sa = q.eval(&a).signum();
    while &b - &a > *width {
        let m = (&a + &b) / int(2);
        let sm = q.eval(&m);
        if sm.is_zero() {
            return RootInterval { lo: m.clone(), hi: m };
        }
        if sm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    RootInterval { lo: a, hi: b }
}

/// Default isolation tolerance used by reports.
pub fn default_width() -> Rational {
    rat(1, 1 << 20)
}
