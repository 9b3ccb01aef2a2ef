//! Exact linear systems over the rationals.

use num::{One, Signed, Zero};

use super::rational::Rational;
use super::PolyError;

/// Solution set `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub kernel: Vec<Vec<Rational>>,
}

impl AffineSolution {
    pub fn is_unique(&self) -> bool {
        self.kernel.is_empty()
    }
}

/// Solves `a x = b` by Gaussian elimination with full pivoting (largest magnitude).
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Result<AffineSolution, PolyError> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "row count mismatch");
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            assert_eq!(r.len(), cols, "ragged matrix");
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    // perm[k] = original column sitting at position k
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in rank..rows {
            for j in rank..cols {
                if m[i][j].is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| m[i][j].abs() > m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(rank, pi);
        for row in m.iter_mut() {
            row.swap(rank, pj);
        }
        perm.swap(rank, pj);
        let inv = Rational::one() / &m[rank][rank];
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[rank].is_zero() {
                continue;
            }
            let f = row[rank].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
        }
        rank += 1;
    }
    if m.iter().skip(rank).any(|r| !r[cols].is_zero()) {
        return Err(PolyError::Inconsistent);
    }
    let mut particular = vec![Rational::zero(); cols];
    for k in 0..rank {
        particular[perm[k]] = m[k][cols].clone();
    }
    let mut kernel = vec![];
    for free in rank..cols {
        let mut v = vec![Rational::zero(); cols];
        v[perm[free]] = Rational::one();
        for k in 0..rank {
            v[perm[k]] = -m[k][free].clone();
        }
        kernel.push(v);
    }
    Ok(AffineSolution { particular, kernel })
}

/// Unique solution or `SingularSystem`.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>, PolyError> {
    let s = solve(a, b)?;
    if !s.is_unique() {
        return Err(PolyError::SingularSystem);
    }
    Ok(s.particular)
}
