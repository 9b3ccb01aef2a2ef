//! Weighted-extremality: verification, endpoint solves, solution families, the
//! twisted-product classification and the ambitoric decomposition.

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::geom::curvature::weighted_scal_closed_form;
use crate::geom::engine::SeparableData;
use crate::geom::{
    is_affine_in_momenta, weight_expr, AffineVerdict, GeomError, SeparableMetric, TwistedProduct, WeightFunction,
};
use crate::poly::linalg::solve;
use crate::poly::rational::serde_rat;
use crate::poly::{
    harmonic_pairing, int, poisson_bracket, positive_on_open_interval, rationalize, to_f64, transvectant2_variant,
    PaperQuadratic, PolyError, Polynomial, Positivity, RatFn, Rational, RationalExpr, TransvectantVariant,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtremalError {
    #[error("inconsistent endpoint data")]
    Inconsistent,
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("family instance failed verification: {0}")]
    NotInFamily(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum ExtremalStatus {
    /// Coefficients in the metric's Killing basis.
    Extremal {
        #[serde(with = "serde_rat::vec")]
        c: Vec<Rational>,
    },
    NotExtremal { witness: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalVerdict {
    #[serde(flatten)]
    pub status: ExtremalStatus,
    pub weight_used: WeightFunction,
    #[serde(with = "serde_rat")]
    pub nu: Rational,
}

impl ExtremalVerdict {
    pub fn is_extremal(&self) -> bool {
        matches!(self.status, ExtremalStatus::Extremal { .. })
    }

    pub fn coeffs(&self) -> Option<&[Rational]> {
        match &self.status {
            ExtremalStatus::Extremal { c } => Some(c),
            ExtremalStatus::NotExtremal { .. } => None,
        }
    }
}

/// Is `Scal_{f,ν}(metric)` a Killing potential?
///
/// This is an algebraic identity in the momenta, so the weight is not sampled
/// for positivity here (unlike [`crate::geom::weighted_scal`]).
pub fn verify(metric: &SeparableMetric, f: &WeightFunction, nu: &Rational) -> Result<ExtremalVerdict, ExtremalError> {
    let expr = extremality_expr(metric, f, nu)?;
    let status = match is_affine_in_momenta(&expr, metric) {
        AffineVerdict::Affine { c } => ExtremalStatus::Extremal { c },
        AffineVerdict::NotAffine { witness } => ExtremalStatus::NotExtremal { witness },
    };
    Ok(ExtremalVerdict { status, weight_used: f.clone(), nu: nu.clone() })
}

/// `Scal_{f,ν}` without the positivity sampling of [`crate::geom::weighted_scal`].
pub fn extremality_expr(metric: &SeparableMetric, f: &WeightFunction, nu: &Rational) -> Result<RationalExpr, ExtremalError> {
    metric.validate()?;
    metric.check_weight(f)?;
    Ok(match weighted_scal_closed_form(metric, f, nu) {
        Some(e) => e,
        None => SeparableData::new(metric).weighted_scal(&weight_expr(metric, f), nu),
    })
}

/// `A(lo), A(hi), A′(lo), A′(hi)` on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointData {
    #[serde(with = "serde_rat::vec")]
    pub interval: Vec<Rational>,
    #[serde(with = "serde_rat::vec")]
    pub values: Vec<Rational>,
    #[serde(with = "serde_rat::vec")]
    pub slopes: Vec<Rational>,
}

impl EndpointData {
    /// `A(±1) = 0`, `A′(±1) = ∓2`.
    pub fn standard() -> Self {
        EndpointData { interval: vec![int(-1), int(1)], values: vec![int(0), int(0)], slopes: vec![int(2), int(-2)] }
    }

    /// `A(±1) = 0`, `A′(±1) = ∓4 w_∓ / k`: slope `4w₊/k` at `−1` and `−4w₋/k` at `+1`.
    pub fn weighted(w_minus: i64, w_plus: i64, k: i64) -> Self {
        let (wm, wp) = (int(4 * w_minus) / int(k), int(4 * w_plus) / int(k));
        EndpointData { interval: vec![int(-1), int(1)], values: vec![int(0), int(0)], slopes: vec![wp, -wm] }
    }

    fn check(&self) -> Result<(), ExtremalError> {
        if self.interval.len() != 2 || self.values.len() != 2 || self.slopes.len() != 2 {
            return Err(ExtremalError::BadParameters("endpoint data needs two values of each kind".into()));
        }
        if self.interval[0] >= self.interval[1] {
            return Err(ExtremalError::BadParameters("empty interval".into()));
        }
        Ok(())
    }

    /// Rows `[value rows; slope rows]` for unknowns multiplying `basis`.
    fn system(&self, basis: &[Polynomial], fixed: &Polynomial) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let mut rows = vec![];
        let mut rhs = vec![];
        for (k, x) in self.interval.iter().enumerate() {
            rows.push(basis.iter().map(|b| b.eval(x)).collect());
            rhs.push(&self.values[k] - fixed.eval(x));
        }
        for (k, x) in self.interval.iter().enumerate() {
            rows.push(basis.iter().map(|b| b.derive().eval(x)).collect());
            rhs.push(&self.slopes[k] - fixed.derive().eval(x));
        }
        (rows, rhs)
    }
}

/// `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialFamily {
    pub particular: Polynomial,
    pub kernel: Vec<Polynomial>,
}

impl PolynomialFamily {
    pub fn unique(&self) -> Option<&Polynomial> {
        self.kernel.is_empty().then_some(&self.particular)
    }
}

/// All polynomials of the given degree matching the four endpoint conditions.
pub fn solve_endpoint_1d(data: &EndpointData, degree: usize) -> Result<PolynomialFamily, ExtremalError> {
    data.check()?;
    if degree < 3 {
        return Err(ExtremalError::BadParameters(format!("degree {degree} < 3")));
    }
    let basis: Vec<Polynomial> = (0..=degree).map(|k| Polynomial::monomial("z", Rational::one(), k)).collect();
    let (rows, rhs) = data.system(&basis, &Polynomial::zero("z"));
    let s = solve(&rows, &rhs).map_err(|e| match e {
        PolyError::Inconsistent => ExtremalError::Inconsistent,
        e => ExtremalError::Poly(e),
    })?;
    let poly = |c: &[Rational]| Polynomial::new("z", c.to_vec());
    Ok(PolynomialFamily { particular: poly(&s.particular), kernel: s.kernel.iter().map(|k| poly(k)).collect() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuinticSolution {
    /// `Ã(z̃)`.
    #[serde(rename = "A")]
    pub a: Polynomial,
    /// `p0, p1, p3, p4`.
    #[serde(with = "serde_rat::vec")]
    pub p: Vec<Rational>,
    pub positivity: Positivity,
}

/// The profile of a weighted-extremal Calabi fibre over a CSC base, in `y = z̃ + b̃0`:
/// `p0 y^{m+2} + p1 y^{m+1} + s_B y²/(m(m−1)) + p3 y + p4`, with `p0, p1, p3, p4` fixed
/// by the endpoint data.
pub fn solve_product_quintic(
    m: usize,
    s_b: &Rational,
    b0: &Rational,
    data: &EndpointData,
) -> Result<QuinticSolution, ExtremalError> {
    data.check()?;
    if m < 2 {
        return Err(ExtremalError::BadParameters("m ≥ 2 (the base is a point otherwise)".into()));
    }
    if b0.abs() <= Rational::one() {
        return Err(ExtremalError::BadParameters("|b̃0| must exceed 1".into()));
    }
    let y = Polynomial::new("z", vec![b0.clone(), Rational::one()]);
    let basis = vec![y.pow(m as u32 + 2), y.pow(m as u32 + 1), y.clone(), Polynomial::one("z")];
    let fixed = y.pow(2).scale(&(s_b / int((m * (m - 1)) as i64)));
    let (rows, rhs) = data.system(&basis, &fixed);
    let s = solve(&rows, &rhs).map_err(|e| ExtremalError::SingularSystem(e.to_string()))?;
    if !s.is_unique() {
        return Err(ExtremalError::SingularSystem(format!("{}-dimensional kernel", s.kernel.len())));
    }
    let mut a = fixed;
    for (c, b) in s.particular.iter().zip(&basis) {
        a = &a + &b.scale(c);
    }
    let positivity = positive_on_open_interval(&a, &data.interval[0], &data.interval[1])?;
    Ok(QuinticSolution { a, p: s.particular, positivity })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    /// Profile of degree ≤ 3, weight 1.
    Cubic1D,
    /// Orthotoric, `A_j = P + p_{j1} x + p_{j0}`, weight 1.
    OrthotoricQ1,
    /// Orthotoric, `A_j = P + p_{j1} x^{m+1} + p_{j0} x^{m+2}`, weight `σ_m`.
    OrthotoricQXm,
    /// Orthotoric, `A_j = P`, any polarized weight.
    BochnerFlatCommonP,
    /// Product, `A_1` quintic-type in `y = b0 + b1 x_1`, `A_i` quadratic, weight `f_b`.
    ProductQuintic,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::Cubic1D,
        FamilyKind::OrthotoricQ1,
        FamilyKind::OrthotoricQXm,
        FamilyKind::BochnerFlatCommonP,
        FamilyKind::ProductQuintic,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| format!("{k:?}").eq_ignore_ascii_case(s))
    }
}

/// Family data. Unused fields are ignored by kinds that do not need them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParameters {
    /// Common polynomial `P`; for `ProductQuintic` the part `p0 y^{m+2} + p1 y^{m+1} + p3 y + p4`
    /// of `A_1`, written in `y`.
    #[serde(rename = "P")]
    pub p: Polynomial,
    #[serde(with = "serde_rat::vec", default)]
    pub p1: Vec<Rational>,
    #[serde(with = "serde_rat::vec", default)]
    pub p0: Vec<Rational>,
    /// `ProductQuintic`: the quadratic profiles `A_2 … A_m`.
    #[serde(default)]
    pub base: Vec<Polynomial>,
    /// `ProductQuintic`: `y = b0 + b1 x_1`.
    #[serde(with = "serde_rat::vec", default)]
    pub b: Vec<Rational>,
    /// `BochnerFlatCommonP`: the weight used for the construction check.
    #[serde(default)]
    pub q: Option<WeightFunction>,
}

impl FamilyParameters {
    pub fn common(p: Polynomial) -> Self {
        FamilyParameters { p, p1: vec![], p0: vec![], base: vec![], b: vec![], q: None }
    }

    pub fn with_constants(mut self, p1: Vec<Rational>, p0: Vec<Rational>) -> Self {
        self.p1 = p1;
        self.p0 = p0;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFamily {
    pub kind: FamilyKind,
    pub m: usize,
    pub parameters: FamilyParameters,
}

impl SolutionFamily {
    pub fn designated_weight(&self) -> WeightFunction {
        let m = self.m;
        match self.kind {
            FamilyKind::Cubic1D => WeightFunction::one(1),
            FamilyKind::OrthotoricQ1 => WeightFunction::polarized_one(m),
            FamilyKind::OrthotoricQXm => {
                let mut q = vec![Rational::zero(); m + 1];
                q[m] = Rational::one();
                WeightFunction::polarized(q)
            }
            FamilyKind::BochnerFlatCommonP => {
                self.parameters.q.clone().unwrap_or_else(|| WeightFunction::polarized_one(m))
            }
            FamilyKind::ProductQuintic => {
                let mut b = vec![Rational::zero(); m];
                b[0] = self.parameters.b[1].clone();
                WeightFunction::product(self.parameters.b[0].clone(), b)
            }
        }
    }

    pub fn designated_nu(&self) -> Rational {
        int(self.m as i64 + 2)
    }

    fn slot_constant(v: &[Rational], j: usize) -> Rational {
        v.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn metric(&self) -> Result<SeparableMetric, ExtremalError> {
        let (m, p) = (self.m, &self.parameters);
        let bad = |s: &str| Err(ExtremalError::BadParameters(s.into()));
        let x = |k: usize| Polynomial::monomial("x", Rational::one(), k);
        let var = |poly: &Polynomial, v: &str| poly.clone().with_var(v);
        match self.kind {
            FamilyKind::Cubic1D => {
                if m != 1 || p.p.deg0() > 3 {
                    return bad("Cubic1D needs m = 1 and deg P ≤ 3");
                }
                let z = |k| x(k).with_var("z");
                let a = &var(&p.p, "z")
                    + &(&z(1).scale(&Self::slot_constant(&p.p1, 0)) + &z(0).scale(&Self::slot_constant(&p.p0, 0)));
                Ok(SeparableMetric::profile(RatFn::from_poly(a), int(-1), int(1)))
            }
            FamilyKind::OrthotoricQ1 | FamilyKind::OrthotoricQXm | FamilyKind::BochnerFlatCommonP => {
                if m < 2 || p.p.deg0() > m + 2 {
                    return bad("orthotoric families need m ≥ 2 and deg P ≤ m + 2");
                }
                let (e1, e0) = match self.kind {
                    FamilyKind::OrthotoricQ1 => (1, 0),
                    _ => (m + 1, m + 2),
                };
                let common = self.kind == FamilyKind::BochnerFlatCommonP;
                let a = (0..m)
                    .map(|j| {
                        let pp = var(&p.p, "x");
                        if common {
                            return pp;
                        }
                        let extra = &x(e1).scale(&Self::slot_constant(&p.p1, j))
                            + &x(e0).scale(&Self::slot_constant(&p.p0, j));
                        &pp + &extra
                    })
                    .collect();
                Ok(SeparableMetric::orthotoric(a))
            }
            FamilyKind::ProductQuintic => {
                if m < 2 || p.base.len() + 1 != m || p.b.len() != 2 || p.b[1].is_zero() {
                    return bad("ProductQuintic needs m ≥ 2, m − 1 base quadratics and b = (b0, b1 ≠ 0)");
                }
                let y = var(&p.p, "y");
                for k in 2..=m {
                    if !y.coeff(k).is_zero() {
                        return bad("P may only contain y^{m+2}, y^{m+1}, y and 1");
                    }
                }
                if y.deg0() > m + 2 || p.base.iter().any(|a| a.deg0() > 2) {
                    return bad("deg P ≤ m + 2 and base profiles of degree ≤ 2");
                }
                let s_b = -p.base.iter().fold(Rational::zero(), |acc, a| acc + a.coeff(2) * int(2));
                let (b0, b1) = (&p.b[0], &p.b[1]);
                let c2 = &s_b / (b1 * b1 * int((m * (m - 1)) as i64));
                let a_y = &y + &Polynomial::monomial("y", c2, 2);
                let a1 = a_y.compose(&Polynomial::new("x", vec![b0.clone(), b1.clone()])).with_var("x");
                let mut a = vec![a1];
                a.extend(p.base.iter().map(|b| var(b, "x")));
                Ok(SeparableMetric::product(a))
            }
        }
    }
}

/// Builds the family member and checks it against its designated weight.
pub fn generate_family(kind: FamilyKind, m: usize, parameters: FamilyParameters) -> Result<SeparableMetric, ExtremalError> {
    let fam = SolutionFamily { kind, m, parameters };
    let metric = fam.metric()?;
    let v = verify(&metric, &fam.designated_weight(), &fam.designated_nu())?;
    match v.status {
        ExtremalStatus::Extremal { .. } => Ok(metric),
        ExtremalStatus::NotExtremal { witness } => Err(ExtremalError::NotInFamily(witness)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProductClass {
    ProductOfExtremalSurfaces,
    CalabiOverCSCProduct,
    ScalarFlatTimesFlat,
    None,
}

/// Which of the three extremal shapes a twisted product of complex dimension `m ≥ 3` has.
///
/// Equivalent to extremality of the twisted metric itself, i.e. of the product under
/// the weight `f_b` at `ν = m + 2`.
pub fn classify_twisted_product(metric: &TwistedProduct) -> ProductClass {
    let m = metric.m;
    let coeffs = metric.b.coeffs();
    let (b0, b) = (&coeffs[0], &coeffs[1..]);
    let deg = |p: &Polynomial| p.degree().unwrap_or(0);
    let support: Vec<usize> = (0..m).filter(|&j| !b[j].is_zero()).collect();
    match support.len() {
        0 => {
            if metric.a.iter().all(|a| deg(a) <= 3) {
                return ProductClass::ProductOfExtremalSurfaces;
            }
        }
        1 => {
            let j = support[0];
            if (0..m).any(|i| i != j && deg(&metric.a[i]) > 2) {
                return ProductClass::None;
            }
            let s_b = -(0..m).filter(|&i| i != j).fold(Rational::zero(), |acc, i| acc + metric.a[i].coeff(2) * int(2));
            // A_j as a polynomial in y = b0 + b_j x_j
            let inv = Polynomial::new("x", vec![-b0 / &b[j], Rational::one() / &b[j]]);
            let ay = metric.a[j].compose(&inv);
            let c2 = &s_b / (&b[j] * &b[j] * int((m * (m - 1)) as i64));
            if deg(&ay) <= m + 2 && (3..=m).all(|k| ay.coeff(k).is_zero()) && ay.coeff(2) == c2 {
                return ProductClass::CalabiOverCSCProduct;
            }
        }
        _ => {
            let on = support.iter().all(|&j| deg(&metric.a[j]) <= 1);
            let off: Vec<usize> = (0..m).filter(|j| !support.contains(j)).collect();
            let quad = off.iter().all(|&i| deg(&metric.a[i]) <= 2);
            let flat = off.iter().fold(Rational::zero(), |acc, &i| acc + metric.a[i].coeff(2)).is_zero();
            if on && quad && flat {
                return ProductClass::ScalarFlatTimesFlat;
            }
        }
    }
    ProductClass::None
}

/// Cross-check: extremality of the twisted product under its own (unit) weight.
pub fn twisted_product_is_extremal(metric: &TwistedProduct) -> Result<bool, ExtremalError> {
    let nu = int(metric.m as i64 + 2);
    let g = SeparableMetric::TwistedProduct(metric.clone());
    Ok(verify(&g, &metric.b, &nu)?.is_extremal())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "decomposition")]
pub enum AmbitoricDecomposition {
    Exact {
        p1: PaperQuadratic,
        p2: PaperQuadratic,
        #[serde(rename = "P")]
        p: Polynomial,
    },
    /// Irrational roots: `p1`, `p2` as `(q0, q1, q2)` floats, pairing within `APPROX_TOL`.
    Approximate {
        p1: [f64; 3],
        p2: [f64; 3],
        #[serde(rename = "P")]
        p: Polynomial,
        pairing: f64,
    },
    NotExtremalFamily,
}

pub const APPROX_TOL: f64 = 1e-9;

/// Numerical roots (complex) of a nonzero polynomial via companion eigenvalues.
fn complex_roots(p: &Polynomial) -> Vec<Complex64> {
    let c = p.to_f64_coeffs();
    let d = p.deg0();
    if d == 0 {
        return vec![];
    }
    let lead = c[d];
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -c[i] / lead;
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

/// Product of `(x − r)` over the finite roots, as real float coefficients (low to high).
fn float_factor(roots: &[Option<Complex64>]) -> Option<Vec<f64>> {
    let mut acc = vec![Complex64::new(1.0, 0.0)];
    for r in roots.iter().flatten() {
        let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
        for (k, a) in acc.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        acc = next;
    }
    let scale = acc.iter().map(|c| c.norm()).fold(1.0, f64::max);
    if acc.iter().any(|c| c.im.abs() > 1e-7 * scale) {
        return None;
    }
    Some(acc.iter().map(|c| c.re).collect())
}

fn halved_coeffs(c: &[f64]) -> [f64; 3] {
    let g = |k: usize| c.get(k).copied().unwrap_or(0.0);
    [g(0), g(1) / 2.0, g(2)]
}

/// Splits `(A, B)` as `A = p1 p2 + P`, `B = p1 p2 − P` with the roots of `p1` and `p2`
/// separating harmonically (`harmonic_pairing(p1, p2) = 0`).
pub fn ambitoric_decompose(a: &Polynomial, b: &Polynomial) -> Result<AmbitoricDecomposition, ExtremalError> {
    if a.deg0() > 4 || b.deg0() > 4 {
        return Err(ExtremalError::BadParameters("deg A, deg B ≤ 4".into()));
    }
    let var = a.var.clone();
    let b = b.clone().with_var(&var);
    let half = Rational::new(1.into(), 2.into());
    let s = (a + &b).scale(&half);
    let p = (a - &b).scale(&half);
    if s.is_zero() {
        return Ok(AmbitoricDecomposition::Exact { p1: PaperQuadratic::new(int(0), int(0), int(0)), p2: PaperQuadratic::one(), p });
    }
    let mut roots: Vec<Option<Complex64>> = complex_roots(&s).into_iter().map(Some).collect();
    roots.resize(4, None);
    let pairings = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
    let mut approx: Option<AmbitoricDecomposition> = None;
    for pr in pairings {
        let first = [roots[pr[0]], roots[pr[1]]];
        let second = [roots[pr[2]], roots[pr[3]]];
        let (Some(f1), Some(f2)) = (float_factor(&first), float_factor(&second)) else { continue };
        // exact attempt: rationalize the monic factor and divide
        for den in [10u64, 1_000, 100_000, 1_000_000] {
            let q1 = Polynomial::new(&var, f1.iter().map(|&v| rationalize(v, den)).collect());
            if q1.is_zero() {
                continue;
            }
            if let Some(q2) = s.div_exact(&q1) {
                if q2.deg0() <= 2 {
                    let (p1, p2) = (PaperQuadratic::from_polynomial(&q1)?, PaperQuadratic::from_polynomial(&q2)?);
                    if harmonic_pairing(&p1, &p2).is_zero() {
                        return Ok(AmbitoricDecomposition::Exact { p1, p2, p });
                    }
                }
            }
        }
        if approx.is_none() {
            let lead = to_f64(&s.leading());
            let c1 = halved_coeffs(&f1);
            let c2: Vec<f64> = f2.iter().map(|v| v * lead).collect();
            let c2 = halved_coeffs(&c2);
            let pairing = c1[0] * c2[2] - 2.0 * c1[1] * c2[1] + c1[2] * c2[0];
            let n = |c: &[f64; 3]| c.iter().map(|v| v.abs()).fold(0.0, f64::max);
            if pairing.abs() <= APPROX_TOL * n(&c1) * n(&c2) {
                approx = Some(AmbitoricDecomposition::Approximate { p1: c1, p2: c2, p: p.clone(), pairing });
            }
        }
    }
    Ok(approx.unwrap_or(AmbitoricDecomposition::NotExtremalFamily))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConformalScal {
    pub variant: TransvectantVariant,
    /// `{p_j, (p_j, P)^{(2)}}`.
    pub w: Polynomial,
    /// `w` as a quadratic when its degree allows; only then is `f_w/f_q` defined.
    pub quadratic: Option<PaperQuadratic>,
}

impl ConformalScal {
    /// `−f_w/f_q` at `(x1, x2)`, if `w` is quadratic.
    pub fn value(&self, q: &PaperQuadratic, x1: f64, x2: f64) -> Option<f64> {
        let w = self.quadratic.as_ref()?;
        Some(-w.eval_polarized(x1, x2) / q.eval_polarized(x1, x2))
    }

    /// `Scal((f_q/f_{p_j})² g₊)` at `(x1, x2)`: `+f_w/f_q` for the classical variant when
    /// `p_j` comes from a harmonic splitting. `None` for the verbatim variant.
    pub fn scal(&self, q: &PaperQuadratic, x1: f64, x2: f64) -> Option<f64> {
        match self.variant {
            TransvectantVariant::Classical => self.value(q, x1, x2).map(|v| -v),
            TransvectantVariant::Verbatim => None,
        }
    }
}

/// The conformal scalar curvature data of `(f_q/f_{p_j})² g₊`, once per transvectant variant.
pub fn ambitoric_conformal_scal(pj: &PaperQuadratic, q: &PaperQuadratic, big_p: &Polynomial) -> Vec<ConformalScal> {
    let _ = q;
    let var = big_p.var.clone();
    let pp = pj.to_polynomial(&var);
    TransvectantVariant::ALL
        .iter()
        .map(|&variant| {
            let t = transvectant2_variant(&pp, big_p, variant);
            let w = poisson_bracket(&pp, &t);
            let quadratic = PaperQuadratic::from_polynomial(&w).ok();
            ConformalScal { variant, w, quadratic }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn x(c: &[i64]) -> Polynomial {
        Polynomial::from_ints("x", c)
    }

    fn z(c: &[i64]) -> Polynomial {
        Polynomial::from_ints("z", c)
    }

    #[test]
    fn weighted_sphere() {
        let v = verify(&SeparableMetric::sphere(), &WeightFunction::parse_affine("z+2", 1).unwrap(), &int(3)).unwrap();
        assert_eq!(v.coeffs().unwrap(), &[int(2), int(-8)]);
        let json = serde_json::to_string(&v).unwrap();
        assert!(json.contains(r#""status":"Extremal""#), "{json}");
    }

    #[test]
    fn orthotoric_q1_example() {
        let a = (1..=3).map(|j| x(&[j, j, 0, 1])).collect();
        let v = verify(&SeparableMetric::orthotoric(a), &WeightFunction::polarized_one(3), &int(5)).unwrap();
        assert!(v.is_extremal());
    }

    #[test]
    fn perturbed_product_is_not_extremal() {
        let a = vec![x(&[0, 0, 0, 1]), x(&[0, 0, 0, 1]), &x(&[0, 0, 0, 1]) + &Polynomial::monomial("x", rat(1, 1000), 4)];
        let b = WeightFunction::product(int(1), vec![int(1), int(0), int(0)]);
        let v = verify(&SeparableMetric::product(a), &b, &int(5)).unwrap();
        assert!(!v.is_extremal());
    }

    #[test]
    fn endpoint_solves() {
        let s = solve_endpoint_1d(&EndpointData::standard(), 3).unwrap();
        assert_eq!(s.unique().unwrap(), &z(&[1, 0, -1]));
        let w = solve_endpoint_1d(&EndpointData::weighted(1, 1, 1), 3).unwrap();
        assert_eq!(w.unique().unwrap(), &z(&[2, 0, -2]));
        let f = solve_endpoint_1d(&EndpointData::standard(), 4).unwrap();
        assert_eq!(f.kernel.len(), 1);
        // the family contains 1 - z²
        let k = &f.kernel[0];
        let diff = &f.particular - &z(&[1, 0, -1]);
        let t = diff.coeff(4) / k.coeff(4);
        assert_eq!(&diff - &k.scale(&t), Polynomial::zero("z"));
        assert!(matches!(solve_endpoint_1d(&EndpointData::standard(), 2), Err(ExtremalError::BadParameters(_))));
    }

    #[test]
    fn quintic_endpoints_and_extremality() {
        let d = EndpointData::weighted(1, 1, 1);
        let sol = solve_product_quintic(2, &int(4), &int(2), &d).unwrap();
        let a = &sol.a;
        assert!(a.eval(&int(1)).is_zero() && a.eval(&int(-1)).is_zero());
        assert_eq!(a.derive().eval(&int(-1)), int(4));
        assert_eq!(a.derive().eval(&int(1)), int(-4));
        assert_eq!(sol.positivity, Positivity::Positive);
        // B × (fibre) with s_B = 4: a round sphere factor of scalar curvature 4
        let base = Polynomial::from_ints("x", &[0, 0, -2]).scale(&rat(1, 1));
        let base = &base + &Polynomial::from_ints("x", &[2]);
        let fibre = a.clone().with_var("x");
        let m = SeparableMetric::product(vec![fibre, base]);
        let f = WeightFunction::product(int(2), vec![int(1), int(0)]);
        assert!(verify(&m, &f, &int(4)).unwrap().is_extremal());
    }

    #[test]
    fn quintic_tends_to_cubic() {
        let d = EndpointData::standard();
        let big = solve_product_quintic(3, &int(2), &int(1_000_000), &d).unwrap().a;
        let cubic = solve_endpoint_1d(&d, 3).unwrap().particular;
        for k in 0..=5 {
            assert!((to_f64(&big.coeff(k)) - to_f64(&cubic.coeff(k))).abs() < 1e-4, "{big}");
        }
    }

    #[test]
    fn quintic_symmetric_data() {
        let sol = solve_product_quintic(2, &int(0), &int(3), &EndpointData::standard()).unwrap();
        assert_eq!(sol.p.len(), 4);
        assert!(sol.positivity.is_positive());
    }

    #[test]
    fn quintic_needs_large_b0() {
        assert!(solve_product_quintic(2, &int(0), &rat(1, 2), &EndpointData::standard()).is_err());
    }

    #[test]
    fn families_verify() {
        let bf = generate_family(FamilyKind::BochnerFlatCommonP, 2, FamilyParameters::common(x(&[1, 0, 0, 0, -1]))).unwrap();
        let q = WeightFunction::polarized(vec![int(3), rat(1, 3), rat(-1, 5)]);
        assert!(verify(&bf, &q, &int(4)).unwrap().is_extremal());

        let c = generate_family(FamilyKind::Cubic1D, 1, FamilyParameters::common(z(&[1, 0, -1]))).unwrap();
        assert_eq!(c, SeparableMetric::sphere());

        let params = FamilyParameters::common(x(&[0, 0, 0, 0, 0, 1])).with_constants(vec![int(1), int(2), int(3)], vec![]);
        let xm = generate_family(FamilyKind::OrthotoricQXm, 3, params).unwrap();
        let sigma3 = WeightFunction::polarized(vec![int(0), int(0), int(0), int(1)]);
        assert!(verify(&xm, &sigma3, &int(5)).unwrap().is_extremal());

        let params = FamilyParameters::common(x(&[1, 0, 2, 0, 1])).with_constants(vec![int(1), int(-1)], vec![int(2), int(3)]);
        assert!(generate_family(FamilyKind::OrthotoricQ1, 2, params).is_ok());

        let mut pq = FamilyParameters::common(Polynomial::new("y", vec![int(3), int(-1), int(0), int(0), rat(1, 7), rat(-1, 9)]));
        pq.base = vec![x(&[1, 0, -1]), x(&[2, 1, -2])];
        pq.b = vec![int(3), int(1)];
        assert!(generate_family(FamilyKind::ProductQuintic, 3, pq).is_ok());
    }

    #[test]
    fn family_rejects_bad_shapes() {
        let r = generate_family(FamilyKind::Cubic1D, 1, FamilyParameters::common(z(&[1, 0, 0, 0, 1])));
        assert!(matches!(r, Err(ExtremalError::BadParameters(_))));
        let mut pq = FamilyParameters::common(Polynomial::new("y", vec![int(0), int(0), int(0), int(1)]));
        pq.base = vec![x(&[1, 0, -1]), x(&[1, 0, -1])];
        pq.b = vec![int(3), int(1)];
        assert!(matches!(generate_family(FamilyKind::ProductQuintic, 3, pq), Err(ExtremalError::BadParameters(_))));
    }

    fn tp(a: Vec<Polynomial>, b: &[i64]) -> TwistedProduct {
        TwistedProduct {
            m: a.len(),
            a,
            b: WeightFunction::product(int(b[0]), b[1..].iter().map(|&v| int(v)).collect()),
        }
    }

    #[test]
    fn classification_examples() {
        let cubic = x(&[1, 2, 0, -1]);
        let t = tp(vec![cubic.clone(), cubic.clone(), cubic.clone()], &[1, 0, 0, 0]);
        assert_eq!(classify_twisted_product(&t), ProductClass::ProductOfExtremalSurfaces);
        assert!(twisted_product_is_extremal(&t).unwrap());

        let fam = SolutionFamily {
            kind: FamilyKind::ProductQuintic,
            m: 3,
            parameters: FamilyParameters {
                base: vec![x(&[1, 0, -1]), x(&[2, 0, -3])],
                b: vec![int(1), int(1)],
                ..FamilyParameters::common(Polynomial::new("y", vec![int(1), int(2), int(0), int(0), int(1), int(-1)]))
            },
        };
        let SeparableMetric::TwistedProduct(plain) = fam.metric().unwrap() else { unreachable!() };
        let t = tp(plain.a.clone(), &[1, 1, 0, 0]);
        assert_eq!(classify_twisted_product(&t), ProductClass::CalabiOverCSCProduct);
        assert!(twisted_product_is_extremal(&t).unwrap());

        let bad = tp(vec![x(&[1, 1]), x(&[2, -1]), x(&[1, 0, -1])], &[1, 1, 1, 0]);
        assert_eq!(classify_twisted_product(&bad), ProductClass::None);
        assert!(!twisted_product_is_extremal(&bad).unwrap());
        let good = tp(vec![x(&[1, 1]), x(&[2, -1]), x(&[1, 0, -1]), x(&[3, 1, 1])], &[1, 1, 1, 0, 0]);
        assert_eq!(classify_twisted_product(&good), ProductClass::ScalarFlatTimesFlat);
        assert!(twisted_product_is_extremal(&good).unwrap());
    }

    #[test]
    fn decomposition_examples() {
        let s = x(&[0, 1, 0, -1]);
        let d = ambitoric_decompose(&s, &s).unwrap();
        let AmbitoricDecomposition::Exact { p1, p2, p } = d else { panic!("{d:?}") };
        assert!(p.is_zero());
        assert!(harmonic_pairing(&p1, &p2).is_zero());
        assert_eq!(&p1.to_polynomial("x") * &p2.to_polynomial("x"), s);

        let q = x(&[0, 0, 0, 0, 1]);
        let AmbitoricDecomposition::Exact { p1, p2, .. } = ambitoric_decompose(&q, &q).unwrap() else { panic!() };
        assert_eq!(p1.to_polynomial("x"), x(&[0, 0, 1]));
        assert_eq!(p2.to_polynomial("x"), x(&[0, 0, 1]));

        // roots {1, 2} and {0, 4/3}: harmonic, though the two middle coefficients are nonzero
        let s = &x(&[2, -3, 1]) * &Polynomial::new("x", vec![int(0), rat(-4, 3), int(1)]);
        let AmbitoricDecomposition::Exact { p1, p2, .. } = ambitoric_decompose(&s, &s).unwrap() else { panic!() };
        assert!(harmonic_pairing(&p1, &p2).is_zero());
        assert_eq!(&p1.to_polynomial("x") * &p2.to_polynomial("x"), s);

        // roots 0, 1, 2, 4
        let s = &(&x(&[0, 1]) * &x(&[-1, 1])) * &(&x(&[-2, 1]) * &x(&[-4, 1]));
        assert_eq!(ambitoric_decompose(&s, &s).unwrap(), AmbitoricDecomposition::NotExtremalFamily);
    }

    #[test]
    fn decomposition_with_irrational_roots() {
        // p1 = x² - 2 (roots ±√2), p2 = x² + 2: ⟨p1,p2⟩ = -2 + 2 = 0
        let s = &x(&[-2, 0, 1]) * &x(&[2, 0, 1]);
        let a = &s + &x(&[1, 1]);
        let b = &s - &x(&[1, 1]);
        match ambitoric_decompose(&a, &b).unwrap() {
            AmbitoricDecomposition::Exact { p1, p2, p } => {
                assert_eq!(p, x(&[1, 1]));
                assert!(harmonic_pairing(&p1, &p2).is_zero());
            }
            other => panic!("{other:?}"),
        }
        // p1 = x² − 2 and p2 = x² + 6x + 2: irrational roots, rational factors
        let s = &x(&[-2, 0, 1]) * &x(&[2, 6, 1]);
        assert!(matches!(ambitoric_decompose(&s, &s).unwrap(), AmbitoricDecomposition::Exact { .. }));
        // x⁴ − 2 = (x² − √2)(x² + √2): no rational orthogonal factorization
        let s = x(&[-2, 0, 0, 0, 1]);
        match ambitoric_decompose(&s, &s).unwrap() {
            AmbitoricDecomposition::Approximate { p1, p2, pairing, .. } => {
                assert!(pairing.abs() < 1e-9);
                assert!((p1[0] * p2[0] + 2.0).abs() < 1e-9, "{p1:?} {p2:?}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conformal_scal_trivial_cases() {
        let q = PaperQuadratic::one();
        for c in ambitoric_conformal_scal(&PaperQuadratic::new(int(1), int(2), int(-1)), &q, &Polynomial::zero("x")) {
            assert!(c.w.is_zero());
            assert_eq!(c.value(&q, 0.5, 0.1), Some(0.0));
        }
        // p_j = 1: transvectant is P″, so w = {1, P″} = −P‴
        let big_p = x(&[1, 2, 3, 4, 5]);
        let out = ambitoric_conformal_scal(&PaperQuadratic::one(), &q, &big_p);
        for c in out {
            assert_eq!(c.w, -&big_p.nth_derivative(3));
        }
    }

    /// `P` with `⟨(p, P)^{(2)}, q⟩ = 0` under `pairing`, by solving for the constant term.
    fn tuned_quartic(p: &PaperQuadratic, q: &PaperQuadratic, pairing: fn(&PaperQuadratic, &PaperQuadratic) -> Rational) -> Polynomial {
        let pp = p.to_polynomial("x");
        let form = |big: &Polynomial| {
            let t = transvectant2_variant(&pp, big, TransvectantVariant::Classical);
            pairing(&PaperQuadratic::from_polynomial(&t).unwrap(), q)
        };
        let base = x(&[0, 2, -1, 3, 1]);
        let with_one = &base + &x(&[1]);
        let (f0, f1) = (form(&base), form(&with_one));
        &base + &Polynomial::constant("x", -&f0 / (&f1 - &f0))
    }

    #[test]
    fn special_choice_gives_multiple_of_q() {
        // roots {1, 2} and {0, 4/3} separate harmonically
        let p = PaperQuadratic::new(int(2), rat(-3, 2), int(1));
        let q = PaperQuadratic::new(int(0), rat(-2, 3), int(1));
        let multiple = |pairing: fn(&PaperQuadratic, &PaperQuadratic) -> Rational| {
            let big_p = tuned_quartic(&p, &q, pairing);
            let c = ambitoric_conformal_scal(&p, &q, &big_p);
            let w = c.iter().find(|c| c.variant == TransvectantVariant::Classical).unwrap().quadratic.clone().unwrap();
            let (wp, qp) = (w.polarized(), q.polarized());
            (0..3).all(|i| (0..3).all(|j| &wp[i] * &qp[j] == &wp[j] * &qp[i]))
        };
        assert!(multiple(harmonic_pairing));
    }

    #[test]
    fn classical_variant_is_quadratic() {
        let pj = PaperQuadratic::new(int(1), int(1), int(-2));
        let big_p = x(&[3, -1, 2, 5, -7]);
        let out = ambitoric_conformal_scal(&pj, &PaperQuadratic::one(), &big_p);
        let classical = out.iter().find(|c| c.variant == TransvectantVariant::Classical).unwrap();
        assert!(classical.quadratic.is_some());
        let verbatim = out.iter().find(|c| c.variant == TransvectantVariant::Verbatim).unwrap();
        assert!(verbatim.quadratic.is_none());
    }
}
