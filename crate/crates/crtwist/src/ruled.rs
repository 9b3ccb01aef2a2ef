//! Ruled surfaces `P(O ⊕ L) → B` and their Sasaki joins: the quartic `P_{a,b}`,
//! the positivity decision, and scans over the critical curve `a = (1 + b²)/(2b)`.

use num::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geom::{CalabiBundle1D, SeparableMetric, WeightFunction};
use crate::poly::rational::serde_rat;
use crate::poly::{
    int, positive_on_open_interval, rat, rationalize, to_f64, PolyError, Polynomial, Positivity, RatFn,
    Rational, RootInterval,
};
use crate::twist::{calabi_to_product, TwistError, TwistVariant};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RuledError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("3c² = 1 (c = {0}): P_(a,b) is undefined")]
    SingularC(String),
    #[error("k = {k} and n = {n} are not coprime")]
    NotCoprime { k: u64, n: u64 },
    #[error("n/k = {n}/{k} must exceed ℓ = {ell}")]
    BadRatio { k: u64, n: u64, ell: u64 },
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuledSurfaceSpec {
    pub genus: u64,
    pub ell: u64,
    #[serde(with = "serde_rat")]
    pub a: Rational,
    #[serde(with = "serde_rat")]
    pub b: Rational,
}

impl RuledSurfaceSpec {
    pub fn new(genus: u64, ell: u64, a: Rational, b: Rational) -> Result<Self, RuledError> {
        let s = RuledSurfaceSpec { genus, ell, a, b };
        s.check()?;
        Ok(s)
    }

    pub fn check(&self) -> Result<(), RuledError> {
        if self.ell == 0 {
            return Err(RuledError::InvalidSpec("ℓ must be positive".into()));
        }
        if self.a <= Rational::one() {
            return Err(RuledError::InvalidSpec(format!("a = {} must exceed 1", self.a)));
        }
        if self.b.abs() <= Rational::one() {
            return Err(RuledError::InvalidSpec(format!("|b| = {} must exceed 1", self.b.abs())));
        }
        Ok(())
    }

    /// `2(1 − 𝗀)/ℓ`.
    pub fn s(&self) -> Rational {
        int(2 * (1 - self.genus as i64)) / int(self.ell as i64)
    }

    /// `(ab − 1)/(a − b)`, undefined for `a = b`.
    pub fn c(&self) -> Option<Rational> {
        (self.a != self.b).then(|| (&self.a * &self.b - int(1)) / (&self.a - &self.b))
    }

    /// Scalar curvature of the base with `[ω_B/2π]` primitive: `4(1 − 𝗀)`.
    pub fn base_scal(&self) -> Rational {
        int(4 * (1 - self.genus as i64))
    }

    /// `κ/(4π²) = ℓ(2/3 + 2ab)` for `κ = ½∫ f_b ω²`, `f_b = z + b`, `a0 = ℓa`, `a1 = ℓ`.
    pub fn kappa_over_4pi2(&self) -> Rational {
        int(self.ell as i64) * (rat(2, 3) + int(2) * &self.a * &self.b)
    }

    /// `(1 − z²)/(2(3c² − 1))` coefficient `k` of the correction in `P = (1 − z²)(z + a + k(1 − z²))`.
    fn correction(&self) -> Result<Rational, RuledError> {
        let Some(c) = self.c() else { return Ok(Rational::zero()) };
        let d = int(3) * &c * &c - int(1);
        if d.is_zero() {
            return Err(RuledError::SingularC(c.to_string()));
        }
        Ok((int(3) * &c + &self.a + self.s()) / (int(2) * d))
    }

    /// The quadratic `P/(1 − z²) = z + a + k(1 − z²)`.
    pub fn reduced(&self) -> Result<Polynomial, RuledError> {
        let k = self.correction()?;
        Ok(Polynomial::new("z", vec![&self.a + &k, Rational::one(), -k]))
    }

    /// The profile `A = P_{a,b}/(z + a)` of the `(f_b, 4)`-extremal candidate.
    pub fn profile(&self) -> Result<RatFn, RuledError> {
        let p = pab_polynomial(self)?;
        Ok(RatFn::new(p, Polynomial::new("z", vec![self.a.clone(), Rational::one()]))?)
    }

    /// The Calabi-ansatz metric `(ℓa + ℓz) g_B + dz²/A + A θ²` with `A = P_{a,b}/(z + a)`.
    pub fn calabi_metric(&self) -> Result<SeparableMetric, RuledError> {
        let l = int(self.ell as i64);
        Ok(SeparableMetric::CalabiBundle1D(CalabiBundle1D {
            base_scal: self.base_scal(),
            base_dim: 1,
            a0: &l * &self.a,
            a1: l,
            a: self.profile()?,
            interval: vec![int(-1), int(1)],
        }))
    }

    /// `f_b = z + b`.
    pub fn weight(&self) -> WeightFunction {
        WeightFunction::product(self.b.clone(), vec![Rational::one()])
    }
}

/// `P_{a,b}(z) = (1 − z²)[(z + a) + (1 − z²)(3c + a + s)/(2(3c² − 1))]`; `(1 − z²)(z + a)` when `a = b`.
pub fn pab_polynomial(spec: &RuledSurfaceSpec) -> Result<Polynomial, RuledError> {
    let q = spec.reduced()?;
    Ok(&Polynomial::from_ints("z", &[1, 0, -1]) * &q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryChecks {
    pub p_minus_zero: bool,
    pub p_plus_zero: bool,
    pub slope_minus: bool,
    pub slope_plus: bool,
}

impl BoundaryChecks {
    pub fn all(&self) -> bool {
        self.p_minus_zero && self.p_plus_zero && self.slope_minus && self.slope_plus
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum StabilityStatus {
    Stable,
    Unstable { roots: Vec<RootInterval> },
}

/// A double root `p0 ∈ (−1, 1)` and whether `∂P/∂b (p0) ≠ 0` there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleRoot {
    #[serde(with = "serde_rat")]
    pub root: Rational,
    pub dp_db_nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    #[serde(flatten)]
    pub status: StabilityStatus,
    pub polynomial: Polynomial,
    pub boundary_checks: BoundaryChecks,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub double_root: Option<DoubleRoot>,
    #[serde(with = "serde_rat")]
    pub kappa_over_4pi2: Rational,
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        matches!(self.status, StabilityStatus::Stable)
    }
}

fn boundary_checks(p: &Polynomial, a: &Rational) -> BoundaryChecks {
    let (m1, p1) = (int(-1), int(1));
    let d = p.derive();
    BoundaryChecks {
        p_minus_zero: p.eval(&m1).is_zero(),
        p_plus_zero: p.eval(&p1).is_zero(),
        slope_minus: d.eval(&m1) == int(2) * (a - int(1)),
        slope_plus: d.eval(&p1) == int(-2) * (a + int(1)),
    }
}

/// `∂P/∂b` at `z`, for `a ≠ b`: `(1 − z²)² · ∂k/∂c · ∂c/∂b`.
fn dp_db(spec: &RuledSurfaceSpec, z: &Rational) -> Result<Rational, RuledError> {
    let c = spec.c().ok_or_else(|| RuledError::InvalidSpec("a = b has no c".into()))?;
    let d = int(3) * &c * &c - int(1);
    if d.is_zero() {
        return Err(RuledError::SingularC(c.to_string()));
    }
    let dk_dc = int(-3) * (int(3) * &c * &c + int(2) * &c * (&spec.a + spec.s()) + int(1)) / (int(2) * &d * &d);
    let amb = &spec.a - &spec.b;
    let dc_db = (&spec.a * &spec.a - int(1)) / (&amb * &amb);
    let w = int(1) - z * z;
    Ok(&w * &w * dk_dc * dc_db)
}

/// A double root of `P` inside `(−1, 1)`: necessarily the vertex `1/(2k)` of the reduced quadratic.
fn double_root(spec: &RuledSurfaceSpec, q: &Polynomial) -> Result<Option<DoubleRoot>, RuledError> {
    let k = -q.coeff(2);
    if k.is_zero() {
        return Ok(None);
    }
    let z0 = Rational::one() / (int(2) * &k);
    if z0.abs() >= Rational::one() || !q.eval(&z0).is_zero() {
        return Ok(None);
    }
    let dp = dp_db(spec, &z0)?;
    Ok(Some(DoubleRoot { root: z0, dp_db_nonzero: !dp.is_zero() }))
}

/// Stable iff `P_{a,b} > 0` on `(−1, 1)`; unstable verdicts carry isolating intervals.
pub fn decide_existence(spec: &RuledSurfaceSpec) -> Result<StabilityVerdict, RuledError> {
    spec.check()?;
    let q = spec.reduced()?;
    let p = &Polynomial::from_ints("z", &[1, 0, -1]) * &q;
    let status = match positive_on_open_interval(&p, &int(-1), &int(1))? {
        Positivity::Positive => StabilityStatus::Stable,
        Positivity::Negative => StabilityStatus::Unstable { roots: vec![] },
        Positivity::HasRootAt(roots) => StabilityStatus::Unstable { roots },
    };
    let double_root = double_root(spec, &q)?;
    if let Some(d) = &double_root {
        assert!(d.dp_db_nonzero, "∂P/∂b vanishes at the double root {} for {spec:?}", d.root);
    }
    Ok(StabilityVerdict {
        status,
        boundary_checks: boundary_checks(&p, &spec.a),
        polynomial: p,
        double_root,
        kappa_over_4pi2: spec.kappa_over_4pi2(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SasakiJoinSpec {
    pub k: u64,
    pub n: u64,
    pub ell: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinParameters {
    pub w_minus: u64,
    pub w_plus: u64,
    #[serde(with = "serde_rat")]
    pub a: Rational,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `w₋ = n − kℓ`, `w₊ = n`, `a = 2n/(kℓ) − 1`.
pub fn join_parameters(j: &SasakiJoinSpec) -> Result<JoinParameters, RuledError> {
    if j.k == 0 || j.n == 0 || j.ell == 0 {
        return Err(RuledError::InvalidSpec("k, n, ℓ must be positive".into()));
    }
    if gcd(j.k, j.n) != 1 {
        return Err(RuledError::NotCoprime { k: j.k, n: j.n });
    }
    if j.n <= j.k * j.ell {
        return Err(RuledError::BadRatio { k: j.k, n: j.n, ell: j.ell });
    }
    let a = int(2 * j.n as i64) / int((j.k * j.ell) as i64) - int(1);
    Ok(JoinParameters { w_minus: j.n - j.k * j.ell, w_plus: j.n, a })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointCheck {
    pub name: String,
    #[serde(with = "serde_rat")]
    pub expected: Rational,
    #[serde(with = "serde_rat")]
    pub actual: Rational,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinReport {
    pub parameters: JoinParameters,
    /// `Ã` on the join's weighted projective line, in `z̃ ∈ [−1, 1]`.
    #[serde(rename = "A_twisted")]
    pub a_twisted: RatFn,
    pub checks: Vec<EndpointCheck>,
}

/// Twists the ruled-surface profile to the product over `B × ℂP¹_w` and checks the
/// endpoint conditions `Ã(±1) = 0`, `Ã′(±1) = ∓4w_∓/k`.
pub fn join_correspondence_check(spec: &RuledSurfaceSpec, j: &SasakiJoinSpec) -> Result<JoinReport, RuledError> {
    spec.check()?;
    let params = join_parameters(j)?;
    if params.a != spec.a || j.ell != spec.ell {
        return Err(RuledError::Mismatch(format!("join gives a = {}, ℓ = {}; spec has a = {}, ℓ = {}", params.a, j.ell, spec.a, spec.ell)));
    }
    let SeparableMetric::CalabiBundle1D(c) = spec.calabi_metric()? else { unreachable!() };
    let tw = calabi_to_product(&c, &TwistVariant::IntervalPreserving)?;
    let SeparableMetric::CalabiBundle1D(prod) = &tw.metric else { unreachable!() };
    let kk = int(j.k as i64);
    let a_t = prod.a.clone();
    let d = a_t.derive();
    let at = |f: &RatFn, x: i64| f.eval(&int(x)).ok_or_else(|| RuledError::Mismatch(format!("pole at {x}")));
    let wm = int(params.w_minus as i64);
    let wp = int(params.w_plus as i64);
    let mut checks = vec![];
    let mut push = |name: &str, expected: Rational, actual: Rational| {
        let ok = expected == actual;
        checks.push(EndpointCheck { name: name.into(), expected, actual, ok });
    };
    push("A(-1)", int(0), at(&a_t, -1)?);
    push("A(+1)", int(0), at(&a_t, 1)?);
    push("A'(-1)", int(4) * &wp / &kk, at(&d, -1)?);
    push("A'(+1)", int(-4) * &wm / &kk, at(&d, 1)?);
    let report = JoinReport { parameters: params, a_twisted: a_t, checks };
    if let Some(bad) = report.checks.iter().find(|c| !c.ok) {
        return Err(RuledError::Mismatch(format!("{}: expected {}, got {}", bad.name, bad.expected, bad.actual)));
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScanVerdict {
    Stable,
    Unstable,
    /// The minimum of `P/(1 − z²)` is within `BORDERLINE` of zero.
    Borderline,
}

impl ScanVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScanVerdict::Stable => "Stable",
            ScanVerdict::Unstable => "Unstable",
            ScanVerdict::Borderline => "Borderline",
        }
    }
}

pub const BORDERLINE: f64 = 1e-8;
pub const SCAN_DENOMINATOR: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(with = "serde_rat")]
    pub a: Rational,
    #[serde(with = "serde_rat")]
    pub b_a: Rational,
    pub verdict: ScanVerdict,
    pub leftmost_root: Option<RootInterval>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub genus: u64,
    pub ell: u64,
    pub rows: Vec<ScanRow>,
    /// Largest grid `a` with an `Unstable` verdict: an empirical lower bound for `a₀(M)`.
    #[serde(with = "serde_rat::opt", default)]
    pub largest_unstable: Option<Rational>,
}

/// `b_a = a + √(a² − 1)`, the root of `a = (1 + b²)/(2b)` with `b > 1`, rationalized.
pub fn critical_b(a: &Rational, max_den: u64) -> Rational {
    let af = to_f64(a);
    rationalize(af + (af * af - 1.0).sqrt(), max_den)
}

/// Minimum of the reduced quadratic `z + a + k(1 − z²)` over `[−1, 1]`.
fn reduced_min(q: &Polynomial) -> Rational {
    let ends = [q.eval(&int(-1)), q.eval(&int(1))];
    let mut lo = ends.iter().min().unwrap().clone();
    let k = -q.coeff(2);
    if k.is_negative() {
        let z0 = Rational::one() / (int(2) * &k);
        if z0.abs() < Rational::one() {
            lo = lo.min(q.eval(&z0));
        }
    }
    lo
}

/// Verdict for one scan point; `Borderline` when the sign is not decided with margin.
pub fn scan_point(genus: u64, ell: u64, a: &Rational, max_den: u64) -> Result<ScanRow, RuledError> {
    let b = critical_b(a, max_den);
    let spec = RuledSurfaceSpec::new(genus, ell, a.clone(), b.clone())?;
    let q = spec.reduced()?;
    let v = decide_existence(&spec)?;
    let leftmost_root = match &v.status {
        StabilityStatus::Unstable { roots } => roots.first().cloned(),
        StabilityStatus::Stable => None,
    };
    let verdict = if to_f64(&reduced_min(&q)).abs() <= BORDERLINE {
        ScanVerdict::Borderline
    } else if v.is_stable() {
        ScanVerdict::Stable
    } else {
        ScanVerdict::Unstable
    };
    Ok(ScanRow { a: a.clone(), b_a: b, verdict, leftmost_root })
}

fn thread_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("CRTWIST_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        builder = builder.num_threads(n);
    }
    builder.build().expect("thread pool")
}

/// Decides every grid point along the critical curve; rows keep grid order.
pub fn critical_scan(genus: u64, ell: u64, a_grid: &[Rational]) -> Result<ScanReport, RuledError> {
    critical_scan_with(genus, ell, a_grid, SCAN_DENOMINATOR)
}

pub fn critical_scan_with(genus: u64, ell: u64, a_grid: &[Rational], max_den: u64) -> Result<ScanReport, RuledError> {
    if genus < 2 {
        return Err(RuledError::InvalidSpec("critical scans need genus ≥ 2".into()));
    }
    let rows: Result<Vec<ScanRow>, RuledError> =
        thread_pool().install(|| a_grid.par_iter().map(|a| scan_point(genus, ell, a, max_den)).collect());
    let rows = rows?;
    let largest_unstable =
        rows.iter().filter(|r| r.verdict == ScanVerdict::Unstable).map(|r| r.a.clone()).max();
    Ok(ScanReport { genus, ell, rows, largest_unstable })
}

/// `{1 + i/den : i = 1..=count}`.
pub fn uniform_grid(count: u64, den: u64) -> Vec<Rational> {
    (1..=count).map(|i| int(1) + int(i as i64) / int(den as i64)).collect()
}

/// The scan as CSV: `a,b_a,verdict,root_lo,root_hi`.
pub fn scan_csv(report: &ScanReport) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["a", "b_a", "verdict", "root_lo", "root_hi"])?;
    for r in &report.rows {
        let (lo, hi) = match &r.leftmost_root {
            Some(iv) => (iv.lo.to_string(), iv.hi.to_string()),
            None => (String::new(), String::new()),
        };
        w.write_record([r.a.to_string(), r.b_a.to_string(), r.verdict.as_str().to_string(), lo, hi])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf8"))
}
