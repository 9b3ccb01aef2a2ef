//! Command-line front end. `run` takes the argument vector and returns the exit code:
//! 0 on success, 1 on errors, 2 when `--expect` is given and the verdict disagrees.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::extremal::{
    ambitoric_decompose, classify_twisted_product, generate_family, verify, ExtremalVerdict, FamilyKind, FamilyParameters,
    ProductClass,
};
use crate::geom::{default_probes, AffineVerdict, is_affine_in_momenta, weighted_scal, KillingBasis, SeparableMetric, WeightFunction};
use crate::legendre::{PotentialFunction, Representation};
use crate::oracle::{weighted_scal_at, DEFAULT_STEP};
use crate::poly::{int, parse_rational, to_f64, Rational};
use crate::ruled::{
    critical_scan, decide_existence, join_correspondence_check, scan_csv, uniform_grid, JoinReport,
    RuledSurfaceSpec, SasakiJoinSpec, StabilityVerdict,
};
use crate::twist::{twist, TwistMap, TwistVariant};

pub const SCHEMA: &str = include_str!("../schema/crtwist.schema.json");

#[derive(Parser, Debug)]
#[command(name = "crtwist", version, about = "Weighted scalar curvature, CR twists and extremality of separable toric metrics")]
pub struct Cli {
    /// Print the JSON schemas of every input and output format and exit.
    #[arg(long)]
    pub schema: bool,

    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    /// Exit with status 2 unless the verdict is the expected one.
    #[arg(long, global = true, value_enum)]
    pub expect: Option<Expect>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Affine,
    Extremal,
    Stable,
    Unstable,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weighted scalar curvature `Scal_{f,ν}` and whether it is a Killing potential.
    Scal {
        #[arg(short, long)]
        input: PathBuf,
        /// Weight: `"z+2"`, `"1+x1-x2"`, `"q:1,0,2"` (polarized) or inline JSON.
        #[arg(short = 'f', long)]
        weight: String,
        #[arg(long, value_parser = rational)]
        nu: Rational,
        /// Compare against finite differences at the default probe points.
        #[arg(long)]
        oracle: bool,
    },
    /// Twist a metric by `f_a`.
    Twist {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_parser = rational, requires = "a1", conflicts_with = "weight")]
        a0: Option<Rational>,
        #[arg(long, value_parser = rational)]
        a1: Option<Rational>,
        #[arg(short = 'f', long)]
        weight: Option<String>,
        #[arg(long, default_value = "origin")]
        variant: String,
    },
    /// Verify `(f, ν)`-extremality of a metric, or generate and verify a family member.
    Extremal {
        #[arg(short, long, required_unless_present = "family")]
        input: Option<PathBuf>,
        #[arg(short = 'f', long)]
        weight: Option<String>,
        #[arg(long, value_parser = rational)]
        nu: Option<Rational>,
        /// One of Cubic1D, OrthotoricQ1, OrthotoricQXm, BochnerFlatCommonP, ProductQuintic.
        #[arg(long, requires_all = ["m", "params"])]
        family: Option<String>,
        #[arg(short, long)]
        m: Option<usize>,
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Classify an extremal twisted product, or decompose ambitoric data.
    Classify {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Decide existence of extremal Sasaki structures on a ruled-surface contact manifold.
    RuledExist {
        #[arg(long)]
        genus: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, value_parser = rational)]
        a: Rational,
        #[arg(long, value_parser = rational)]
        b: Rational,
        #[arg(long, requires = "n")]
        k: Option<u64>,
        #[arg(long, requires = "k")]
        n: Option<u64>,
    },
    /// CSV verdicts along the critical curve `a = (1 + b²)/(2b)` for `a = 1 + i/den`, `i = 1..=count`.
    Scan {
        #[arg(long)]
        genus: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 50)]
        count: u64,
        #[arg(long, default_value_t = 100)]
        den: u64,
    },
    /// CSV table `z, u, u′, u″` of the symplectic potential of a one-dimensional profile.
    Legendre {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 21)]
        points: usize,
        #[arg(long, value_parser = rational)]
        base: Option<Rational>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: parse error at line {line}, column {column}: {msg}")]
    Parse { path: String, line: usize, column: usize, msg: String },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Compute(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

pub fn read_metric(path: &Path) -> Result<SeparableMetric, CliError> {
    let m: SeparableMetric = read_json(path)?;
    m.validate().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(m)
}

/// `"q:1,0,2"` is polarized, `{...}` is JSON, anything else an affine expression in the metric's variables.
pub fn parse_weight(s: &str, metric: &SeparableMetric) -> Result<WeightFunction, CliError> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| CliError::Parse {
            path: "<weight>".into(),
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        });
    }
    if let Some(rest) = s.strip_prefix("q:") {
        let q: Result<Vec<Rational>, _> = rest.split(',').map(|t| parse_rational(t.trim())).collect();
        return Ok(WeightFunction::polarized(q.map_err(|e| CliError::Input(format!("weight {s:?}: {e}")))?));
    }
    WeightFunction::parse_affine(s, metric.nvars()).map_err(compute)
}

fn default_weight(metric: &SeparableMetric) -> WeightFunction {
    match metric.killing_basis() {
        KillingBasis::Affine => WeightFunction::one(metric.nvars()),
        KillingBasis::Elementary => WeightFunction::polarized_one(metric.nvars()),
    }
}

/// A float as a JSON number with 17 significant digits; non-finite values become `null`.
pub fn float17(x: f64) -> Box<RawValue> {
    let s = if x.is_finite() { format!("{x:.16e}") } else { "null".into() };
    RawValue::from_string(s).expect("valid number")
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct OracleRow {
    x: Vec<Box<RawValue>>,
    symbolic: Box<RawValue>,
    numeric: Box<RawValue>,
}

struct Outcome {
    text: String,
    verdict: Option<Expect>,
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ScalReport {
    affine: bool,
    c: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    expr: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Vec<OracleRow>>,
}

fn cmd_scal(input: &Path, weight: &str, nu: &Rational, oracle: bool) -> Result<Outcome, CliError> {
    let metric = read_metric(input)?;
    let w = parse_weight(weight, &metric)?;
    let e = weighted_scal(&metric, &w, nu).map_err(compute)?;
    let v = is_affine_in_momenta(&e, &metric);
    let witness = match &v {
        AffineVerdict::NotAffine { witness } => Some(witness.clone()),
        AffineVerdict::Affine { .. } => None,
    };
    let oracle = if oracle {
        let nuf = to_f64(nu);
        let mut rows = vec![];
        for x in default_probes(&metric) {
            let num = weighted_scal_at(&metric, &w, nuf, &x, DEFAULT_STEP).map_err(compute)?;
            rows.push(OracleRow {
                x: x.iter().map(|&t| float17(t)).collect(),
                symbolic: float17(e.eval_f64(&x)),
                numeric: float17(num),
            });
        }
        Some(rows)
    } else {
        None
    };
    let report = ScalReport {
        affine: v.is_affine(),
        c: v.coeffs().map(|c| c.iter().map(|r| r.to_string()).collect()),
        witness,
        expr: e.format_with(&metric.var_names()),
        oracle,
    };
    let verdict = report.affine.then_some(Expect::Affine);
    Ok(Outcome { text: json_line(&report), verdict })
}

#[derive(Serialize)]
struct TwistReport {
    metric: SeparableMetric,
    map: TwistMap,
    inverse_weight: WeightFunction,
    coordinates: String,
}

fn cmd_twist(
    input: &Path,
    a0: Option<Rational>,
    a1: Option<Rational>,
    weight: Option<&str>,
    variant: &str,
) -> Result<Outcome, CliError> {
    let metric = read_metric(input)?;
    let w = match (weight, a0, a1) {
        (Some(s), _, _) => parse_weight(s, &metric)?,
        (None, Some(a0), Some(a1)) => {
            let mut b = vec![int(0); metric.nvars()];
            b[0] = a1;
            WeightFunction::product(a0, b)
        }
        _ => return Err(CliError::Input("give either -f or both --a0 and --a1".into())),
    };
    let variant = TwistVariant::parse(variant)
        .ok_or_else(|| CliError::Input(format!("unknown variant {variant:?}; use origin or interval")))?;
    let tw = twist(&metric, &w, &variant).map_err(compute)?;
    let out = TwistReport { coordinates: tw.map.coords.describe(), inverse_weight: tw.inverse_weight(), metric: tw.metric, map: tw.map };
    Ok(Outcome { text: json_line(&out), verdict: None })
}

#[derive(Serialize)]
struct FamilyReport {
    metric: SeparableMetric,
    verdict: ExtremalVerdict,
}

fn cmd_extremal(
    input: Option<&Path>,
    weight: Option<&str>,
    nu: Option<Rational>,
    family: Option<&str>,
    m: Option<usize>,
    params: Option<&Path>,
) -> Result<Outcome, CliError> {
    if let (Some(kind), Some(m), Some(params)) = (family, m, params) {
        let kind = FamilyKind::parse(kind).ok_or_else(|| CliError::Input(format!("unknown family {kind:?}")))?;
        let p: FamilyParameters = read_json(params)?;
        let fam = crate::extremal::SolutionFamily { kind, m, parameters: p.clone() };
        let metric = generate_family(kind, m, p).map_err(compute)?;
        let v = verify(&metric, &fam.designated_weight(), &fam.designated_nu()).map_err(compute)?;
        let verdict = v.is_extremal().then_some(Expect::Extremal);
        return Ok(Outcome { text: json_line(&FamilyReport { metric, verdict: v }), verdict });
    }
    let metric = read_metric(input.ok_or_else(|| CliError::Input("missing -i".into()))?)?;
    let w = match weight {
        Some(s) => parse_weight(s, &metric)?,
        None => default_weight(&metric),
    };
    let nu = nu.unwrap_or_else(|| int(metric.complex_dim() as i64 + 2));
    let v = verify(&metric, &w, &nu).map_err(compute)?;
    let verdict = v.is_extremal().then_some(Expect::Extremal);
    Ok(Outcome { text: json_line(&v), verdict })
}

#[derive(Serialize)]
struct ClassReport {
    class: ProductClass,
    extremal: bool,
}

fn cmd_classify(input: &Path) -> Result<Outcome, CliError> {
    let metric = read_metric(input)?;
    let text = match &metric {
        SeparableMetric::TwistedProduct(t) => {
            let class = classify_twisted_product(t);
            json_line(&ClassReport { class, extremal: class != ProductClass::None })
        }
        SeparableMetric::Ambitoric(a) => json_line(&ambitoric_decompose(&a.a, &a.b).map_err(compute)?),
        other => return Err(CliError::Input(format!("classify takes TwistedProduct or Ambitoric, got {}", other.kind_name()))),
    };
    Ok(Outcome { text, verdict: None })
}

#[derive(Serialize)]
struct RuledReport {
    #[serde(flatten)]
    verdict: StabilityVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    join: Option<JoinReport>,
}

fn cmd_ruled(genus: u64, ell: u64, a: Rational, b: Rational, k: Option<u64>, n: Option<u64>) -> Result<Outcome, CliError> {
    let spec = RuledSurfaceSpec::new(genus, ell, a, b).map_err(compute)?;
    let verdict = decide_existence(&spec).map_err(compute)?;
    let join = match (k, n) {
        (Some(k), Some(n)) => Some(join_correspondence_check(&spec, &SasakiJoinSpec { k, n, ell }).map_err(compute)?),
        _ => None,
    };
    let expect = Some(if verdict.is_stable() { Expect::Stable } else { Expect::Unstable });
    Ok(Outcome { text: json_line(&RuledReport { verdict, join }), verdict: expect })
}

fn cmd_scan(genus: u64, ell: u64, count: u64, den: u64) -> Result<Outcome, CliError> {
    if den == 0 {
        return Err(CliError::Input("--den must be positive".into()));
    }
    let r = critical_scan(genus, ell, &uniform_grid(count, den)).map_err(compute)?;
    Ok(Outcome { text: scan_csv(&r).map_err(compute)?, verdict: None })
}

fn cmd_legendre(input: &Path, points: usize, base: Option<Rational>) -> Result<Outcome, CliError> {
    let metric = read_metric(input)?;
    let SeparableMetric::Profile1D(p) = &metric else {
        return Err(CliError::Input(format!("legendre takes a Profile1D, got {}", metric.kind_name())));
    };
    let a = p.a.as_polynomial().ok_or_else(|| CliError::Input("legendre needs a polynomial profile".into()))?.clone();
    let (lo, hi) = (p.interval[0].clone(), p.interval[1].clone());
    let u = match base {
        Some(b) => PotentialFunction::profile_with_basepoint(a, lo, hi, b),
        None => PotentialFunction::profile(a, lo, hi),
    }
    .map_err(compute)?;
    let Representation::Profile1DIntegral { interval, .. } = &u.repr else { unreachable!() };
    let (l, h) = (to_f64(&interval.0), to_f64(&interval.1));
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["z", "u", "du", "d2u"]).map_err(compute)?;
    for i in 1..=points {
        let z = l + (h - l) * i as f64 / (points + 1) as f64;
        let val = u.value(&[z]).map_err(compute)?;
        let g = u.gradient(&[z]).map_err(compute)?[0];
        let hs = u.hessian(&[z]).map_err(compute)?[(0, 0)];
        w.write_record([fmt17(z), fmt17(val), fmt17(g), fmt17(hs)]).map_err(compute)?;
    }
    let text = String::from_utf8(w.into_inner().map_err(compute)?).expect("utf8");
    Ok(Outcome { text, verdict: None })
}

fn dispatch(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Scal { input, weight, nu, oracle } => cmd_scal(input, weight, nu, *oracle),
        Command::Twist { input, a0, a1, weight, variant } => {
            cmd_twist(input, a0.clone(), a1.clone(), weight.as_deref(), variant)
        }
        Command::Extremal { input, weight, nu, family, m, params } => {
            cmd_extremal(input.as_deref(), weight.as_deref(), nu.clone(), family.as_deref(), *m, params.as_deref())
        }
        Command::Classify { input } => cmd_classify(input),
        Command::RuledExist { genus, ell, a, b, k, n } => cmd_ruled(*genus, *ell, a.clone(), b.clone(), *k, *n),
        Command::Scan { genus, ell, count, den } => cmd_scan(*genus, *ell, *count, *den),
        Command::Legendre { input, points, base } => cmd_legendre(input, *points, base.clone()),
    }
}

/// Runs one job, writing results to `out` (or `--output`) and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    if cli.schema {
        let _ = out.write_all(SCHEMA.as_bytes());
        return 0;
    }
    let Some(cmd) = &cli.command else {
        let _ = writeln!(err, "no subcommand given; see --help");
        return 1;
    };
    let outcome = match dispatch(cmd) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let written = match &cli.output {
        Some(p) => std::fs::write(p, &outcome.text),
        None => out.write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 1;
    }
    match cli.expect {
        Some(x) if outcome.verdict != Some(x) => {
            let _ = writeln!(err, "expected {x:?}, got {}", outcome.verdict.map_or("no such verdict".into(), |v| format!("{v:?}")));
            2
        }
        _ => 0,
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::{json, Value};

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (vec![], vec![]);
        let code = run_with(std::iter::once("crtwist").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    fn data(name: &str) -> String {
        format!("{}/examples/data/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    #[test]
    fn scal_on_the_sphere() {
        let (code, out, _) = call(&["scal", "-i", &data("sphere.json"), "-f", "z+2", "--nu", "3"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["affine"], json!(true));
        assert_eq!(v["c"], json!(["2", "-8"]));
    }

    #[test]
    fn scal_oracle_pairs() {
        let (code, out, _) = call(&["scal", "-i", &data("sphere.json"), "-f", "z+2", "--nu", "3", "--oracle"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        for row in v["oracle"].as_array().unwrap() {
            let (s, n) = (row["symbolic"].as_f64().unwrap(), row["numeric"].as_f64().unwrap());
            assert!((s - n).abs() < 1e-5 * s.abs().max(1.0));
        }
    }

    #[test]
    fn ruled_example_and_expect() {
        let (code, out, _) = call(&["ruled-exist", "--genus", "0", "--ell", "2", "--a", "3", "--b", "2"]);
        assert_eq!(code, 0);
        assert!(out.starts_with(r#"{"status":"Stable""#), "{out}");
        let (code, _, _) = call(&["ruled-exist", "--genus", "0", "--ell", "2", "--a", "3", "--b", "2", "--expect", "unstable"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn twist_interval() {
        let (code, out, _) = call(&["twist", "-i", &data("sphere.json"), "--a0", "2", "--a1", "1", "--variant", "interval"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let m: SeparableMetric = serde_json::from_value(v["metric"].clone()).unwrap();
        assert_eq!(m.kind_name(), "Profile1D");
    }

    #[test]
    fn errors_exit_one() {
        let (code, _, err) = call(&["scal", "-i", &data("missing.json"), "-f", "z", "--nu", "3"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error:"));
        let (code, _, _) = call(&["ruled-exist", "--genus", "0", "--ell", "2", "--a", "1/2", "--b", "2"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn parse_errors_carry_position() {
        let dir = std::env::temp_dir().join(format!("crtwist-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("bad.json");
        std::fs::write(&p, "{\n  \"kind\": \"Profile1D\",\n  \"A\": [1,\n}").unwrap();
        let (code, _, err) = call(&["classify", "-i", p.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(err.contains("line 4"), "{err}");
    }

    #[test]
    fn schema_flag() {
        let (code, out, _) = call(&["--schema"]);
        assert_eq!(code, 0);
        let _: Value = serde_json::from_str(&out).unwrap();
    }
}
