//! Exact rationals: construction, parsing, formatting and serde helpers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use super::PolyError;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` (optional sign, no decimals).
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let t = s.trim();
    let bad = || PolyError::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(PolyError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => r.to_f64().unwrap_or(f64::NAN),
    }
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents and semiconvergents).
pub fn rationalize(x: f64, max_den: u64) -> Rational {
    assert!(x.is_finite(), "cannot rationalize {x}");
    let sign = if x < 0.0 { -1 } else { 1 };
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    let max = max_den as u128;
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e30 {
            break;
        }
        let a = a as u128;
        let q2 = a * q1 + q0;
        if q2 > max {
            // semiconvergent
            let k = (max - q0) / q1.max(1);
            let (ps, qs) = (k * p1 + p0, k * q1 + q0);
            if qs > 0 {
                let cand = ps as f64 / qs as f64;
                let best = p1 as f64 / q1 as f64;
                if (cand - x.abs()).abs() < (best - x.abs()).abs() {
                    p1 = ps;
                    q1 = qs;
                }
            }
            break;
        }
        let p2 = a * p1 + p0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - v.floor();
        if frac < 1e-300 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        q1 = 1;
    }
    let n = BigInt::from(p1) * BigInt::from(sign);
    Rational::new(n, BigInt::from(q1))
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn pow(r: &Rational, e: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e {
        out *= r;
    }
    out
}

/// Serde adapter: one rational as a `"p/q"` string. Integers in JSON are also accepted.
pub mod serde_rat {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        S(String),
        I(i64),
    }

    fn from_raw<E: Error>(raw: Raw) -> Result<Rational, E> {
        match raw {
            Raw::S(s) => parse_rational(&s).map_err(E::custom),
            Raw::I(i) => Ok(int(i)),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        from_raw(Raw::deserialize(d)?)
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<Raw>::deserialize(d)?.map(from_raw).transpose()
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raws = Vec::<Raw>::deserialize(d)?;
            raws.into_iter().map(from_raw).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(format_rational(&int(4)), "4");
    }

    #[test]
    fn rationalize_sqrt2() {
        let r = rationalize(2f64.sqrt(), 100);
        assert_eq!(r, rat(140, 99));
        let r = rationalize(-0.75, 10);
        assert_eq!(r, rat(-3, 4));
        let r = rationalize(3.0, 10);
        assert_eq!(r, int(3));
    }

    #[test]
    fn rationalize_respects_bound() {
        for &x in &[std::f64::consts::PI, 0.1234567, 17.0 / 3.0, 1e-7] {
            let r = rationalize(x, 1_000_000);
            assert!(r.denom() <= &BigInt::from(1_000_000));
            assert!((to_f64(&r) - x).abs() < 1e-6);
        }
    }
}
