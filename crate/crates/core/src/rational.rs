//! Exact rational numbers, log-coordinates with a `-inf` point, and their
//! string forms.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Outside the f64 range: saturate by sign.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.125`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse {
        line: 1,
        column: 1,
        message: format!("invalid rational `{s}`"),
    };
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10u32), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if neg { -value } else { value })
}

/// Integer vector proportional to `v` with coprime entries (sign preserved).
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    normalize_integer_vector(&mut ints);
    ints
}

/// Divides out the gcd of the entries in place.
pub fn normalize_integer_vector(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// A coordinate in log-space: either a finite rational or `-inf`
/// (the point `z_i = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LogCoord {
    NegInf,
    Finite(Rational),
}

impl LogCoord {
    pub fn is_neg_inf(&self) -> bool {
        matches!(self, LogCoord::NegInf)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            LogCoord::Finite(r) => Some(r),
            LogCoord::NegInf => None,
        }
    }
}

impl From<Rational> for LogCoord {
    fn from(r: Rational) -> Self {
        LogCoord::Finite(r)
    }
}

impl PartialOrd for LogCoord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogCoord {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (LogCoord::NegInf, LogCoord::NegInf) => Ordering::Equal,
            (LogCoord::NegInf, _) => Ordering::Less,
            (_, LogCoord::NegInf) => Ordering::Greater,
            (LogCoord::Finite(a), LogCoord::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for LogCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogCoord::NegInf => f.write_str("-inf"),
            LogCoord::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for LogCoord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "-inf" | "-infinity" | "NEG_INF" => Ok(LogCoord::NegInf),
            other => parse_rational(other).map(LogCoord::Finite),
        }
    }
}

/// Serde adapter: rationals as `"p/q"` strings.
pub mod serde_rat {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_rat_vec {
    use super::{parse_rational, Rational};
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for log-coordinate vectors (`"-inf"` or `"p/q"`).
pub mod serde_coords {
    use super::LogCoord;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[LogCoord], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for c in v {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<LogCoord>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Bounds `lo <= p^(1/n) <= hi` as exact rationals (each an `f64` value),
/// for a non-negative rational `p`.
pub fn nth_root_bounds(p: &Rational, n: u32) -> (Rational, Rational) {
    assert!(!p.is_negative(), "root of a negative rational");
    if p.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let approx = to_f64(p).powf(1.0 / f64::from(n));
    let exact = |x: f64| Rational::from_float(x).expect("finite root estimate");
    let mut lo = approx;
    while lo > 0.0 && num_traits::pow(exact(lo), n as usize) > *p {
        lo = lo.next_down();
    }
    let mut hi = approx;
    while num_traits::pow(exact(hi), n as usize) < *p {
        hi = hi.next_up();
    }
    (exact(lo.max(0.0)), exact(hi))
}

/// Compares `c^(1/n)` with `a^(1/n) + b^(1/n)` for non-negative `a, b, c`.
///
/// Exact for `n <= 3`: with `D = c - a - b`, the sign of `x - y - z`
/// (`x^n = c`, ...) is that of `D^2 - 4ab` (`n = 2`) or `D^3 - 27abc`
/// (`n = 3`, from `x^3 - y^3 - z^3 - 3xyz = (x - y - z) Q` with `Q > 0`)
/// whenever `D >= 0`. For larger `n` directed rounding is used and `None`
/// is returned when the enclosures overlap.
pub fn cmp_root_sum(c: &Rational, a: &Rational, b: &Rational, n: u32) -> Option<Ordering> {
    let d = c - a - b;
    match n {
        0 => None,
        1 => Some(d.cmp(&Rational::zero())),
        2 | 3 if d.is_negative() => Some(Ordering::Less),
        2 => Some((&d * &d).cmp(&(Rational::from_integer(4.into()) * a * b))),
        3 => Some((&d * &d * &d).cmp(&(Rational::from_integer(27.into()) * a * b * c))),
        _ => {
            let (cl, ch) = nth_root_bounds(c, n);
            let (al, ah) = nth_root_bounds(a, n);
            let (bl, bh) = nth_root_bounds(b, n);
            if cl > &ah + &bh {
                Some(Ordering::Greater)
            } else if ch < al + bl {
                Some(Ordering::Less)
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_and_signs() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn neg_inf_orders_below_everything() {
        let a = LogCoord::NegInf;
        let b = LogCoord::Finite(int(-1_000_000));
        assert!(a < b);
        assert_eq!("-inf".parse::<LogCoord>().unwrap(), LogCoord::NegInf);
    }

    #[test]
    fn root_bounds_bracket_the_root() {
        let p = rat(1, 16);
        let (lo, hi) = nth_root_bounds(&p, 2);
        assert!(lo <= rat(1, 4) && rat(1, 4) <= hi);
        let q = int(2);
        let (lo, hi) = nth_root_bounds(&q, 3);
        assert!(num_traits::pow(lo.clone(), 3) <= q && q <= num_traits::pow(hi.clone(), 3));
        assert!(hi - lo < rat(1, 1_000_000));
    }

    #[test]
    fn root_sum_comparison() {
        // Equality for homothetic bodies: 8a = (a^(1/3) + a^(1/3))^3.
        assert_eq!(cmp_root_sum(&int(16), &int(2), &int(2), 3), Some(Ordering::Equal));
        assert_eq!(cmp_root_sum(&int(8), &int(2), &int(2), 2), Some(Ordering::Equal));
        assert_eq!(cmp_root_sum(&int(9), &int(2), &int(2), 2), Some(Ordering::Greater));
        assert_eq!(cmp_root_sum(&int(5), &int(2), &int(2), 3), Some(Ordering::Less));
        assert_eq!(cmp_root_sum(&int(17), &int(2), &int(2), 3), Some(Ordering::Greater));
        assert_eq!(cmp_root_sum(&int(100), &int(1), &int(1), 4), Some(Ordering::Greater));
        assert_eq!(cmp_root_sum(&int(3), &int(1), &int(1), 4), Some(Ordering::Less));
    }

    #[test]
    fn primitive_vector_clears_denominators() {
        let v = primitive_integer_vector(&[rat(1, 2), rat(-3, 4), int(0)]);
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }
}
