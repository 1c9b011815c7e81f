//! Exact rational numbers and their `p/q` wire form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::ParseRationalError;

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"7"`, `"-3/4"` or `"10/2"` (reduced on the way in). Whitespace
/// around the numbers is not accepted.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = parse_int(num)?;
    let den = match den {
        Some(d) if !d.starts_with('-') => parse_int(d)?,
        Some(d) => return Err(ParseRationalError::Malformed(d.to_string())),
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(ParseRationalError::ZeroDenominator);
    }
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str) -> Result<BigInt, ParseRationalError> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::Malformed(s.to_string()));
    }
    BigInt::from_str(s).map_err(|_| ParseRationalError::Malformed(s.to_string()))
}

/// `p/q` in lowest terms, or just `p` when the denominator is one.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).map_err(serde::de::Error::custom)
}
