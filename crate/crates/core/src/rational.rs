//! Exact rational values and their text forms.
//!
//! All probabilities in this crate are arbitrary-precision rationals, stored in
//! lowest terms with a positive denominator, so arithmetic never rounds. The
//! accepted text forms are `"a/b"` and finite decimals; a decimal such as
//! `"0.3"` parses to exactly 3/10, never through floating point.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::Error;

pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from machine integers, mostly for tests and tables.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"a/b"`, an integer, or a finite decimal into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let malformed = || Error::MalformedNumber(text.to_string());
    if s.is_empty() {
        return Err(malformed());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| malformed())?;
        let den: BigInt = den.trim().parse().map_err(|_| malformed())?;
        if den.is_zero() {
            return Err(malformed());
        }
        return Ok(Rational::new(num, den));
    }
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !(int_part.is_empty() || all_digits(int_part)) || !(frac_part.is_empty() || all_digits(frac_part)) {
        return Err(malformed());
    }
    let mut numerator = if int_part.is_empty() {
        BigUint::zero()
    } else {
        int_part.parse::<BigUint>().map_err(|_| malformed())?
    };
    let mut denominator = BigUint::one();
    for ch in frac_part.bytes() {
        numerator = numerator * 10u8 + (ch - b'0');
        denominator *= 10u8;
    }
    let numerator = BigInt::from(numerator) * sign;
    Ok(Rational::new(numerator, BigInt::from(denominator)))
}

/// Renders a rational as `"a/b"`, or just the integer when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Approximate decimal rendering, for display only; never used in computation.
pub fn approx_decimal(value: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u8).pow(digits as u32);
    let scaled = (value * Rational::from_integer(scale.clone())).round();
    let mut n = scaled.to_integer();
    let negative = n.is_negative();
    n = n.abs();
    let (int, frac) = (n.clone() / &scale, n % &scale);
    let sign = if negative { "-" } else { "" };
    format!("{sign}{int}.{frac:0>width$}", width = digits)
}
