//! Exact rational scalars.
//!
//! [`Rational`] is `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator. This module adds the literal
//! syntax used throughout the crate (`7`, `-3/4`, `0.9`) and a few
//! conversions.

use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    /// Byte offset of the offending character within the literal.
    pub offset: usize,
    pub message: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message)
    }
}

impl core::error::Error for ParseRationalError {}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den`, reduced. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `int`, `int/int` or a base-10 decimal such as `-0.25`.
///
/// Decimals are converted exactly (`0.9` is `9/10`); no binary float is
/// involved at any point.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = |offset, message| ParseRationalError { offset, message };
    if text.is_empty() {
        return Err(err(0, "empty rational literal"));
    }
    if let Some(slash) = text.find('/') {
        let num = parse_integer(&text[..slash], 0)?;
        let den_text = &text[slash + 1..];
        if den_text.starts_with(['-', '+']) {
            return Err(err(slash + 1, "denominator must be an unsigned integer"));
        }
        let den = parse_integer(den_text, slash + 1)?;
        if den.is_zero() {
            return Err(err(slash + 1, "zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some(dot) = text.find('.') {
        let int_part = &text[..dot];
        let frac = &text[dot + 1..];
        if frac.is_empty() {
            return Err(err(dot + 1, "expected digits after decimal point"));
        }
        if let Some(i) = frac.bytes().position(|b| !b.is_ascii_digit()) {
            return Err(err(dot + 1 + i, "unexpected character in decimal"));
        }
        let (negative, digits) = match int_part.as_bytes().first() {
            Some(b'-') => (true, &int_part[1..]),
            Some(b'+') => (false, &int_part[1..]),
            _ => (false, int_part),
        };
        let sign_len = int_part.len() - digits.len();
        if digits.is_empty() {
            return Err(err(sign_len, "expected digits before decimal point"));
        }
        let whole = parse_integer(digits, sign_len)?;
        let frac_value = parse_integer(frac, dot + 1)?;
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let magnitude = Rational::new(whole * &scale + frac_value, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    Ok(Rational::from_integer(parse_integer(text, 0)?))
}

fn parse_integer(text: &str, base_offset: usize) -> Result<BigInt, ParseRationalError> {
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    let sign_len = text.len() - digits.len();
    if digits.is_empty() {
        return Err(ParseRationalError {
            offset: base_offset + sign_len,
            message: "expected digits",
        });
    }
    if let Some(i) = digits.bytes().position(|b| !b.is_ascii_digit()) {
        return Err(ParseRationalError {
            offset: base_offset + sign_len + i,
            message: "unexpected character in number",
        });
    }
    // Only ASCII digits and an optional sign remain, so parsing cannot fail.
    Ok(text.parse::<BigInt>().expect("validated integer literal"))
}

/// Nearest `f64`; saturates to ±∞ for values beyond the float range.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact decimal expansion when the denominator has no prime factors other
/// than 2 and 5, e.g. `1/8 → "0.125"`. `None` otherwise.
pub fn to_terminating_decimal(r: &Rational) -> Option<String> {
    let mut den = r.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10u32), places));
    debug_assert!(scaled.is_integer());
    let digits = scaled.to_integer().abs().to_str_radix(10);
    let mut out = String::new();
    if r.is_negative() {
        out.push('-');
    }
    if places == 0 {
        out.push_str(&digits);
        return Some(out);
    }
    let padded = if digits.len() <= places {
        let mut s = String::new();
        for _ in 0..(places + 1 - digits.len()) {
            s.push('0');
        }
        s.push_str(&digits);
        s
    } else {
        digits
    };
    let split = padded.len() - places;
    out.push_str(&padded[..split]);
    out.push('.');
    out.push_str(&padded[split..]);
    Some(out)
}

/// `r^e` for a non-negative integer exponent.
pub fn powu(r: &Rational, e: usize) -> Rational {
    num_traits::pow(r.clone(), e)
}
