//! Exact rational scalars.
//!
//! Every distance, probability and curvature in this crate is a [`Ratio`]:
//! an arbitrary-precision fraction kept in lowest terms with a positive
//! denominator. There is no floating-point path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Ratio = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct RatioParseError(pub String);

pub fn int(n: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn frac(num: i64, den: i64) -> Ratio {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Ratio {
    Ratio::zero()
}

pub fn one() -> Ratio {
    Ratio::one()
}

/// Parses `"3"`, `"-5/2"` or an exact decimal such as `"0.125"`.
pub fn parse_ratio(text: &str) -> Result<Ratio, RatioParseError> {
    let s = text.trim();
    let err = || RatioParseError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_int(n.trim()).ok_or_else(err)?;
        let d = parse_int(d.trim()).ok_or_else(err)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((whole, fractional)) = s.split_once('.') {
        if fractional.is_empty() || !fractional.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{whole_digits}{fractional}");
        let mut n = BigInt::from_str(&digits).map_err(|_| err())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), fractional.len());
        return Ok(Ratio::new(n, d));
    }
    parse_int(s).map(Ratio::from_integer).ok_or_else(err)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

/// Approximate value, for plotting output only.
pub fn to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of all denominators; multiplying by it makes every
/// value an integer.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Ratio>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn is_positive(r: &Ratio) -> bool {
    r.is_positive()
}

/// Integer power with a possibly negative exponent. Panics for `0^negative`.
pub fn pow(base: &Ratio, exp: i64) -> Ratio {
    let p = num_traits::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp < 0 {
        p.recip()
    } else {
        p
    }
}
