//! Exact scalars, outward-rounded intervals and enclosures of transcendental constants.

mod constants;
mod dyadic;
mod interval;
mod ratbox;

pub use constants::{enclose_constant, ConstantName};
pub use dyadic::Dyadic;
pub use interval::Interval;
pub use ratbox::{rational_to_string, serde_rational, RatBox};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Exact rational scalar; always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Default mantissa budget for interval endpoints.
pub const DEFAULT_PREC: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("malformed interval: lo > hi")]
    Inverted,
    #[error("cannot parse number `{0}`")]
    Parse(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"3"`, `"-7/4"` or a decimal such as `"2.51"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, NumericError> {
    let s = s.trim();
    let err = || NumericError::Parse(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, body) = match mant.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| err())?
    };
    let ten = BigInt::from(10);
    let shift = exp - frac_part.len() as i32;
    let mut q = if shift >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, shift as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-shift) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Render a rational as a decimal with `digits` fractional digits, rounding
/// toward `-inf` when `up` is false and toward `+inf` when it is true.
pub fn format_decimal(q: &Rational, digits: usize, up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = q * Rational::from_integer(scale.clone());
    let v = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let neg = v.is_negative();
    let a = v.abs();
    let int = &a / &scale;
    let frac = &a % &scale;
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}

/// Best-effort float view of a rational, for display and heuristics only.
pub fn rational_to_f64(q: &Rational) -> f64 {
    let d = Dyadic::round_rational_down(q, 60);
    d.to_f64()
}
