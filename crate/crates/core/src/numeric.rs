//! Small exact-arithmetic helpers shared by the engine modules.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// `k!` as an arbitrary-precision integer.
pub fn factorial(k: usize) -> BigInt {
    if k <= 20 {
        return BigInt::from((1..=k as u64).product::<u64>());
    }
    (21..=k as u64).fold(factorial(20), |acc, i| acc * i)
}

/// `(from+1)(from+2)···(to)`; 1 when `to <= from`.
pub fn rising_product(from: usize, to: usize) -> BigInt {
    (from + 1..=to).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational number '{0}'")]
pub struct RationalParseError(pub String);

/// Parses `7`, `-3/4` or a finite decimal such as `1.25` / `-0.5` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, RationalParseError> {
    let err = || RationalParseError(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if frac_part.is_empty() && int_digits.is_empty()
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
            || !int_digits.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(err());
        }
        let digits = format!("{}{}", int_digits, frac_part);
        let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        let value = BigRational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| err())
}

/// Decimal rendering of an exact rational, correctly rounded (half away from
/// zero) to `digits` significant digits. Uses plain notation for moderate
/// magnitudes and scientific notation otherwise.
pub fn format_significant(value: &BigRational, digits: usize) -> String {
    assert!(digits >= 1);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let abs = value.abs();
    // Find exponent e with 10^e <= abs < 10^(e+1).
    let ten = BigInt::from(10);
    let mut exponent: i64 = (abs.numer().to_string().len() as i64) - (abs.denom().to_string().len() as i64);
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    while abs < pow10(exponent) {
        exponent -= 1;
    }
    while abs >= pow10(exponent + 1) {
        exponent += 1;
    }
    // mantissa digits: round(abs * 10^(digits-1-exponent))
    let scaled = &abs * pow10(digits as i64 - 1 - exponent);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = q;
    if BigInt::from(2) * r >= *scaled.denom() {
        mantissa += 1;
    }
    let mut mantissa_str = mantissa.to_string();
    if mantissa_str.len() > digits {
        // rounding carried into a new digit (e.g. 9.99 -> 10.0)
        exponent += 1;
        mantissa_str.truncate(digits);
    }
    let sign = if negative { "-" } else { "" };
    let point = exponent + 1; // number of digits before the decimal point
    let body = if (-5..=21).contains(&point) {
        if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), mantissa_str)
        } else if point as usize >= mantissa_str.len() {
            format!("{}{}", mantissa_str, "0".repeat(point as usize - mantissa_str.len()))
        } else {
            let (a, b) = mantissa_str.split_at(point as usize);
            format!("{}.{}", a, b)
        }
    } else {
        let (a, b) = mantissa_str.split_at(1);
        format!("{}.{}e{}", a, b, exponent)
    };
    let body = if body.contains('.') && !body.contains('e') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    format!("{}{}", sign, body)
}
