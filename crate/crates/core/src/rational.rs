//! Exact rational helpers.
//!
//! Every probability in this crate is a [`BigRational`], which num-rational
//! keeps reduced with a positive denominator. Fair-coin quantities are dyadic,
//! so the helpers here build them by shifting instead of running a gcd.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type ExactRational = BigRational;

/// `numer / 2^exp`, reduced.
pub fn dyadic(numer: BigUint, exp: u64) -> BigRational {
    if numer.is_zero() {
        return BigRational::zero();
    }
    let shift = numer.trailing_zeros().unwrap_or(0).min(exp);
    let numer = BigInt::from_biguint(Sign::Plus, numer >> shift);
    let denom = BigInt::one() << (exp - shift);
    BigRational::new_raw(numer, denom)
}

pub fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2u8))
}

pub fn from_u64(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn from_biguint(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from_biguint(Sign::Plus, v.clone()))
}

/// `2^-e`.
pub fn pow2_neg(e: u64) -> BigRational {
    BigRational::new_raw(BigInt::one(), BigInt::one() << e)
}

/// `10^-e`.
pub fn pow10_neg(e: u32) -> BigRational {
    BigRational::new_raw(BigInt::one(), num_traits::pow(BigInt::from(10u8), e as usize))
}

pub fn abs_diff(a: &BigRational, b: &BigRational) -> BigRational {
    (a - b).abs()
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3/8"`, `"7"`, `"-2"` or a plain decimal such as `"0.125"` into an
/// exact rational. Decimals are read digit by digit, never through `f64`.
pub fn parse_exact(input: &str) -> Result<BigRational> {
    let err = || Error::Parse {
        input: input.to_string(),
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| err())?;
    let denom = num_traits::pow(BigInt::from(10u8), frac_part.len());
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}
