//! The generating function `y(r) = sum_i g(i, k) r^i` in closed form,
//!
//! ```text
//! y(r)  = r^k (1 - r) / (1 - 2r + r^(k+1))
//! y'(r) = r^(k-1) (-r^(k+1) + 2k r^2 - 3k r + k + r) / (1 - 2r + r^(k+1))^2
//! ```
//!
//! and the expectation `E = y'(1/2) / 2 = 2 (2^k - 1)`.
//!
//! `y` and `y'` are analytic functions of `r` on `(0, 1)`. Only at `r = 1/2`
//! do they carry probabilistic meaning, so [`expectation`] takes no `r`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::counts::{CountTable, RunSpec};
use crate::error::{Error, Result};
use crate::rational::{from_biguint, from_u64, half};

/// A full evaluation of the closed forms at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenFuncEval {
    pub k: u32,
    pub r: BigRational,
    pub y: BigRational,
    pub y_prime: BigRational,
    /// `1 - 2r + r^(k+1)`
    pub denominator_core: BigRational,
}

impl GenFuncEval {
    pub fn evaluate(spec: RunSpec, r: &BigRational) -> Result<Self> {
        let denominator_core = checked_denominator(spec, r)?;
        Ok(GenFuncEval {
            k: spec.k(),
            r: r.clone(),
            y: y_with(spec, r, &denominator_core),
            y_prime: y_prime_with(spec, r, &denominator_core),
            denominator_core,
        })
    }

    /// Recomputes `y` from the stored fields.
    pub fn is_consistent(&self) -> bool {
        let k = self.k as i32;
        !self.denominator_core.is_zero()
            && self.y == self.r.clone().pow(k) * (BigRational::one() - &self.r) / &self.denominator_core
    }
}

fn rpow(r: &BigRational, e: u32) -> BigRational {
    // num-rational uses binary exponentiation
    Pow::pow(r, e)
}

/// `1 - 2r + r^(k+1)`, with no domain checks.
pub fn denominator_core(spec: RunSpec, r: &BigRational) -> BigRational {
    BigRational::one() - r * BigInt::from(2u8) + rpow(r, spec.k() + 1)
}

fn check_domain(r: &BigRational) -> Result<()> {
    if !r.is_positive() || *r >= BigRational::one() {
        return Err(Error::domain(format!("r must lie in (0, 1), got {r}")));
    }
    Ok(())
}

fn checked_denominator(spec: RunSpec, r: &BigRational) -> Result<BigRational> {
    check_domain(r)?;
    let d = denominator_core(spec, r);
    if d.is_zero() {
        return Err(Error::Singularity {
            r: r.to_string(),
            denominator: d.to_string(),
        });
    }
    Ok(d)
}

fn y_with(spec: RunSpec, r: &BigRational, d: &BigRational) -> BigRational {
    rpow(r, spec.k()) * (BigRational::one() - r) / d
}

fn y_prime_with(spec: RunSpec, r: &BigRational, d: &BigRational) -> BigRational {
    let k = spec.k();
    let kq = from_u64(u64::from(k));
    let inner = -rpow(r, k + 1) + &kq * BigInt::from(2u8) * r * r - &kq * BigInt::from(3u8) * r
        + &kq
        + r;
    rpow(r, k - 1) * inner / (d * d)
}

/// `y(r)` for `0 < r < 1`.
pub fn eval_y(spec: RunSpec, r: &BigRational) -> Result<BigRational> {
    let d = checked_denominator(spec, r)?;
    Ok(y_with(spec, r, &d))
}

/// `y'(r)` from the simplified closed form.
pub fn eval_y_prime(spec: RunSpec, r: &BigRational) -> Result<BigRational> {
    let d = checked_denominator(spec, r)?;
    Ok(y_prime_with(spec, r, &d))
}

/// `y'(r)` by the quotient rule applied to `y = N / D` with
/// `N = r^k (1 - r)` and `D = 1 - 2r + r^(k+1)`.
pub fn eval_y_prime_quotient_rule(spec: RunSpec, r: &BigRational) -> Result<BigRational> {
    let d = checked_denominator(spec, r)?;
    let k = spec.k();
    let kq = from_u64(u64::from(k));
    let one = BigRational::one();
    let rk = rpow(r, k);
    let n = &rk * (&one - r);
    let dn = &kq * rpow(r, k - 1) * (&one - r) - &rk;
    let dd = from_u64(u64::from(k) + 1) * &rk - from_u64(2);
    Ok((dn * &d - n * dd) / (&d * &d))
}

/// `E = y'(1/2) / 2`.
pub fn expectation(spec: RunSpec) -> BigRational {
    let r = half();
    // the denominator at 1/2 is 2^-(k+1)
    let d = denominator_core(spec, &r);
    let e = y_prime_with(spec, &r, &d) * &r;
    debug_assert_eq!(
        Some(&e * BigInt::from(2u8)),
        eval_y_prime_quotient_rule(spec, &r).ok()
    );
    e
}

/// `2 (2^k - 1)`.
pub fn expectation_closed_form(spec: RunSpec) -> BigRational {
    let pow: BigInt = BigInt::one() << spec.k();
    BigRational::from_integer((pow - 1) * 2)
}

fn check_series_point(spec: RunSpec, r: &BigRational, n_max: usize) -> Result<()> {
    if !r.is_positive() || *r > half() {
        return Err(Error::domain(format!(
            "series comparison needs 0 < r <= 1/2, got {r}"
        )));
    }
    if n_max < spec.k() as usize {
        return Err(Error::domain(format!(
            "series comparison needs n_max >= k (k = {}, n_max = {n_max})",
            spec.k()
        )));
    }
    Ok(())
}

/// `sum_{i=k}^{n_max} g(i, k) r^i`, accumulated as one integer numerator over
/// `b^n_max` for `r = a / b`.
pub fn partial_series(table: &CountTable, r: &BigRational, n_max: usize) -> Result<BigRational> {
    if n_max > table.n_max() {
        return Err(Error::domain(format!(
            "count table only reaches n = {}, need n = {n_max}",
            table.n_max()
        )));
    }
    let a = r.numer();
    let b = r.denom();
    let mut acc = BigInt::zero();
    let mut apow = BigInt::one();
    for (i, g) in table.values().iter().enumerate().take(n_max + 1) {
        if i > 0 {
            apow *= a;
            acc *= b;
        }
        if !g.is_zero() {
            acc += BigInt::from(g.clone()) * &apow;
        }
    }
    Ok(BigRational::new(acc, Pow::pow(b, n_max)))
}

/// `|sum_{i=k}^{n_max} g(i, k) r^i - y(r)|` for `0 < r <= 1/2`.
pub fn series_matches_closed_form(
    spec: RunSpec,
    r: &BigRational,
    n_max: usize,
) -> Result<BigRational> {
    check_series_point(spec, r, n_max)?;
    let y = eval_y(spec, r)?;
    let table = CountTable::build(spec, n_max)?;
    Ok((partial_series(&table, r, n_max)? - y).abs())
}

/// The exact remainder `sum_{i>n} g(i, k) r^i` for `n >= k` and
/// `0 < r <= 1/2`, from the last `k` table entries alone.
///
/// Shifting the remainder by `r^m` for `m = 1..=k` and applying the
/// recurrence term by term gives
/// `T (1 - r - ... - r^k) = sum_m r^m sum_{j=n-m+1}^{n} g(j, k) r^j`.
pub fn series_tail(table: &CountTable, r: &BigRational, n: usize) -> Result<BigRational> {
    let spec = table.spec();
    check_series_point(spec, r, n)?;
    if n > table.n_max() {
        return Err(Error::domain(format!(
            "count table only reaches n = {}, need n = {n}",
            table.n_max()
        )));
    }
    let k = spec.k() as usize;
    let values = table.values();
    let mut boundary = BigRational::zero();
    let mut r_m = BigRational::one();
    let mut geometric = BigRational::zero();
    for m in 1..=k {
        r_m *= r;
        geometric += &r_m;
        let mut inner = BigRational::zero();
        for (j, g) in values.iter().enumerate().take(n + 1).skip(n + 1 - m) {
            inner += from_biguint(g) * rpow(r, j as u32);
        }
        boundary += &r_m * inner;
    }
    Ok(boundary / (BigRational::one() - geometric))
}
