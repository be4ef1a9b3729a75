//! Exact law of the trial count at which the first k-run completes, for a
//! fair coin: `p(n) = g(n, k) / 2^n`.
//!
//! Partial sums are carried as integer numerators over `2^n` and reduced only
//! when a value is handed out.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use crate::counts::{CountTable, RunSpec};
use crate::error::{Error, Result};
use crate::rational::dyadic;

/// One row of the probability table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PmfRow {
    pub n: usize,
    pub count: BigUint,
    pub mass: BigRational,
    pub cumulative: BigRational,
}

fn require_positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(format!("{what} must be at least 1")));
    }
    Ok(())
}

fn require_covered(table: &CountTable, n: usize) -> Result<()> {
    if n > table.n_max() {
        return Err(Error::domain(format!(
            "count table only reaches n = {}, need n = {n}",
            table.n_max()
        )));
    }
    Ok(())
}

/// `p(n) = g(n, k) / 2^n`.
pub fn pmf(spec: RunSpec, n: usize) -> Result<BigRational> {
    require_positive(n, "n")?;
    let table = CountTable::build(spec, n)?;
    Ok(dyadic(table.values()[n].clone(), n as u64))
}

pub fn pmf_table(spec: RunSpec, n_max: usize) -> Result<Vec<PmfRow>> {
    require_positive(n_max, "n_max")?;
    pmf_rows(&CountTable::build(spec, n_max)?, n_max)
}

/// Rows `1..=n_max` from an existing table.
pub fn pmf_rows(table: &CountTable, n_max: usize) -> Result<Vec<PmfRow>> {
    require_positive(n_max, "n_max")?;
    require_covered(table, n_max)?;
    let mut cumulative = BigUint::ZERO;
    let mut rows = Vec::with_capacity(n_max);
    for (n, count) in table.values().iter().enumerate().take(n_max + 1).skip(1) {
        cumulative = (cumulative << 1u8) + count;
        rows.push(PmfRow {
            n,
            count: count.clone(),
            mass: dyadic(count.clone(), n as u64),
            cumulative: dyadic(cumulative.clone(), n as u64),
        });
    }
    Ok(rows)
}

/// `p(chi <= n_max)`.
pub fn cdf_from(table: &CountTable, n_max: usize) -> Result<BigRational> {
    require_covered(table, n_max)?;
    let numer = table
        .values()
        .iter()
        .take(n_max + 1)
        .fold(BigUint::ZERO, |acc, g| (acc << 1u8) + g);
    Ok(dyadic(numer, n_max as u64))
}

/// `sum_{i=1}^{n_max} i g(i, k) / 2^i`.
pub fn truncated_expectation(spec: RunSpec, n_max: usize) -> Result<BigRational> {
    require_positive(n_max, "n_max")?;
    truncated_expectation_from(&CountTable::build(spec, n_max)?, n_max)
}

pub fn truncated_expectation_from(table: &CountTable, n_max: usize) -> Result<BigRational> {
    require_positive(n_max, "n_max")?;
    require_covered(table, n_max)?;
    let numer = table
        .values()
        .iter()
        .enumerate()
        .take(n_max + 1)
        .fold(BigUint::ZERO, |acc, (i, g)| (acc << 1u8) + g * BigUint::from(i));
    Ok(dyadic(numer, n_max as u64))
}

/// `1 - p(chi <= n_max)`.
pub fn tail_mass(spec: RunSpec, n_max: usize) -> Result<BigRational> {
    require_positive(n_max, "n_max")?;
    tail_mass_from(&CountTable::build(spec, n_max)?, n_max)
}

pub fn tail_mass_from(table: &CountTable, n_max: usize) -> Result<BigRational> {
    require_positive(n_max, "n_max")?;
    Ok(BigRational::one() - cdf_from(table, n_max)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::pow10_neg;
    use num_bigint::BigInt;
    use num_traits::{Signed, Zero};
    use proptest::prelude::*;

    fn spec(k: u64) -> RunSpec {
        RunSpec::new(k).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn pmf_examples() {
        assert_eq!(pmf(spec(3), 3).unwrap(), q(1, 8));
        assert_eq!(pmf(spec(3), 2).unwrap(), q(0, 1));
        assert_eq!(pmf(spec(2), 4).unwrap(), q(1, 8));
        assert!(pmf(spec(2), 0).is_err());
    }

    #[test]
    fn pmf_table_examples() {
        let rows = pmf_table(spec(1), 3).unwrap();
        let masses: Vec<_> = rows.iter().map(|r| r.mass.clone()).collect();
        let cum: Vec<_> = rows.iter().map(|r| r.cumulative.clone()).collect();
        assert_eq!(masses, vec![q(1, 2), q(1, 4), q(1, 8)]);
        assert_eq!(cum, vec![q(1, 2), q(3, 4), q(7, 8)]);

        let rows = pmf_table(spec(2), 4).unwrap();
        let masses: Vec<_> = rows.iter().map(|r| r.mass.clone()).collect();
        let cum: Vec<_> = rows.iter().map(|r| r.cumulative.clone()).collect();
        assert_eq!(masses, vec![q(0, 1), q(1, 4), q(1, 8), q(1, 8)]);
        assert_eq!(cum, vec![q(0, 1), q(1, 4), q(3, 8), q(1, 2)]);

        let rows = pmf_table(spec(5), 4).unwrap();
        assert!(rows.iter().all(|r| r.mass.is_zero() && r.cumulative.is_zero()));
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn truncated_expectation_examples() {
        assert_eq!(truncated_expectation(spec(1), 1).unwrap(), q(1, 2));
        assert_eq!(truncated_expectation(spec(1), 10).unwrap(), q(509, 256));
        let direct: BigRational = (1..=10i64).map(|i| q(i, 1i64 << i)).sum();
        assert_eq!(direct, q(509, 256));
        // the Fibonacci tail still carries about 0.07 of the mean at n = 30
        let e2 = truncated_expectation(spec(2), 30).unwrap();
        assert_eq!(q(6, 1) - e2, q(19_188_761, 1 << 28));
        let e2 = truncated_expectation(spec(2), 60).unwrap();
        assert!((e2 - q(6, 1)).abs() < pow10_neg(3));
    }

    #[test]
    fn tail_mass_examples() {
        assert_eq!(tail_mass(spec(1), 4).unwrap(), q(1, 16));
        assert_eq!(tail_mass(spec(3), 2).unwrap(), q(1, 1));
        // 1 - (0 + 1/4 + 1/8 + 2/16 + 3/32 + 5/64 + 8/128 + 13/256 + 21/512 + 34/1024)
        assert_eq!(tail_mass(spec(2), 10).unwrap(), q(9, 64));
    }

    #[test]
    fn table_shorter_than_request() {
        let t = CountTable::build(spec(2), 5).unwrap();
        assert!(pmf_rows(&t, 6).is_err());
        assert!(truncated_expectation_from(&t, 6).is_err());
    }

    proptest! {
        #[test]
        fn rows_are_consistent(k in 1u64..=8, n_max in 1usize..120) {
            let rows = pmf_table(spec(k), n_max).unwrap();
            let mut running = BigRational::zero();
            let one = BigRational::one();
            for row in &rows {
                let denom = BigInt::one() << row.n;
                prop_assert_eq!(&row.mass, &BigRational::new(BigInt::from(row.count.clone()), denom.clone()));
                prop_assert!((&denom % row.mass.denom()).is_zero());
                prop_assert!(row.mass >= BigRational::zero() && row.mass <= one);
                running += &row.mass;
                prop_assert_eq!(&row.cumulative, &running);
                prop_assert!(row.cumulative < one);
            }
            let tail = tail_mass(spec(k), n_max).unwrap();
            prop_assert_eq!(tail, &one - &running);
        }

        #[test]
        fn expectation_monotone_and_bounded(k in 1u64..=8, n_max in 1usize..150) {
            let a = truncated_expectation(spec(k), n_max).unwrap();
            let b = truncated_expectation(spec(k), n_max + 1).unwrap();
            prop_assert!(a <= b);
            let bound = BigRational::from_integer(BigInt::from(2u64 * ((1u64 << k) - 1)));
            prop_assert!(b < bound);
            if n_max >= k as usize {
                let t0 = tail_mass(spec(k), n_max).unwrap();
                let t1 = tail_mass(spec(k), n_max + 1).unwrap();
                prop_assert!(t1 < t0);
                prop_assert!(t1 > BigRational::zero());
            }
        }
    }
}
