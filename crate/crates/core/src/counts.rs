//! Tables of `g(n, k)`: the number of head/tail sequences of length `n` whose
//! first run of `k` consecutive heads ends exactly at trial `n`.
//!
//! The values obey the k-step Fibonacci recurrence
//! `g(n, k) = g(n-1, k) + ... + g(n-k, k)` for `n > k`, with `g(n, k) = 0`
//! for `n < k` (including `n = 0`) and `g(k, k) = 1`.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest accepted run length.
pub const K_MAX: u32 = 64;

/// Largest accepted `n_max` for a count table.
pub const DEFAULT_TABLE_CAP: usize = 100_000;

/// A validated run length `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RunSpec {
    k: u32,
}

impl RunSpec {
    pub fn new(k: u64) -> Result<Self> {
        if k == 0 || k > u64::from(K_MAX) {
            return Err(Error::InvalidRunLength { k, max: K_MAX });
        }
        Ok(RunSpec { k: k as u32 })
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub(crate) fn k_usize(self) -> usize {
        self.k as usize
    }
}

/// Exact values `g(0, k) ..= g(n_max, k)`.
///
/// Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    spec: RunSpec,
    values: Vec<BigUint>,
}

impl CountTable {
    /// Builds the table with [`DEFAULT_TABLE_CAP`].
    pub fn build(spec: RunSpec, n_max: usize) -> Result<Self> {
        Self::build_with_cap(spec, n_max, DEFAULT_TABLE_CAP)
    }

    /// Single forward pass keeping the sum of the last `k` entries, so each
    /// new entry costs two bigint additions regardless of `k`.
    pub fn build_with_cap(spec: RunSpec, n_max: usize, cap: usize) -> Result<Self> {
        if n_max > cap {
            return Err(Error::Capacity {
                requested: n_max,
                cap,
            });
        }
        let k = spec.k_usize();
        let mut values: Vec<BigUint> = Vec::with_capacity(n_max + 1);
        // sum of values[n+1-k ..= n] after step n
        let mut window = BigUint::zero();
        for n in 0..=n_max {
            let v = match n.cmp(&k) {
                std::cmp::Ordering::Less => BigUint::zero(),
                std::cmp::Ordering::Equal => BigUint::one(),
                std::cmp::Ordering::Greater => window.clone(),
            };
            window += &v;
            if n >= k {
                window -= &values[n - k];
            }
            values.push(v);
        }
        Ok(CountTable { spec, values })
    }

    pub fn spec(&self) -> RunSpec {
        self.spec
    }

    pub fn k(&self) -> u32 {
        self.spec.k
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.values.get(n)
    }
}

pub fn build_count_table(spec: RunSpec, n_max: usize) -> Result<CountTable> {
    CountTable::build(spec, n_max)
}

/// `g(n, k)`.
pub fn count_at(spec: RunSpec, n: usize) -> Result<BigUint> {
    let mut table = CountTable::build(spec, n)?;
    Ok(table.values.swap_remove(n))
}

/// The finite ratios `g(i+1, k) / (2 g(i, k))` for `i = k .. n_max - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioDiagnostic {
    spec: RunSpec,
    ratios: Vec<BigRational>,
}

impl RatioDiagnostic {
    /// Index `i` of the first ratio.
    pub fn first_index(&self) -> usize {
        self.spec.k_usize()
    }

    /// First index from which every ratio is strictly below one.
    ///
    /// For `k < i < 2k` the ratio is exactly one, since
    /// `g(i+1) = 2 g(i) - g(i-k)` and `g(i-k) = 0` there.
    pub fn strict_from(&self) -> usize {
        2 * self.spec.k_usize()
    }

    pub fn ratios(&self) -> &[BigRational] {
        &self.ratios
    }

    /// `(i, ratio)` pairs.
    pub fn indexed(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        let first = self.first_index();
        self.ratios.iter().enumerate().map(move |(j, r)| (first + j, r))
    }

    /// Whether every ratio with `i >= 2k` is strictly below one.
    pub fn strict_tail_holds(&self) -> bool {
        let one = BigRational::one();
        let strict_from = self.strict_from();
        self.indexed()
            .filter(|(i, _)| *i >= strict_from)
            .all(|(_, r)| *r < one)
    }

    /// Whether every ratio is at most one.
    pub fn bounded_by_one(&self) -> bool {
        let one = BigRational::one();
        self.ratios.iter().all(|r| *r <= one)
    }
}

pub fn ratio_diagnostic(spec: RunSpec, n_max: usize) -> Result<RatioDiagnostic> {
    let k = spec.k_usize();
    if n_max <= k {
        return Err(Error::domain(format!(
            "ratio diagnostic needs n_max > k (k = {k}, n_max = {n_max})"
        )));
    }
    let table = CountTable::build(spec, n_max)?;
    let ratios = (k..n_max)
        .map(|i| {
            let num = BigInt::from_biguint(Sign::Plus, table.values[i + 1].clone());
            let den = BigInt::from_biguint(Sign::Plus, &table.values[i] << 1u8);
            BigRational::new(num, den)
        })
        .collect();
    Ok(RatioDiagnostic { spec, ratios })
}
