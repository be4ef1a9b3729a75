use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::counts::RunSpec;
use crate::error::{Error, Result};
use crate::parallel::{fold_reduce, Execution};

/// Longest sequence length accepted by the exhaustive routines.
pub const EXHAUSTION_CAP: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Heads,
    Tails,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Heads => "h",
            Outcome::Tails => "t",
        })
    }
}

/// Reads a string such as `"hhth"`; `h`/`H` is heads, `t`/`T` is tails.
pub fn parse_outcomes(s: &str) -> Result<Vec<Outcome>> {
    s.chars()
        .map(|c| match c {
            'h' | 'H' => Ok(Outcome::Heads),
            't' | 'T' => Ok(Outcome::Tails),
            other => Err(Error::domain(format!("unexpected outcome {other:?} in {s:?}"))),
        })
        .collect()
}

/// 1-based index of the trial that completes the first run of `k` heads.
pub fn first_run_index(sequence: &[Outcome], k: u32) -> Option<usize> {
    let mut run = 0u32;
    for (i, outcome) in sequence.iter().enumerate() {
        match outcome {
            Outcome::Heads => {
                run += 1;
                if run == k {
                    return Some(i + 1);
                }
            }
            Outcome::Tails => run = 0,
        }
    }
    None
}

/// Same as [`first_run_index`] for a sequence packed as bits: bit `i` is
/// trial `i + 1`, set for heads.
pub fn first_run_index_bits(bits: u64, len: u32, k: u32) -> Option<u32> {
    let mut run = 0u32;
    for i in 0..len {
        if (bits >> i) & 1 == 1 {
            run += 1;
            if run == k {
                return Some(i + 1);
            }
        } else {
            run = 0;
        }
    }
    None
}

fn check_cap(n: u32) -> Result<()> {
    if n > EXHAUSTION_CAP {
        return Err(Error::ExhaustionCap {
            n,
            cap: EXHAUSTION_CAP,
        });
    }
    Ok(())
}

/// Counts the length-`n` sequences whose first k-run ends at trial `n`, by
/// checking all `2^n` of them.
pub fn enumerate_counts(spec: RunSpec, n: u32) -> Result<BigUint> {
    enumerate_counts_with(spec, n, Execution::default())
}

pub fn enumerate_counts_with(spec: RunSpec, n: u32, exec: Execution) -> Result<BigUint> {
    check_cap(n)?;
    let k = spec.k();
    let hits = fold_reduce(
        exec,
        0..1u64 << n,
        || 0u64,
        |acc, bits| acc + u64::from(first_run_index_bits(bits, n, k) == Some(n)),
        |a, b| a + b,
    );
    Ok(BigUint::from(hits))
}

/// Where the first k-run ends across all `2^n` sequences of length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstRunHistogram {
    pub n: u32,
    /// `by_index[m]` sequences have their first k-run ending at trial `m`.
    pub by_index: Vec<u64>,
    /// Sequences with no k-run at all.
    pub no_run: u64,
}

impl FirstRunHistogram {
    pub fn total(&self) -> u64 {
        self.by_index.iter().sum::<u64>() + self.no_run
    }
}

pub fn enumerate_first_run_histogram(spec: RunSpec, n: u32) -> Result<FirstRunHistogram> {
    check_cap(n)?;
    let k = spec.k();
    let slots = n as usize + 2;
    let tally = fold_reduce(
        Execution::default(),
        0..1u64 << n,
        || vec![0u64; slots],
        |mut acc, bits| {
            match first_run_index_bits(bits, n, k) {
                Some(m) => acc[m as usize] += 1,
                None => acc[slots - 1] += 1,
            }
            acc
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    );
    let no_run = tally[slots - 1];
    let mut by_index = tally;
    by_index.truncate(slots - 1);
    Ok(FirstRunHistogram {
        n,
        by_index,
        no_run,
    })
}

/// `sum_{i=1}^{n} i * enumerate_counts(k, i) / 2^i`.
pub fn enumerate_truncated_expectation(spec: RunSpec, n: u32) -> Result<BigRational> {
    check_cap(n)?;
    let mut total = BigRational::zero();
    for i in 1..=n {
        let count = enumerate_counts(spec, i)?;
        if count.is_zero() {
            continue;
        }
        let numer = BigInt::from(count) * BigInt::from(i);
        total += BigRational::new(numer, BigInt::from(1u64 << i));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(k: u64) -> RunSpec {
        RunSpec::new(k).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn seq(s: &str) -> Vec<Outcome> {
        parse_outcomes(s).unwrap()
    }

    #[test]
    fn first_run_examples() {
        assert_eq!(first_run_index(&seq("hhth"), 2), Some(2));
        assert_eq!(first_run_index(&seq("hhtththttth"), 3), None);
        assert_eq!(first_run_index(&seq("tthh"), 2), Some(4));
        assert_eq!(first_run_index(&seq(""), 1), None);
        assert_eq!(first_run_index(&seq("TTH"), 1), Some(3));
    }

    #[test]
    fn parse_rejects_other_symbols() {
        assert!(parse_outcomes("hxt").is_err());
    }

    #[test]
    fn count_examples() {
        assert_eq!(enumerate_counts(spec(2), 4).unwrap(), BigUint::from(2u8));
        assert_eq!(enumerate_counts(spec(3), 3).unwrap(), BigUint::from(1u8));
        assert_eq!(enumerate_counts(spec(1), 6).unwrap(), BigUint::from(1u8));
        assert_eq!(enumerate_counts(spec(1), 0).unwrap(), BigUint::from(0u8));
    }

    #[test]
    fn the_two_k2_sequences_of_length_4() {
        let hits: Vec<String> = (0..16u64)
            .filter(|&b| first_run_index_bits(b, 4, 2) == Some(4))
            .map(|b| (0..4).map(|i| if (b >> i) & 1 == 1 { 'h' } else { 't' }).collect())
            .collect();
        let mut hits = hits;
        hits.sort();
        assert_eq!(hits, vec!["hthh", "tthh"]);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_counts(spec(2), 25),
            Err(Error::ExhaustionCap { n: 25, cap: 24 })
        );
        assert!(enumerate_truncated_expectation(spec(2), 25).is_err());
        assert!(enumerate_first_run_histogram(spec(2), 25).is_err());
    }

    #[test]
    fn truncated_expectation_examples() {
        assert_eq!(enumerate_truncated_expectation(spec(1), 2).unwrap(), q(1, 1));
        assert_eq!(enumerate_truncated_expectation(spec(2), 4).unwrap(), q(11, 8));
        assert_eq!(enumerate_truncated_expectation(spec(4), 3).unwrap(), q(0, 1));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        for k in 1..=4 {
            for n in 0..=14 {
                assert_eq!(
                    enumerate_counts_with(spec(k), n, Execution::Sequential).unwrap(),
                    enumerate_counts_with(spec(k), n, Execution::Parallel).unwrap()
                );
            }
        }
    }

    #[test]
    fn histogram_partitions_all_sequences() {
        for k in 1..=5u64 {
            for n in 0..=14u32 {
                let h = enumerate_first_run_histogram(spec(k), n).unwrap();
                assert_eq!(h.total(), 1u64 << n);
                for m in 1..=n {
                    // sequences whose first run ends at m, with the suffix free
                    let g = u64::try_from(enumerate_counts(spec(k), m).unwrap()).unwrap();
                    assert_eq!(h.by_index[m as usize], g << (n - m), "k={k} n={n} m={m}");
                }
            }
        }
    }

    fn outcomes() -> impl Strategy<Value = Vec<Outcome>> {
        prop::collection::vec(prop_oneof![Just(Outcome::Heads), Just(Outcome::Tails)], 0..64)
    }

    proptest! {
        #[test]
        fn first_run_index_is_in_range(s in outcomes(), k in 1u32..8) {
            if let Some(n) = first_run_index(&s, k) {
                prop_assert!(n >= k as usize);
                prop_assert!(n <= s.len());
                prop_assert!(s[n - k as usize..n].iter().all(|o| *o == Outcome::Heads));
                prop_assert_eq!(first_run_index(&s[..n - 1], k), None);
            }
        }

        #[test]
        fn bit_and_slice_scans_agree(s in outcomes(), k in 1u32..8) {
            let bits = s.iter().enumerate()
                .fold(0u64, |acc, (i, o)| acc | (u64::from(*o == Outcome::Heads) << i));
            prop_assert_eq!(
                first_run_index(&s, k).map(|n| n as u32),
                first_run_index_bits(bits, s.len() as u32, k)
            );
        }
    }
}
