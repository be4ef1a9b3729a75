//! Seeded Monte Carlo estimate of the waiting time for a k-run.
//!
//! Trials are split into fixed-size partitions. Partition `p` draws from
//! ChaCha8 seeded with `seed` on stream `p`, and partition summaries are exact
//! integer sums, so a report depends only on the config and never on the
//! number of worker threads.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::counts::RunSpec;
use crate::error::{Error, Result};
use crate::parallel::{map_reduce, Execution};
use crate::rational::half;

pub const TRIALS_PER_PARTITION: u64 = 4096;

/// Identifier of the random stream construction, echoed in every report.
pub const RNG_ALGORITHM: &str =
    "chacha8(seed_from_u64(seed), stream=partition, 4096 trials/partition)";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub spec: RunSpec,
    pub success_prob: BigRational,
    pub trials: u64,
    pub seed: u64,
    pub max_steps_per_trial: u64,
}

impl SimConfig {
    /// Fair coin with the default step cap `1000 * 2^k` (saturating).
    pub fn fair(spec: RunSpec, trials: u64, seed: u64) -> Self {
        SimConfig {
            spec,
            success_prob: half(),
            trials,
            seed,
            max_steps_per_trial: Self::default_max_steps(spec),
        }
    }

    pub fn default_max_steps(spec: RunSpec) -> u64 {
        1u64.checked_shl(spec.k())
            .and_then(|p| p.checked_mul(1000))
            .unwrap_or(u64::MAX)
    }

    pub fn with_success_prob(mut self, p: BigRational) -> Self {
        self.success_prob = p;
        self
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps_per_trial = max_steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.success_prob.is_positive() || self.success_prob >= BigRational::one() {
            return Err(Error::Config(format!(
                "success probability must lie in (0, 1), got {}",
                self.success_prob
            )));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.max_steps_per_trial < u64::from(self.spec.k()) {
            return Err(Error::Config(format!(
                "max_steps_per_trial ({}) must be at least k ({})",
                self.max_steps_per_trial,
                self.spec.k()
            )));
        }
        Ok(())
    }

    pub fn is_fair(&self) -> bool {
        self.success_prob == half()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub k: u32,
    pub success_prob: String,
    pub trials: u64,
    pub completed_trials: u64,
    pub truncated_trials: u64,
    /// `None` when no trial completed.
    pub sample_mean: Option<f64>,
    /// Unbiased; `None` with fewer than two completed trials.
    pub sample_variance: Option<f64>,
    pub max_steps_per_trial: u64,
    pub seed: u64,
    pub rng_algorithm: &'static str,
}

impl SimReport {
    pub fn standard_error(&self) -> Option<f64> {
        let var = self.sample_variance?;
        Some((var / self.completed_trials as f64).sqrt())
    }

    /// `3 * s / sqrt(n)`.
    pub fn three_sigma_band(&self) -> Option<f64> {
        self.standard_error().map(|se| 3.0 * se)
    }

    /// Whether `target` lies strictly inside `mean +/- 3 s / sqrt(n)`.
    pub fn within_three_sigma(&self, target: f64) -> bool {
        match (self.sample_mean, self.three_sigma_band()) {
            (Some(mean), Some(band)) => (mean - target).abs() < band,
            _ => false,
        }
    }
}

/// Per-partition tallies. Step counts are exact integers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    completed: u64,
    truncated: u64,
    sum: u128,
    sum_sq: u128,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            completed: self.completed + other.completed,
            truncated: self.truncated + other.truncated,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }
}

enum Coin {
    /// Consumes one random bit per toss.
    Fair { bits: u64, left: u32 },
    /// Heads when a uniform 64-bit draw falls below `floor(p * 2^64)`.
    Threshold(u64),
}

struct CoinSource {
    rng: ChaCha8Rng,
    coin: Coin,
}

impl CoinSource {
    fn new(seed: u64, partition: u64, threshold: Option<u64>) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(partition);
        let coin = match threshold {
            None => Coin::Fair { bits: 0, left: 0 },
            Some(t) => Coin::Threshold(t),
        };
        CoinSource { rng, coin }
    }

    #[inline]
    fn heads(&mut self) -> bool {
        match &mut self.coin {
            Coin::Fair { bits, left } => {
                if *left == 0 {
                    *bits = self.rng.next_u64();
                    *left = 64;
                }
                let h = *bits & 1 == 1;
                *bits >>= 1;
                *left -= 1;
                h
            }
            Coin::Threshold(t) => self.rng.next_u64() < *t,
        }
    }

    /// Tosses until `k` heads in a row or the cap; returns the trial count.
    fn run_trial(&mut self, k: u32, max_steps: u64) -> Option<u64> {
        let mut run = 0u32;
        for step in 1..=max_steps {
            if self.heads() {
                run += 1;
                if run == k {
                    return Some(step);
                }
            } else {
                run = 0;
            }
        }
        None
    }
}

fn threshold(p: &BigRational) -> u64 {
    let scaled: BigInt = (p.numer() << 64u32) / p.denom();
    scaled.to_u64().unwrap_or(u64::MAX)
}

fn run_partition(config: &SimConfig, threshold: Option<u64>, partition: u64) -> Tally {
    let start = partition * TRIALS_PER_PARTITION;
    let end = (start + TRIALS_PER_PARTITION).min(config.trials);
    let mut source = CoinSource::new(config.seed, partition, threshold);
    let k = config.spec.k();
    let mut tally = Tally::default();
    for _ in start..end {
        match source.run_trial(k, config.max_steps_per_trial) {
            Some(steps) => {
                let s = u128::from(steps);
                tally.completed += 1;
                tally.sum += s;
                tally.sum_sq += s * s;
            }
            None => tally.truncated += 1,
        }
    }
    tally
}

pub fn simulate(config: &SimConfig) -> Result<SimReport> {
    simulate_with(config, Execution::default())
}

pub fn simulate_with(config: &SimConfig, exec: Execution) -> Result<SimReport> {
    config.validate()?;
    let threshold = (!config.is_fair()).then(|| threshold(&config.success_prob));
    let partitions = config.trials.div_ceil(TRIALS_PER_PARTITION);
    let tally = map_reduce(
        exec,
        0..partitions,
        |p| run_partition(config, threshold, p),
        Tally::default,
        Tally::merge,
    );
    Ok(report(config, tally))
}

fn report(config: &SimConfig, tally: Tally) -> SimReport {
    let n = BigInt::from(tally.completed);
    let sum = BigInt::from(BigUint::from(tally.sum));
    let sum_sq = BigInt::from(BigUint::from(tally.sum_sq));
    let sample_mean = (!n.is_zero())
        .then(|| BigRational::new(sum.clone(), n.clone()).to_f64())
        .flatten();
    let sample_variance = (tally.completed >= 2)
        .then(|| {
            let numer = &n * sum_sq - &sum * &sum;
            let denom = &n * (&n - 1);
            BigRational::new(numer, denom).to_f64()
        })
        .flatten();
    SimReport {
        k: config.spec.k(),
        success_prob: config.success_prob.to_string(),
        trials: config.trials,
        completed_trials: tally.completed,
        truncated_trials: tally.truncated,
        sample_mean,
        sample_variance,
        max_steps_per_trial: config.max_steps_per_trial,
        seed: config.seed,
        rng_algorithm: RNG_ALGORITHM,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(k: u64) -> RunSpec {
        RunSpec::new(k).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn validation() {
        let base = SimConfig::fair(spec(2), 10, 1);
        assert!(base.validate().is_ok());
        for p in [q(0, 1), q(1, 1), q(3, 2), q(-1, 2)] {
            assert!(base.clone().with_success_prob(p).validate().is_err());
        }
        assert!(SimConfig::fair(spec(2), 0, 1).validate().is_err());
        assert!(base.clone().with_max_steps(1).validate().is_err());
        assert!(base.with_max_steps(2).validate().is_ok());
    }

    #[test]
    fn default_cap_saturates() {
        assert_eq!(SimConfig::default_max_steps(spec(1)), 2000);
        assert_eq!(SimConfig::default_max_steps(spec(64)), u64::MAX);
        assert_eq!(SimConfig::default_max_steps(spec(60)), u64::MAX);
    }

    #[test]
    fn single_trial_accounting() {
        let cfg = SimConfig::fair(spec(1), 1, 9).with_max_steps(1);
        let r = simulate(&cfg).unwrap();
        assert_eq!(r.completed_trials + r.truncated_trials, 1);
        let r = simulate(&SimConfig::fair(spec(1), 1, 9)).unwrap();
        assert_eq!(r.completed_trials, 1);
        assert_eq!(r.sample_variance, None);
    }

    #[test]
    fn deterministic_across_execution_modes() {
        let cfg = SimConfig::fair(spec(3), 20_000, 11);
        let a = simulate_with(&cfg, Execution::Sequential).unwrap();
        let b = simulate_with(&cfg, Execution::Parallel).unwrap();
        let c = simulate(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let other = simulate(&SimConfig::fair(spec(3), 20_000, 12)).unwrap();
        assert_ne!(a.sample_mean, other.sample_mean);
    }

    #[test]
    fn tight_cap_truncates() {
        let r = simulate(&SimConfig::fair(spec(4), 5000, 3).with_max_steps(4)).unwrap();
        assert_eq!(r.completed_trials + r.truncated_trials, 5000);
        assert!(r.truncated_trials > 0);
        assert_eq!(r.sample_mean, Some(4.0));
    }

    #[test]
    fn mean_at_least_k_without_truncation() {
        let r = simulate(&SimConfig::fair(spec(5), 3000, 5)).unwrap();
        assert_eq!(r.truncated_trials, 0);
        assert!(r.sample_mean.unwrap() >= 5.0);
    }

    #[test]
    fn threshold_matches_probability() {
        assert_eq!(threshold(&q(1, 2)), 1u64 << 63);
        assert_eq!(threshold(&q(1, 4)), 1u64 << 62);
        assert_eq!(threshold(&q(3, 4)), 3u64 << 62);
    }

    #[test]
    fn biased_coin_k1_is_geometric() {
        // mean of a geometric variable with p = 1/4 is 4
        let cfg = SimConfig::fair(spec(1), 200_000, 21).with_success_prob(q(1, 4));
        let r = simulate(&cfg).unwrap();
        assert!(r.within_three_sigma(4.0), "{r:?}");
    }
}
