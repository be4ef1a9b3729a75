//! Exact waiting-time statistics for the first run of `k` consecutive heads
//! in fair coin tossing.
//!
//! The same quantities are reached by independent routes and checked against
//! each other:
//!
//! * [`counts`]: the k-step Fibonacci table `g(n, k)` of sequences whose first
//!   k-run ends at trial `n`.
//! * [`distribution`]: the law `p(n) = g(n, k) / 2^n`, partial sums and tails.
//! * [`genfunc`]: the closed-form generating function, its derivative, and
//!   `E = 2 (2^k - 1)`.
//! * [`oracle`]: exhaustive enumeration and a seeded Monte Carlo simulator.
//! * [`cli`]: the `streakcalc` command line.
//!
//! All probabilities are exact [`num_rational::BigRational`] values.

pub mod cli;
pub mod counts;
pub mod distribution;
pub mod error;
pub mod genfunc;
pub mod oracle;
pub mod parallel;
pub mod rational;

pub use counts::{build_count_table, count_at, ratio_diagnostic, CountTable, RunSpec};
pub use error::{Error, Result};
pub use parallel::Execution;
pub use rational::ExactRational;
