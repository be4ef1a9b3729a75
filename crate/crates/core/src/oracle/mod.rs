//! Independent ground truth: exhaustive enumeration of every head/tail
//! sequence for small `n`, and a seeded Monte Carlo simulator.
//!
//! Nothing here uses the recurrence or the generating function.

mod enumerate;
mod simulate;

pub use enumerate::{
    enumerate_counts, enumerate_counts_with, enumerate_first_run_histogram,
    enumerate_truncated_expectation, first_run_index, first_run_index_bits, parse_outcomes,
    FirstRunHistogram, Outcome, EXHAUSTION_CAP,
};
pub use simulate::{
    simulate, simulate_with, SimConfig, SimReport, RNG_ALGORITHM, TRIALS_PER_PARTITION,
};
