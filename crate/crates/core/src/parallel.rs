//! Range map-reduce with a rayon backend and a sequential fallback.
//!
//! Reductions used here are exact integer sums, so the result never depends
//! on how rayon splits the range.

use std::ops::Range;

/// How a data-parallel loop is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Runs on the rayon pool. Without the `parallel` feature this is the
    /// same as `Sequential`.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

pub(crate) fn map_reduce<T, M, I, R>(
    exec: Execution,
    range: Range<u64>,
    map: M,
    identity: I,
    reduce: R,
) -> T
where
    T: Send,
    M: Fn(u64) -> T + Sync + Send,
    I: Fn() -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            range.into_par_iter().map(map).reduce(&identity, &reduce)
        }
        _ => range.map(map).fold(identity(), reduce),
    }
}

/// Like [`map_reduce`] but folds items into an accumulator, for reductions
/// whose per-item value would be expensive to materialize.
pub(crate) fn fold_reduce<T, F, I, R>(
    exec: Execution,
    range: Range<u64>,
    identity: I,
    fold: F,
    reduce: R,
) -> T
where
    T: Send,
    F: Fn(T, u64) -> T + Sync + Send,
    I: Fn() -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            range
                .into_par_iter()
                .fold(&identity, &fold)
                .reduce(&identity, &reduce)
        }
        _ => range.fold(identity(), fold),
    }
}
