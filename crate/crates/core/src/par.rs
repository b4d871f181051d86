//! Data-parallel primitives with a sequential fallback.
//!
//! Heavy sweeps (design verification, exhaustive hitting checks, point
//! materialization) are pure maps over an index range. With the `parallel`
//! feature they run on rayon; without it, or with [`Parallelism::Sequential`],
//! they run in a plain loop. Results are reduced in index order either way,
//! so output bytes never depend on the schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    /// Plain loop on the calling thread.
    Sequential,
    /// Rayon work-stealing pool. Falls back to sequential when the crate is
    /// built without the `parallel` feature.
    #[default]
    Rayon,
}

/// Maps `f` over `0..n`, preserving index order in the output.
pub fn ordered_map<T, F>(mode: Parallelism, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == Parallelism::Rayon {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

/// Returns the first `Some` produced over `0..n`, by index order.
pub fn first_match<T, F>(mode: Parallelism, n: u64, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == Parallelism::Rayon {
        return (0..n).into_par_iter().find_map_first(f);
    }
    let _ = mode;
    (0..n).find_map(f)
}

/// True when every index in `0..n` satisfies `f`.
pub fn all<F>(mode: Parallelism, n: u64, f: F) -> bool
where
    F: Fn(u64) -> bool + Sync + Send,
{
    first_match(mode, n, |i| if f(i) { None } else { Some(()) }).is_none()
}
