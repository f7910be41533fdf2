//! Thin data-parallel layer. With the `parallel` feature the helpers fan out
//! over rayon's current pool; without it they run as plain iterators. Every
//! caller reduces with an associative, commutative operation so results do
//! not depend on how the work was split.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `sum_{i in range} f(i)`.
pub fn sum_u64<F>(range: Range<u64>, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().map(f).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(f).sum()
    }
}

/// `[f(i) for i in range]`, order preserved.
pub fn map_collect<T, F>(range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(f).collect()
    }
}

/// `[f(x) for x in items]`, order preserved.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Folds `range` into per-worker accumulators and merges them.
pub fn fold_reduce<A, Init, Fold, Merge>(range: Range<u64>, init: Init, fold: Fold, merge: Merge) -> A
where
    A: Send,
    Init: Fn() -> A + Sync + Send,
    Fold: Fn(A, u64) -> A + Sync + Send,
    Merge: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().fold(&init, fold).reduce(&init, merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = merge;
        range.fold(init(), fold)
    }
}

/// Number of workers the helpers will use.
pub fn current_workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
