//! Sequential/parallel switch for the data-parallel sweeps.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans
//! independent work items out over rayon's global pool. Without the feature
//! it silently degrades to the sequential path, so callers never need their
//! own `cfg` gates. Every combinator here returns results in index order, so
//! output is identical under both strategies.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
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

impl Execution {
    /// Whether work will really be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Evaluates `f` on every index in `range`, results in index order.
    pub fn map_range<T, F>(self, range: std::ops::Range<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// Like [`Execution::map_range`] but stops at the first error (by index).
    pub fn try_map_range<T, E, F>(self, range: std::ops::Range<usize>, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        self.map_range(range, f).into_iter().collect()
    }
}
