//! Switch between the rayon path and the sequential fallback.
//!
//! All helpers collect results in index order and reduce sequentially, so the
//! choice of [`Execution`] never changes a returned bit.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Runs on the rayon pool; identical to `Sequential` when the crate is
    /// built without the `parallel` feature.
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
    /// Evaluates `f` on `0..n` and returns the results in index order.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Maps every element of `items`, preserving order.
    pub fn map_slice<A, T, F>(self, items: &[A], f: F) -> Vec<T>
    where
        A: Sync,
        T: Send,
        F: Fn(&A) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Maximum of `f` over `0..n`, or `init` when every term is smaller.
    ///
    /// `f64::max` is exact and order independent for non-NaN inputs, so the
    /// parallel reduction is deterministic.
    pub fn max_range<F>(self, n: usize, init: f64, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n)
                .into_par_iter()
                .with_min_len(256)
                .map(f)
                .reduce(|| init, f64::max),
            _ => (0..n).map(f).fold(init, f64::max),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let seq = Execution::Sequential.map_range(1000, |i| (i as f64).sqrt());
        let par = Execution::Parallel.map_range(1000, |i| (i as f64).sqrt());
        assert_eq!(seq, par);
        let f = |i: usize| ((i * 7919) % 1013) as f64;
        assert_eq!(
            Execution::Sequential.max_range(5000, 0.0, f),
            Execution::Parallel.max_range(5000, 0.0, f)
        );
    }
}
