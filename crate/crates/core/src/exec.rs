//! Execution policy for row-independent kernels.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Rows per rayon task; keeps scheduling overhead small on sparse rows.
#[cfg(feature = "parallel")]
const MIN_CHUNK: usize = 256;

/// Selects how row-independent kernels are evaluated. Both policies produce
/// bit-identical results because every row is computed by the same code in
/// the same order; only the scheduling differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    /// Evaluates `f(i)` for `i in 0..n` and collects the results in order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().with_min_len(MIN_CHUNK).map(f).collect(),
        }
    }

    /// Writes `f(i)` into `out[i]`.
    pub fn fill<T, F>(self, out: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = f(i);
                }
            }
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                out.par_iter_mut().with_min_len(MIN_CHUNK).enumerate().for_each(|(i, o)| *o = f(i));
            }
        }
    }

    /// Parallel-or-sequential map over an arbitrary slice of inputs.
    pub fn map_slice<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().with_min_len(MIN_CHUNK).map(f).collect(),
        }
    }
}
