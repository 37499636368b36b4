//! Execution strategy for data-parallel sweeps. Parallel maps preserve input
//! order and feed a sequential reduction, so results are identical across
//! thread counts; the sequential path is always available for comparison.

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Exec {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        Exec::Parallel
    }
    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        Exec::Sequential
    }
}

/// Pin the global worker-pool size; call before any parallel work. A no-op
/// without the `parallel` feature. Results never depend on the pool size.
#[cfg(feature = "parallel")]
pub fn configure_threads(n: usize) -> std::result::Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_n: usize) -> std::result::Result<(), String> {
    Ok(())
}

pub fn map_slice<T: Sync, U: Send>(
    xs: &[T],
    exec: Exec,
    f: impl Fn(&T) -> U + Sync + Send,
) -> Vec<U> {
    match exec {
        Exec::Sequential => xs.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            xs.par_iter().map(f).collect()
        }
    }
}

pub fn try_map_slice<T: Sync, U: Send>(
    xs: &[T],
    exec: Exec,
    f: impl Fn(&T) -> Result<U> + Sync + Send,
) -> Result<Vec<U>> {
    match exec {
        Exec::Sequential => xs.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            xs.par_iter().map(f).collect()
        }
    }
}

pub fn map_indices<U: Send>(n: usize, exec: Exec, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    match exec {
        Exec::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
    }
}
