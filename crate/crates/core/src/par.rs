//! Data-parallel helpers.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] runs on
//! the rayon global pool; without it every helper degrades to the sequential
//! loop. Results are always returned in input order.

/// Execution strategy for batch and convolution kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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
    /// Whether this strategy actually fans out in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Order-preserving map over a slice.
pub fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Splits `items` into roughly equal chunks and maps each chunk, keeping
/// chunk order. Used by the convolution kernels to build partial sums.
pub fn map_chunks<T, R, F>(exec: Execution, items: &[T], min_chunk: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&[T]) -> R + Sync + Send,
{
    if items.is_empty() {
        return Vec::new();
    }
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && items.len() > min_chunk {
        use rayon::prelude::*;
        let threads = rayon::current_num_threads().max(1);
        let chunk = items.len().div_ceil(threads * 4).max(min_chunk);
        return items.par_chunks(chunk).map(f).collect();
    }
    let _ = (exec, min_chunk);
    vec![f(items)]
}
