//! Work distribution for the exhaustive scans.
//!
//! Work is cut into a fixed number of chunks that depends only on the problem
//! size, never on the worker count; per-chunk results come back in chunk
//! order and are reduced sequentially, so every reduction is independent of
//! how the chunks were scheduled.

/// How the exhaustive scans are executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    /// Single-threaded, in enumeration order.
    Sequential,
    /// Up to `n` worker threads; `0` uses the global pool. Without the
    /// `parallel` feature this behaves like `Sequential`.
    Workers(usize),
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Workers(0)
        } else {
            Parallelism::Sequential
        }
    }
}

/// `(0..chunks).map(f)` collected in order, possibly in parallel.
pub(crate) fn map_chunks<R, F>(par: Parallelism, chunks: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match par {
        Parallelism::Sequential => (0..chunks).map(f).collect(),
        Parallelism::Workers(n) => run_workers(n, chunks, f),
    }
}

#[cfg(feature = "parallel")]
fn run_workers<R, F>(n: usize, chunks: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if n == 0 {
        return (0..chunks).into_par_iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
        Ok(pool) => pool.install(|| (0..chunks).into_par_iter().map(&f).collect()),
        Err(_) => (0..chunks).map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_workers<R, F>(_n: usize, chunks: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..chunks).map(f).collect()
}

/// Splits `0..total` into contiguous ranges of at most `size`.
pub(crate) fn ranges(total: u64, size: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + size).min(total);
        out.push((start, end));
        start = end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_results_are_ordered() {
        for par in [
            Parallelism::Sequential,
            Parallelism::Workers(1),
            Parallelism::Workers(3),
        ] {
            let v = map_chunks(par, 100, |i| i * i);
            assert_eq!(v, (0..100).map(|i| i * i).collect::<Vec<_>>());
        }
    }

    #[test]
    fn ranges_cover_exactly() {
        assert_eq!(ranges(10, 4), vec![(0, 4), (4, 8), (8, 10)]);
        assert!(ranges(0, 4).is_empty());
    }
}
