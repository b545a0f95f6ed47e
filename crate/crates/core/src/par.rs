//! Data-parallel helpers.
//!
//! With the `parallel` feature the helpers dispatch to rayon, unless parallel
//! execution was switched off at runtime with [`set_enabled`]. Without the
//! feature everything runs on the calling thread. Results never depend on the
//! execution mode: every helper preserves index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(true);

/// Switch parallel execution on or off for subsequent calls.
///
/// Has no effect when the crate is built without the `parallel` feature.
pub fn set_enabled(on: bool) {
    ENABLED.store(on, Ordering::SeqCst);
}

/// Whether the helpers currently run in parallel.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && ENABLED.load(Ordering::Relaxed)
}

/// `(0..n).map(f).collect()`, possibly in parallel.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Apply `f(chunk_index, chunk)` to consecutive chunks of `data`.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    assert!(chunk > 0);
    #[cfg(feature = "parallel")]
    if is_parallel() {
        data.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i, c));
        return;
    }
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

/// Maximum of `f(i)` over `0..n` (`f64::NEG_INFINITY` when `n == 0`).
pub fn max_range<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        return (0..n)
            .into_par_iter()
            .map(f)
            .reduce(|| f64::NEG_INFINITY, f64::max);
    }
    (0..n).map(f).fold(f64::NEG_INFINITY, f64::max)
}

/// Minimum of `f(i)` over `0..n` (`f64::INFINITY` when `n == 0`).
pub fn min_range<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    -max_range(n, |i| -f(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: usize| (i as f64).sin();
        set_enabled(true);
        let a = map_range(1000, f);
        let ma = max_range(1000, f);
        set_enabled(false);
        let b = map_range(1000, f);
        let mb = max_range(1000, f);
        set_enabled(true);
        assert_eq!(a, b);
        assert_eq!(ma, mb);
        assert_eq!(min_range(0, f), f64::INFINITY);
    }

    #[test]
    fn chunks_cover_everything() {
        let mut v = vec![0usize; 103];
        for_each_chunk_mut(&mut v, 10, |i, c| {
            for (j, x) in c.iter_mut().enumerate() {
                *x = i * 10 + j;
            }
        });
        assert!(v.iter().enumerate().all(|(i, &x)| i == x));
    }
}
