//! Data-parallel helpers. With the `parallel` feature the maps run on the
//! rayon pool; without it they run sequentially. Outputs are collected in
//! index order either way, so results never depend on the schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluates `f(i)` for `i in 0..n` and returns the results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Maps every element of a slice, preserving order.
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

/// Elementwise maximum of the vectors produced by `f(i)`, `i in 0..n`.
///
/// `max` is exact and commutative, so the reduction order does not matter.
pub fn max_reduce<F>(n: usize, len: usize, f: F) -> Vec<f64>
where
    F: Fn(usize) -> Vec<f64> + Sync + Send,
{
    let merge = |mut a: Vec<f64>, b: Vec<f64>| {
        for (x, y) in a.iter_mut().zip(b) {
            if y > *x {
                *x = y;
            }
        }
        a
    };
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .map(f)
            .reduce(|| vec![0.0; len], merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).fold(vec![0.0; len], merge)
    }
}
