//! Data-parallel seam.
//!
//! Every hot inner loop in the crate maps an index range to independent
//! values through [`map_indexed`]. With the `parallel` feature (default) the
//! map runs on the rayon thread pool; without it the loop is sequential.
//! Reductions are always performed sequentially over the collected values,
//! so results are bit-identical in both modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `0..len` through `f`, in parallel when the `parallel` feature is on.
///
/// Output order matches index order regardless of scheduling.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).into_par_iter().map(f).collect()
}

/// Map `0..len` through `f`, in parallel when the `parallel` feature is on.
///
/// Output order matches index order regardless of scheduling.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_seq(len, f)
}

/// Sequential twin of [`map_indexed`], kept available in every build as the
/// reference path for tests and benchmarks.
pub fn map_indexed_seq<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let f = |i: usize| (i as f64).sin() * (i as f64 + 0.5).ln();
        let a = map_indexed(1000, f);
        let b = map_indexed_seq(1000, f);
        assert_eq!(a, b);
    }
}
