//! Data-parallel fan-out with a sequential fallback.
//!
//! Every parallel site in the crate funnels through [`map_indexed`]: work is
//! keyed by index, each unit derives its own state (e.g. RNG seed) from that
//! index, and results are collected in index order. Output is therefore
//! bit-identical whether the `parallel` feature is on or off, and independent
//! of rayon's scheduling.

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
