//! Per-sample parallel partitioning helpers.
//!
//! All data-parallel loops in this crate go through these functions. Each
//! sample's output chunk is computed independently, so the parallel path
//! produces bit-identical results to the sequential one; reduction-style
//! work uses fixed-size chunks combined in index order for the same reason.

/// Fills an `n * chunk` buffer, one contiguous chunk per sample.
pub(crate) fn fill_per_sample<F>(n: usize, chunk: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let mut buf = vec![0.0; n * chunk];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        buf.par_chunks_mut(chunk).enumerate().for_each(|(j, out)| f(j, out));
    }
    #[cfg(not(feature = "parallel"))]
    {
        buf.chunks_mut(chunk).enumerate().for_each(|(j, out)| f(j, out));
    }
    buf
}

/// Sequential twin of [`fill_per_sample`], kept available for benchmarks
/// and parity tests regardless of the feature set.
pub(crate) fn fill_per_sample_seq<F>(n: usize, chunk: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let mut buf = vec![0.0; n * chunk];
    buf.chunks_mut(chunk).enumerate().for_each(|(j, out)| f(j, out));
    buf
}

/// Samples per partial accumulator in chunked reductions.
pub(crate) const REDUCE_CHUNK: usize = 512;

/// Maps fixed-size index chunks to partial values, returned in chunk order
/// so callers can fold them deterministically.
pub(crate) fn map_chunks<T, M>(n: usize, map: M) -> Vec<T>
where
    T: Send,
    M: Fn(std::ops::Range<usize>) -> T + Sync + Send,
{
    let ranges: Vec<std::ops::Range<usize>> =
        (0..n).step_by(REDUCE_CHUNK).map(|s| s..(s + REDUCE_CHUNK).min(n)).collect();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        ranges.into_par_iter().map(map).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ranges.into_iter().map(map).collect()
    }
}
