//! Deterministic parallel reduction.
//!
//! Work is split into fixed-size chunks that do not depend on the worker
//! count; chunk results are folded in ascending chunk order.  Floating-point
//! accumulations therefore produce identical bits at any thread count.

use rayon::prelude::*;

/// Fixed chunk length for index-range sweeps.
pub const SWEEP_CHUNK: u64 = 1 << 14;

/// Maps disjoint index ranges covering [0, total) and folds the per-chunk
/// results in chunk order.
pub fn chunked_reduce<T, M, F>(total: u64, chunk: u64, map: M, fold: F, init: T) -> T
where
    T: Send,
    M: Fn(std::ops::Range<u64>) -> T + Sync,
    F: FnMut(T, T) -> T,
{
    assert!(chunk > 0);
    let n_chunks = total.div_ceil(chunk);
    let parts: Vec<T> = (0..n_chunks)
        .into_par_iter()
        .map(|i| {
            let start = i * chunk;
            let end = (start + chunk).min(total);
            map(start..end)
        })
        .collect();
    parts.into_iter().fold(init, fold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_all_indices_once() {
        let total = 100_001u64;
        let sum = chunked_reduce(
            total,
            997,
            |r| r.sum::<u64>(),
            |a, b| a + b,
            0u64,
        );
        assert_eq!(sum, total * (total - 1) / 2);
    }

    #[test]
    fn float_fold_is_order_stable() {
        // same chunking => identical bits regardless of pool size
        let run = || {
            chunked_reduce(
                10_000,
                64,
                |r| r.map(|i| ((i as f64) * 0.1).sin()).sum::<f64>(),
                |a, b| a + b,
                0.0f64,
            )
        };
        assert_eq!(run().to_bits(), run().to_bits());
    }
}
