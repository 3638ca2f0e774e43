//! Deterministic reductions shared by the numeric kernels.
//!
//! Sums over large index ranges are evaluated chunk by chunk with a fixed
//! chunk size, then the chunk totals are folded over a pairwise tree whose
//! shape depends only on the input length. Chunks may be evaluated on the
//! worker pool or in a plain loop; either way each chunk is summed in index
//! order and the combine tree is identical, so the result is bit-stable
//! across runs, thread counts, and the `parallel` feature itself.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Number of indices summed sequentially per chunk.
const CHUNK: usize = 4096;

/// Cutoff below which parallel dispatch is not worth the scheduling cost.
const PAR_THRESHOLD: usize = 4 * CHUNK;

fn chunk_total(lo: usize, hi: usize, f: &(impl Fn(usize) -> f64 + Sync)) -> f64 {
    let mut acc = 0.0;
    for i in lo..hi {
        acc += f(i);
    }
    acc
}

/// Fold partial sums over a fixed pairwise tree.
fn fold_pairwise(mut parts: Vec<f64>) -> f64 {
    if parts.is_empty() {
        return 0.0;
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len() / 2 + 1);
        for pair in parts.chunks(2) {
            next.push(if pair.len() == 2 { pair[0] + pair[1] } else { pair[0] });
        }
        parts = next;
    }
    parts[0]
}

/// Sum `f(i)` for `i` in `0..n` sequentially, over the fixed chunk tree.
pub fn map_sum_seq(n: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    let parts: Vec<f64> = (0..n.div_ceil(CHUNK))
        .map(|c| chunk_total(c * CHUNK, ((c + 1) * CHUNK).min(n), &f))
        .collect();
    fold_pairwise(parts)
}

/// Sum `f(i)` for `i` in `0..n`, on the worker pool when available.
///
/// Bit-identical to [`map_sum_seq`] for the same inputs.
pub fn map_sum(n: usize, f: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
    #[cfg(feature = "parallel")]
    if n >= PAR_THRESHOLD {
        let parts: Vec<f64> = (0..n.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| chunk_total(c * CHUNK, ((c + 1) * CHUNK).min(n), &f))
            .collect();
        return fold_pairwise(parts);
    }
    map_sum_seq(n, f)
}

fn chunk_total_vec(lo: usize, hi: usize, width: usize, f: &(impl Fn(usize, &mut [f64]) + Sync)) -> Vec<f64> {
    let mut acc = vec![0.0; width];
    let mut row = vec![0.0; width];
    for i in lo..hi {
        row.iter_mut().for_each(|x| *x = 0.0);
        f(i, &mut row);
        for (a, r) in acc.iter_mut().zip(&row) {
            *a += r;
        }
    }
    acc
}

fn fold_pairwise_vec(mut parts: Vec<Vec<f64>>, width: usize) -> Vec<f64> {
    if parts.is_empty() {
        return vec![0.0; width];
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len() / 2 + 1);
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop().unwrap()
}

/// Componentwise analogue of [`map_sum`]: accumulate `width` totals at once.
///
/// `f(i, row)` writes the contribution of index `i` into `row` (passed in
/// zeroed). Same fixed chunk tree, same bit-stability guarantees.
pub fn map_sum_vec(n: usize, width: usize, f: impl Fn(usize, &mut [f64]) + Sync + Send) -> Vec<f64> {
    let chunks = n.div_ceil(CHUNK);
    #[cfg(feature = "parallel")]
    let parts: Vec<Vec<f64>> = if n >= PAR_THRESHOLD {
        (0..chunks)
            .into_par_iter()
            .map(|c| chunk_total_vec(c * CHUNK, ((c + 1) * CHUNK).min(n), width, &f))
            .collect()
    } else {
        (0..chunks)
            .map(|c| chunk_total_vec(c * CHUNK, ((c + 1) * CHUNK).min(n), width, &f))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Vec<f64>> = (0..chunks)
        .map(|c| chunk_total_vec(c * CHUNK, ((c + 1) * CHUNK).min(n), width, &f))
        .collect();
    fold_pairwise_vec(parts, width)
}

/// Run `f(0..count)` and collect results in index order, sequentially.
pub fn run_indexed_seq<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    (0..count).map(f).collect()
}

/// Run `f(0..count)` on the worker pool, collecting in index order.
///
/// Each task must depend only on its index (replicate-style work with
/// derived seeds), so the ordered collect makes the output deterministic.
pub fn run_indexed<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_indexed_seq(count, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seq_and_dispatched_sums_agree_bitwise() {
        let f = |i: usize| ((i as f64) * 1e-3).sin() / (i as f64 + 1.0);
        for n in [0, 1, 17, CHUNK, CHUNK + 1, 3 * CHUNK + 5, 10 * CHUNK] {
            let a = map_sum_seq(n, f);
            let b = map_sum(n, f);
            assert_eq!(a.to_bits(), b.to_bits(), "n={n}");
        }
    }

    #[test]
    fn sum_matches_naive_for_small_inputs() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64).sqrt()).collect();
        let naive: f64 = xs.iter().sum();
        let tree = map_sum(xs.len(), |i| xs[i]);
        assert!((naive - tree).abs() < 1e-12);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn sum_is_identical_across_pool_sizes() {
        let f = |i: usize| 1.0 / ((i + 1) as f64).powi(2);
        let n = 100_000;
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| map_sum(n, f));
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| map_sum(n, f));
        assert_eq!(one.to_bits(), four.to_bits());
    }

    #[test]
    fn indexed_runs_preserve_order() {
        let out = run_indexed(100, |i| i * i);
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }
}
