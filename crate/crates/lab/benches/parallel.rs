//! Parallel vs sequential numeric kernels.
//!
//! The crate's reductions are bit-identical between the two paths; this
//! suite measures what the `parallel` feature buys on the hot kernels:
//! occupancy sums over large alphabets, replicate simulation, and the
//! streaming vocabulary counter.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use powerlaw_lab::estimators::vocabulary_curve;
use powerlaw_lab::law::DiscreteLaw;
use powerlaw_lab::occupancy::expected_types;
use powerlaw_lab::seed::derive_seed;
use powerlaw_lab::sources::{sample_narration, ProcessSpec};
use powerlaw_lab::sum;

fn bench_occupancy_sum(c: &mut Criterion) {
    let law = DiscreteLaw::zipf(0.5, 1_000_000).unwrap();
    let masses: Vec<f64> = law.masses().to_vec();
    let t = 1e6;
    let kernel = move |i: usize| -(t * (-masses[i]).ln_1p()).exp_m1();

    let mut group = c.benchmark_group("occupancy_sum_1e6_types");
    let k = law.masses().len();
    group.bench_function("sequential", |b| {
        let kernel = kernel.clone();
        b.iter(|| black_box(sum::map_sum_seq(k, &kernel)))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        let kernel = kernel.clone();
        b.iter(|| black_box(sum::map_sum(k, &kernel)))
    });
    group.finish();

    // Equality of the two paths, so the comparison is apples to apples.
    let seq = sum::map_sum_seq(k, |i| expected_types(&law, 7) * 0.0 + i as f64 * 1e-9);
    let par = sum::map_sum(k, |i| expected_types(&law, 7) * 0.0 + i as f64 * 1e-9);
    assert_eq!(seq.to_bits(), par.to_bits());
}

fn bench_replicate_sampling(c: &mut Criterion) {
    let spec = ProcessSpec::Iid(DiscreteLaw::zipf(0.5, 100_000).unwrap());
    let reps = 16usize;
    let len = 100_000u64;

    let mut group = c.benchmark_group("replicate_sampling_16x1e5");
    group.throughput(Throughput::Elements(reps as u64 * len));
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let out = sum::run_indexed_seq(reps, |r| {
                sample_narration(&spec, len, derive_seed(7, r as u64)).unwrap().len()
            });
            black_box(out)
        })
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let out = sum::run_indexed(reps, |r| {
                sample_narration(&spec, len, derive_seed(7, r as u64)).unwrap().len()
            });
            black_box(out)
        })
    });
    group.finish();
}

fn bench_vocabulary_throughput(c: &mut Criterion) {
    let spec = ProcessSpec::Iid(DiscreteLaw::zipf(0.5, 1_000_000).unwrap());
    let mut group = c.benchmark_group("vocabulary_curve");
    for &len in &[1_000_000u64, 4_000_000] {
        let tokens = sample_narration(&spec, len, 42).unwrap();
        group.throughput(Throughput::Elements(len));
        group.bench_with_input(BenchmarkId::from_parameter(len), &tokens, |b, tokens| {
            b.iter(|| black_box(vocabulary_curve(tokens, &[tokens.len() as u64], 3).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_occupancy_sum,
    bench_replicate_sampling,
    bench_vocabulary_throughput
);
criterion_main!(benches);
