//! Benchmarks for the hot paths of `nfl-core`; run with `cargo bench -p nfl-bench`.

use criterion::{black_box, BenchmarkId, Criterion};
use nfl_core::bounds::bistochastic_mc_bound;
use nfl_core::experiments::{run_trial, ExperimentConfig};
use nfl_core::learning::{perfect_learner, variational_learner, OptimizerConfig};
use nfl_core::linalg::{qr_decompose, schmidt_decompose};
use nfl_core::sampling::{haar_unitary, schmidt_rank_state, training_set};
use nfl_core::{SeedSpec, SetStyle};

pub fn linalg(c: &mut Criterion) {
    let mut group = c.benchmark_group("linalg");
    for d in [8, 64] {
        let u = haar_unitary(d, SeedSpec::new(1, 0)).unwrap();
        group.bench_with_input(BenchmarkId::new("matmul", d), &u, |b, u| {
            b.iter(|| black_box(u.matrix().matmul(u.matrix())))
        });
        group.bench_with_input(BenchmarkId::new("qr", d), &u, |b, u| {
            b.iter(|| black_box(qr_decompose(u.matrix()).unwrap()))
        });
        let state = schmidt_rank_state(d, 4, 4, SeedSpec::new(2, 0)).unwrap();
        group.bench_with_input(BenchmarkId::new("schmidt", d), &state, |b, s| {
            b.iter(|| black_box(schmidt_decompose(s.amplitudes(), d, 4).unwrap()))
        });
    }
    group.finish();
}

pub fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampling");
    for d in [8, 64] {
        group.bench_with_input(BenchmarkId::new("haar_unitary", d), &d, |b, &d| {
            let mut k = 0;
            b.iter(|| {
                k += 1;
                black_box(haar_unitary(d, SeedSpec::new(3, k)).unwrap())
            })
        });
    }
    let u = haar_unitary(64, SeedSpec::new(4, 0)).unwrap();
    group.bench_function("training_set/d64_r4_t8", |b| {
        b.iter(|| black_box(training_set(&u, 4, 4, 8, SetStyle::Generic, SeedSpec::new(4, 1)).unwrap()))
    });
    group.finish();
}

pub fn learning(c: &mut Criterion) {
    let mut group = c.benchmark_group("learning");
    let u = haar_unitary(64, SeedSpec::new(5, 0)).unwrap();
    let s = training_set(&u, 4, 4, 8, SetStyle::Generic, SeedSpec::new(5, 1)).unwrap();
    group.bench_function("perfect_learner/d64_r4_t8", |b| {
        b.iter(|| black_box(perfect_learner(&u, &s, SeedSpec::new(5, 2)).unwrap()))
    });
    let cfg = ExperimentConfig::from_json_str(
        r#"{"d": 64, "r_values": [4], "t_values": [8], "master_seed": 0, "output_path": "unused"}"#,
        None,
    )
    .unwrap();
    group.bench_function("fig3_trial/d64_r4_t8", |b| {
        b.iter(|| black_box(run_trial(&cfg, &u, 4, 8, SeedSpec::new(5, 3)).unwrap()))
    });
    let q = haar_unitary(2, SeedSpec::new(6, 0)).unwrap();
    let qs = training_set(&q, 2, 2, 1, SetStyle::Generic, SeedSpec::new(6, 1)).unwrap();
    group.sample_size(20);
    group.bench_function("variational_learner/d2_r2_t1", |b| {
        b.iter(|| black_box(variational_learner(&q, &qs, &OptimizerConfig::default(), SeedSpec::new(6, 2)).unwrap()))
    });
    group.finish();
}

pub fn bounds(c: &mut Criterion) {
    let mut group = c.benchmark_group("bounds");
    group.sample_size(10);
    group.bench_function("bistochastic_mc/d64_t8_n100", |b| {
        b.iter(|| black_box(bistochastic_mc_bound(64, 8, 100, SeedSpec::new(7, 0)).unwrap()))
    });
    group.finish();
}
