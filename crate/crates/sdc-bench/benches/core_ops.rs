use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use sdc_bench::fixture_state;
use sdc_core::linalg::{haar_unitary, operator_norm, partial_trace_matrix};
use sdc_core::states::{encoding_matrix, reduced_b};
use sdc_core::RandomStream;

fn bench_haar_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("haar_unitary");
    for dim in [8usize, 32, 64] {
        group.bench_function(format!("dim_{dim}"), |b| {
            let mut rng = RandomStream::new(1, 0);
            b.iter(|| black_box(haar_unitary(dim, &mut rng).unwrap()));
        });
    }
    group.finish();
}

fn bench_partial_trace(c: &mut Criterion) {
    let state = fixture_state(&[4, 4, 4], 2);
    let rho = state.density();
    c.bench_function("partial_trace_4x4x4_keep_last", |b| {
        b.iter(|| black_box(partial_trace_matrix(rho.matrix(), &[4, 4, 4], &[2]).unwrap()));
    });
    c.bench_function("reduced_gram_4x4x4_keep_last", |b| {
        b.iter(|| black_box(state.reduced(&[2]).unwrap()));
    });
}

fn bench_norms_and_encodings(c: &mut Criterion) {
    let state = fixture_state(&[16, 16], 3);
    let x = encoding_matrix(&state).unwrap();
    c.bench_function("operator_norm_16x16", |b| {
        b.iter(|| black_box(operator_norm(x.matrix()).unwrap()));
    });
    c.bench_function("reduced_b_16x16", |b| {
        b.iter(|| black_box(reduced_b(&state).unwrap()));
    });
}

criterion_group!(benches, bench_haar_sampling, bench_partial_trace, bench_norms_and_encodings);
criterion_main!(benches);
