use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use cowkit_core::capacity;
use cowkit_core::construct::{augment_columns, builtin};
use cowkit_core::decoder::{decode_tensor, TensorDecoder};
use cowkit_core::sim::{run_point, DecoderKind, SimConfig};
use cowkit_core::verify::{verify_fast, verify_naive};

fn bench_verify(c: &mut Criterion) {
    let c4 = builtin("C4x5").unwrap();
    let c8 = builtin("C8x13").unwrap();
    c.bench_function("verify_naive_4x5", |b| {
        b.iter(|| verify_naive(black_box(&c4.matrix)).unwrap())
    });
    c.bench_function("verify_fast_8x13", |b| {
        b.iter(|| verify_fast(black_box(&c8.matrix)).unwrap())
    });
}

fn bench_decode(c: &mut Criterion) {
    let d64 = builtin("D64x104").unwrap();
    let t = TensorDecoder::build(&d64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x: Vec<i64> = (0..104)
        .map(|_| if rng.random() { 1 } else { -1 })
        .collect();
    let y: Vec<f64> = d64
        .matrix
        .as_int()
        .mul_ivec(&x)
        .iter()
        .map(|&v| {
            let z: f64 = StandardNormal.sample(&mut rng);
            v as f64 + 2.0 * z
        })
        .collect();
    c.bench_function("decode_tensor_64x104", |b| {
        b.iter(|| decode_tensor(black_box(&t), black_box(&y)).unwrap())
    });
}

fn bench_capacity(c: &mut Criterion) {
    c.bench_function("thm7_lower_64_220", |b| {
        b.iter(|| capacity::capacity_lower_thm7(black_box(64), black_box(220)))
    });
    c.bench_function("thm8_upper_64_220", |b| {
        b.iter(|| capacity::capacity_upper_thm8(black_box(64), black_box(220)))
    });
    c.bench_function("joint_entropy3_n64_balanced", |b| {
        b.iter(|| capacity::joint_entropy3(black_box(64), 16, 16, 16))
    });
}

fn bench_sim_and_search(c: &mut Criterion) {
    let d64 = builtin("D64x104").unwrap();
    let mut cfg = SimConfig::new(d64, DecoderKind::Tensor, vec![8.0]);
    cfg.max_trials = 256;
    cfg.min_bit_errors = u64::MAX;
    c.bench_function("awgn_point_256_trials", |b| {
        b.iter(|| run_point(black_box(&cfg), 0, 8.0).unwrap())
    });
    let h2 = builtin("C4x5").unwrap();
    c.bench_function("augment_h2_kron_c4x5_1000_draws", |b| {
        b.iter(|| augment_columns(black_box(&h2), 1000, 7).unwrap())
    });
}

criterion_group!(
    benches,
    bench_verify,
    bench_decode,
    bench_capacity,
    bench_sim_and_search
);
criterion_main!(benches);
