//! Criterion benchmarks for the hot paths: exact p-adic inner products and
//! Fourier-Wigner transforms, and the real Schur quadrature kernel.

use criterion::{criterion_group, criterion_main, Criterion};
use hschur_core::experiments::real::schur_pair;
use hschur_core::schwartz::padic::BallTerm;
use hschur_core::{CycloNumber, PadicBallChar, RealGrid, TestFunction};
use num::bigint::BigInt;
use num::rational::BigRational;
use std::hint::black_box;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sample_padic(dim: usize, n_terms: usize) -> PadicBallChar {
    let terms = (0..n_terms)
        .map(|i| BallTerm {
            coeff: CycloNumber::from_rational(2, q(i as i64 + 1, 3)),
            center: (0..dim).map(|j| q((i + j) as i64, 4)).collect(),
            scale: (0..dim).map(|j| ((i + j) % 3) as i64 - 1).collect(),
            freq: (0..dim).map(|j| q((2 * i + j) as i64, 4)).collect(),
        })
        .collect();
    PadicBallChar::new(2, dim, terms).unwrap()
}

fn bench_padic_inner(c: &mut Criterion) {
    let f = sample_padic(2, 8);
    let g = sample_padic(2, 8);
    c.bench_function("padic_inner_8x8_terms", |b| {
        b.iter(|| black_box(&f).inner(black_box(&g)).unwrap())
    });
}

fn bench_fourier_wigner_padic(c: &mut Criterion) {
    let f = TestFunction::Padic(sample_padic(2, 8));
    c.bench_function("fourier_wigner_padic_8_terms", |b| {
        b.iter(|| black_box(&f).fourier_wigner().unwrap())
    });
}

fn bench_fourier_wigner_real(c: &mut Criterion) {
    let f = TestFunction::Real(
        RealGrid::indicator_box(&[0.0, 0.0], &[1.0, 1.0], 1.0 / 16.0).unwrap(),
    );
    c.bench_function("fourier_wigner_real_16x16", |b| {
        b.iter(|| black_box(&f).fourier_wigner().unwrap())
    });
}

fn bench_real_schur_pair(c: &mut Criterion) {
    let f = RealGrid::indicator_box(&[0.0], &[1.0], 1.0 / 16.0).unwrap();
    c.bench_function("real_schur_pair_r4_h16", |b| {
        b.iter(|| schur_pair(1.0, 1.0, &f, &f, &f, &f, black_box(4.0)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_padic_inner,
    bench_fourier_wigner_padic,
    bench_fourier_wigner_real,
    bench_real_schur_pair
);
criterion_main!(benches);
