//! Hot-path benchmarks: special-function kernels, an entropy surface,
//! geodesic integration, and the prime spacing pipeline.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use entroflow::gamma::{fit_mle, GammaFisherMetric, GammaParams};
use entroflow::geometry::geodesic_shoot;
use entroflow::primes;
use entroflow::specfun;

fn bench_specfun(c: &mut Criterion) {
    c.bench_function("digamma_trigamma_grid_200", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 1..=200 {
                let x = black_box(0.05 * i as f64);
                acc += specfun::digamma(x).unwrap();
                acc += specfun::trigamma(x).unwrap();
            }
            acc
        })
    });
}

fn bench_entropy_surface(c: &mut Criterion) {
    c.bench_function("gamma_entropy_grid_32x32", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 1..=32 {
                for j in 1..=32 {
                    let mu = black_box(0.2 * i as f64);
                    let kappa = black_box(0.2 * j as f64);
                    acc += GammaParams::new(mu, kappa).unwrap().entropy();
                }
            }
            acc
        })
    });
}

fn bench_geodesic(c: &mut Criterion) {
    c.bench_function("gamma_geodesic_unit_time_1e3_steps", |b| {
        b.iter(|| {
            geodesic_shoot(
                &GammaFisherMetric,
                black_box([1.0, 1.0]),
                black_box([0.6, 0.4]),
                1.0,
                1e-3,
            )
            .unwrap()
            .end_point()
        })
    });
}

fn bench_primes(c: &mut Criterion) {
    c.bench_function("prime_spacing_first_1e6", |b| {
        b.iter(|| primes::range_stats(black_box(1_000_000)).unwrap())
    });
}

fn bench_fit(c: &mut Criterion) {
    let sample: Vec<f64> = (0..10_000)
        .map(|i| 0.05 + (i % 700) as f64 * 0.01)
        .collect();
    c.bench_function("gamma_mle_fit_1e4", |b| {
        b.iter(|| fit_mle(black_box(&sample)).unwrap())
    });
}

criterion_group!(
    kernels,
    bench_specfun,
    bench_entropy_surface,
    bench_geodesic,
    bench_primes,
    bench_fit
);
criterion_main!(kernels);
