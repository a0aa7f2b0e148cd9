use std::hint::black_box;

use brt_bench::fixture;
use brt_core::rays::{self, RaySetConfig};
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_generation(c: &mut Criterion) {
    let fx = fixture(100);
    let config = RaySetConfig {
        n_transmitters: 180,
        n_receivers: 180,
        n_hits: 180,
        n_broken: 1000,
        n_unbroken: 1000,
        seed: 7,
    };

    c.bench_function("generate/unbroken_1000", |b| {
        b.iter(|| {
            let mut rng = config.rng();
            rays::generate_unbroken(black_box(&fx.scene), black_box(&config), &mut rng).unwrap()
        })
    });
    c.bench_function("generate/lambertian_1000", |b| {
        b.iter(|| {
            let mut rng = config.rng();
            rays::generate_lambertian(black_box(&fx.scene), black_box(&config), &mut rng).unwrap()
        })
    });
    c.bench_function("generate/specular_1000", |b| {
        b.iter(|| {
            let mut rng = config.rng();
            rays::generate_specular(black_box(&fx.scene), black_box(&config), &mut rng).unwrap()
        })
    });
}

criterion_group!(benches, bench_generation);
criterion_main!(benches);
