use cfx_core::cf;
use cfx_core::hyperbolic::{count_certificate_failures, geodesic_sphere_min_height, GeodesicConfig, Model};
use cfx_core::par::Exec;
use cfx_core::scalar::{rat, Rational};
use cfx_core::spaces::{CfSystem, IwasawaPoint};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn geodesic(c: &mut Criterion) {
    let mut g = c.benchmark_group("geodesic_grid");
    for grid in [200, 400] {
        let cfg = GeodesicConfig {
            model: Model::Real,
            eps: 0.5,
            eps_prime: 2f64.sqrt(),
            grid,
        };
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, grid), &cfg, |b, cfg| {
                b.iter(|| geodesic_sphere_min_height(black_box(cfg), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn points(sys: &CfSystem, n: usize) -> Vec<IwasawaPoint<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..n)
        .map(|_| {
            let coords = (0..sys.space.dim())
                .map(|_| {
                    let q = rng.gen_range(100i64..5000);
                    rat(rng.gen_range(-q / 2..q / 2), q)
                })
                .collect();
            IwasawaPoint::new(sys.space, coords).unwrap()
        })
        .collect()
}

fn expansions(c: &mut Criterion) {
    let mut g = c.benchmark_group("rational_expansions");
    g.sample_size(20);
    for sys in [CfSystem::complex(), CfSystem::r3()] {
        let pts = points(&sys, 500);
        for (name, exec) in MODES {
            g.bench_function(BenchmarkId::new(name, &sys.name), |b| {
                b.iter(|| {
                    exec.map_slice(&pts, |p| cf::expand(&sys, p, cf::DEFAULT_MAX_ITER).unwrap().digits.len())
                })
            });
            g.bench_function(BenchmarkId::new(format!("{name}_horoball"), &sys.name), |b| {
                b.iter(|| count_certificate_failures(&sys, black_box(&pts), cf::DEFAULT_MAX_ITER, exec))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, geodesic, expansions);
criterion_main!(benches);
