use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use inls_bench::gaussian;
use inls_core::solver::{default_pairs, evolve, picard_iterate, split_step, PotentialSpec};

fn spec() -> PotentialSpec {
    PotentialSpec::new(0.25, 3.0, -1).expect("valid spec")
}

fn steps(c: &mut Criterion) {
    let mut group = c.benchmark_group("split_step");
    for (dim, points) in [(1, 512), (2, 128), (3, 32)] {
        let u = gaussian(dim, points, 1.0);
        group.bench_with_input(BenchmarkId::new(format!("{dim}d"), points), &u, |b, u| {
            b.iter(|| split_step(black_box(u), 1e-3, &spec()))
        });
    }
    group.finish();
}

fn evolution(c: &mut Criterion) {
    let u = gaussian(1, 512, 1.0);
    c.bench_function("evolve_1d_1000_steps", |b| b.iter(|| evolve(black_box(&u), 1.0, 1e-3, &spec(), 10)));
}

fn picard(c: &mut Criterion) {
    let u = gaussian(1, 256, 0.2);
    let spec = PotentialSpec::new(0.25, 1.0, -1).expect("valid spec");
    c.bench_function("picard_1d_32x6", |b| {
        b.iter(|| picard_iterate(black_box(&u), 1.0, 32, 6, &spec, &default_pairs()))
    });
}

criterion_group!(benches, steps, evolution, picard);
criterion_main!(benches);
