use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use inls_bench::params;
use inls_core::exponent::classify_pair;
use inls_core::{rat, verify_lemma, LemmaId, Pair, Rational};

fn verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_lemma");
    for id in LemmaId::ALL {
        let ps = params(id, 32);
        group.bench_with_input(BenchmarkId::from_parameter(id.cli_name()), &ps, |b, ps| {
            b.iter(|| ps.iter().map(|p| verify_lemma(id, black_box(p)).map(|r| r.pass)).collect::<Vec<_>>())
        });
    }
    group.finish();
}

fn classify(c: &mut Criterion) {
    let pairs = [Pair::new(Rational::inf(), rat(2, 1)), Pair::new(rat(8, 3), rat(4, 1)), Pair::new(rat(2, 1), rat(7, 1))];
    c.bench_function("classify_pair", |b| {
        b.iter(|| pairs.iter().map(|p| classify_pair(black_box(p), 3, &rat(1, 2), &rat(1, 1000))).collect::<Vec<_>>())
    });
}

criterion_group!(benches, verify, classify);
criterion_main!(benches);
