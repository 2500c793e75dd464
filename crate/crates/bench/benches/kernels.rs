use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use qfuchs_core::fixtures::{generate, Fixture, FixtureKind, FixtureSpec};
use qfuchs_core::{fuchsian_detect, trace_audit, DetectOptions, Quaternion, Rational, Scalar};

fn fixture(kind: FixtureKind, seed: u64) -> Fixture {
    let spec = FixtureSpec {
        word_length: 0,
        ..FixtureSpec::new(kind, seed)
    };
    generate(&spec).expect("fixture")
}

fn quaternion_product(c: &mut Criterion) {
    let a = Quaternion::new(0.3, -1.2, 0.7, 2.0);
    let b = Quaternion::new(-0.5, 0.25, 1.5, -0.8);
    c.bench_function("quaternion product f64", |bench| {
        bench.iter(|| black_box(&a) * black_box(&b))
    });

    let r = |n, d| Rational::from_ratio(n, d);
    let a = Quaternion::new(r(3, 7), r(-5, 2), r(0, 1), r(11, 3));
    let b = Quaternion::new(r(1, 9), r(0, 1), r(4, 5), r(-2, 1));
    c.bench_function("quaternion product exact", |bench| {
        bench.iter(|| black_box(&a) * black_box(&b))
    });
}

fn word_enumeration(c: &mut Criterion) {
    let g = fixture(FixtureKind::So21Pair, 1).to_f64();
    c.bench_function("enumerate words to length 6 (f64)", |bench| {
        bench.iter(|| g.enumerate_words(black_box(6)).count())
    });
}

fn audit_and_detect(c: &mut Criterion) {
    let mut group = c.benchmark_group("detector");
    group.sample_size(20);
    if let Fixture::Exact(g) = fixture(FixtureKind::HlinePair, 1) {
        group.bench_function("exact trace audit to length 6 (hline-pair)", |bench| {
            bench.iter(|| trace_audit(black_box(&g), 6, 1e-9))
        });
        group.bench_function("detect hline-pair (exact)", |bench| {
            bench.iter(|| fuchsian_detect(black_box(&g), &DetectOptions::default()))
        });
    }
    let so21 = fixture(FixtureKind::So21Pair, 1).to_f64();
    group.bench_function("detect so21-pair (f64)", |bench| {
        bench.iter(|| fuchsian_detect(black_box(&so21), &DetectOptions::default()))
    });
    let generic = fixture(FixtureKind::GenericPair, 1).to_f64();
    group.bench_function("detect generic-pair (f64)", |bench| {
        bench.iter(|| fuchsian_detect(black_box(&generic), &DetectOptions::default()))
    });
    group.finish();
}

criterion_group!(benches, quaternion_product, word_enumeration, audit_and_detect);
criterion_main!(benches);
