use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qdbis_core::containers::{
    build_pair_index, decode, encode, FamilyQuery, TrivialPhi, DEFAULT_GAMMA,
};
use qdbis_core::cube::{closure, neighborhood, Dim, Parity, VertexSet};
use qdbis_core::profile::{sweep_profiles, Features};

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    for d in [4, 5] {
        let dim = Dim::new(d).unwrap();
        group.bench_with_input(BenchmarkId::new("plain", d), &dim, |b, &dim| {
            b.iter(|| sweep_profiles(black_box(dim), Features::PLAIN, 1).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("closure-indicator", d), &dim, |b, &dim| {
            b.iter(|| sweep_profiles(black_box(dim), Features::CLOSURE_INDICATOR, 1).unwrap())
        });
    }
    group.finish();
}

fn closure_ops(c: &mut Criterion) {
    let mut group = c.benchmark_group("closure");
    for d in [6, 10, 14] {
        let dim = Dim::new(d).unwrap();
        // every fourth even vertex
        let ids = (0..1u32 << d)
            .filter(|v| Parity::of(*v) == Parity::Even)
            .step_by(4);
        let a = VertexSet::from_ids(dim, ids).unwrap();
        group.bench_with_input(BenchmarkId::new("neighborhood", d), &a, |b, a| {
            b.iter(|| neighborhood(black_box(a)))
        });
        group.bench_with_input(BenchmarkId::new("closure", d), &a, |b, a| {
            b.iter(|| closure(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn certificates(c: &mut Criterion) {
    let dim = Dim::new(5).unwrap();
    let q = FamilyQuery::new(dim, 2, 8).unwrap();
    let index = build_pair_index(&q, &TrivialPhi).unwrap();
    let ctxs: Vec<_> = index.contexts().map(Result::unwrap).collect();
    let mut group = c.benchmark_group("certificate");
    group.bench_function("encode G(2,8) d=5", |b| {
        b.iter(|| {
            for ctx in &ctxs {
                for m in ctx.preimage() {
                    black_box(encode(ctx, m, DEFAULT_GAMMA).unwrap());
                }
            }
        })
    });
    let certs: Vec<_> = ctxs
        .iter()
        .flat_map(|ctx| {
            ctx.preimage()
                .iter()
                .map(move |m| (ctx, encode(ctx, m, DEFAULT_GAMMA).unwrap()))
        })
        .collect();
    group.bench_function("decode G(2,8) d=5", |b| {
        b.iter(|| {
            for (ctx, cert) in &certs {
                black_box(decode(ctx, cert, DEFAULT_GAMMA).unwrap());
            }
        })
    });
    group.finish();
}

criterion_group!(benches, sweep, closure_ops, certificates);
criterion_main!(benches);
