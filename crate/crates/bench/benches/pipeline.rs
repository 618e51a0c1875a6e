use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use compack::necklace::{
    eliminated_polynomial, enumerate_skew_candidates, search_triples, AngleContext,
    DEFAULT_MAX_BITS,
};
use compack::packing::{
    build_close_packing, fill_octahedral_holes, recover_stacking, verify_compact, StackingSequence,
};
use compack::shell::{search_shells, shell_word_sets, DEFAULT_NODE_BUDGET, KISSING_BOUND};
use compack_bench::{compact_radius, small_radius};

fn necklaces(c: &mut Criterion) {
    c.bench_function("skew candidates", |b| b.iter(enumerate_skew_candidates));
    let word = "1111".parse().unwrap();
    c.bench_function("eliminated polynomial 1111", |b| {
        b.iter(|| eliminated_polynomial(black_box(&word)).unwrap())
    });
    let r = compact_radius();
    c.bench_function("large triples at √2−1", |b| {
        b.iter(|| search_triples(AngleContext::Large, black_box(&r), DEFAULT_MAX_BITS).unwrap())
    });
    let s = small_radius();
    c.bench_function("small triples at 3−2√2", |b| {
        b.iter(|| search_triples(AngleContext::Small, black_box(&s), DEFAULT_MAX_BITS).unwrap())
    });
}

fn shells(c: &mut Criterion) {
    let (large, small) = shell_word_sets();
    c.bench_function("shell search", |b| {
        b.iter(|| search_shells(&large, &small, KISSING_BOUND, DEFAULT_NODE_BUDGET).unwrap())
    });
}

fn packings(c: &mut Criterion) {
    let seq: StackingSequence = "ABC".parse().unwrap();
    c.bench_function("build, fill and verify ABC", |b| {
        b.iter(|| {
            let p = fill_octahedral_holes(&build_close_packing(black_box(&seq))).unwrap();
            verify_compact(&p).is_compact()
        })
    });
    let filled = fill_octahedral_holes(&build_close_packing(&"ABACBC".parse().unwrap())).unwrap();
    c.bench_function("recover stacking ABACBC", |b| {
        b.iter(|| recover_stacking(black_box(&filled)).unwrap())
    });
}

criterion_group! {
    name = pipeline;
    config = Criterion::default().sample_size(10);
    targets = necklaces, shells, packings
}
criterion_main!(pipeline);
