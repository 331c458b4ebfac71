use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use wos_bench::{corpus, mined};
use wos_core::mine::{build_graph, MineConfig};
use wos_core::query::NameIndex;
use wos_core::ranking::{compute_measure, Measure, RankingCache};
use wos_core::snapshot;

fn mining(c: &mut Criterion) {
    let mut group = c.benchmark_group("mine");
    group.sample_size(10);
    for (scholars, pubs) in [(100, 500), (400, 2000)] {
        let input = corpus(scholars, pubs);
        group.bench_with_input(BenchmarkId::from_parameter(pubs), &input, |b, input| {
            b.iter(|| build_graph(black_box(&input.records), input.geo.clone(), &MineConfig::default()).unwrap())
        });
    }
    group.finish();
}

fn ranking(c: &mut Criterion) {
    let g = mined(400, 2000);
    let mut group = c.benchmark_group("rank");
    for m in Measure::ALL {
        group.bench_function(m.as_str(), |b| b.iter(|| compute_measure(m, black_box(&g))));
    }
    let cache = RankingCache::new();
    group.bench_function("cached", |b| b.iter(|| cache.get(Measure::Citations, black_box(&g))));
    group.finish();
}

fn lookup(c: &mut Criterion) {
    let g = mined(400, 2000);
    let idx = NameIndex::build(&g);
    let mut group = c.benchmark_group("fuzzy");
    for frag in ["al", "alic", "smiht", "rupert hadad"] {
        group.bench_function(frag, |b| b.iter(|| idx.fuzzy_lookup(black_box(frag), 20)));
    }
    group.finish();
}

fn persistence(c: &mut Criterion) {
    let g = mined(400, 2000);
    let bytes = snapshot::encode(&g);
    c.bench_function("snapshot/encode", |b| b.iter(|| snapshot::encode(black_box(&g))));
    c.bench_function("snapshot/decode", |b| b.iter(|| snapshot::decode(black_box(&bytes)).unwrap()));
}

criterion_group!(benches, mining, ranking, lookup, persistence);
criterion_main!(benches);
