use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nuretract::graph::families;
use nuretract::graph::DEFAULT_SIZE_CAP;
use nuretract::nu::{bandelt_3nu_criterion, find_nu_polymorphism, theorem1_forward};
use nuretract::obstruction::{elementary_obstructions_directed, enumerate_h_trees, verify_duality, LeafColors};
use nuretract_bench::templates;

fn nu_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("nu_search_arity3");
    for h in templates() {
        group.bench_function(h.name().to_string(), |b| b.iter(|| find_nu_polymorphism(black_box(&h), 3).unwrap()));
    }
    group.finish();
    let c6 = families::cycle(6);
    c.bench_function("interval_criterion_C6", |b| b.iter(|| bandelt_3nu_criterion(black_box(&c6)).unwrap()));
}

fn forward(c: &mut Criterion) {
    let c6 = families::cycle(6);
    let mut group = c.benchmark_group("forward_construction");
    group.sample_size(10);
    group.bench_function("C6", |b| b.iter(|| theorem1_forward(black_box(&c6), 3, DEFAULT_SIZE_CAP).unwrap()));
    group.finish();
}

fn obstructions(c: &mut Criterion) {
    let c6 = families::cycle(6);
    c.bench_function("h_trees_C6_k3_n6", |b| b.iter(|| enumerate_h_trees(black_box(&c6), 3, 6, LeafColors::Single).unwrap()));
    let arc = families::arc();
    let family: Vec<_> = elementary_obstructions_directed(&arc).unwrap().into_iter().map(|e| e.graph).collect();
    let mut group = c.benchmark_group("duality");
    group.sample_size(10);
    group.bench_function("arc_b3", |b| b.iter(|| verify_duality(black_box(&arc), &family, 3, true).unwrap()));
    group.finish();
}

criterion_group!(benches, nu_search, forward, obstructions);
criterion_main!(benches);
