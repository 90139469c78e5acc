use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qmbody::exactmath::{int, rat};
use qmbody::lattice::CatalogOptions;
use qmbody::okounkov::{body_closed_form, body_report, sweep_mutations};
use qmbody::{build_cluster, build_lattice, Side};

fn clusters(c: &mut Criterion) {
    c.bench_function("cluster and lattice 48/7", |b| {
        b.iter(|| build_lattice(&build_cluster(black_box(&rat(48, 7))).unwrap()))
    });
    c.bench_function("cluster and lattice 1597/233", |b| {
        b.iter(|| build_lattice(&build_cluster(black_box(&rat(1597, 233))).unwrap()))
    });
}

fn bodies(c: &mut Criterion) {
    let opts = CatalogOptions::new(3);
    c.bench_function("body both routes 48/7", |b| {
        b.iter(|| body_report(black_box(&rat(48, 7)), &opts, Side::Plus).unwrap())
    });
    c.bench_function("body closed form 89/13", |b| {
        b.iter(|| body_closed_form(black_box(&rat(89, 13)), &opts, Side::Plus).unwrap())
    });
}

fn sweeps(c: &mut Criterion) {
    let opts = CatalogOptions::new(3);
    c.bench_function("mutations of the cubic on [1, 7]", |b| {
        b.iter(|| sweep_mutations(black_box(&int(1)), &int(7), &opts).unwrap())
    });
}

criterion_group!(benches, clusters, bodies, sweeps);
criterion_main!(benches);
