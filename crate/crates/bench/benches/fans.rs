use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tropmod::bergman::{chains_of_flats_fan, nested_set_fan, one_connected_building_set};
use tropmod::fibre::verify_fibre_theorem;
use tropmod::moduli::{chamber_representatives, m0n_fan, m0w_fan};
use tropmod_bench::{complete, heavy_light, weights};

fn bergman(c: &mut Criterion) {
    let k5 = complete(5);
    c.bench_function("chains_of_flats K5", |b| b.iter(|| chains_of_flats_fan(black_box(&k5)).unwrap()));
    c.bench_function("nested_set K5", |b| {
        b.iter(|| nested_set_fan(&k5, &one_connected_building_set(black_box(&k5)).unwrap()).unwrap())
    });
}

fn moduli(c: &mut Criterion) {
    for n in [5, 6, 7] {
        c.bench_function(&format!("m0n_fan n={n}"), |b| b.iter(|| m0n_fan(black_box(n)).unwrap()));
    }
    let hl = heavy_light(3, 3);
    c.bench_function("m0w_fan heavy/light 3+3", |b| b.iter(|| m0w_fan(black_box(&hl)).unwrap()));
    let bad = weights("1,1,3/4,3/4,1/4");
    c.bench_function("m0w_fan obstruction n=5", |b| b.iter(|| m0w_fan(black_box(&bad)).unwrap()));
    let mut group = c.benchmark_group("chambers");
    group.sample_size(10);
    group.bench_function("representatives n=6", |b| b.iter(|| chamber_representatives(black_box(6)).unwrap()));
    group.finish();
}

fn fibre(c: &mut Criterion) {
    let mut group = c.benchmark_group("fibre");
    group.sample_size(10);
    for s in ["1,1,1,1/4,1/4", "1,1,1,1/4,1/4,1/4"] {
        let w = weights(s);
        group.bench_function(s, |b| b.iter(|| verify_fibre_theorem(black_box(&w), 100, 0).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bergman, moduli, fibre);
criterion_main!(benches);
