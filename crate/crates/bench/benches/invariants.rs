use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use hdw_core::action::ActionSpec;
use hdw_core::snf::smith_normal_form;
use hdw_core::tqft::{partition_closed, verify_gluing};
use hdw_core::{cohomology, corpus, oracle, CochainComplex, DwTheory, FiniteAbelianGroup};

fn snf(c: &mut Criterion) {
    let torus3 = Arc::new(corpus::torus3());
    let complex = CochainComplex::absolute(Arc::clone(&torus3));
    let d1 = complex.d(1).clone();
    c.bench_function("snf/torus3_d1", |b| b.iter(|| smith_normal_form(black_box(&d1))));
}

fn groups(c: &mut Criterion) {
    let torus3 = Arc::new(corpus::torus3());
    let g = FiniteAbelianGroup::cyclic(4).unwrap();
    c.bench_function("cohomology/torus3_h1_z4", |b| {
        b.iter(|| {
            // fresh complex so the SNF cache is cold
            let complex = CochainComplex::absolute(Arc::clone(&torus3));
            cohomology(&complex, 1, black_box(&g)).order()
        })
    });
}

fn partitions(c: &mut Criterion) {
    let torus = Arc::new(corpus::torus2());
    let s2xs2 = Arc::new(corpus::s2xs2());
    let twisted = DwTheory::untwisted(1, 4).with_action(ActionSpec::cup_square(1));
    c.bench_function("partition/torus2_z4_cup_square", |b| b.iter(|| partition_closed(&torus, black_box(&twisted)).unwrap()));
    let t4 = DwTheory::untwisted(2, 3).with_action(ActionSpec::cup_square(1));
    c.bench_function("partition/s2xs2_z3_cup_square", |b| b.iter(|| partition_closed(&s2xs2, black_box(&t4)).unwrap()));
}

fn gluing(c: &mut Criterion) {
    let cylinder = Arc::new(corpus::cylinder());
    let slab = Arc::new(corpus::slab());
    let twisted = DwTheory::untwisted(1, 3).with_action(ActionSpec::cup_square(1));
    c.bench_function("gluing/cylinder_z3_cup_square", |b| b.iter(|| verify_gluing(&cylinder, black_box(&twisted), 1e-9).unwrap()));
    let plain = DwTheory::untwisted(1, 2);
    c.bench_function("gluing/slab_z2", |b| b.iter(|| verify_gluing(&slab, black_box(&plain), 1e-9).unwrap()));
}

fn brute_force(c: &mut Criterion) {
    let torus = corpus::torus2();
    c.bench_function("oracle/torus2_z2_partition", |b| {
        b.iter(|| oracle::partition(&torus, 1, 2, 1, oracle::ORACLE_LIMIT).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = snf, groups, partitions, gluing, brute_force
}
criterion_main!(benches);
