use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hcn_bench::{dvg_order, refined_order};
use hcn_core::classnum::{ClassNumberEngine, DEFAULT_BUDGET};
use hcn_core::ThetaEngine;

fn recursion(c: &mut Criterion) {
    let dvg = dvg_order();
    let refined = refined_order();
    // a fresh engine per iteration so the memo does not hide the work
    c.bench_function("classnum/dvg", |b| {
        b.iter(|| ClassNumberEngine::default().class_number(black_box(&dvg)).unwrap())
    });
    c.bench_function("classnum/refined", |b| {
        b.iter(|| ClassNumberEngine::default().class_number(black_box(&refined)).unwrap())
    });
    c.bench_function("transfer/dvg-2-4", |b| {
        b.iter(|| {
            ClassNumberEngine::new(ThetaEngine::GenFun, DEFAULT_BUDGET)
                .transfer_check(black_box(&dvg), 2, 4)
                .unwrap()
        })
    });
}

criterion_group!(benches, recursion);
criterion_main!(benches);
