use std::sync::Arc;

use cocenter::bubbles::identity_suite;
use cocenter::current::{weyl_graded_char, ChevalleyData};
use cocenter::klr::{all_sequences, rearrangements, KlrAlgebra};
use cocenter::stendhal::{Block, Deformation};
use cocenter::symfunc::WeightList;
use cocenter::trace::cocenter_dims;
use cocenter::{CartanDatum, Weight};
use cocenter_bench::{setup, small_cases};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn symmetric_functions(c: &mut Criterion) {
    let cartan = CartanDatum::new("A2").unwrap();
    let lambdas = WeightList::new(vec![Weight(vec![1, 0]), Weight(vec![0, 1])]);
    c.bench_function("identity suite A2 order 6", |b| b.iter(|| identity_suite(&cartan, &lambdas, 6, 8)));
}

fn klr(c: &mut Criterion) {
    let cartan = CartanDatum::new("A2").unwrap();
    c.bench_function("KLR graded dims A2 m=3", |b| {
        b.iter(|| {
            let alg = KlrAlgebra::new(cartan.clone());
            let mut total = 0;
            for bottom in all_sequences(&cartan, 3) {
                for top in rearrangements(&bottom) {
                    for d in -6..=4 {
                        total += alg.representation_rank(&bottom, &top, d);
                    }
                }
            }
            black_box(total)
        })
    });
}

fn hom_spaces(c: &mut Criterion) {
    let s = setup("A1", &[&[1], &[1]], Deformation::Zero);
    c.bench_function("Hom dims A1 (1,1) labels [1,1]", |b| {
        b.iter(|| {
            let mut block = Block::new(&s, &[1, 1]).unwrap();
            let objs = block.nonviolated();
            let mut total = 0;
            for x in &objs {
                for y in &objs {
                    total += block.hom_dims(x, y).unwrap().total.unwrap_or(0);
                }
            }
            black_box(total)
        })
    });
}

fn cocenters(c: &mut Criterion) {
    let mut group = c.benchmark_group("cocenter dims m<=2 D=4");
    group.sample_size(10);
    for (t, ws) in small_cases() {
        let s = setup(t, &ws, Deformation::Zero);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{t} {ws:?}")), &s, |b, s| {
            b.iter(|| cocenter_dims(s, 2, 4).unwrap())
        });
    }
    group.finish();
}

fn weyl_modules(c: &mut Criterion) {
    let mut group = c.benchmark_group("Weyl character D=6");
    for (t, ws) in small_cases() {
        let chev = Arc::new(ChevalleyData::new(CartanDatum::new(t).unwrap()).unwrap());
        let lambdas: Vec<Weight> = ws.iter().map(|w| Weight(w.to_vec())).collect();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{t} {ws:?}")), &lambdas, |b, l| {
            b.iter(|| weyl_graded_char(&chev, l, 6).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, symmetric_functions, klr, hom_spaces, cocenters, weyl_modules);
criterion_main!(benches);
