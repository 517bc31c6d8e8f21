use criterion::{criterion_group, criterion_main, Criterion};

use qcdcl_core::deps::{compute_drrs, compute_dstd};
use qcdcl_core::gen::{generate, Family, FamilySpec};
use qcdcl_core::harness::{compute_gauge, paper_corpus, run_corpus_entry, GAUGE_BUDGET};
use qcdcl_core::solver::{solve, SolverConfig};

fn bench_dep_schemes(c: &mut Criterion) {
    let f = generate(FamilySpec::new(Family::PreRrsTrapdoor, 4));
    c.bench_function("drrs pre_rrs_trapdoor:4", |b| b.iter(|| compute_drrs(&f)));
    let g = generate(FamilySpec::new(Family::TwoPhpAndCt, 4));
    c.bench_function("dstd two_php_and_ct:4", |b| b.iter(|| compute_dstd(&g)));
}

fn bench_solver(c: &mut Criterion) {
    let f = generate(FamilySpec::new(Family::StdDepTrap, 3));
    let cfg = SolverConfig { clause_dep: qcdcl_core::SchemeTag::Std, ..SolverConfig::default() };
    c.bench_function("solve std_dep_trap:3 (std)", |b| b.iter(|| solve(&f, &cfg).unwrap()));

    let corpus = paper_corpus(6);
    let dle = corpus.last().unwrap().clone();
    c.bench_function("replay double_long_eq:6 cube corpus", |b| {
        b.iter(|| run_corpus_entry(&dle).unwrap())
    });
}

fn bench_gauge(c: &mut Criterion) {
    let f = generate(FamilySpec::new(Family::DoubleLongEq, 2));
    c.bench_function("gauge double_long_eq:2", |b| {
        b.iter(|| compute_gauge(&f, GAUGE_BUDGET).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_dep_schemes, bench_solver, bench_gauge
}
criterion_main!(benches);
