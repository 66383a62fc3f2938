use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use koszulator::dg::{DgAlgebra, ProductRule};
use koszulator::koszul::{CompleteIntersection, CycleStrategy};
use koszulator::resolution::{verify_minimal_and_exact, ResolutionF};
use koszulator::tower::ConeTower;
use koszulator::zeta::ZetaMap;
use koszulator::{Config, GradedRing};

fn ring(text: &str) -> CompleteIntersection {
    let r = GradedRing::parse(text, Config::default()).expect("ring parses");
    CompleteIntersection::new(Arc::new(r), CycleStrategy::default()).expect("certified")
}

fn rings() -> Vec<(&'static str, CompleteIntersection)> {
    vec![
        ("c2", ring("field rational\nvars x,y,z\ngen x^2\ngen y^2+z^2\n")),
        ("c3", ring("field rational\nvars x,y,z\ngen x^2+y^2\ngen x*z\ngen x*y+z^2\n")),
        ("c3-mod-p", ring("field prime 32003\nvars x,y,z\ngen x^2+y^2\ngen x*z\ngen x*y+z^2\n")),
    ]
}

fn assemble(c: &mut Criterion) {
    let mut g = c.benchmark_group("assemble F");
    for (name, ci) in rings() {
        g.bench_with_input(BenchmarkId::new(name, 10), &ci, |b, ci| b.iter(|| ResolutionF::assemble(ci, black_box(10))));
    }
    g.finish();
}

fn zeta(c: &mut Criterion) {
    let mut g = c.benchmark_group("ζ^k");
    for (name, ci) in rings() {
        g.bench_with_input(BenchmarkId::new(name, 4), &ci, |b, ci| b.iter(|| ZetaMap::new(ci, black_box(4))));
    }
    g.finish();
}

fn tower(c: &mut Criterion) {
    let mut g = c.benchmark_group("cone tower");
    for (name, ci) in rings() {
        g.bench_with_input(BenchmarkId::new(name, 4), &ci, |b, ci| b.iter(|| ConeTower::build(ci, black_box(4))));
    }
    g.finish();
}

fn exactness(c: &mut Criterion) {
    let mut g = c.benchmark_group("strand exactness");
    g.sample_size(10);
    for (name, ci) in rings() {
        let f = ResolutionF::assemble(&ci, 8).expect("assembles");
        g.bench_with_input(BenchmarkId::new(name, 8), &(ci, f), |b, (ci, f)| {
            b.iter(|| verify_minimal_and_exact(ci, f, black_box(12)))
        });
    }
    g.finish();
}

fn leibniz(c: &mut Criterion) {
    let mut g = c.benchmark_group("Leibniz");
    g.sample_size(10);
    for (name, ci) in rings() {
        let f = ResolutionF::assemble(&ci, 8).expect("assembles");
        let dg = DgAlgebra::new(&f, ci.ring(), ProductRule::DividedPowers);
        let pairs = dg.pairs_up_to(6);
        g.bench_function(BenchmarkId::new(name, pairs.len()), |b| b.iter(|| dg.verify_leibniz(black_box(&pairs))));
    }
    g.finish();
}

criterion_group!(benches, assemble, zeta, tower, exactness, leibniz);
criterion_main!(benches);
