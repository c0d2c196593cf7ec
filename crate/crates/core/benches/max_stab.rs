use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use scoh::finabel::{max_stab_index_with, FinAbGroup};
use scoh::oracle::{equivalence_check, DEFAULT_CAP};
use scoh::Parallelism;

fn modes() -> [(&'static str, Parallelism); 3] {
    [
        ("sequential", Parallelism::Sequential),
        ("workers-1", Parallelism::Workers(1)),
        ("workers-default", Parallelism::Workers(0)),
    ]
}

fn max_stab(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_stab_index");
    group.sample_size(10);
    for factors in [
        vec![(2, 2), (2, 1), (2, 1)],
        vec![(3, 2), (3, 1)],
        vec![(2, 1); 4],
    ] {
        let g = FinAbGroup::new(&factors).unwrap();
        for (name, par) in modes() {
            group.bench_with_input(BenchmarkId::new(name, &g), &g, |b, g| {
                b.iter(|| max_stab_index_with(g, DEFAULT_CAP, par).unwrap())
            });
        }
    }
    group.finish();
}

fn equivalence(c: &mut Criterion) {
    let mut group = c.benchmark_group("equivalence_check");
    group.sample_size(10);
    let g = FinAbGroup::new(&[(2, 2), (2, 1), (2, 1)]).unwrap();
    for (name, par) in modes() {
        group.bench_with_input(BenchmarkId::new(name, &g), &g, |b, g| {
            b.iter(|| equivalence_check(g, DEFAULT_CAP, par).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, max_stab, equivalence);
criterion_main!(benches);
