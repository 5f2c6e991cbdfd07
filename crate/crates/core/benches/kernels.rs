use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use crossbound::drawers::draw_planar_partition;
use crossbound::generators::{gen_k33_free, random_gnp, random_order};
use crossbound::geometry::{convex_crossings_with, count_crossings_with};
use crossbound::oracle::convex_optimum_with;
use crossbound::{Drawing, Exec};
use std::hint::black_box;

fn modes() -> Vec<(&'static str, Exec)> {
    let mut v = vec![("sequential", Exec::Sequential)];
    #[cfg(feature = "parallel")]
    v.push(("parallel", Exec::Parallel));
    v
}

fn crossings(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_crossings");
    group.sample_size(10);
    for copies in [2, 6] {
        let inst = gen_k33_free(20, copies).unwrap();
        let d = draw_planar_partition(&inst.graph, &inst.partition)
            .unwrap()
            .drawing;
        for (name, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(name, inst.graph.n()), &d, |b, d| {
                b.iter(|| count_crossings_with(black_box(d), exec).unwrap().total)
            });
        }
    }
    group.finish();
}

fn convex(c: &mut Criterion) {
    let mut group = c.benchmark_group("convex_crossings");
    for n in [60, 200] {
        let g = random_gnp(n, 0.2, 1);
        let order = random_order(n, 2);
        for (name, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| {
                    convex_crossings_with(black_box(&g), &order, exec)
                        .unwrap()
                        .total
                })
            });
        }
    }
    // the generic counter on the same convex drawing, for scale
    let g = random_gnp(60, 0.2, 1);
    let d = Drawing::convex(&g, &random_order(60, 2));
    group.bench_function("geometric/60", |b| {
        b.iter(|| {
            count_crossings_with(black_box(&d), Exec::default())
                .unwrap()
                .total
        })
    });
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("convex_optimum");
    group.sample_size(10);
    let g = random_gnp(8, 0.5, 3);
    for (name, exec) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| convex_optimum_with(black_box(&g), exec).unwrap().crossings)
        });
    }
    group.finish();
}

criterion_group!(benches, crossings, convex, oracle);
criterion_main!(benches);
