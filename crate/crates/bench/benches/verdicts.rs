use criterion::{criterion_group, criterion_main, Criterion};
use osp_core::model::rat;
use osp_core::osp_graph::{build_osp_graph, check_cmon};
use osp_core::scheduling::{build_m4, optimal_makespan};

fn bench_graph_and_cmon(c: &mut Criterion) {
    let domain = [1, 3, 10, 35].map(rat).to_vec();
    let m = build_m4(4, 4, &domain).unwrap();
    c.bench_function("build_osp_graph m4 n=4 agent 0", |b| {
        b.iter(|| build_osp_graph(&m, 0).unwrap())
    });
    let g = build_osp_graph(&m, 0).unwrap();
    c.bench_function("check_cmon m4 n=4 agent 0", |b| b.iter(|| check_cmon(&g)));
}

fn bench_optimum(c: &mut Criterion) {
    let types = [1, 3, 10, 35, 3, 10].map(rat).to_vec();
    c.bench_function("optimal_makespan 6 machines 12 jobs", |b| {
        b.iter(|| optimal_makespan(&types, 12).unwrap())
    });
}

criterion_group!(benches, bench_graph_and_cmon, bench_optimum);
criterion_main!(benches);
