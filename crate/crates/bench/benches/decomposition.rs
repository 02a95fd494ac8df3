use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cscc_bench::{corpus_graphs, edge_graph, network_graph, SIX_VERTEX, THREE_VARIABLE};
use cscc_core::scc::{trim, CancelToken};
use cscc_core::{coloured_scc, RunConfig};

fn configs() -> Vec<(&'static str, RunConfig)> {
    let base = RunConfig { record_relation: false, ..RunConfig::default() };
    vec![
        ("lock-step", RunConfig { saturation: false, ..base.clone() }),
        ("saturation", base.clone()),
        ("no-trim", RunConfig { trimming: false, ..base.clone() }),
        ("parallel-2", RunConfig { threads: 2, ..base }),
    ]
}

fn decomposition(c: &mut Criterion) {
    let mut graphs = vec![("six-vertex".to_string(), edge_graph(SIX_VERTEX))];
    graphs.push(("three-variable".to_string(), network_graph(THREE_VARIABLE)));
    graphs.extend(corpus_graphs(7, 3));

    let mut group = c.benchmark_group("decomposition");
    for (name, g) in &graphs {
        for (config, cfg) in configs() {
            group.bench_with_input(BenchmarkId::new(config, name), &cfg, |b, cfg| {
                b.iter(|| coloured_scc(g, cfg).expect("valid configuration"))
            });
        }
    }
    group.finish();
}

fn pivots_and_trim(c: &mut Criterion) {
    let graphs = corpus_graphs(7, 3);
    let mut group = c.benchmark_group("primitives");
    for (name, g) in &graphs {
        let space = g.vertex_colour_space();
        group.bench_function(BenchmarkId::new("pivots", name), |b| b.iter(|| g.pivots(&space)));
        group.bench_function(BenchmarkId::new("trim", name), |b| {
            b.iter(|| trim(g, &space, 2.0, &CancelToken::new()).expect("not cancelled"))
        });
    }
    group.finish();
}

criterion_group!(benches, decomposition, pivots_and_trim);
criterion_main!(benches);
