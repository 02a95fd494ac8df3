//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use cscc_core::corpus::{corpus, CorpusParams};
use cscc_core::{expand, parse_edges, parse_model, ColouredGraph, Engine};

pub const SIX_VERTEX: &str = include_str!("../../../data/models/six_vertex.edges");
pub const THREE_VARIABLE: &str = include_str!("../../../data/models/three_variable.bnet");

pub fn edge_graph(text: &str) -> ColouredGraph {
    ColouredGraph::from_edge_list(&parse_edges(text).expect("fixture parses")).expect("fixture encodes")
}

pub fn network_graph(text: &str) -> ColouredGraph {
    let net = expand(&parse_model(text).expect("fixture parses"));
    let engine = Engine::new(Arc::new(net.universe().expect("distinct names")));
    ColouredGraph::from_network(&net, &engine).expect("fixture encodes")
}

/// The `count` largest networks of a seeded corpus, by coloured state count.
pub fn corpus_graphs(seed: u64, count: usize) -> Vec<(String, ColouredGraph)> {
    let mut nets = corpus(seed, 64, &CorpusParams::default());
    nets.sort_by_key(|n| std::cmp::Reverse(n.variables.len() * 2 + n.functions.iter().map(|f| f.rows()).sum::<usize>()));
    nets.truncate(count);
    nets.iter()
        .enumerate()
        .map(|(i, n)| (format!("corpus-{i}"), network_graph(&n.to_bnet())))
        .collect()
}
