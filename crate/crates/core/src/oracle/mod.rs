//! Explicit-state reference implementation.
//!
//! Graphs are enumerated by direct evaluation of the update expressions and
//! decomposed per colour with Tarjan's algorithm. Nothing here touches the
//! decision-diagram engine except [`compare`], which only reads the symbolic
//! result.

mod scc;

use thiserror::Error;

use crate::engine::{SymSet, VarId, VariableUniverse};
use crate::graph::EdgeList;
use crate::model::ExpandedNetwork;

pub use scc::{kosaraju, tarjan, tarjan_per_colour, ExplicitRelation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("explicit graph would have {pairs} coloured vertices, above the limit of {limit}")]
    TooLarge { pairs: u128, limit: u128 },
    #[error("the colour constraint mentions a state variable")]
    StateConstraint,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
}

/// How explicit vertices and colours map to diagram variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Encoding {
    /// Vertex `x` has `s_i = bit i of x`; colour `c` has `c_j = bit j of c`.
    Network,
    /// Vertex and colour numbers are written most significant bit first over
    /// the state (resp. input) variables.
    Lexicographic,
}

#[derive(Clone, Debug)]
pub struct ExplicitColouredGraph {
    pub num_vertices: usize,
    /// Valid colours: input valuations, or colour numbers for edge lists.
    pub colours: Vec<u64>,
    /// `successors[k][u]`: successors of `u` under colour `colours[k]`.
    pub successors: Vec<Vec<Vec<usize>>>,
    pub encoding: Encoding,
    pub vertex_labels: Option<Vec<String>>,
    pub colour_labels: Option<Vec<String>>,
}

fn bit(x: u64, i: usize) -> bool {
    x >> i & 1 == 1
}

/// Enumerates the asynchronous coloured graph of `net`: under colour `c`,
/// `u -> v` iff `v != u` and `v` is `u` with `u_i` replaced by `b_i(u, c)`.
pub fn enumerate_graph(net: &ExpandedNetwork, limit: u128) -> Result<ExplicitColouredGraph, OracleError> {
    let (n, m) = (net.num_variables(), net.num_inputs());
    let pairs = 1u128.checked_shl((n + m) as u32).filter(|_| n + m < 127).unwrap_or(u128::MAX);
    if pairs > limit || n >= 63 || m >= 63 {
        return Err(OracleError::TooLarge { pairs, limit });
    }
    if net.valid_colour_constraint.mentions_var() {
        return Err(OracleError::StateConstraint);
    }
    let colours: Vec<u64> = (0..1u64 << m)
        .filter(|&c| net.valid_colour_constraint.eval(&|_| false, &|j| bit(c, j)))
        .collect();
    let successors = colours
        .iter()
        .map(|&c| {
            (0..1u64 << n)
                .map(|x| {
                    let mut out = Vec::new();
                    for (i, b) in net.updates.iter().enumerate() {
                        let value = b.eval(&|k| bit(x, k), &|j| bit(c, j));
                        if value != bit(x, i) {
                            out.push((x ^ (1 << i)) as usize);
                        }
                    }
                    out
                })
                .collect()
        })
        .collect();
    Ok(ExplicitColouredGraph {
        num_vertices: 1 << n,
        colours,
        successors,
        encoding: Encoding::Network,
        vertex_labels: None,
        colour_labels: None,
    })
}

/// Explicit graph of an edge list; vertices and colours are numbered in
/// lexicographic label order.
pub fn graph_from_edges(list: &EdgeList) -> Result<ExplicitColouredGraph, OracleError> {
    let mut vertices = list.vertices.clone();
    vertices.sort();
    vertices.dedup();
    let mut colours = list.colours.clone();
    colours.sort();
    colours.dedup();
    let index = |labels: &[String], l: &str| {
        labels.binary_search_by(|x| x.as_str().cmp(l)).map_err(|_| OracleError::UnknownLabel(l.to_string()))
    };
    let mut successors = vec![vec![Vec::new(); vertices.len()]; colours.len()];
    for (a, c, b) in &list.triples {
        let (a, c, b) = (index(&vertices, a)?, index(&colours, c)?, index(&vertices, b)?);
        if !successors[c][a].contains(&b) {
            successors[c][a].push(b);
        }
    }
    Ok(ExplicitColouredGraph {
        num_vertices: vertices.len(),
        colours: (0..colours.len() as u64).collect(),
        successors,
        encoding: Encoding::Lexicographic,
        vertex_labels: Some(vertices),
        colour_labels: Some(colours),
    })
}

impl ExplicitColouredGraph {
    /// Value of every variable for the triple `(u, colours[k], v)`, with `v`
    /// on the primed variables.
    pub fn assignment(&self, universe: &VariableUniverse, u: usize, k: usize, v: usize) -> impl Fn(VarId) -> bool {
        let (n, m) = (universe.num_states(), universe.num_inputs());
        let colour = self.colours[k];
        let lexicographic = self.encoding == Encoding::Lexicographic;
        let position = move |i: usize, width: usize| if lexicographic { width - 1 - i } else { i };
        let (u, v) = (u as u64, v as u64);
        let vars: Vec<bool> = (0..universe.num_vars())
            .map(|idx| {
                if idx < 2 * n {
                    let x = if idx % 2 == 0 { u } else { v };
                    bit(x, position(idx / 2, n))
                } else {
                    bit(colour, position(idx - 2 * n, m))
                }
            })
            .collect();
        move |var: VarId| vars[var.index()]
    }

    /// Decodes a full assignment of the diagram variables into
    /// `(u, colour number, v)`.
    fn decode(&self, universe: &VariableUniverse, vars: &[VarId], values: &[bool]) -> (u64, u64, u64) {
        let (n, m) = (universe.num_states(), universe.num_inputs());
        let lexicographic = self.encoding == Encoding::Lexicographic;
        let position = |i: usize, width: usize| if lexicographic { width - 1 - i } else { i };
        let (mut u, mut c, mut v) = (0u64, 0u64, 0u64);
        for (var, value) in vars.iter().zip(values) {
            let idx = var.index();
            let b = *value as u64;
            if idx < 2 * n {
                let shift = position(idx / 2, n);
                if idx % 2 == 0 {
                    u |= b << shift;
                } else {
                    v |= b << shift;
                }
            } else {
                c |= b << position(idx - 2 * n, m);
            }
        }
        (u, c, v)
    }

    /// Renders a triple with labels where available.
    pub fn describe(&self, u: usize, k: usize, v: usize) -> String {
        let vertex = |x: usize| match &self.vertex_labels {
            Some(l) => l[x].clone(),
            None => format!("{x:b}"),
        };
        let colour = match &self.colour_labels {
            Some(l) => l[self.colours[k] as usize].clone(),
            None => format!("{:b}", self.colours[k]),
        };
        format!("({}, {}, {})", vertex(u), colour, vertex(v))
    }
}

/// Outcome of comparing a symbolic relation with the explicit one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    /// Explicitly related, missing from the symbolic relation.
    Missing { u: usize, colour: usize, v: usize },
    /// In the symbolic relation only. Colour and vertices are raw numbers,
    /// which may not name a valid colour or a used vertex code.
    Extra { u: u64, colour: u64, v: u64 },
}

/// Compares `relation` (over state, input and primed variables) with the
/// explicit decomposition of `graph`.
pub fn compare(relation: &SymSet, graph: &ExplicitColouredGraph, explicit: &ExplicitRelation) -> Verdict {
    let universe = relation.universe();
    for k in 0..graph.colours.len() {
        for (u, v) in explicit.related_pairs(k) {
            if !relation.contains(graph.assignment(universe, u, k, v)) {
                return Verdict::Missing { u, colour: k, v };
            }
        }
    }
    let full = relation.extend_support(&universe.all_set());
    if full.cardinality() == explicit.len().into() {
        return Verdict::Equal;
    }
    // Every explicit triple is present, so some symbolic one is not explicit.
    let vars = full.support().to_vec();
    for values in full.witnesses() {
        let (u, c, v) = graph.decode(universe, &vars, &values);
        let k = graph.colours.iter().position(|x| *x == c);
        let known = match k {
            Some(k) => (u as usize) < graph.num_vertices
                && (v as usize) < graph.num_vertices
                && explicit.related(u as usize, k, v as usize),
            None => false,
        };
        if !known {
            return Verdict::Extra { u, colour: c, v };
        }
    }
    unreachable!("cardinalities differ but every symbolic triple is explicit")
}
