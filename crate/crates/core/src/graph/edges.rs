//! Graphs given as explicit coloured edge lists.
//!
//! Text format, one item per line, `#` starts a comment:
//!
//! ```text
//! a blue d      # edge a -> d of colour blue
//! g             # isolated vertex g
//! ```

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{ColouredGraph, GraphError, Labels};
use crate::engine::{Engine, VarId, VariableUniverse};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub vertices: Vec<String>,
    pub colours: Vec<String>,
    /// `(source, colour, target)`.
    pub triples: Vec<(String, String, String)>,
}

fn is_label(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_alphanumeric() || c == '_')
        && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
}

/// Parses the edge-list format. Vertex and colour labels are collected from
/// the edges (and isolated-vertex lines) in order of first appearance.
pub fn parse_edges(text: &str) -> Result<EdgeList, GraphError> {
    let mut list = EdgeList::default();
    let push = |labels: &mut Vec<String>, l: &str| {
        if !labels.iter().any(|x| x == l) {
            labels.push(l.to_string());
        }
    };
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if let Some(bad) = tokens.iter().find(|t| !is_label(t)) {
            return Err(GraphError::Syntax { line, message: format!("invalid label `{bad}`") });
        }
        match tokens.as_slice() {
            [] => {}
            [v] => push(&mut list.vertices, v),
            [u, c, v] => {
                push(&mut list.vertices, u);
                push(&mut list.vertices, v);
                push(&mut list.colours, c);
                list.triples.push((u.to_string(), c.to_string(), v.to_string()));
            }
            _ => {
                return Err(GraphError::Syntax {
                    line,
                    message: "expected `<source> <colour> <target>` or a single vertex".into(),
                })
            }
        }
    }
    Ok(list)
}

/// Smallest `k` with `2^k >= count`.
fn bits_for(count: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < count {
        k += 1;
    }
    k
}

/// Cube assigning the code of `label` (its position in the sorted `labels`)
/// to `width` variables, most significant bit first.
pub(super) fn code_cube(
    labels: &[String],
    label: &str,
    var: impl Fn(usize) -> VarId,
    width: usize,
) -> Result<Vec<(VarId, bool)>, GraphError> {
    let index = labels
        .binary_search_by(|l| l.as_str().cmp(label))
        .map_err(|_| GraphError::UnknownLabel(label.to_string()))?;
    Ok((0..width).map(|i| (var(i), index >> (width - 1 - i) & 1 == 1)).collect())
}

fn sorted_distinct(labels: &[String]) -> Result<Vec<String>, GraphError> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l.clone()) {
            return Err(GraphError::DuplicateLabel(l.clone()));
        }
    }
    Ok(seen.into_iter().collect())
}

impl ColouredGraph {
    /// Builds a graph over its own engine. Vertices and colours are coded
    /// in binary in lexicographic label order; there is always at least one
    /// state variable. Repeated triples are accepted.
    pub fn build_from_edges(
        vertex_labels: &[String],
        colour_labels: &[String],
        triples: &[(String, String, String)],
    ) -> Result<ColouredGraph, GraphError> {
        let vertices = sorted_distinct(vertex_labels)?;
        let colours = sorted_distinct(colour_labels)?;
        let universe = Arc::new(VariableUniverse::anonymous(bits_for(vertices.len()).max(1), bits_for(colours.len())));
        let engine = Engine::new(universe.clone());
        let u = &*universe;
        let (n, m) = (u.num_states(), u.num_inputs());
        let vertex = |l: &str, var: &dyn Fn(usize) -> VarId| code_cube(&vertices, l, var, n);
        let colour = |l: &str| code_cube(&colours, l, |j| u.input_var(j), m);

        let mut vertex_set = engine.mk_empty(u.state_set());
        for l in &vertices {
            vertex_set = vertex_set.union(&engine.mk_cube(&vertex(l, &|i| u.state_var(i))?));
        }
        let mut valid = engine.mk_empty(u.input_set());
        for l in &colours {
            valid = valid.union(&engine.mk_cube(&colour(l)?));
        }
        let mut edges = engine.mk_empty(u.all_set());
        for (a, c, b) in triples {
            let mut cube = vertex(a, &|i| u.state_var(i))?;
            cube.extend(colour(c)?);
            cube.extend(vertex(b, &|i| u.primed_var(i))?);
            edges = edges.union(&engine.mk_cube(&cube));
        }
        let mut graph = ColouredGraph::from_relation(&engine, edges, vertex_set, valid);
        graph.labels = Some(Labels { vertices, colours });
        Ok(graph)
    }

    pub fn from_edge_list(list: &EdgeList) -> Result<ColouredGraph, GraphError> {
        ColouredGraph::build_from_edges(&list.vertices, &list.colours, &list.triples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_edges_and_isolated_vertices() {
        let list = parse_edges("# demo\na red b\nb red a  # back\n\nz\n").unwrap();
        assert_eq!(list.vertices, ["a", "b", "z"]);
        assert_eq!(list.colours, ["red"]);
        assert_eq!(list.triples.len(), 2);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(parse_edges("a b"), Err(GraphError::Syntax { line: 1, .. })));
        assert!(matches!(parse_edges("ok\na red b c"), Err(GraphError::Syntax { line: 2, .. })));
        assert!(matches!(parse_edges("a r$d b"), Err(GraphError::Syntax { .. })));
    }

    #[test]
    fn unknown_and_duplicate_labels() {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let t = vec![("a".to_string(), "red".to_string(), "q".to_string())];
        let err = ColouredGraph::build_from_edges(&s(&["a", "b"]), &s(&["red"]), &t).unwrap_err();
        assert_eq!(err, GraphError::UnknownLabel("q".into()));
        let err = ColouredGraph::build_from_edges(&s(&["a", "a"]), &s(&["red"]), &[]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateLabel("a".into()));
    }

    #[test]
    fn code_widths() {
        assert_eq!(bits_for(0), 0);
        assert_eq!(bits_for(1), 0);
        assert_eq!(bits_for(2), 1);
        assert_eq!(bits_for(5), 3);
        assert_eq!(bits_for(8), 3);
    }
}
