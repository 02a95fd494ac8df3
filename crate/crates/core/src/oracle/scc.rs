use super::ExplicitColouredGraph;

/// SCC number of every vertex of a plain digraph, by an iterative Tarjan.
/// Components are numbered in the order they are completed.
pub fn tarjan(successors: &[Vec<usize>]) -> Vec<usize> {
    const UNVISITED: usize = usize::MAX;
    let n = successors.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component = vec![UNVISITED; n];
    let mut next_index = 0;
    let mut next_component = 0;
    // (vertex, position in its successor list)
    let mut calls: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        calls.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            if let Some(&w) = successors[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("component members are on the stack");
                    on_stack[w] = false;
                    component[w] = next_component;
                    if w == v {
                        break;
                    }
                }
                next_component += 1;
            }
        }
    }
    component
}

/// SCC number of every vertex by two depth-first sweeps (Kosaraju).
pub fn kosaraju(successors: &[Vec<usize>]) -> Vec<usize> {
    let n = successors.len();
    let mut predecessors = vec![Vec::new(); n];
    for (u, succ) in successors.iter().enumerate() {
        for &v in succ {
            predecessors[v].push(u);
        }
    }
    // First sweep: vertices in order of finishing time.
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut calls = vec![(root, 0usize)];
        while let Some((v, pos)) = calls.last_mut() {
            if let Some(&w) = successors[*v].get(*pos) {
                *pos += 1;
                if !visited[w] {
                    visited[w] = true;
                    calls.push((w, 0));
                }
            } else {
                order.push(*v);
                calls.pop();
            }
        }
    }
    // Second sweep on the reversed graph, latest finisher first.
    let mut component = vec![usize::MAX; n];
    let mut next = 0;
    for &root in order.iter().rev() {
        if component[root] != usize::MAX {
            continue;
        }
        component[root] = next;
        let mut todo = vec![root];
        while let Some(v) = todo.pop() {
            for &w in &predecessors[v] {
                if component[w] == usize::MAX {
                    component[w] = next;
                    todo.push(w);
                }
            }
        }
        next += 1;
    }
    component
}

/// Per-colour SCC numbering of an explicit coloured graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitRelation {
    /// `component[k][u]`: SCC of `u` under colour index `k`.
    pub component: Vec<Vec<usize>>,
    /// Per colour, whether each SCC is non-trivial.
    pub nontrivial: Vec<Vec<bool>>,
}

pub fn tarjan_per_colour(g: &ExplicitColouredGraph) -> ExplicitRelation {
    let mut component = Vec::with_capacity(g.colours.len());
    let mut nontrivial = Vec::with_capacity(g.colours.len());
    for succ in &g.successors {
        let comp = tarjan(succ);
        let count = comp.iter().max().map_or(0, |m| m + 1);
        let mut size = vec![0usize; count];
        let mut looped = vec![false; count];
        for (u, &c) in comp.iter().enumerate() {
            size[c] += 1;
            looped[c] |= succ[u].contains(&u);
        }
        nontrivial.push(size.iter().zip(&looped).map(|(s, l)| *s > 1 || *l).collect());
        component.push(comp);
    }
    ExplicitRelation { component, nontrivial }
}

impl ExplicitRelation {
    pub fn related(&self, u: usize, k: usize, v: usize) -> bool {
        self.component[k][u] == self.component[k][v]
    }

    /// Related pairs `(u, v)` under colour index `k`.
    pub fn related_pairs(&self, k: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let comp = &self.component[k];
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); comp.iter().max().map_or(0, |m| m + 1)];
        for (u, &c) in comp.iter().enumerate() {
            members[c].push(u);
        }
        members.into_iter().flat_map(|m| {
            let m2 = m.clone();
            m.into_iter().flat_map(move |u| m2.clone().into_iter().map(move |v| (u, v)))
        })
    }

    /// Number of related triples.
    pub fn len(&self) -> u64 {
        self.component
            .iter()
            .map(|comp| {
                let mut size = vec![0u64; comp.iter().max().map_or(0, |m| m + 1)];
                for &c in comp {
                    size[c] += 1;
                }
                size.iter().map(|s| s * s).sum::<u64>()
            })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of non-trivial SCCs per colour index.
    pub fn nontrivial_counts(&self) -> Vec<u64> {
        self.nontrivial.iter().map(|n| n.iter().filter(|x| **x).count() as u64).collect()
    }

    /// Smallest and largest number of non-trivial SCCs over the colours.
    pub fn nontrivial_range(&self) -> Option<(u64, u64)> {
        let counts = self.nontrivial_counts();
        Some((*counts.iter().min()?, *counts.iter().max()?))
    }
}
