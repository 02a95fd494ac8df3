use rustc_hash::FxHashMap;

use super::store::{Node, NodeId, NodeStore, FALSE, TRUE};

/// Lexicographic enumeration of the complete assignments of a set.
///
/// The reachable part of the diagram is copied out on construction, so the
/// iterator does not hold on to the engine.
pub struct Witnesses {
    nodes: Vec<Node>,
    /// Support variables in decision order.
    vars: Vec<u16>,
    /// `at[k]`: local node reached before deciding `vars[k]`.
    at: Vec<u32>,
    values: Vec<bool>,
    started: bool,
    done: bool,
}

const LOCAL_FALSE: u32 = 0;
const LOCAL_TRUE: u32 = 1;

impl Witnesses {
    pub(crate) fn new(store: &NodeStore, root: NodeId, vars: Vec<super::VarId>) -> Witnesses {
        let reachable = store.post_order(root);
        let mut local: FxHashMap<NodeId, u32> = FxHashMap::default();
        local.insert(FALSE, LOCAL_FALSE);
        local.insert(TRUE, LOCAL_TRUE);
        let mut nodes = vec![store.node(FALSE), store.node(TRUE)];
        for id in reachable {
            let node = store.node(id);
            local.insert(id, nodes.len() as u32);
            nodes.push(Node { var: node.var, low: local[&node.low], high: local[&node.high] });
        }
        let width = vars.len();
        Witnesses {
            nodes,
            vars: vars.into_iter().map(|v| v.0).collect(),
            at: {
                let mut at = vec![LOCAL_FALSE; width + 1];
                at[0] = local[&root];
                at
            },
            values: vec![false; width],
            started: false,
            done: root == FALSE,
        }
    }

    fn step(&self, level: usize, value: bool) -> u32 {
        let node = self.nodes[self.at[level] as usize];
        if node.var == self.vars[level] {
            if value {
                node.high
            } else {
                node.low
            }
        } else {
            self.at[level]
        }
    }

    /// Completes `values[from..]` with the smallest satisfiable choices.
    fn descend(&mut self, from: usize) {
        for level in from..self.vars.len() {
            let low = self.step(level, false);
            if low != LOCAL_FALSE {
                self.values[level] = false;
                self.at[level + 1] = low;
            } else {
                // A reduced non-false node always has a satisfiable branch.
                self.values[level] = true;
                self.at[level + 1] = self.step(level, true);
            }
        }
    }
}

impl Iterator for Witnesses {
    type Item = Vec<bool>;

    fn next(&mut self) -> Option<Vec<bool>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.descend(0);
            return Some(self.values.clone());
        }
        let mut level = self.vars.len();
        loop {
            if level == 0 {
                self.done = true;
                return None;
            }
            level -= 1;
            if !self.values[level] {
                let high = self.step(level, true);
                if high != LOCAL_FALSE {
                    self.values[level] = true;
                    self.at[level + 1] = high;
                    self.descend(level + 1);
                    return Some(self.values.clone());
                }
            }
        }
    }
}
