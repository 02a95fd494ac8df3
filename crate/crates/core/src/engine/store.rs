//! Node arena, unique table and the recursive diagram algorithms.
//!
//! Diagrams are reduced and ordered, without complemented edges. Node `0` is
//! the `false` terminal and node `1` the `true` terminal. Nodes are never
//! freed; an arena lives as long as its engine.

use num_bigint::BigUint;
use rustc_hash::FxHashMap;

pub(crate) type NodeId = u32;

pub(crate) const FALSE: NodeId = 0;
pub(crate) const TRUE: NodeId = 1;

/// Variable index used by the two terminals; larger than any real variable.
pub(crate) const TERMINAL_VAR: u16 = u16::MAX;

/// Cached apply results are dropped once the cache grows past this size.
const APPLY_CACHE_LIMIT: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Node {
    pub var: u16,
    pub low: NodeId,
    pub high: NodeId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum BinOp {
    And,
    Or,
    Diff,
    Xor,
}

impl BinOp {
    fn commutative(self) -> bool {
        !matches!(self, BinOp::Diff)
    }

    fn terminal(self, a: NodeId, b: NodeId) -> Option<NodeId> {
        match self {
            BinOp::And => {
                if a == FALSE || b == FALSE {
                    Some(FALSE)
                } else if a == TRUE || a == b {
                    Some(b)
                } else if b == TRUE {
                    Some(a)
                } else {
                    None
                }
            }
            BinOp::Or => {
                if a == TRUE || b == TRUE {
                    Some(TRUE)
                } else if a == FALSE || a == b {
                    Some(b)
                } else if b == FALSE {
                    Some(a)
                } else {
                    None
                }
            }
            BinOp::Diff => {
                if a == FALSE || b == TRUE || a == b {
                    Some(FALSE)
                } else if b == FALSE {
                    Some(a)
                } else {
                    None
                }
            }
            BinOp::Xor => {
                if a == b {
                    Some(FALSE)
                } else if a == FALSE {
                    Some(b)
                } else if b == FALSE {
                    Some(a)
                } else {
                    None
                }
            }
        }
    }
}

pub(crate) struct NodeStore {
    nodes: Vec<Node>,
    unique: FxHashMap<Node, NodeId>,
    apply_cache: FxHashMap<(BinOp, NodeId, NodeId), NodeId>,
}

impl NodeStore {
    pub fn new() -> NodeStore {
        let terminal = |id| Node { var: TERMINAL_VAR, low: id, high: id };
        NodeStore {
            nodes: vec![terminal(FALSE), terminal(TRUE)],
            unique: FxHashMap::default(),
            apply_cache: FxHashMap::default(),
        }
    }

    #[inline]
    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id as usize]
    }

    #[inline]
    pub fn var(&self, id: NodeId) -> u16 {
        self.nodes[id as usize].var
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn mk(&mut self, var: u16, low: NodeId, high: NodeId) -> NodeId {
        if low == high {
            return low;
        }
        let node = Node { var, low, high };
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node);
        self.unique.insert(node, id);
        id
    }

    pub fn literal(&mut self, var: u16, value: bool) -> NodeId {
        if value {
            self.mk(var, FALSE, TRUE)
        } else {
            self.mk(var, TRUE, FALSE)
        }
    }

    fn cofactors(&self, id: NodeId, var: u16) -> (NodeId, NodeId) {
        let node = self.node(id);
        if node.var == var {
            (node.low, node.high)
        } else {
            (id, id)
        }
    }

    pub fn apply(&mut self, op: BinOp, a: NodeId, b: NodeId) -> NodeId {
        if let Some(result) = op.terminal(a, b) {
            return result;
        }
        let key = if op.commutative() && b < a { (op, b, a) } else { (op, a, b) };
        if let Some(&result) = self.apply_cache.get(&key) {
            return result;
        }
        let var = self.var(a).min(self.var(b));
        let (a0, a1) = self.cofactors(a, var);
        let (b0, b1) = self.cofactors(b, var);
        let low = self.apply(op, a0, b0);
        let high = self.apply(op, a1, b1);
        let result = self.mk(var, low, high);
        if self.apply_cache.len() >= APPLY_CACHE_LIMIT {
            self.apply_cache.clear();
        }
        self.apply_cache.insert(key, result);
        result
    }

    pub fn not(&mut self, a: NodeId) -> NodeId {
        self.apply(BinOp::Xor, a, TRUE)
    }

    /// Existential quantification of every variable `v` with `vars[v]`.
    pub fn exists(&mut self, root: NodeId, vars: &[bool]) -> NodeId {
        let mut memo = FxHashMap::default();
        self.exists_rec(root, vars, &mut memo)
    }

    fn exists_rec(&mut self, id: NodeId, vars: &[bool], memo: &mut FxHashMap<NodeId, NodeId>) -> NodeId {
        if id <= TRUE {
            return id;
        }
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let node = self.node(id);
        let low = self.exists_rec(node.low, vars, memo);
        let high = self.exists_rec(node.high, vars, memo);
        let result = if vars[node.var as usize] {
            self.apply(BinOp::Or, low, high)
        } else {
            self.mk(node.var, low, high)
        };
        memo.insert(id, result);
        result
    }

    /// Cofactor with respect to a partial assignment (`None` = keep variable).
    pub fn restrict(&mut self, root: NodeId, values: &[Option<bool>]) -> NodeId {
        let mut memo = FxHashMap::default();
        self.restrict_rec(root, values, &mut memo)
    }

    fn restrict_rec(
        &mut self,
        id: NodeId,
        values: &[Option<bool>],
        memo: &mut FxHashMap<NodeId, NodeId>,
    ) -> NodeId {
        if id <= TRUE {
            return id;
        }
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let node = self.node(id);
        let result = match values[node.var as usize] {
            Some(false) => self.restrict_rec(node.low, values, memo),
            Some(true) => self.restrict_rec(node.high, values, memo),
            None => {
                let low = self.restrict_rec(node.low, values, memo);
                let high = self.restrict_rec(node.high, values, memo);
                self.mk(node.var, low, high)
            }
        };
        memo.insert(id, result);
        result
    }

    /// Substitution `[v -> !v]`: swaps the children of every node testing `v`.
    pub fn flip(&mut self, root: NodeId, var: u16) -> NodeId {
        let mut memo = FxHashMap::default();
        self.flip_rec(root, var, &mut memo)
    }

    fn flip_rec(&mut self, id: NodeId, var: u16, memo: &mut FxHashMap<NodeId, NodeId>) -> NodeId {
        let node = self.node(id);
        if node.var > var {
            // Terminals and nodes below `var` do not depend on it.
            return id;
        }
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let result = if node.var == var {
            self.mk(var, node.high, node.low)
        } else {
            let low = self.flip_rec(node.low, var, memo);
            let high = self.flip_rec(node.high, var, memo);
            self.mk(node.var, low, high)
        };
        memo.insert(id, result);
        result
    }

    /// Simultaneous relabelling `v -> map[v]`.
    ///
    /// When `monotone` is set the caller guarantees that `map` is strictly
    /// increasing on the variables the diagram depends on, so nodes can be
    /// relabelled in place. Otherwise every node is rebuilt as an ITE over
    /// the target variable.
    pub fn rename(&mut self, root: NodeId, map: &[u16], monotone: bool) -> NodeId {
        let mut memo = FxHashMap::default();
        self.rename_rec(root, map, monotone, &mut memo)
    }

    fn rename_rec(
        &mut self,
        id: NodeId,
        map: &[u16],
        monotone: bool,
        memo: &mut FxHashMap<NodeId, NodeId>,
    ) -> NodeId {
        if id <= TRUE {
            return id;
        }
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let node = self.node(id);
        let low = self.rename_rec(node.low, map, monotone, memo);
        let high = self.rename_rec(node.high, map, monotone, memo);
        let target = map[node.var as usize];
        let result = if monotone {
            self.mk(target, low, high)
        } else {
            let pos = self.literal(target, true);
            let neg = self.literal(target, false);
            let high = self.apply(BinOp::And, pos, high);
            let low = self.apply(BinOp::And, neg, low);
            self.apply(BinOp::Or, low, high)
        };
        memo.insert(id, result);
        result
    }

    /// Decision nodes reachable from `root` (terminals excluded).
    pub fn reachable(&self, root: NodeId) -> Vec<NodeId> {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut order = Vec::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if id <= TRUE || !seen.insert(id) {
                continue;
            }
            order.push(id);
            let node = self.node(id);
            stack.push(node.high);
            stack.push(node.low);
        }
        order
    }

    /// Post-order (children first, low before high) listing of the decision nodes.
    pub fn post_order(&self, root: NodeId) -> Vec<NodeId> {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut order = Vec::new();
        // (node, children_pushed)
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if id <= TRUE {
                continue;
            }
            if expanded {
                order.push(id);
                continue;
            }
            if !seen.insert(id) {
                continue;
            }
            let node = self.node(id);
            stack.push((id, true));
            stack.push((node.high, false));
            stack.push((node.low, false));
        }
        order
    }

    /// Number of assignments over the variables of `rank` (`rank[v]` is the
    /// position of `v` among them, `None` if absent).
    pub fn count(&self, root: NodeId, rank: &[Option<u32>], width: u32) -> Option<BigUint> {
        let mut memo: FxHashMap<NodeId, BigUint> = FxHashMap::default();
        let level = |store: &NodeStore, id: NodeId| -> Option<u32> {
            if id <= TRUE {
                Some(width)
            } else {
                rank[store.var(id) as usize]
            }
        };
        for id in self.post_order(root) {
            let node = self.node(id);
            let own = level(self, id)?;
            let mut total = BigUint::from(0u32);
            for child in [node.low, node.high] {
                let child_level = level(self, child)?;
                let below = match child {
                    FALSE => BigUint::from(0u32),
                    TRUE => BigUint::from(1u32),
                    _ => memo[&child].clone(),
                };
                total += below << (child_level - own - 1);
            }
            memo.insert(id, total);
        }
        let top = level(self, root)?;
        let at_root = match root {
            FALSE => BigUint::from(0u32),
            TRUE => BigUint::from(1u32),
            _ => memo.remove(&root).expect("root counted"),
        };
        Some(at_root << top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mk_is_hash_consed_and_reduced() {
        let mut store = NodeStore::new();
        let a = store.mk(0, FALSE, TRUE);
        let b = store.mk(0, FALSE, TRUE);
        assert_eq!(a, b);
        assert_eq!(store.mk(3, a, a), a);
        assert_eq!(store.len(), 3);
    }

    #[test]
    fn de_morgan_on_literals() {
        let mut store = NodeStore::new();
        let x = store.literal(0, true);
        let y = store.literal(1, true);
        let and = store.apply(BinOp::And, x, y);
        let lhs = store.not(and);
        let nx = store.not(x);
        let ny = store.not(y);
        let rhs = store.apply(BinOp::Or, nx, ny);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn swap_rename_rebuilds_order() {
        let mut store = NodeStore::new();
        // x0 & !x1  renamed with x0 <-> x1 gives x1 & !x0
        let x0 = store.literal(0, true);
        let nx1 = store.literal(1, false);
        let f = store.apply(BinOp::And, x0, nx1);
        let swapped = store.rename(f, &[1, 0], false);
        let x1 = store.literal(1, true);
        let nx0 = store.literal(0, false);
        let expected = store.apply(BinOp::And, x1, nx0);
        assert_eq!(swapped, expected);
    }
}
