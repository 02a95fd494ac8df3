//! Engine-independent form of a diagram and its binary dump.
//!
//! Layout (little endian):
//!
//! ```text
//! "CSCCDD01"            8 bytes magic
//! variable count        u16
//! node 2, node 3, ...   10 bytes each: u16 variable, u32 low, u32 high
//! root                  u32
//! ```
//!
//! Indices 0 and 1 denote the `false` and `true` terminals and are not
//! stored. Nodes are written children first (low branch before high), so
//! the root of a non-trivial diagram is always the last node. The node count
//! is implied by the length of the dump.

use rustc_hash::FxHashMap;

use super::store::{NodeId, NodeStore, FALSE, TRUE};
use super::{Engine, EngineError, SymSet, VarId, VarSet};

pub const MAGIC: &[u8; 8] = b"CSCCDD01";

const HEADER_LEN: usize = 8 + 2;
const NODE_LEN: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DumpNode {
    pub var: u16,
    pub low: u32,
    pub high: u32,
}

/// A diagram detached from any engine. Plain data, so it is `Send`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortableSet {
    pub num_vars: u16,
    /// Node `k` of the dump is `nodes[k - 2]`.
    pub nodes: Vec<DumpNode>,
    pub root: u32,
    /// Declared support; not part of the binary dump.
    pub support: Vec<u16>,
}

impl PortableSet {
    pub(crate) fn from_store(store: &NodeStore, root: NodeId, support: &VarSet) -> PortableSet {
        let mut index: FxHashMap<NodeId, u32> = FxHashMap::default();
        index.insert(FALSE, 0);
        index.insert(TRUE, 1);
        let mut nodes = Vec::new();
        for id in store.post_order(root) {
            let node = store.node(id);
            index.insert(id, nodes.len() as u32 + 2);
            nodes.push(DumpNode { var: node.var, low: index[&node.low], high: index[&node.high] });
        }
        PortableSet {
            num_vars: support_len_hint(support),
            root: index[&root],
            nodes,
            support: support.iter().map(|v| v.0).collect(),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + NODE_LEN * self.nodes.len() + 4);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&self.num_vars.to_le_bytes());
        for node in &self.nodes {
            out.extend_from_slice(&node.var.to_le_bytes());
            out.extend_from_slice(&node.low.to_le_bytes());
            out.extend_from_slice(&node.high.to_le_bytes());
        }
        out.extend_from_slice(&self.root.to_le_bytes());
        out
    }

    /// Parses a dump. The support is set to the variables the diagram tests.
    pub fn decode(bytes: &[u8]) -> Result<PortableSet, EngineError> {
        if bytes.len() < HEADER_LEN + 4 || &bytes[..8] != MAGIC {
            return Err(EngineError::Dump("missing magic header".into()));
        }
        let body = bytes.len() - HEADER_LEN - 4;
        if body % NODE_LEN != 0 {
            return Err(EngineError::Dump(format!("node array of {body} bytes")));
        }
        let num_vars = u16::from_le_bytes([bytes[8], bytes[9]]);
        let u32_at = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
        let mut nodes = Vec::with_capacity(body / NODE_LEN);
        for k in 0..body / NODE_LEN {
            let at = HEADER_LEN + k * NODE_LEN;
            nodes.push(DumpNode {
                var: u16::from_le_bytes([bytes[at], bytes[at + 1]]),
                low: u32_at(at + 2),
                high: u32_at(at + 6),
            });
        }
        let root = u32_at(bytes.len() - 4);
        let mut support: Vec<u16> = nodes.iter().map(|n| n.var).collect();
        support.sort_unstable();
        support.dedup();
        let set = PortableSet { num_vars, nodes, root, support };
        set.validate()?;
        Ok(set)
    }

    fn validate(&self) -> Result<(), EngineError> {
        let expected_root = if self.nodes.is_empty() { self.root.min(1) } else { self.nodes.len() as u32 + 1 };
        if self.root != expected_root {
            return Err(EngineError::Dump(format!("root {} is not the last node", self.root)));
        }
        for (k, node) in self.nodes.iter().enumerate() {
            let own = k as u32 + 2;
            if node.var >= self.num_vars {
                return Err(EngineError::Dump(format!("node {own} uses unknown variable {}", node.var)));
            }
            for child in [node.low, node.high] {
                if child >= own {
                    return Err(EngineError::Dump(format!("node {own} points forward to {child}")));
                }
                if child > TRUE && self.nodes[child as usize - 2].var <= node.var {
                    return Err(EngineError::Dump(format!("node {own} violates the variable order")));
                }
            }
            if node.low == node.high {
                return Err(EngineError::Dump(format!("node {own} is redundant")));
            }
        }
        Ok(())
    }

    pub(crate) fn load_into(&self, engine: &Engine) -> Result<SymSet, EngineError> {
        if self.num_vars as usize != engine.universe().num_vars() {
            return Err(EngineError::Dump(format!(
                "dump has {} variables, engine has {}",
                self.num_vars,
                engine.universe().num_vars()
            )));
        }
        self.validate()?;
        let root = engine.with_store(|store| {
            let mut ids: Vec<NodeId> = vec![FALSE, TRUE];
            for node in &self.nodes {
                let id = store.mk(node.var, ids[node.low as usize], ids[node.high as usize]);
                ids.push(id);
            }
            ids[self.root as usize]
        });
        let support = VarSet::from_vars(engine.universe().num_vars(), self.support.iter().map(|v| VarId(*v)));
        Ok(engine.wrap(root, support))
    }
}

fn support_len_hint(support: &VarSet) -> u16 {
    // VarSet capacity equals the universe size.
    support.capacity() as u16
}
