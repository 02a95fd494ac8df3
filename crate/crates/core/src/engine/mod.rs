//! Canonical decision-diagram sets over a fixed variable universe.
//!
//! An [`Engine`] owns a node arena and a step counter. Every [`SymSet`] is
//! bound to the engine that created it; moving a set to another engine (for
//! example onto a worker thread) goes through [`PortableSet`] or the binary
//! dump format in [`dump`].
//!
//! Each set carries a *support*: the variables it ranges over. The diagram
//! never tests a variable outside the support, and two sets with the same
//! support are equal iff their diagrams are identical.

pub mod dump;
mod store;
mod universe;
mod witness;

use std::cell::{Cell, RefCell};
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use store::{BinOp, NodeId, NodeStore, FALSE, TRUE};

pub use dump::PortableSet;
pub use universe::{VarId, VarSet, VariableUniverse};
pub use witness::Witnesses;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("assignment count does not fit into a 64-bit integer")]
    Overflow,
    #[error("malformed diagram dump: {0}")]
    Dump(String),
}

impl EngineError {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        EngineError::Contract(msg.into())
    }
}

/// Binary set operations of the symbolic vocabulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Difference,
    /// Cartesian product; the operand supports must be disjoint.
    Product,
}

struct EngineInner {
    universe: Arc<VariableUniverse>,
    store: RefCell<NodeStore>,
    steps: Cell<u64>,
    depth: Cell<u32>,
}

/// Handle to a single-threaded diagram engine. Cloning the handle shares the
/// engine; it is deliberately neither `Send` nor `Sync`.
#[derive(Clone)]
pub struct Engine(Rc<EngineInner>);

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("vars", &self.0.universe.num_vars())
            .field("nodes", &self.0.store.borrow().len())
            .field("steps", &self.0.steps.get())
            .finish()
    }
}

impl Engine {
    pub fn new(universe: Arc<VariableUniverse>) -> Engine {
        Engine(Rc::new(EngineInner {
            universe,
            store: RefCell::new(NodeStore::new()),
            steps: Cell::new(0),
            depth: Cell::new(0),
        }))
    }

    pub fn universe(&self) -> &VariableUniverse {
        &self.0.universe
    }

    pub fn universe_arc(&self) -> Arc<VariableUniverse> {
        self.0.universe.clone()
    }

    /// Symbolic steps performed so far.
    pub fn steps(&self) -> u64 {
        self.0.steps.get()
    }

    /// Total number of nodes in the arena (including both terminals).
    pub fn arena_size(&self) -> usize {
        self.0.store.borrow().len()
    }

    pub fn same_as(&self, other: &Engine) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
    }

    /// Runs `f` as one symbolic step. Nested counted calls inside `f` are
    /// not counted again, so a derived operation costs exactly one step.
    pub fn counted<T>(&self, f: impl FnOnce() -> T) -> T {
        let depth = self.0.depth.get();
        if depth == 0 {
            self.0.steps.set(self.0.steps.get() + 1);
        }
        self.0.depth.set(depth + 1);
        let result = f();
        self.0.depth.set(depth);
        result
    }

    fn wrap(&self, root: NodeId, support: VarSet) -> SymSet {
        SymSet { engine: self.clone(), root, support }
    }

    fn with_store<T>(&self, f: impl FnOnce(&mut NodeStore) -> T) -> T {
        f(&mut self.0.store.borrow_mut())
    }

    pub fn empty_var_set(&self) -> VarSet {
        VarSet::empty(self.universe().num_vars())
    }

    pub fn var_set(&self, vars: &[VarId]) -> Result<VarSet, EngineError> {
        for v in vars {
            self.check_var(*v)?;
        }
        Ok(VarSet::from_vars(self.universe().num_vars(), vars.iter().copied()))
    }

    fn check_var(&self, var: VarId) -> Result<(), EngineError> {
        if self.universe().contains(var) {
            Ok(())
        } else {
            Err(EngineError::contract(format!("unknown variable {var}")))
        }
    }

    pub fn mk_empty(&self, support: VarSet) -> SymSet {
        self.wrap(FALSE, support)
    }

    pub fn mk_full(&self, support: VarSet) -> SymSet {
        self.wrap(TRUE, support)
    }

    /// The set `{var = value}` over support `{var}`.
    pub fn mk_literal(&self, var: VarId, value: bool) -> SymSet {
        let root = self.with_store(|s| s.literal(var.0, value));
        let mut support = self.empty_var_set();
        support.insert(var);
        self.wrap(root, support)
    }

    /// A single complete assignment over the listed variables.
    pub fn mk_cube(&self, assignment: &[(VarId, bool)]) -> SymSet {
        let mut sorted = assignment.to_vec();
        sorted.sort_by_key(|(v, _)| std::cmp::Reverse(*v));
        let mut support = self.empty_var_set();
        let root = self.with_store(|s| {
            let mut root = TRUE;
            for (v, value) in sorted {
                support.insert(v);
                root = if value { s.mk(v.0, FALSE, root) } else { s.mk(v.0, root, FALSE) };
            }
            root
        });
        self.wrap(root, support)
    }

    /// Rebuilds a portable set inside this engine.
    pub fn import(&self, portable: &PortableSet) -> Result<SymSet, EngineError> {
        portable.load_into(self)
    }
}

/// A canonical set of assignments over `support`, bound to one engine.
#[derive(Clone)]
pub struct SymSet {
    engine: Engine,
    root: NodeId,
    support: VarSet,
}

impl PartialEq for SymSet {
    fn eq(&self, other: &Self) -> bool {
        self.engine.same_as(&other.engine) && self.root == other.root && self.support == other.support
    }
}

impl Eq for SymSet {}

impl fmt::Debug for SymSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymSet")
            .field("root", &self.root)
            .field("nodes", &self.node_count())
            .field("support", &self.support.to_vec())
            .finish()
    }
}

impl SymSet {
    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn universe(&self) -> &VariableUniverse {
        self.engine.universe()
    }

    pub fn support(&self) -> &VarSet {
        &self.support
    }

    pub fn is_empty(&self) -> bool {
        self.root == FALSE
    }

    /// True iff the set contains every assignment over its support.
    pub fn is_full(&self) -> bool {
        self.root == TRUE
    }

    fn check_same_engine(&self, other: &SymSet) -> Result<(), EngineError> {
        if self.engine.same_as(&other.engine) {
            Ok(())
        } else {
            Err(EngineError::contract("operands belong to different engine instances"))
        }
    }

    /// Set algebra on two sets of the same engine. Union, intersection and
    /// difference treat both operands as cylinders over the union of their
    /// supports.
    pub fn set_algebra(&self, op: SetOp, other: &SymSet) -> Result<SymSet, EngineError> {
        self.check_same_engine(other)?;
        if op == SetOp::Product && !self.support.is_disjoint(&other.support) {
            return Err(EngineError::contract("product of sets with overlapping supports"));
        }
        let bin = match op {
            SetOp::Union => BinOp::Or,
            SetOp::Intersect | SetOp::Product => BinOp::And,
            SetOp::Difference => BinOp::Diff,
        };
        let root = self
            .engine
            .counted(|| self.engine.with_store(|s| s.apply(bin, self.root, other.root)));
        Ok(self.engine.wrap(root, self.support.union(&other.support)))
    }

    /// # Panics
    /// If the operands belong to different engines.
    pub fn union(&self, other: &SymSet) -> SymSet {
        self.set_algebra(SetOp::Union, other).expect("union")
    }

    /// # Panics
    /// If the operands belong to different engines.
    pub fn intersect(&self, other: &SymSet) -> SymSet {
        self.set_algebra(SetOp::Intersect, other).expect("intersect")
    }

    /// # Panics
    /// If the operands belong to different engines.
    pub fn minus(&self, other: &SymSet) -> SymSet {
        self.set_algebra(SetOp::Difference, other).expect("difference")
    }

    pub fn product(&self, other: &SymSet) -> Result<SymSet, EngineError> {
        self.set_algebra(SetOp::Product, other)
    }

    /// Complement with respect to the support.
    pub fn complement(&self) -> SymSet {
        let root = self.engine.counted(|| self.engine.with_store(|s| s.not(self.root)));
        self.engine.wrap(root, self.support.clone())
    }

    pub fn is_subset(&self, other: &SymSet) -> bool {
        self.check_same_engine(other).expect("subset check across engines");
        self.engine
            .with_store(|s| s.apply(BinOp::Diff, self.root, other.root) == FALSE)
    }

    /// Same denotation, ignoring declared supports.
    pub fn same_members(&self, other: &SymSet) -> bool {
        self.engine.same_as(&other.engine) && self.root == other.root
    }

    /// Existential projection of `vars` out of the set.
    pub fn exists(&self, vars: &[VarId]) -> Result<SymSet, EngineError> {
        let set = self.engine.var_set(vars)?;
        Ok(self.exists_set(&set))
    }

    pub fn exists_set(&self, vars: &VarSet) -> SymSet {
        let mask = self.mask(vars);
        let root = self.engine.counted(|| self.engine.with_store(|s| s.exists(self.root, &mask)));
        self.engine.wrap(root, self.support.difference(vars))
    }

    fn mask(&self, vars: &VarSet) -> Vec<bool> {
        let mut mask = vec![false; self.universe().num_vars()];
        for v in vars.iter() {
            mask[v.index()] = true;
        }
        mask
    }

    /// Relabels variables according to the bijection `mapping` (pairs of
    /// `(from, to)`); relabelling is simultaneous, so swaps are allowed.
    pub fn rename(&self, mapping: &[(VarId, VarId)]) -> Result<SymSet, EngineError> {
        let num_vars = self.universe().num_vars();
        let mut sources = self.engine.empty_var_set();
        let mut targets = self.engine.empty_var_set();
        for &(from, to) in mapping {
            self.engine.check_var(from)?;
            self.engine.check_var(to)?;
            if sources.contains(from) || targets.contains(to) {
                return Err(EngineError::contract("rename mapping is not a bijection"));
            }
            sources.insert(from);
            targets.insert(to);
        }
        if !sources.is_subset(&self.support) {
            return Err(EngineError::contract("rename source outside the support"));
        }
        let untouched = self.support.difference(&sources);
        if !targets.is_disjoint(&untouched) {
            return Err(EngineError::contract("rename target collides with the support"));
        }
        let mut map: Vec<u16> = (0..num_vars as u16).collect();
        for &(from, to) in mapping {
            map[from.index()] = to.0;
        }
        let monotone = self
            .support
            .iter()
            .map(|v| map[v.index()])
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| w[0] < w[1]);
        let root = self
            .engine
            .counted(|| self.engine.with_store(|s| s.rename(self.root, &map, monotone)));
        Ok(self.engine.wrap(root, untouched.union(&targets)))
    }

    /// The set `{ y | (x, y) in self }` where `x` assigns `values` to `block`.
    pub fn section(&self, block: &[VarId], values: &[bool]) -> Result<SymSet, EngineError> {
        if block.len() != values.len() {
            return Err(EngineError::contract(format!(
                "section needs a complete assignment: {} variables, {} values",
                block.len(),
                values.len()
            )));
        }
        let block_set = self.engine.var_set(block)?;
        if block_set.len() != block.len() {
            return Err(EngineError::contract("section block lists a variable twice"));
        }
        if !block_set.is_subset(&self.support) {
            return Err(EngineError::contract("section block outside the support"));
        }
        let mut assignment = vec![None; self.universe().num_vars()];
        for (v, value) in block.iter().zip(values) {
            assignment[v.index()] = Some(*value);
        }
        let root = self
            .engine
            .counted(|| self.engine.with_store(|s| s.restrict(self.root, &assignment)));
        Ok(self.engine.wrap(root, self.support.difference(&block_set)))
    }

    /// Substitution `[v -> !v]`.
    pub fn flip_var(&self, var: VarId) -> Result<SymSet, EngineError> {
        self.engine.check_var(var)?;
        let root = self.engine.counted(|| self.engine.with_store(|s| s.flip(self.root, var.0)));
        // Outside the support the flip is the identity.
        Ok(self.engine.wrap(root, self.support.clone()))
    }

    /// For every valuation of the other variables, keeps a single value of
    /// `var`, preferring `false`.
    pub fn pick_var(&self, var: VarId) -> Result<SymSet, EngineError> {
        self.engine.check_var(var)?;
        if !self.support.contains(var) {
            return Err(EngineError::contract(format!("pick variable {var} outside the support")));
        }
        let root = self.engine.counted(|| {
            self.engine.with_store(|s| {
                let negative = s.literal(var.0, false);
                let with_false = s.apply(BinOp::And, self.root, negative);
                let shadow = s.flip(with_false, var.0);
                s.apply(BinOp::Diff, self.root, shadow)
            })
        });
        Ok(self.engine.wrap(root, self.support.clone()))
    }

    /// Number of assignments over `over`, which must include the support.
    pub fn count_assignments(&self, over: &VarSet) -> Result<BigUint, EngineError> {
        if !self.support.is_subset(over) {
            return Err(EngineError::contract("count domain does not cover the support"));
        }
        let mut rank = vec![None; self.universe().num_vars()];
        for (i, v) in over.iter().enumerate() {
            rank[v.index()] = Some(i as u32);
        }
        self.engine
            .with_store(|s| s.count(self.root, &rank, over.len() as u32))
            .ok_or_else(|| EngineError::contract("diagram depends on a variable outside the support"))
    }

    /// Number of assignments over the support.
    pub fn cardinality(&self) -> BigUint {
        self.count_assignments(&self.support).expect("support covers itself")
    }

    pub fn cardinality_u64(&self) -> Result<u64, EngineError> {
        self.cardinality().to_u64().ok_or(EngineError::Overflow)
    }

    /// Decision nodes of the diagram, terminals excluded.
    pub fn node_count(&self) -> usize {
        self.engine.with_store(|s| s.reachable(self.root).len())
    }

    /// Membership test of a full assignment given as a predicate on variables.
    pub fn contains(&self, value: impl Fn(VarId) -> bool) -> bool {
        self.engine.with_store(|s| {
            let mut id = self.root;
            while id > TRUE {
                let node = s.node(id);
                id = if value(VarId(node.var)) { node.high } else { node.low };
            }
            id == TRUE
        })
    }

    /// Complete assignments over the support in lexicographic order
    /// (earlier variables more significant, `false` before `true`).
    pub fn witnesses(&self) -> Witnesses {
        self.engine.with_store(|s| Witnesses::new(s, self.root, self.support.to_vec()))
    }

    /// First witness in lexicographic order, if any.
    pub fn first_witness(&self) -> Option<Vec<(VarId, bool)>> {
        let vars = self.support.to_vec();
        self.witnesses().next().map(|values| vars.into_iter().zip(values).collect())
    }

    /// Same set with a wider declared support.
    pub fn extend_support(&self, extra: &VarSet) -> SymSet {
        self.engine.wrap(self.root, self.support.union(extra))
    }

    pub fn to_portable(&self) -> PortableSet {
        self.engine.with_store(|s| PortableSet::from_store(s, self.root, &self.support))
    }

    /// Moves the set into another engine over an equal universe.
    pub fn transfer(&self, target: &Engine) -> Result<SymSet, EngineError> {
        if target.universe() != self.universe() {
            return Err(EngineError::contract("target engine has a different universe"));
        }
        target.import(&self.to_portable())
    }

    /// Bit-exact binary dump, see [`dump`].
    pub fn dump(&self) -> Vec<u8> {
        self.to_portable().encode()
    }
}
