//! Coloured graphs and their symbolic operators.
//!
//! A coloured vertex set is a [`SymSet`] over state and input variables. A
//! graph is either given by per-variable update functions (asynchronous
//! Boolean network semantics) or by an explicit edge relation over
//! `(s, c, s')`.

mod edges;

use thiserror::Error;

use crate::engine::{Engine, EngineError, PortableSet, SymSet, VarId, VarSet};
use crate::model::{encode, valid_colours, ExpandedNetwork, ModelError};

pub use edges::{parse_edges, EdgeList};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label `{0}` listed twice")]
    DuplicateLabel(String),
    #[error("edge list line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug)]
enum Dynamics {
    Updates {
        updates: Vec<SymSet>,
        /// `b_i xor s_i`: the states where variable `i` changes.
        guards: Vec<SymSet>,
    },
    Relation {
        edges: SymSet,
    },
}

/// Vertex and colour names of a graph built from an edge list, each sorted
/// so that the position of a label is its binary code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labels {
    pub vertices: Vec<String>,
    pub colours: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ColouredGraph {
    engine: Engine,
    dynamics: Dynamics,
    vertices: SymSet,
    valid: SymSet,
    labels: Option<Labels>,
}

/// Direction of a reachability step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// Which coloured vertices a trimming step removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrimDirection {
    NoPredecessor,
    NoSuccessor,
}

impl ColouredGraph {
    /// Graph of an expanded network in `engine`, whose universe must have
    /// been built from `net`.
    pub fn from_network(net: &ExpandedNetwork, engine: &Engine) -> Result<ColouredGraph, GraphError> {
        let updates = encode(net, engine)?;
        let valid = valid_colours(net, engine)?;
        Ok(ColouredGraph::from_updates(engine, updates, valid))
    }

    /// Graph given by update functions over `(s, c)` and a valid colour set.
    pub fn from_updates(engine: &Engine, updates: Vec<SymSet>, valid: SymSet) -> ColouredGraph {
        let u = engine.universe();
        assert_eq!(updates.len(), u.num_states(), "one update function per state variable");
        let guards = updates
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let s = engine.mk_literal(u.state_var(i), true);
                b.minus(&s).union(&s.minus(b))
            })
            .collect();
        ColouredGraph {
            engine: engine.clone(),
            dynamics: Dynamics::Updates { updates, guards },
            vertices: engine.mk_full(u.state_set()),
            valid,
            labels: None,
        }
    }

    /// Graph given by an edge relation over `(s, c, s')`, the set of vertex
    /// codes in use and the valid colours.
    pub fn from_relation(engine: &Engine, edges: SymSet, vertices: SymSet, valid: SymSet) -> ColouredGraph {
        let u = engine.universe();
        let all = u.state_set().union(&u.input_set()).union(&u.primed_set());
        ColouredGraph {
            engine: engine.clone(),
            dynamics: Dynamics::Relation { edges: edges.extend_support(&all) },
            vertices: vertices.extend_support(&u.state_set()),
            valid: valid.extend_support(&u.input_set()),
            labels: None,
        }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn is_update_based(&self) -> bool {
        matches!(self.dynamics, Dynamics::Updates { .. })
    }

    pub fn num_states(&self) -> usize {
        self.engine.universe().num_states()
    }

    /// Update function `b_i`, if the graph is update-based.
    pub fn update(&self, i: usize) -> Option<&SymSet> {
        match &self.dynamics {
            Dynamics::Updates { updates, .. } => updates.get(i),
            Dynamics::Relation { .. } => None,
        }
    }

    /// Edge relation, if the graph was given by one.
    pub fn edge_relation(&self) -> Option<&SymSet> {
        match &self.dynamics {
            Dynamics::Updates { .. } => None,
            Dynamics::Relation { edges } => Some(edges),
        }
    }

    /// The vertex set `V` (over state variables).
    pub fn vertices(&self) -> &SymSet {
        &self.vertices
    }

    /// The valid colours `C` (over input variables).
    pub fn valid_colours(&self) -> &SymSet {
        &self.valid
    }

    /// `V x C`, the starting point of a decomposition.
    pub fn vertex_colour_space(&self) -> SymSet {
        self.vertices.product(&self.valid).expect("state and input supports are disjoint")
    }

    fn vc_support(&self) -> VarSet {
        self.engine.universe().vertex_colour_set()
    }

    pub fn empty(&self) -> SymSet {
        self.engine.mk_empty(self.vc_support())
    }

    /// Colours appearing in `a`.
    pub fn colours(&self, a: &SymSet) -> SymSet {
        a.exists_set(&self.engine.universe().state_set())
    }

    /// `X & (b_i xor s_i)` with `s_i` flipped: the successors of `X` along
    /// variable `i`.
    pub fn var_post(&self, i: usize, x: &SymSet) -> Result<SymSet, GraphError> {
        let Dynamics::Updates { guards, .. } = &self.dynamics else {
            return Err(EngineError::contract("per-variable images need an update-based graph").into());
        };
        let s = self.engine.universe().state_var(i);
        Ok(self.engine.counted(|| x.intersect(&guards[i]).flip_var(s).expect("state variable")))
    }

    pub fn var_pre(&self, i: usize, x: &SymSet) -> Result<SymSet, GraphError> {
        let Dynamics::Updates { guards, .. } = &self.dynamics else {
            return Err(EngineError::contract("per-variable images need an update-based graph").into());
        };
        let s = self.engine.universe().state_var(i);
        Ok(self.engine.counted(|| x.flip_var(s).expect("state variable").intersect(&guards[i])))
    }

    /// Coloured successors of `x`.
    pub fn post(&self, x: &SymSet) -> SymSet {
        self.engine.counted(|| match &self.dynamics {
            Dynamics::Updates { .. } => self.union_over_vars(x, Direction::Forward),
            Dynamics::Relation { edges } => {
                let u = self.engine.universe();
                let image = x.intersect(edges).exists_set(&u.state_set());
                image.rename(&self.primed_to_state()).expect("primed block renames onto states")
            }
        })
    }

    /// Coloured predecessors of `x`.
    pub fn pre(&self, x: &SymSet) -> SymSet {
        self.engine.counted(|| match &self.dynamics {
            Dynamics::Updates { .. } => self.union_over_vars(x, Direction::Backward),
            Dynamics::Relation { edges } => {
                let u = self.engine.universe();
                let shifted = x.rename(&self.state_to_primed()).expect("states rename onto primed block");
                shifted.intersect(edges).exists_set(&u.primed_set())
            }
        })
    }

    fn union_over_vars(&self, x: &SymSet, dir: Direction) -> SymSet {
        let mut result = self.empty();
        for i in 0..self.num_states() {
            let step = match dir {
                Direction::Forward => self.var_post(i, x),
                Direction::Backward => self.var_pre(i, x),
            };
            result = result.union(&step.expect("update-based graph"));
        }
        result
    }

    /// Post image in the monochromatisation for `colour` (a single input
    /// valuation). `x` is a set of vertices over state variables.
    pub fn mono_post(&self, colour: &SymSet, x: &SymSet) -> Result<SymSet, GraphError> {
        self.mono(colour, x, Direction::Forward)
    }

    pub fn mono_pre(&self, colour: &SymSet, x: &SymSet) -> Result<SymSet, GraphError> {
        self.mono(colour, x, Direction::Backward)
    }

    fn mono(&self, colour: &SymSet, x: &SymSet, dir: Direction) -> Result<SymSet, GraphError> {
        let u = self.engine.universe();
        if !x.support().is_subset(&u.state_set()) || !colour.support().is_subset(&u.input_set()) {
            return Err(EngineError::contract("monochromatic image needs a vertex set and a colour").into());
        }
        if colour.extend_support(&u.input_set()).cardinality() != 1u32.into() {
            return Err(EngineError::contract("monochromatic image needs exactly one colour").into());
        }
        let coloured = x.product(colour)?;
        let image = match dir {
            Direction::Forward => self.post(&coloured),
            Direction::Backward => self.pre(&coloured),
        };
        Ok(image.exists_set(&u.input_set()))
    }

    /// `{(u, c, v) | (u, c) in a, (v, c) in a}` with `v` on primed variables.
    pub fn join(&self, a: &SymSet) -> SymSet {
        self.engine.counted(|| {
            let primed = a.rename(&self.state_to_primed()).expect("states rename onto primed block");
            a.intersect(&primed)
        })
    }

    /// One vertex per colour of `v`.
    ///
    /// Picks the state variables from the last to the first, projecting each
    /// picked variable away before the next pick, and intersects the picks.
    pub fn pivots(&self, v: &SymSet) -> SymSet {
        let u = self.engine.universe();
        let n = u.num_states();
        if n == 0 || v.is_empty() {
            return v.clone();
        }
        let mut x = v.clone();
        let mut result: Option<SymSet> = None;
        for k in (0..n).rev() {
            let s = u.state_var(k);
            let picked = x.pick_var(s).expect("state variable is in the support");
            result = Some(match result {
                None => picked,
                Some(r) => r.intersect(&picked),
            });
            if k > 0 {
                x = x.exists_set(&VarSet::from_vars(u.num_vars(), [s]));
            }
        }
        result.expect("at least one state variable")
    }

    /// Removes the coloured vertices of `v` without a predecessor (or
    /// successor) inside `v`.
    pub fn trim_step(&self, v: &SymSet, direction: TrimDirection) -> SymSet {
        let image = match direction {
            TrimDirection::NoPredecessor => self.post(v),
            TrimDirection::NoSuccessor => self.pre(v),
        };
        image.intersect(v)
    }

    /// Number of transitions fired one at a time by saturation: the network
    /// variables, or the whole relation as one transition.
    pub fn transitions(&self) -> usize {
        match &self.dynamics {
            Dynamics::Updates { updates, .. } => updates.len(),
            Dynamics::Relation { .. } => 1,
        }
    }

    /// Image of `x` along one transition (see [`ColouredGraph::transitions`]).
    pub fn transition_image(&self, t: usize, x: &SymSet, dir: Direction) -> SymSet {
        match (&self.dynamics, dir) {
            (Dynamics::Updates { .. }, Direction::Forward) => self.var_post(t, x).expect("update-based"),
            (Dynamics::Updates { .. }, Direction::Backward) => self.var_pre(t, x).expect("update-based"),
            (Dynamics::Relation { .. }, Direction::Forward) => self.post(x),
            (Dynamics::Relation { .. }, Direction::Backward) => self.pre(x),
        }
    }

    pub fn image(&self, x: &SymSet, dir: Direction) -> SymSet {
        match dir {
            Direction::Forward => self.post(x),
            Direction::Backward => self.pre(x),
        }
    }

    fn state_to_primed(&self) -> Vec<(VarId, VarId)> {
        let u = self.engine.universe();
        (0..u.num_states()).map(|i| (u.state_var(i), u.primed_var(i))).collect()
    }

    fn primed_to_state(&self) -> Vec<(VarId, VarId)> {
        let u = self.engine.universe();
        (0..u.num_states()).map(|i| (u.primed_var(i), u.state_var(i))).collect()
    }

    /// The identity pairs `{(v, c, v) | (v, c) in a}`.
    pub fn diagonal(&self, a: &SymSet) -> SymSet {
        let u = self.engine.universe();
        self.engine.counted(|| {
            let mut eq = self.engine.mk_full(u.primed_set());
            for i in 0..u.num_states() {
                let s = self.engine.mk_literal(u.state_var(i), true);
                let p = self.engine.mk_literal(u.primed_var(i), true);
                let same = s.intersect(&p).union(&s.complement().intersect(&p.complement()));
                eq = eq.intersect(&same);
            }
            a.intersect(&eq)
        })
    }

    /// Plain-data copy of the graph, for rebuilding it in another engine.
    pub fn to_portable(&self) -> PortableGraph {
        let dynamics = match &self.dynamics {
            Dynamics::Updates { updates, .. } => {
                PortableDynamics::Updates(updates.iter().map(SymSet::to_portable).collect())
            }
            Dynamics::Relation { edges } => PortableDynamics::Relation(edges.to_portable()),
        };
        PortableGraph {
            dynamics,
            vertices: self.vertices.to_portable(),
            valid: self.valid.to_portable(),
            labels: self.labels.clone(),
        }
    }

    /// Label of every coloured vertex in `a`, in code order. Only for graphs
    /// built from an edge list.
    pub fn decode(&self, a: &SymSet) -> Option<Vec<(String, String)>> {
        let labels = self.labels.as_ref()?;
        let u = self.engine.universe();
        let full = a.extend_support(&self.vc_support());
        let vars = full.support().to_vec();
        let mut out = Vec::new();
        for values in full.witnesses() {
            let mut vertex = 0usize;
            let mut colour = 0usize;
            for (v, bit) in vars.iter().zip(values) {
                if let Some(i) = u.state_index(*v) {
                    vertex |= (bit as usize) << (u.num_states() - 1 - i);
                } else if let Some(j) = u.input_index(*v) {
                    colour |= (bit as usize) << (u.num_inputs() - 1 - j);
                }
            }
            if let (Some(v), Some(c)) = (labels.vertices.get(vertex), colour_label(labels, colour)) {
                out.push((v.clone(), c));
            }
        }
        Some(out)
    }

    /// Coloured vertex `(vertex, colour)` of an edge-list graph.
    pub fn coloured_vertex(&self, vertex: &str, colour: &str) -> Result<SymSet, GraphError> {
        let labels = self.labels.as_ref().ok_or_else(|| EngineError::contract("graph has no labels"))?;
        let u = self.engine.universe();
        let mut cube = edges::code_cube(&labels.vertices, vertex, |i| u.state_var(i), u.num_states())?;
        if !labels.colours.is_empty() {
            cube.extend(edges::code_cube(&labels.colours, colour, |j| u.input_var(j), u.num_inputs())?);
        }
        Ok(self.engine.mk_cube(&cube).extend_support(&self.vc_support()))
    }
}

fn colour_label(labels: &Labels, code: usize) -> Option<String> {
    labels.colours.get(code).cloned()
}

#[derive(Clone, Debug)]
enum PortableDynamics {
    Updates(Vec<PortableSet>),
    Relation(PortableSet),
}

/// A graph as plain data; `Send`, unlike [`ColouredGraph`].
#[derive(Clone, Debug)]
pub struct PortableGraph {
    dynamics: PortableDynamics,
    vertices: PortableSet,
    valid: PortableSet,
    labels: Option<Labels>,
}

impl PortableGraph {
    /// Rebuilds the graph inside `engine`, whose universe must equal the
    /// one the graph was built in.
    pub fn load(&self, engine: &Engine) -> Result<ColouredGraph, GraphError> {
        let vertices = engine.import(&self.vertices)?;
        let valid = engine.import(&self.valid)?;
        let mut graph = match &self.dynamics {
            PortableDynamics::Updates(updates) => {
                let updates = updates.iter().map(|p| engine.import(p)).collect::<Result<Vec<_>, _>>()?;
                let support = engine.universe().vertex_colour_set();
                let updates = updates.into_iter().map(|b| b.extend_support(&support)).collect();
                ColouredGraph::from_updates(engine, updates, valid.extend_support(&engine.universe().input_set()))
            }
            PortableDynamics::Relation(edges) => {
                ColouredGraph::from_relation(engine, engine.import(edges)?, vertices, valid)
            }
        };
        graph.labels = self.labels.clone();
        Ok(graph)
    }
}

#[cfg(test)]
mod tests;
