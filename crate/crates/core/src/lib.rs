//! Symbolic decomposition of edge-coloured graphs into strongly connected
//! components, for graphs given as partially specified Boolean networks or
//! as explicit coloured edge lists.

pub mod corpus;
pub mod engine;
pub mod graph;
pub mod model;
pub mod oracle;
pub mod scc;

pub use engine::{Engine, PortableSet, SymSet, VarId, VarSet, VariableUniverse};
pub use graph::{parse_edges, ColouredGraph, EdgeList, GraphError};
pub use model::{encode, expand, parse_model, valid_colours, ExpandedNetwork, ModelError, PartialBooleanNetwork};
pub use scc::{coloured_scc, coloured_scc_with, CancelToken, RunConfig, RunHooks, RunStatus, SccError, SccRelation};
