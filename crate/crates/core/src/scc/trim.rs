use crate::engine::SymSet;
use crate::graph::{ColouredGraph, TrimDirection};

use super::{CancelToken, Cancelled};

/// Outcome of trimming one task.
#[derive(Clone, Debug)]
pub struct Trimmed {
    pub kept: SymSet,
    /// True when trimming stopped early because the diagram grew too large.
    pub cut_off: bool,
}

/// Repeatedly removes coloured vertices without a predecessor or without a
/// successor inside the set.
///
/// Stops early, returning the last set within bounds, once a diagram exceeds
/// `cutoff` times the node count of `v`. The node count of `v` is floored
/// at the number of state and input variables, so that very small inputs
/// (such as the full space, which has no decision nodes at all) can still
/// be trimmed.
pub fn trim(g: &ColouredGraph, v: &SymSet, cutoff: f64, cancel: &CancelToken) -> Result<Trimmed, Cancelled> {
    let floor = g.engine().universe().vertex_colour_set().len();
    let limit = cutoff * v.node_count().max(floor) as f64;
    let mut current = v.clone();
    loop {
        let start = current.clone();
        for direction in [TrimDirection::NoPredecessor, TrimDirection::NoSuccessor] {
            cancel.check()?;
            let next = g.trim_step(&current, direction);
            if next.node_count() as f64 > limit {
                return Ok(Trimmed { kept: current, cut_off: true });
            }
            current = next;
        }
        if current.same_members(&start) {
            return Ok(Trimmed { kept: current, cut_off: false });
        }
    }
}
