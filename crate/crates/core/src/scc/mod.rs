//! Coloured SCC decomposition.
//!
//! Each task is a coloured vertex set that is closed under SCCs for every
//! colour. A task is trimmed, split by one lock-step decomposition call into
//! a component (one SCC per colour) and at most two smaller tasks, which are
//! queued. Tasks are processed in FIFO order, on one thread or on a pool of
//! workers that each own an engine.

mod lockstep;
mod parallel;
mod trim;

use std::collections::{BTreeMap, VecDeque};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use thiserror::Error;

use crate::engine::SymSet;
use crate::graph::{ColouredGraph, GraphError};

pub use lockstep::{
    complete_within_converged, converged_set, decompose_with_pivots, decomposition_once, next_step, run_lockstep,
    DecompositionStep, LockState, LockstepFrontiers,
};
pub use trim::{trim, Trimmed};

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub saturation: bool,
    pub threads: usize,
    pub trimming: bool,
    pub trim_cutoff_factor: f64,
    /// Build the relation set; the component list is always kept.
    pub record_relation: bool,
    pub timeout: Option<Duration>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            saturation: true,
            threads: 1,
            trimming: true,
            trim_cutoff_factor: 2.0,
            record_relation: true,
            timeout: None,
        }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<(), SccError> {
        if self.threads == 0 {
            return Err(SccError::Config("at least one thread is needed".into()));
        }
        if !(self.trim_cutoff_factor > 0.0) {
            return Err(SccError::Config("the trim cutoff factor must be positive".into()));
        }
        Ok(())
    }
}

/// Cooperative cancellation: an explicit flag and an optional deadline.
#[derive(Clone, Debug, Default)]
pub struct CancelToken {
    flag: Arc<AtomicBool>,
    deadline: Option<Instant>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("run cancelled")]
pub struct Cancelled;

impl CancelToken {
    pub fn new() -> CancelToken {
        CancelToken::default()
    }

    /// Same flag, with a deadline `timeout` from now (the earlier deadline
    /// wins if one is already set).
    pub fn with_timeout(&self, timeout: Duration) -> CancelToken {
        let deadline = Instant::now() + timeout;
        CancelToken {
            flag: self.flag.clone(),
            deadline: Some(self.deadline.map_or(deadline, |d| d.min(deadline))),
        }
    }

    pub fn cancel(&self) {
        self.flag.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.flag.load(Ordering::Relaxed) || self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn check(&self) -> Result<(), Cancelled> {
        if self.is_cancelled() {
            Err(Cancelled)
        } else {
            Ok(())
        }
    }
}

/// Reported before every decomposition call.
#[derive(Clone, Debug)]
pub struct Progress {
    /// Coloured vertices in the task.
    pub pairs: BigUint,
    /// Components found so far.
    pub components: usize,
    /// Symbolic steps of the engine running the task.
    pub steps: u64,
}

#[derive(Clone, Default)]
pub struct RunHooks<'a> {
    pub progress: Option<&'a (dyn Fn(&Progress) + Sync)>,
    pub cancel: Option<CancelToken>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Complete,
    /// Cancelled or timed out; the result holds what was found so far.
    Partial,
}

/// One SCC per colour of `vertices`.
#[derive(Clone, Debug)]
pub struct Component {
    pub vertices: SymSet,
    /// Colours for which the SCC has more than one vertex or a self-loop.
    pub nontrivial_colours: SymSet,
}

#[derive(Clone, Debug)]
pub struct SccRelation {
    /// Pairs `(u, c, v)` with `u` and `v` in one SCC of colour `c`, over
    /// state, input and primed variables; present if requested.
    pub relation: Option<SymSet>,
    pub components: Vec<Component>,
    /// Coloured vertices removed by trimming; each is a trivial SCC.
    pub trimmed: SymSet,
    /// Valid colours of the graph.
    pub colours: SymSet,
    pub status: RunStatus,
    pub steps: u64,
    /// Tasks whose trimming stopped at the size cutoff.
    pub trim_cutoffs: usize,
}

#[derive(Debug, Error)]
pub enum SccError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("worker failed: {message}")]
    WorkerPanic { message: String, partial: Box<SccRelation> },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl SccRelation {
    fn empty(g: &ColouredGraph, record_relation: bool) -> SccRelation {
        let u = g.engine().universe();
        SccRelation {
            relation: record_relation.then(|| g.engine().mk_empty(u.all_set())),
            components: Vec::new(),
            trimmed: g.empty(),
            colours: g.valid_colours().clone(),
            status: RunStatus::Complete,
            steps: 0,
            trim_cutoffs: 0,
        }
    }

    /// Partition of the valid colours by their number of non-trivial SCCs.
    /// Cells are disjoint and have distinct counts.
    pub fn nontrivial_counts(&self) -> Vec<(SymSet, u64)> {
        let mut cells: Vec<(SymSet, u64)> = vec![(self.colours.clone(), 0)];
        for component in &self.components {
            let k = &component.nontrivial_colours;
            if k.is_empty() {
                continue;
            }
            let mut refined = BTreeMap::<u64, SymSet>::new();
            let mut add = |set: SymSet, count: u64| {
                if set.is_empty() {
                    return;
                }
                let merged = match refined.remove(&count) {
                    Some(prev) => prev.union(&set),
                    None => set,
                };
                refined.insert(count, merged);
            };
            for (cell, count) in cells {
                add(cell.intersect(k), count + 1);
                add(cell.minus(k), count);
            }
            cells = refined.into_iter().map(|(count, set)| (set, count)).collect();
        }
        cells.retain(|(cell, _)| !cell.is_empty());
        cells
    }

    /// Smallest and largest number of non-trivial SCCs over valid colours.
    pub fn nontrivial_range(&self) -> Option<(u64, u64)> {
        let counts = self.nontrivial_counts();
        let min = counts.iter().map(|(_, n)| *n).min()?;
        let max = counts.iter().map(|(_, n)| *n).max()?;
        Some((min, max))
    }

    /// Number of (colour, SCC) pairs found, trivial ones included.
    pub fn total_components(&self) -> BigUint {
        let u = self.colours.engine().universe();
        let inputs = u.input_set();
        let mut total = self.trimmed.count_assignments(&u.vertex_colour_set()).unwrap_or_default();
        for component in &self.components {
            let colours = component.vertices.exists_set(&u.state_set());
            total += colours.count_assignments(&inputs).unwrap_or_default();
        }
        total
    }
}

/// Colours for which `w` (one SCC per colour, containing `pivots`) is
/// non-trivial.
pub fn nontrivial_colours(g: &ColouredGraph, w: &SymSet, pivots: &SymSet) -> SymSet {
    let several = g.colours(&w.minus(pivots));
    let looped = g.colours(&g.post(pivots).intersect(pivots));
    several.union(&looped)
}

pub(crate) struct TaskOutput {
    component: Option<Component>,
    removed: Option<SymSet>,
    children: Vec<SymSet>,
    cut_off: bool,
}

pub(crate) fn process_task(
    g: &ColouredGraph,
    v: &SymSet,
    cfg: &RunConfig,
    cancel: &CancelToken,
) -> Result<TaskOutput, Cancelled> {
    let mut v = v.clone();
    let mut out = TaskOutput { component: None, removed: None, children: Vec::new(), cut_off: false };
    if cfg.trimming {
        let trimmed = trim(g, &v, cfg.trim_cutoff_factor, cancel)?;
        out.cut_off = trimmed.cut_off;
        let removed = v.minus(&trimmed.kept);
        if !removed.is_empty() {
            out.removed = Some(removed);
        }
        v = trimmed.kept;
    }
    if v.is_empty() {
        return Ok(out);
    }
    let step = decomposition_once(g, &v, cfg.saturation, cancel)?;
    let nontrivial = nontrivial_colours(g, &step.component, &step.pivots);
    out.component = Some(Component { vertices: step.component, nontrivial_colours: nontrivial });
    out.children = [step.outside_converged, step.inside_converged].into_iter().filter(|c| !c.is_empty()).collect();
    Ok(out)
}

fn record(result: &mut SccRelation, g: &ColouredGraph, out: TaskOutput) {
    if let Some(removed) = out.removed {
        result.trimmed = result.trimmed.union(&removed);
    }
    if let Some(component) = out.component {
        if let Some(rel) = &result.relation {
            let before = g.engine().steps();
            result.relation = Some(rel.union(&g.join(&component.vertices)));
            result.steps += g.engine().steps() - before;
        }
        result.components.push(component);
    }
    result.trim_cutoffs += out.cut_off as usize;
}

/// Adds the identity pairs of trimmed vertices to the relation.
fn finish(result: &mut SccRelation, g: &ColouredGraph) {
    if let Some(rel) = &result.relation {
        if !result.trimmed.is_empty() {
            result.relation = Some(rel.union(&g.diagonal(&result.trimmed)));
        }
    }
}

/// Decomposes `V x C` of `g` into coloured SCCs.
pub fn coloured_scc(g: &ColouredGraph, cfg: &RunConfig) -> Result<SccRelation, SccError> {
    coloured_scc_with(g, cfg, &RunHooks::default())
}

pub fn coloured_scc_with(g: &ColouredGraph, cfg: &RunConfig, hooks: &RunHooks) -> Result<SccRelation, SccError> {
    cfg.validate()?;
    let mut cancel = hooks.cancel.clone().unwrap_or_default();
    if let Some(timeout) = cfg.timeout {
        cancel = cancel.with_timeout(timeout);
    }
    if cfg.threads > 1 {
        return parallel::run_parallel(g, cfg, hooks, &cancel);
    }

    let mut result = SccRelation::empty(g, cfg.record_relation);
    let mut queue = VecDeque::from([g.vertex_colour_space()]);
    while let Some(v) = queue.pop_front() {
        if v.is_empty() {
            continue;
        }
        if let Some(progress) = hooks.progress {
            progress(&Progress {
                pairs: v.cardinality(),
                components: result.components.len(),
                steps: result.steps,
            });
        }
        // Only task work and relation building are counted, as in the
        // parallel path.
        let before = g.engine().steps();
        match process_task(g, &v, cfg, &cancel) {
            Ok(out) => {
                result.steps += g.engine().steps() - before;
                queue.extend(out.children.iter().cloned());
                record(&mut result, g, out);
            }
            Err(Cancelled) => {
                result.status = RunStatus::Partial;
                break;
            }
        }
    }
    finish(&mut result, g);
    Ok(result)
}
