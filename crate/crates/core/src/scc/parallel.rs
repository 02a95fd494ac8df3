//! Worker pool for the decomposition. Every worker owns an engine and a
//! copy of the graph; tasks travel between workers as portable sets.

use std::collections::VecDeque;
use std::sync::{Condvar, Mutex, MutexGuard};
use std::thread;
use std::time::Duration;

use crate::engine::{Engine, PortableSet};
use crate::graph::{ColouredGraph, PortableGraph};

use super::{
    finish, process_task, CancelToken, Cancelled, Component, Progress, RunConfig, RunHooks, RunStatus, SccError,
    SccRelation,
};

struct Queue {
    tasks: VecDeque<PortableSet>,
    in_flight: usize,
    failed: bool,
    abandoned: bool,
    components: usize,
}

struct Shared {
    queue: Mutex<Queue>,
    wake: Condvar,
}

impl Shared {
    fn lock(&self) -> MutexGuard<'_, Queue> {
        self.queue.lock().unwrap_or_else(|e| e.into_inner())
    }
}

/// Marks the run failed if the owning worker unwinds, so that the others
/// stop waiting for its tasks.
struct PanicGuard<'a>(&'a Shared);

impl Drop for PanicGuard<'_> {
    fn drop(&mut self) {
        if thread::panicking() {
            self.0.lock().failed = true;
            self.0.wake.notify_all();
        }
    }
}

#[derive(Default)]
struct WorkerOutput {
    components: Vec<(PortableSet, PortableSet)>,
    trimmed: Vec<PortableSet>,
    relation: Option<PortableSet>,
    steps: u64,
    cut_offs: usize,
}

fn worker(
    graph: &PortableGraph,
    engine: Engine,
    cfg: &RunConfig,
    hooks: &RunHooks,
    cancel: &CancelToken,
    shared: &Shared,
) -> WorkerOutput {
    let _guard = PanicGuard(shared);
    let g = graph.load(&engine).expect("graph loads into an engine over the same universe");
    let u = engine.universe();
    let mut out = WorkerOutput::default();
    let mut relation = cfg.record_relation.then(|| engine.mk_empty(u.all_set()));
    let start_steps = engine.steps();
    loop {
        let task = {
            let mut q = shared.lock();
            loop {
                if q.failed || q.abandoned {
                    break None;
                }
                if cancel.is_cancelled() {
                    q.abandoned = !q.tasks.is_empty() || q.in_flight > 0;
                    break None;
                }
                if let Some(t) = q.tasks.pop_front() {
                    q.in_flight += 1;
                    break Some((t, q.components));
                }
                if q.in_flight == 0 {
                    break None;
                }
                // Wake up now and then to notice a deadline.
                q = shared.wake.wait_timeout(q, Duration::from_millis(50)).unwrap_or_else(|e| e.into_inner()).0;
            }
        };
        let Some((task, components)) = task else {
            shared.wake.notify_all();
            break;
        };
        let v = engine.import(&task).expect("task set belongs to the shared universe");
        if let Some(progress) = hooks.progress {
            progress(&Progress { pairs: v.cardinality(), components, steps: engine.steps() - start_steps });
        }
        match process_task(&g, &v, cfg, cancel) {
            Ok(result) => {
                let children: Vec<PortableSet> = result.children.iter().map(|c| c.to_portable()).collect();
                let found = result.component.is_some();
                if let Some(Component { vertices, nontrivial_colours }) = result.component {
                    if let Some(rel) = &relation {
                        relation = Some(rel.union(&g.join(&vertices)));
                    }
                    out.components.push((vertices.to_portable(), nontrivial_colours.to_portable()));
                }
                if let Some(removed) = result.removed {
                    out.trimmed.push(removed.to_portable());
                }
                out.cut_offs += result.cut_off as usize;
                let mut q = shared.lock();
                q.tasks.extend(children);
                q.in_flight -= 1;
                q.components += found as usize;
                drop(q);
                shared.wake.notify_all();
            }
            Err(Cancelled) => {
                let mut q = shared.lock();
                q.in_flight -= 1;
                q.abandoned = true;
                drop(q);
                shared.wake.notify_all();
                break;
            }
        }
    }
    out.relation = relation.map(|r| r.to_portable());
    out.steps = engine.steps() - start_steps;
    out
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "worker panicked".to_string()
    }
}

pub(super) fn run_parallel(
    g: &ColouredGraph,
    cfg: &RunConfig,
    hooks: &RunHooks,
    cancel: &CancelToken,
) -> Result<SccRelation, SccError> {
    let graph = g.to_portable();
    let universe = g.engine().universe_arc();
    let start = g.vertex_colour_space();
    let shared = Shared {
        queue: Mutex::new(Queue {
            tasks: if start.is_empty() { VecDeque::new() } else { VecDeque::from([start.to_portable()]) },
            in_flight: 0,
            failed: false,
            abandoned: false,
            components: 0,
        }),
        wake: Condvar::new(),
    };

    let outputs: Vec<thread::Result<WorkerOutput>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..cfg.threads)
            .map(|_| {
                let (graph, shared, universe) = (&graph, &shared, universe.clone());
                scope.spawn(move || worker(graph, Engine::new(universe), cfg, hooks, cancel, shared))
            })
            .collect();
        handles.into_iter().map(|h| h.join()).collect()
    });

    let mut result = SccRelation::empty(g, cfg.record_relation);
    let mut failure = None;
    for output in outputs {
        let output = match output {
            Ok(output) => output,
            Err(payload) => {
                failure.get_or_insert_with(|| panic_message(payload.as_ref()));
                continue;
            }
        };
        let import = |p: &PortableSet| g.engine().import(p).map_err(crate::graph::GraphError::from);
        for (vertices, nontrivial) in &output.components {
            result.components.push(Component { vertices: import(vertices)?, nontrivial_colours: import(nontrivial)? });
        }
        for removed in &output.trimmed {
            result.trimmed = result.trimmed.union(&import(removed)?);
        }
        if let (Some(rel), Some(part)) = (&result.relation, &output.relation) {
            result.relation = Some(rel.union(&import(part)?));
        }
        result.steps += output.steps;
        result.trim_cutoffs += output.cut_offs;
    }
    let q = shared.lock();
    if q.abandoned || q.failed || !q.tasks.is_empty() {
        result.status = RunStatus::Partial;
    }
    drop(q);
    // Imported sets may have a narrower declared support than sets built
    // locally; widen them so every component looks alike.
    let vc = g.engine().universe().vertex_colour_set();
    let inputs = g.engine().universe().input_set();
    for c in &mut result.components {
        c.vertices = c.vertices.extend_support(&vc);
        c.nontrivial_colours = c.nontrivial_colours.extend_support(&inputs);
    }
    if let Some(rel) = &result.relation {
        result.relation = Some(rel.extend_support(&g.engine().universe().all_set()));
    }
    finish(&mut result, g);
    match failure {
        Some(message) => Err(SccError::WorkerPanic { message, partial: Box::new(result) }),
        None => Ok(result),
    }
}
