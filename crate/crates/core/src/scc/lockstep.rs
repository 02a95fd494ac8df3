//! One decomposition call: coloured lock-step reachability from a pivot set,
//! then completion of the unfinished direction inside the converged set.

use crate::engine::SymSet;
use crate::graph::{ColouredGraph, Direction};

use super::{CancelToken, Cancelled};

/// Colours whose forward (resp. backward) search has converged.
#[derive(Clone, Debug)]
pub struct LockState {
    pub f_lock: SymSet,
    pub b_lock: SymSet,
}

#[derive(Clone, Debug)]
pub struct LockstepFrontiers {
    pub f: SymSet,
    pub b: SymSet,
    pub f_open: SymSet,
    pub b_open: SymSet,
    pub f_paused: SymSet,
    pub b_paused: SymSet,
}

/// Result of one decomposition call on `v`.
#[derive(Clone, Debug)]
pub struct DecompositionStep {
    pub pivots: SymSet,
    pub locks: LockState,
    pub converged: SymSet,
    /// One component per colour of `v`.
    pub component: SymSet,
    /// `v \ Con`.
    pub outside_converged: SymSet,
    /// `Con \ W`.
    pub inside_converged: SymSet,
    /// Iterations of the lock-step loop.
    pub iterations: usize,
}

/// Extends `reached` by one step, firing the transitions one at a time in
/// variable order. Each transition fires only for colours that have not yet
/// advanced. Returns the extended set and the colours that could not
/// advance.
pub fn next_step(g: &ColouredGraph, reached: &SymSet, within: &SymSet, dir: Direction) -> (SymSet, SymSet) {
    let mut remaining = g.colours(reached);
    let mut result = reached.clone();
    for t in 0..g.transitions() {
        if remaining.is_empty() {
            break;
        }
        let base = result.intersect(&remaining);
        let fresh = g.transition_image(t, &base, dir).intersect(within).minus(&result);
        if fresh.is_empty() {
            continue;
        }
        remaining = remaining.minus(&g.colours(&fresh));
        result = result.union(&fresh);
    }
    (result, remaining)
}

/// New pairs reached from the open frontier: `(image(open) & within) \ reached`
/// without saturation. With saturation, the pairs added by one
/// [`next_step`] from the reached set restricted to `open_colours`, together
/// with the colours that did not advance.
fn advance(
    g: &ColouredGraph,
    reached: &SymSet,
    open: &SymSet,
    open_colours: &SymSet,
    within: &SymSet,
    dir: Direction,
    saturation: bool,
) -> (SymSet, Option<SymSet>) {
    if open.is_empty() {
        return (open.clone(), None);
    }
    if saturation {
        let (extended, converged) = next_step(g, &reached.intersect(open_colours), within, dir);
        (extended.minus(reached), Some(converged))
    } else {
        (g.image(open, dir).intersect(within).minus(reached), None)
    }
}

/// First phase: interleaved forward and backward search from `pivots`
/// until every colour of `v` is locked in one direction. When both
/// directions converge in the same iteration, the forward lock wins.
///
/// `observer` sees the lock state after every iteration.
pub fn run_lockstep(
    g: &ColouredGraph,
    v: &SymSet,
    pivots: &SymSet,
    saturation: bool,
    cancel: &CancelToken,
    observer: &mut dyn FnMut(usize, &LockState),
) -> Result<(LockstepFrontiers, LockState, usize), Cancelled> {
    let colours = g.colours(v);
    let no_colours = g.engine().mk_empty(g.engine().universe().input_set());
    let mut locks = LockState { f_lock: no_colours.clone(), b_lock: no_colours };
    let mut fr = LockstepFrontiers {
        f: pivots.clone(),
        b: pivots.clone(),
        f_open: pivots.clone(),
        b_open: pivots.clone(),
        f_paused: g.empty(),
        b_paused: g.empty(),
    };
    let mut iteration = 0;
    while !locks.f_lock.union(&locks.b_lock).same_members(&colours) {
        cancel.check()?;
        iteration += 1;
        let active = colours.minus(&locks.f_lock).minus(&locks.b_lock);
        let (f_open, f_done) = advance(g, &fr.f, &fr.f_open, &active, v, Direction::Forward, saturation);
        let (b_open, b_done) = advance(g, &fr.b, &fr.b_open, &active, v, Direction::Backward, saturation);
        fr.f_open = f_open;
        fr.b_open = b_open;
        // Saturation reports the converged colours directly.
        let f_done = f_done.unwrap_or_else(|| colours.minus(&g.colours(&fr.f_open)));
        let b_done = b_done.unwrap_or_else(|| colours.minus(&g.colours(&fr.b_open)));
        locks.f_lock = locks.f_lock.union(&f_done.minus(&locks.b_lock));
        locks.b_lock = locks.b_lock.union(&b_done.minus(&locks.f_lock));
        fr.f_paused = fr.f_paused.union(&fr.f_open.intersect(&locks.b_lock));
        fr.b_paused = fr.b_paused.union(&fr.b_open.intersect(&locks.f_lock));
        fr.f_open = fr.f_open.minus(&locks.b_lock);
        fr.b_open = fr.b_open.minus(&locks.f_lock);
        fr.f = fr.f.union(&fr.f_open);
        fr.b = fr.b.union(&fr.b_open);
        observer(iteration, &locks);
    }
    Ok((fr, locks, iteration))
}

/// `(F & (V x F_lock)) | (B & (V x B_lock))`.
pub fn converged_set(fr: &LockstepFrontiers, locks: &LockState) -> SymSet {
    fr.f.intersect(&locks.f_lock).union(&fr.b.intersect(&locks.b_lock))
}

/// Second phase: resumes the paused searches inside `con` until both are
/// complete there. The paused pairs themselves were reached in the first
/// phase, so they join the reached sets on restart.
///
/// Without saturation only the paused frontier has unexplored edges. A
/// saturation step stops at the first transition that advances a colour,
/// so with saturation every colour locked in the other direction resumes
/// from its whole reached set.
pub fn complete_within_converged(
    g: &ColouredGraph,
    fr: &mut LockstepFrontiers,
    locks: &LockState,
    con: &SymSet,
    saturation: bool,
    cancel: &CancelToken,
) -> Result<(), Cancelled> {
    fr.f_open = fr.f_paused.intersect(con);
    fr.b_open = fr.b_paused.intersect(con);
    fr.f = fr.f.union(&fr.f_open);
    fr.b = fr.b.union(&fr.b_open);
    if !saturation {
        while !fr.f_open.is_empty() || !fr.b_open.is_empty() {
            cancel.check()?;
            fr.f_open = g.image(&fr.f_open, Direction::Forward).intersect(con).minus(&fr.f);
            fr.b_open = g.image(&fr.b_open, Direction::Backward).intersect(con).minus(&fr.b);
            fr.f = fr.f.union(&fr.f_open);
            fr.b = fr.b.union(&fr.b_open);
        }
        return Ok(());
    }
    let mut f_colours = locks.b_lock.clone();
    let mut b_colours = locks.f_lock.clone();
    while !f_colours.is_empty() || !b_colours.is_empty() {
        cancel.check()?;
        if !f_colours.is_empty() {
            let (extended, done) = next_step(g, &fr.f.intersect(&f_colours), con, Direction::Forward);
            fr.f = fr.f.union(&extended);
            f_colours = f_colours.minus(&done);
        }
        if !b_colours.is_empty() {
            let (extended, done) = next_step(g, &fr.b.intersect(&b_colours), con, Direction::Backward);
            fr.b = fr.b.union(&extended);
            b_colours = b_colours.minus(&done);
        }
    }
    fr.f_open = g.empty();
    fr.b_open = g.empty();
    Ok(())
}

/// One decomposition call on a non-empty `v` with the given pivot set.
pub fn decompose_with_pivots(
    g: &ColouredGraph,
    v: &SymSet,
    pivots: SymSet,
    saturation: bool,
    cancel: &CancelToken,
    observer: &mut dyn FnMut(usize, &LockState),
) -> Result<DecompositionStep, Cancelled> {
    let (mut fr, locks, iterations) = run_lockstep(g, v, &pivots, saturation, cancel, observer)?;
    let con = converged_set(&fr, &locks);
    complete_within_converged(g, &mut fr, &locks, &con, saturation, cancel)?;
    let component = fr.f.intersect(&fr.b);
    Ok(DecompositionStep {
        outside_converged: v.minus(&con),
        inside_converged: con.minus(&component),
        pivots,
        locks,
        converged: con,
        component,
        iterations,
    })
}

/// One decomposition call on a non-empty `v`, with pivots chosen by
/// [`ColouredGraph::pivots`].
pub fn decomposition_once(
    g: &ColouredGraph,
    v: &SymSet,
    saturation: bool,
    cancel: &CancelToken,
) -> Result<DecompositionStep, Cancelled> {
    let pivots = g.pivots(v);
    decompose_with_pivots(g, v, pivots, saturation, cancel, &mut |_, _| {})
}
