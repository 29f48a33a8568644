//! Continuous-semantics evaluator: computes the exact satisfaction time set
//! of a formula over a piecewise-linear trace.
//!
//! Atoms map to exact region preimages, Boolean connectives to set algebra,
//! the diamond to [`IntervalSet::diamond_preimage`], the box to its dual, and
//! until to [`until_timeset`], a sweep over the finitely many critical points
//! between which membership is constant.

use std::collections::HashMap;

use crate::error::EvalError;
use crate::formula::{AtomMap, Formula};
use crate::timeset::{Interval, IntervalSet, TimeSet, TimeSetError};
use crate::trace::PlTrace;

/// Exact `{t ∈ [0, horizon] : trace, t ⊨ formula}` as a canonical time set.
///
/// The trace must extend far enough for every temporal window reachable from
/// `[0, horizon]`: `horizon + formula.window_sum() ≤ trace.horizon()`.
pub fn eval_timeset(
    formula: &Formula,
    trace: &PlTrace,
    atoms: &AtomMap,
    horizon: f64,
) -> Result<TimeSet, EvalError> {
    let mut cx = Evaluator::new(trace, atoms);
    cx.check_horizon(formula, horizon)?;
    // every subformula is evaluated over the full trace horizon, so window
    // endpoints are applied in a single arithmetic step; walking per-node
    // horizons up and down (h + T, then v - T) can round the same endpoint
    // two different ways and leave spurious slivers at set edges
    Ok(cx.eval(formula)?.clip(Interval::closed(0.0, horizon)))
}

/// Pointwise satisfaction `trace, t ⊨ formula`.
///
/// Equals `eval_timeset(formula, …, h).contains(t)` for any `h ≥ t`; Boolean
/// connectives short-circuit so only the temporal subformulas that matter
/// are expanded into time sets.
pub fn holds_at(
    formula: &Formula,
    trace: &PlTrace,
    atoms: &AtomMap,
    t: f64,
) -> Result<bool, EvalError> {
    let mut cx = Evaluator::new(trace, atoms);
    cx.check_horizon(formula, t)?;
    cx.holds(formula, t)
}

/// Exact until: `{t : ∃s ∈ window, t+s ∈ rhs ∧ [t, t+s) ⊆ lhs}` clipped to
/// `[0, horizon]`.
///
/// With `D(t) := sup{u ≥ t : [t, u) ⊆ lhs}` (so `D(t) = t` when `t ∉ lhs`,
/// the empty `[t,t)` holding vacuously), `t` qualifies iff
/// `(t ⊕ window) ∩ rhs ∩ [t, D(t)]` is nonempty. Membership is constant
/// between critical points — endpoints of both sets and their shifts by the
/// window endpoints — so the sweep decides each critical point and each gap
/// midpoint individually.
pub fn until_timeset(
    lhs: &TimeSet,
    rhs: &TimeSet,
    window: Interval,
    horizon: f64,
) -> Result<TimeSet, EvalError> {
    if window.hi().value.is_infinite() {
        return Err(EvalError::UnboundedWindow);
    }
    if window.lo().value < 0.0 {
        return Err(EvalError::NegativeWindow);
    }
    let (s, t_hi) = (window.lo().value, window.hi().value);

    let mut points = vec![0.0, horizon];
    for set in [lhs, rhs] {
        for iv in set.intervals() {
            for v in [iv.lo().value, iv.hi().value] {
                for shift in [0.0, s, t_hi] {
                    let c = v - shift;
                    if (0.0..=horizon).contains(&c) {
                        points.push(c);
                    }
                }
            }
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup();

    let member = |t: f64| -> bool {
        let d = sup_run(lhs, t);
        let probe = Interval::new(t + s, window.lo().closed, t + t_hi, window.hi().closed)
            .expect("window is nonempty");
        match Interval::closed(t, d).intersect(&probe) {
            Some(reach) => rhs.intersects_interval(&reach),
            None => false,
        }
    };

    let point_truth: Vec<bool> = points.iter().map(|&p| member(p)).collect();
    let gap_truth: Vec<bool> = points
        .windows(2)
        .map(|w| member(midpoint(w[0], w[1])))
        .collect();
    Ok(assemble(&points, &point_truth, &gap_truth))
}

/// `sup { u ≥ t : [t, u) ⊆ set }`: the end of the member interval containing
/// `t`, or `t` itself when `t` is not in the set.
fn sup_run(set: &TimeSet, t: f64) -> f64 {
    let idx = set.intervals().partition_point(|iv| iv.lo().value <= t);
    if idx > 0 && set.intervals()[idx - 1].contains(t) {
        set.intervals()[idx - 1].hi().value
    } else {
        t
    }
}

fn midpoint(a: f64, b: f64) -> f64 {
    a + (b - a) / 2.0
}

/// Builds a canonical set from truth values at sorted points and on the open
/// gaps between them.
fn assemble(points: &[f64], point_truth: &[bool], gap_truth: &[bool]) -> TimeSet {
    let slots = 2 * points.len() - 1;
    let truth_at = |slot: usize| -> bool {
        if slot % 2 == 0 {
            point_truth[slot / 2]
        } else {
            gap_truth[slot / 2]
        }
    };
    let mut raw = Vec::new();
    let mut run_start: Option<usize> = None;
    for slot in 0..=slots {
        let on = slot < slots && truth_at(slot);
        match (run_start, on) {
            (None, true) => run_start = Some(slot),
            (Some(start), false) => {
                let end = slot - 1;
                let (lo, lo_closed) = if start % 2 == 0 {
                    (points[start / 2], true)
                } else {
                    (points[start / 2], false)
                };
                let (hi, hi_closed) = if end % 2 == 0 {
                    (points[end / 2], true)
                } else {
                    (points[end / 2 + 1], false)
                };
                if let Some(iv) = Interval::try_new(lo, lo_closed, hi, hi_closed) {
                    raw.push(iv);
                }
                run_start = None;
            }
            _ => {}
        }
    }
    IntervalSet::canonicalize(raw)
}

struct Evaluator<'a> {
    trace: &'a PlTrace,
    atoms: &'a AtomMap,
    // atom time sets over the full trace horizon, computed once per atom
    atom_sets: HashMap<String, TimeSet>,
    // temporal subformulas keyed by their printed form; repeated subtrees
    // (the counterexample nests the same box formula three times) would
    // otherwise redo their whole sweep
    sub_sets: HashMap<String, TimeSet>,
}

impl<'a> Evaluator<'a> {
    fn new(trace: &'a PlTrace, atoms: &'a AtomMap) -> Self {
        Evaluator {
            trace,
            atoms,
            atom_sets: HashMap::new(),
            sub_sets: HashMap::new(),
        }
    }

    fn check_horizon(&self, formula: &Formula, horizon: f64) -> Result<(), EvalError> {
        let reach = formula.window_sum();
        if reach.is_infinite() {
            return Err(EvalError::UnboundedWindow);
        }
        let needed = horizon + reach;
        if needed > self.trace.horizon() {
            return Err(EvalError::HorizonExceeded {
                needed,
                available: self.trace.horizon(),
            });
        }
        Ok(())
    }

    fn atom_set(&mut self, name: &str) -> Result<TimeSet, EvalError> {
        if let Some(found) = self.atom_sets.get(name) {
            return Ok(found.clone());
        }
        let region = self.atoms.region_of(name)?;
        let set = self.trace.atom_timeset(&region);
        self.atom_sets.insert(name.to_string(), set.clone());
        Ok(set)
    }

    /// Time set over the whole trace domain `[0, H]`. The tail region
    /// `(H - window reach, H]` of a temporal node misses witnesses beyond
    /// the trace and is junk there, but a caller that passed the horizon
    /// check never consumes it.
    fn eval(&mut self, formula: &Formula) -> Result<TimeSet, EvalError> {
        match formula {
            Formula::Eventually(..) | Formula::Always(..) | Formula::Until(..) => {
                let key = formula.to_string();
                if let Some(found) = self.sub_sets.get(&key) {
                    return Ok(found.clone());
                }
                let set = self.eval_uncached(formula)?;
                self.sub_sets.insert(key, set.clone());
                Ok(set)
            }
            _ => self.eval_uncached(formula),
        }
    }

    fn eval_uncached(&mut self, formula: &Formula) -> Result<TimeSet, EvalError> {
        let full_horizon = self.trace.horizon();
        match formula {
            Formula::Atom(name) => self.atom_set(name),
            Formula::Top => Ok(IntervalSet::from_interval(Interval::closed(
                0.0,
                full_horizon,
            ))),
            Formula::Bot => Ok(IntervalSet::empty()),
            Formula::Not(inner) => Ok(self.eval(inner)?.complement(full_horizon)),
            Formula::And(a, b) => Ok(self.eval(a)?.intersect(&self.eval(b)?)),
            Formula::Or(a, b) => Ok(self.eval(a)?.union(&self.eval(b)?)),
            Formula::Eventually(w, inner) => {
                check_window(w)?;
                let sub = self.eval(inner)?;
                sub.diamond_preimage(*w, full_horizon).map_err(window_err)
            }
            Formula::Always(w, inner) => {
                // G_w φ = ¬ F_w ¬φ
                check_window(w)?;
                let sub = self.eval(inner)?.complement(full_horizon);
                Ok(sub
                    .diamond_preimage(*w, full_horizon)
                    .map_err(window_err)?
                    .complement(full_horizon))
            }
            Formula::Until(w, a, b) => {
                let lhs = self.eval(a)?;
                let rhs = self.eval(b)?;
                until_timeset(&lhs, &rhs, *w, full_horizon)
            }
        }
    }

    fn holds(&mut self, formula: &Formula, t: f64) -> Result<bool, EvalError> {
        match formula {
            Formula::Top => Ok(true),
            Formula::Bot => Ok(false),
            Formula::Atom(name) => Ok(self.atom_set(name)?.contains(t)),
            Formula::Not(inner) => Ok(!self.holds(inner, t)?),
            Formula::And(a, b) => Ok(self.holds(a, t)? && self.holds(b, t)?),
            Formula::Or(a, b) => Ok(self.holds(a, t)? || self.holds(b, t)?),
            _ => Ok(self.eval(formula)?.contains(t)),
        }
    }
}

fn check_window(window: &Interval) -> Result<(), EvalError> {
    if window.hi().value.is_infinite() {
        Err(EvalError::UnboundedWindow)
    } else if window.lo().value < 0.0 {
        Err(EvalError::NegativeWindow)
    } else {
        Ok(())
    }
}

fn window_err(e: TimeSetError) -> EvalError {
    match e {
        TimeSetError::UnboundedWindow => EvalError::UnboundedWindow,
        other => panic!("unexpected time-set error: {other}"),
    }
}
