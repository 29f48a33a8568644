//! Metric temporal logic over continuous and grid-sampled traces.
//!
//! The crate evaluates MTL formulas two ways and lets you compare them:
//!
//! * **Continuous semantics** on piecewise-linear traces, computed exactly as
//!   a finite union of intervals (the satisfaction time set) via the
//!   [`timeset`] algebra and the [`continuous`] evaluator.
//! * **Discrete semantics** on the time grid `ℕ/n`, evaluated literally over
//!   grid samples by the [`discrete`] evaluator.
//!
//! On top of the evaluators, [`stochastic`] provides seeded samplers for
//! Brownian motion and one-dimensional SDE paths, and [`harness`] estimates
//! satisfaction probabilities by Monte Carlo, including canned experiments
//! that exhibit where the two semantics agree in the limit and where they
//! provably do not.
//!
//! See the `examples/` directory for a runnable tour of each capability, and
//! the `mtl-smc` binary for the command-line interface.

pub mod continuous;
pub mod discrete;
mod error;
pub mod formula;
pub mod harness;
pub mod stochastic;
pub mod timeset;
pub mod trace;

pub use error::EvalError;
pub use formula::{AtomMap, Formula};
pub use timeset::{Interval, IntervalSet, RegionSet, TimeSet};
pub use trace::{GridTrace, PlTrace};
