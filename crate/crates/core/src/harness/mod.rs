//! Monte Carlo estimation of satisfaction probabilities under both
//! semantics, with Wilson confidence intervals, common-random-number
//! convergence sweeps over grid resolutions, and canned experiments.
//!
//! Every estimate is labeled with the semantics it used: `discrete-n` for
//! grid evaluation at resolution `n`, or `continuous-pl-m` for continuous
//! evaluation on the piecewise-linear interpolation of a path sampled at
//! resolution `m` — continuous results on sampled paths are approximations
//! at that resolution, and the label keeps that visible.
//!
//! Trials fan out across a worker pool; per-path seed streams make counts a
//! pure function of `(seed, trials)`, independent of worker scheduling.

pub mod experiments;

use std::fmt;

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::continuous;
use crate::discrete::GridFormula;
use crate::error::EvalError;
use crate::formula::{AtomMap, Formula};
use crate::stochastic::{Sampler, SeedSpec};
use crate::trace::{lambda_index, PlTrace};

pub use experiments::{run_experiment, Experiment, ExperimentConfig, ExperimentReport, ReportRow};

/// Which semantics produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemanticsLabel {
    /// Grid semantics at resolution `n`.
    Discrete { n: u32 },
    /// Continuous semantics on the PL interpolation of a resolution-`m` path.
    ContinuousPl { m: u32 },
}

impl fmt::Display for SemanticsLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticsLabel::Discrete { n } => write!(f, "discrete-{n}"),
            SemanticsLabel::ContinuousPl { m } => write!(f, "continuous-pl-{m}"),
        }
    }
}

impl SemanticsLabel {
    /// The resolution column for reports.
    pub fn resolution(&self) -> u32 {
        match self {
            SemanticsLabel::Discrete { n } => *n,
            SemanticsLabel::ContinuousPl { m } => *m,
        }
    }
}

/// A Monte Carlo estimate with its Wilson confidence interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub label: SemanticsLabel,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub confidence: f64,
}

impl Estimate {
    pub fn from_counts(
        label: SemanticsLabel,
        successes: u64,
        trials: u64,
        confidence: f64,
    ) -> Self {
        let (ci_lo, ci_hi) = wilson_ci(successes, trials, confidence);
        Estimate {
            label,
            trials,
            successes,
            p_hat: successes as f64 / trials as f64,
            ci_lo,
            ci_hi,
            confidence,
        }
    }

    pub fn ci_half_width(&self) -> f64 {
        (self.ci_hi - self.ci_lo) / 2.0
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: p_hat = {:.6} ({}/{}), {:.0}% CI [{:.6}, {:.6}]",
            self.label,
            self.p_hat,
            self.successes,
            self.trials,
            self.confidence * 100.0,
            self.ci_lo,
            self.ci_hi
        )
    }
}

/// Wilson score interval for a binomial proportion. Well behaved at
/// `p_hat ∈ {0, 1}`, unlike the Wald interval.
pub fn wilson_ci(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials >= 1 && successes <= trials);
    assert!(confidence > 0.0 && confidence < 1.0);
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Trial count, master seed, CI confidence and worker count for a run.
/// `workers = 0` uses the global thread pool.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub confidence: f64,
    pub workers: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            trials: 10_000,
            seed: 42,
            confidence: 0.95,
            workers: 0,
        }
    }
}

fn run_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        job()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool")
            .install(job)
    }
}

/// Counts per-column successes over independent paths; also returns the AND
/// of a per-path flag. Deterministic for a fixed seed under any scheduling:
/// the reduction is a commutative sum of counts.
fn tally<F>(cfg: &McConfig, width: usize, per_path: F) -> Result<(Vec<u64>, bool), EvalError>
where
    F: Fn(u64) -> Result<(Vec<bool>, bool), EvalError> + Sync,
{
    run_pool(cfg.workers, || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| per_path(i))
            .try_fold(
                || (vec![0u64; width], true),
                |(mut counts, all_ok), row| {
                    let (bits, ok) = row?;
                    debug_assert_eq!(bits.len(), width);
                    for (c, b) in counts.iter_mut().zip(&bits) {
                        *c += *b as u64;
                    }
                    Ok((counts, all_ok && ok))
                },
            )
            .try_reduce(
                || (vec![0u64; width], true),
                |(mut a, fa), (b, fb)| {
                    for (x, y) in a.iter_mut().zip(&b) {
                        *x += *y;
                    }
                    Ok((a, fa && fb))
                },
            )
    })
}

fn count_successes<F>(cfg: &McConfig, per_path: F) -> Result<u64, EvalError>
where
    F: Fn(u64) -> Result<bool, EvalError> + Sync,
{
    let (counts, _) = tally(cfg, 1, |i| per_path(i).map(|b| (vec![b], true)))?;
    Ok(counts[0])
}

/// Estimates `P(path, Λₙ(t) ⊨ₙ formula)` by sampling `cfg.trials` grid paths
/// at resolution `n` over `[0, horizon]`.
pub fn estimate_discrete(
    formula: &Formula,
    sampler: &Sampler,
    atoms: &AtomMap,
    t: f64,
    n: u32,
    horizon: f64,
    cfg: &McConfig,
) -> Result<Estimate, EvalError> {
    let compiled = GridFormula::compile(formula, n, atoms)?;
    let k = lambda_index(t, n);
    let successes = count_successes(cfg, |i| {
        let grid = sampler.sample(n, horizon, SeedSpec::new(cfg.seed, i))?;
        grid_truth(&compiled, &grid, k)
    })?;
    Ok(Estimate::from_counts(
        SemanticsLabel::Discrete { n },
        successes,
        cfg.trials,
        cfg.confidence,
    ))
}

fn grid_truth(compiled: &GridFormula, grid: &crate::trace::GridTrace, k: u64) -> Result<bool, EvalError> {
    compiled.eval_all(grid)?
        .get(k as usize)
        .copied()
        .flatten()
        .ok_or(EvalError::HorizonExceeded {
            needed: (k + compiled.lookahead()) as f64 / compiled.resolution() as f64,
            available: grid.horizon(),
        })
}

/// Estimates `P(path, t ⊨ formula)` under continuous semantics evaluated on
/// the PL interpolation of paths sampled at resolution `m`. The result is an
/// approximation at that resolution — the label records it.
pub fn estimate_continuous_pl(
    formula: &Formula,
    sampler: &Sampler,
    atoms: &AtomMap,
    t: f64,
    m: u32,
    horizon: f64,
    cfg: &McConfig,
) -> Result<Estimate, EvalError> {
    let successes = count_successes(cfg, |i| {
        let trace = sample_pl(sampler, m, horizon, SeedSpec::new(cfg.seed, i))?;
        continuous::holds_at(formula, &trace, atoms, t)
    })?;
    Ok(Estimate::from_counts(
        SemanticsLabel::ContinuousPl { m },
        successes,
        cfg.trials,
        cfg.confidence,
    ))
}

fn sample_pl(sampler: &Sampler, m: u32, horizon: f64, seed: SeedSpec) -> Result<PlTrace, EvalError> {
    match sampler {
        // ramp paths are piecewise-linear already; use them exactly
        Sampler::Ramp => Ok(crate::stochastic::sample_ramp(horizon, seed)),
        _ => Ok(PlTrace::from_grid(&sampler.sample(m, horizon, seed)?)),
    }
}

/// Result of [`convergence_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    /// One discrete estimate per requested resolution, in input order.
    pub rows: Vec<Estimate>,
    /// Continuous-PL reference estimate, when requested.
    pub reference: Option<Estimate>,
    /// Whether all resolutions were evaluated on nested grids of shared
    /// paths (common random numbers).
    pub nested: bool,
    /// With nested grids: whether, on every single path, truth was
    /// nondecreasing along the resolutions (and below the reference when
    /// present). The per-path witness-preservation property of
    /// negation-free diamond formulas. `None` without nesting.
    pub per_path_nondecreasing: Option<bool>,
}

/// One estimate per resolution in `ns`, sharing the master seed.
///
/// When every `n` divides the fine resolution (the reference resolution if
/// given, else `max(ns)`), each path is sampled once at the fine resolution
/// and every `n` observes its restriction — the same sample point evaluated
/// on nested grids. `ns` must be sorted ascending.
pub fn convergence_sweep(
    formula: &Formula,
    sampler: &Sampler,
    atoms: &AtomMap,
    t: f64,
    ns: &[u32],
    horizon: f64,
    reference_m: Option<u32>,
    cfg: &McConfig,
) -> Result<SweepOutcome, EvalError> {
    assert!(!ns.is_empty() && ns.windows(2).all(|w| w[0] < w[1]), "ns must be sorted");
    let fine = reference_m.unwrap_or(*ns.last().unwrap());
    let nested = ns.iter().all(|&n| fine % n == 0);
    if !nested {
        let rows = ns
            .iter()
            .map(|&n| estimate_discrete(formula, sampler, atoms, t, n, horizon, cfg))
            .collect::<Result<Vec<_>, _>>()?;
        let reference = reference_m
            .map(|m| estimate_continuous_pl(formula, sampler, atoms, t, m, horizon, cfg))
            .transpose()?;
        return Ok(SweepOutcome {
            rows,
            reference,
            nested,
            per_path_nondecreasing: None,
        });
    }

    let compiled = ns
        .iter()
        .map(|&n| GridFormula::compile(formula, n, atoms))
        .collect::<Result<Vec<_>, _>>()?;
    let ks: Vec<u64> = ns.iter().map(|&n| lambda_index(t, n)).collect();
    let width = ns.len() + usize::from(reference_m.is_some());

    let (counts, monotone) = tally(cfg, width, |i| {
        let seed = SeedSpec::new(cfg.seed, i);
        let mut bits = Vec::with_capacity(width);
        match sampler {
            Sampler::Ramp => {
                let pl = crate::stochastic::sample_ramp(horizon, seed);
                for (cf, &k) in compiled.iter().zip(&ks) {
                    bits.push(grid_truth(cf, &pl.grid_project(cf.resolution()), k)?);
                }
                if reference_m.is_some() {
                    bits.push(continuous::holds_at(formula, &pl, atoms, t)?);
                }
            }
            _ => {
                let fine_grid = sampler.sample(fine, horizon, seed)?;
                for (cf, &k) in compiled.iter().zip(&ks) {
                    let coarse = fine_grid
                        .restrict(cf.resolution())
                        .expect("nested resolution divides fine");
                    bits.push(grid_truth(cf, &coarse, k)?);
                }
                if reference_m.is_some() {
                    let pl = PlTrace::from_grid(&fine_grid);
                    bits.push(continuous::holds_at(formula, &pl, atoms, t)?);
                }
            }
        }
        let nondecreasing = bits.windows(2).all(|w| w[0] <= w[1]);
        Ok((bits, nondecreasing))
    })?;

    let rows = ns
        .iter()
        .zip(&counts)
        .map(|(&n, &successes)| {
            Estimate::from_counts(
                SemanticsLabel::Discrete { n },
                successes,
                cfg.trials,
                cfg.confidence,
            )
        })
        .collect();
    let reference = reference_m.map(|m| {
        Estimate::from_counts(
            SemanticsLabel::ContinuousPl { m },
            counts[width - 1],
            cfg.trials,
            cfg.confidence,
        )
    });
    Ok(SweepOutcome {
        rows,
        reference,
        nested,
        per_path_nondecreasing: Some(monotone),
    })
}

/// Probability that a symmetric random walk with continuous increment
/// distribution stays at or below its start for `m` consecutive steps:
/// `C(2m, m) / 4^m`. This is the exact value of the discrete
/// "never strictly above the start within the window" event for Brownian
/// grid paths with `m` interior grid points.
pub fn stay_nonpositive_prob(m: u32) -> f64 {
    assert!(m <= 62, "binomial overflows u128 past m = 62");
    let mut c: u128 = 1;
    for i in 1..=(m as u128) {
        // C(2m, m) built incrementally: multiply before dividing to stay integral
        c = c * (m as u128 + i) / i;
    }
    c as f64 / 4f64.powi(m as i32)
}
