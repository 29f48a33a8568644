//! Seeded samplers for Brownian motion and one-dimensional SDE paths,
//! numeric spot-checks of the diffusion assumptions, and a closed-form
//! first-passage oracle for Brownian motion.
//!
//! Randomness is counter-based: a path is a pure function of
//! `(master seed, path index)` via per-path ChaCha streams, so Monte Carlo
//! results do not depend on worker scheduling.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use statrs::function::erf::erfc;
use thiserror::Error;

use crate::error::EvalError;
use crate::timeset::Interval;
use crate::trace::{GridTrace, PlTrace};

/// Master seed plus path index; `(seed, index) -> path` is a pure function
/// and distinct indices give independent streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSpec {
    pub master: u64,
    pub path: u64,
}

impl SeedSpec {
    pub fn new(master: u64, path: u64) -> Self {
        SeedSpec { master, path }
    }

    fn rng(self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.master);
        rng.set_stream(self.path);
        rng
    }
}

type StateFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Drift, diffusion and initial value of a one-dimensional SDE
/// `dX = b(X) dt + sigma(X) dW`.
#[derive(Clone)]
pub struct SdeSpec {
    name: String,
    drift: StateFn,
    diffusion: StateFn,
    pub initial: f64,
}

impl fmt::Debug for SdeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SdeSpec")
            .field("name", &self.name)
            .field("initial", &self.initial)
            .finish()
    }
}

impl SdeSpec {
    pub fn new(
        name: impl Into<String>,
        drift: impl Fn(f64) -> f64 + Send + Sync + 'static,
        diffusion: impl Fn(f64) -> f64 + Send + Sync + 'static,
        initial: f64,
    ) -> Self {
        SdeSpec {
            name: name.into(),
            drift: Arc::new(drift),
            diffusion: Arc::new(diffusion),
            initial,
        }
    }

    /// Standard Brownian motion from `x0`: zero drift, unit diffusion.
    pub fn brownian(x0: f64) -> Self {
        SdeSpec::new("bm", |_| 0.0, |_| 1.0, x0)
    }

    /// Ornstein-Uhlenbeck: `dX = -theta X dt + dW`.
    pub fn ornstein_uhlenbeck(theta: f64, x0: f64) -> Self {
        SdeSpec::new(format!("ou({theta})"), move |x| -theta * x, |_| 1.0, x0)
    }

    /// Driftless with constant diffusion `c`.
    pub fn const_sigma(c: f64, x0: f64) -> Self {
        SdeSpec::new(format!("const-sigma({c})"), |_| 0.0, move |_| c, x0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn drift(&self, x: f64) -> f64 {
        (self.drift)(x)
    }

    pub fn diffusion(&self, x: f64) -> f64 {
        (self.diffusion)(x)
    }
}

/// Named sampler for the config/CLI surface: `bm`, `ou(theta)`,
/// `const-sigma(c)`, or `ramp` (adversarial piecewise-linear paths).
#[derive(Debug, Clone)]
pub enum Sampler {
    Sde(SdeSpec),
    Ramp,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("unknown sampler `{0}`; expected bm, ou(theta), const-sigma(c) or ramp")]
pub struct SamplerParseError(String);

impl Sampler {
    /// Parses a catalog name with optional parameters, e.g. `ou(0.5)`.
    pub fn parse(text: &str, x0: f64) -> Result<Self, SamplerParseError> {
        let s = text.trim();
        let (name, args) = match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| SamplerParseError(s.into()))?;
                let args: Result<Vec<f64>, _> =
                    inner.split(',').map(|a| a.trim().parse::<f64>()).collect();
                (name.trim(), args.map_err(|_| SamplerParseError(s.into()))?)
            }
            None => (s, Vec::new()),
        };
        match (name, args.as_slice()) {
            ("bm", []) => Ok(Sampler::Sde(SdeSpec::brownian(x0))),
            ("ou", [theta]) => Ok(Sampler::Sde(SdeSpec::ornstein_uhlenbeck(*theta, x0))),
            ("const-sigma", [c]) => Ok(Sampler::Sde(SdeSpec::const_sigma(*c, x0))),
            ("ramp", []) => Ok(Sampler::Ramp),
            _ => Err(SamplerParseError(s.into())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Sampler::Sde(spec) => spec.name().to_string(),
            Sampler::Ramp => "ramp".to_string(),
        }
    }

    /// One grid path at resolution `n` covering `horizon`.
    pub fn sample(&self, n: u32, horizon: f64, seed: SeedSpec) -> Result<GridTrace, EvalError> {
        match self {
            Sampler::Sde(spec) if spec.name() == "bm" => {
                Ok(sample_brownian(n, horizon, spec.initial, seed))
            }
            Sampler::Sde(spec) => sample_sde_euler(spec, n, horizon, seed),
            Sampler::Ramp => Ok(sample_ramp(horizon, seed).grid_project(n)),
        }
    }
}

fn step_count(n: u32, horizon: f64) -> u64 {
    assert!(n >= 1 && horizon > 0.0);
    let mut k = (horizon * n as f64).ceil() as u64;
    while (k as f64) / (n as f64) < horizon {
        k += 1;
    }
    k
}

/// Brownian grid path: `X_0 = x0` exactly, increments i.i.d. normal with
/// variance `1/n`. Exact on the grid (no discretization error).
pub fn sample_brownian(n: u32, horizon: f64, x0: f64, seed: SeedSpec) -> GridTrace {
    let steps = step_count(n, horizon);
    let sqrt_dt = (1.0 / n as f64).sqrt();
    let mut rng = seed.rng();
    let mut values = Vec::with_capacity(steps as usize + 1);
    let mut x = x0;
    values.push(x);
    for _ in 0..steps {
        let z: f64 = rng.sample(StandardNormal);
        x += sqrt_dt * z;
        values.push(x);
    }
    GridTrace::new(n, values).unwrap()
}

/// Euler-Maruyama path of the SDE:
/// `X_{(k+1)/n} = X_{k/n} + b(X_{k/n})/n + sigma(X_{k/n}) dW_k` with
/// `dW_k ~ N(0, 1/n)`.
pub fn sample_sde_euler(
    spec: &SdeSpec,
    n: u32,
    horizon: f64,
    seed: SeedSpec,
) -> Result<GridTrace, EvalError> {
    let steps = step_count(n, horizon);
    let dt = 1.0 / n as f64;
    let sqrt_dt = dt.sqrt();
    let mut rng = seed.rng();
    let mut values = Vec::with_capacity(steps as usize + 1);
    let mut x = spec.initial;
    values.push(x);
    for _ in 0..steps {
        let b = spec.drift(x);
        let s = spec.diffusion(x);
        if !b.is_finite() || !s.is_finite() {
            return Err(EvalError::NonFiniteState { state: x });
        }
        let z: f64 = rng.sample(StandardNormal);
        x += b * dt + s * sqrt_dt * z;
        values.push(x);
    }
    Ok(GridTrace::new(n, values).unwrap())
}

/// Adversarial piecewise-linear test path: stays strictly below 1, then
/// crosses (or exactly touches) level 1 at a random time, then wanders.
/// Breakpoints land on a dyadic lattice so endpoint coincidences with
/// integer-bounded windows actually occur.
pub fn sample_ramp(horizon: f64, seed: SeedSpec) -> PlTrace {
    let mut rng = seed.rng();
    let lattice = 16.0;
    let snap = |t: f64| (t * lattice).round() / lattice;
    let cross = snap(rng.random_range(0.5..horizon - 0.5));
    let mut points: Vec<(f64, f64)> = vec![(0.0, rng.random_range(-1.0..0.9))];
    // below 1 strictly before the crossing
    let mut t = 0.0;
    loop {
        t = snap(t + rng.random_range(0.25..1.5));
        if t >= cross {
            break;
        }
        points.push((t, rng.random_range(-1.5..0.95)));
    }
    // tangential touches of the boundary stress the closed-region case
    let peak = if rng.random_bool(0.25) {
        1.0
    } else {
        rng.random_range(1.0..2.0)
    };
    points.push((cross, peak));
    let mut t = cross;
    while t < horizon {
        t = snap(t + rng.random_range(0.25..1.5)).min(horizon);
        points.push((t, rng.random_range(-1.5..2.0)));
        if t >= horizon {
            break;
        }
    }
    PlTrace::new(points).expect("ramp breakpoints are strictly increasing")
}

/// Numeric spot-check of the diffusion assumptions on a probe grid: reports
/// `min |sigma|`, a finite-difference Lipschitz estimate for `sigma`, and
/// `max |b|`, with warnings. Advisory only — a pass is not a proof.
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    pub min_abs_diffusion: f64,
    pub diffusion_lipschitz: f64,
    pub max_abs_drift: f64,
    pub warnings: Vec<String>,
}

impl AssumptionReport {
    pub fn pass(&self) -> bool {
        self.warnings.is_empty()
    }
}

impl fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "min |sigma| = {:.6}, sigma Lipschitz est = {:.6}, max |b| = {:.6}",
            self.min_abs_diffusion, self.diffusion_lipschitz, self.max_abs_drift
        )?;
        if self.warnings.is_empty() {
            write!(f, "pass")
        } else {
            for w in &self.warnings {
                writeln!(f, "warn: {w}")?;
            }
            Ok(())
        }
    }
}

pub fn validate_sde_assumptions(
    spec: &SdeSpec,
    probe_range: Interval,
    samples: usize,
) -> AssumptionReport {
    let (lo, hi) = (probe_range.lo().value, probe_range.hi().value);
    assert!(lo.is_finite() && hi.is_finite() && lo < hi && samples >= 3);
    let xs: Vec<f64> = (0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect();
    let sigmas: Vec<f64> = xs.iter().map(|&x| spec.diffusion(x)).collect();
    let drifts: Vec<f64> = xs.iter().map(|&x| spec.drift(x)).collect();

    let min_abs_diffusion = sigmas.iter().map(|s| s.abs()).fold(f64::INFINITY, f64::min);
    let dx = (hi - lo) / (samples - 1) as f64;
    let lipschitz = |vals: &[f64]| {
        vals.windows(2)
            .map(|w| (w[1] - w[0]).abs() / dx)
            .fold(0.0, f64::max)
    };
    let diffusion_lipschitz = lipschitz(&sigmas);
    let max_abs_drift = drifts.iter().map(|b| b.abs()).fold(0.0, f64::max);

    let mut warnings = Vec::new();
    if !sigmas.iter().all(|s| s.is_finite()) || !drifts.iter().all(|b| b.is_finite()) {
        warnings.push("drift or diffusion is non-finite on the probe range".to_string());
    }
    if min_abs_diffusion < 1e-9 {
        warnings.push(format!(
            "min |sigma| = {min_abs_diffusion:.3e} on the probe range: diffusion must be bounded away from 0 on compacts"
        ));
    }
    // refine the mesh: a Lipschitz sigma keeps the difference ratio stable
    let fine: Vec<f64> = (0..samples * 8)
        .map(|i| lo + (hi - lo) * i as f64 / (samples * 8 - 1) as f64)
        .map(|x| spec.diffusion(x))
        .collect();
    let fine_dx = (hi - lo) / (samples * 8 - 1) as f64;
    let fine_lip = fine
        .windows(2)
        .map(|w| (w[1] - w[0]).abs() / fine_dx)
        .fold(0.0, f64::max);
    if fine_lip > 4.0 * diffusion_lipschitz + 1e-9 {
        warnings.push(format!(
            "sigma difference ratio grows under mesh refinement ({diffusion_lipschitz:.3e} -> {fine_lip:.3e}): Lipschitz continuity is doubtful"
        ));
    }
    // a bounded drift stops growing when the probe range widens
    let inner_max = xs
        .iter()
        .zip(&drifts)
        .filter(|(x, _)| (lo + 0.25 * (hi - lo)..=lo + 0.75 * (hi - lo)).contains(x))
        .map(|(_, b)| b.abs())
        .fold(0.0, f64::max);
    if max_abs_drift > 1.5 * inner_max && max_abs_drift > 1e-9 {
        warnings.push(format!(
            "max |b| grows toward the probe boundary ({inner_max:.3e} inside vs {max_abs_drift:.3e} overall): drift may be unbounded"
        ));
    }
    AssumptionReport {
        min_abs_diffusion,
        diffusion_lipschitz,
        max_abs_drift,
        warnings,
    }
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HittingProbError {
    #[error("level must be strictly above the start: level={level}, x0={x0}")]
    LevelNotAbove { level: f64, x0: f64 },

    #[error("window must lie in [0, inf)")]
    BadWindow,
}

/// `P(tau_level ∈ window)` for the first time a standard Brownian motion
/// from `x0` reaches `level > x0`, by the reflection principle:
/// `P(tau ≤ t) = 2 (1 − Φ((level−x0)/√t))`. The first-passage time has a
/// density, so endpoint openness is irrelevant.
pub fn brownian_hitting_prob(
    level: f64,
    x0: f64,
    window: Interval,
) -> Result<f64, HittingProbError> {
    if level <= x0 {
        return Err(HittingProbError::LevelNotAbove { level, x0 });
    }
    let (t1, t2) = (window.lo().value, window.hi().value);
    if t1 < 0.0 {
        return Err(HittingProbError::BadWindow);
    }
    let a = level - x0;
    let cdf = |t: f64| {
        if t <= 0.0 {
            0.0
        } else if t.is_infinite() {
            1.0
        } else {
            2.0 * (1.0 - normal_cdf(a / t.sqrt()))
        }
    };
    Ok(cdf(t2) - cdf(t1))
}
