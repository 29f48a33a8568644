//! Canned experiments comparing discrete and continuous satisfaction
//! probabilities, with CSV/JSON reports.
//!
//! * `counterexample` — a four-deep nesting of windowed operators whose
//!   satisfaction set on any path degenerates to isolated points. On the
//!   grid it is unsatisfiable at time 0 for every path and every `n ≥ 2`,
//!   while the continuous probability equals the chance that the path first
//!   reaches level 1 inside `(8,9)` — strictly positive. Discretization
//!   refinement cannot close that gap.
//! * `flat-zero` — `!F(0,1) p` over Brownian motion from 0: the discrete
//!   probability is the exact stay-nonpositive value `C(2m,m)/4^m` with
//!   `m = n−1` interior points, decreasing toward the continuous value 0.
//! * `flat-diamond` — an un-nested diamond where nested-grid refinement is
//!   per-path monotone and converges to the continuous-PL reference.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::continuous;
use crate::error::EvalError;
use crate::formula::{AtomMap, Formula};
use crate::stochastic::{brownian_hitting_prob, sample_ramp, Sampler, SeedSpec};
use crate::timeset::{Interval, IntervalSet};
use crate::trace::PlTrace;

use super::{
    convergence_sweep, estimate_discrete, stay_nonpositive_prob, tally, wilson_ci, Estimate,
    McConfig, SemanticsLabel,
};

/// `G(1,2)(F(1,4) p & !F(1,3) p)`: on any path that stays below 1 until a
/// first crossing at `tau >= 6`, its satisfaction set on `[0, tau-3]` is the
/// single isolated point `tau - 5`.
pub fn isolated_point_formula() -> Formula {
    Formula::parse("G(1,2)(F(1,4) p & !F(1,3) p)").expect("fixed formula parses")
}

/// The divergence witness: `!p & !F(0,8) p & F(1,2) phi2` where `phi2` pins
/// the isolated point of [`isolated_point_formula`] to an exact offset. At
/// time 0 it is equivalent to the first crossing of level 1 landing in
/// `(8,9)`, yet no grid (`n >= 2`) can ever satisfy it.
pub fn counterexample_formula() -> Formula {
    let phi1 = "G(1,2)(F(1,4) p & !F(1,3) p)";
    let text = format!(
        "!p & !F(0,8) p & F(1,2)(F(1,3) {phi1} & !F(1,2) {phi1} & !F(2,3) {phi1})"
    );
    Formula::parse(&text).expect("fixed formula parses")
}

/// Atom assignment for the counterexample: `p` holds at or above level 1.
pub fn counterexample_atoms() -> AtomMap {
    AtomMap::from_pairs([("p", IntervalSet::parse("[1,inf)").unwrap())])
}

/// Horizon used by the counterexample runs: the formula reaches 11 time
/// units past the evaluation point; 15 adds slack.
pub const COUNTEREXAMPLE_HORIZON: f64 = 15.0;

/// Analytic target for the continuous counterexample probability:
/// `P(tau_1 ∈ (8,9))` for Brownian motion from 0.
pub fn counterexample_oracle() -> f64 {
    brownian_hitting_prob(1.0, 0.0, Interval::open(8.0, 9.0)).expect("valid window")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Counterexample,
    FlatZero,
    FlatDiamond,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Experiment::Counterexample => "counterexample",
            Experiment::FlatZero => "flat-zero",
            Experiment::FlatDiamond => "flat-diamond",
        };
        write!(f, "{name}")
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "counterexample" => Ok(Experiment::Counterexample),
            "flat-zero" => Ok(Experiment::FlatZero),
            "flat-diamond" => Ok(Experiment::FlatDiamond),
            other => Err(format!(
                "unknown experiment `{other}`; expected counterexample, flat-zero or flat-diamond"
            )),
        }
    }
}

/// Overridable knobs for [`run_experiment`]. `trials: None` uses each
/// experiment's default budget.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub trials: Option<u64>,
    pub seed: u64,
    pub workers: usize,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            trials: None,
            seed: 42,
            workers: 0,
            out_dir: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One line of the results table; the CSV schema is
/// `semantics,n,trials,successes,p_hat,ci_lo,ci_hi,oracle,verdict`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub semantics: String,
    pub n: u32,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub oracle: Option<f64>,
    pub verdict: String,
}

impl ReportRow {
    fn from_estimate(est: &Estimate, tag: &str, oracle: Option<f64>, verdict: String) -> Self {
        let semantics = if tag.is_empty() {
            est.label.to_string()
        } else {
            format!("{}[{tag}]", est.label)
        };
        ReportRow {
            semantics,
            n: est.label.resolution(),
            trials: est.trials,
            successes: est.successes,
            p_hat: est.p_hat,
            ci_lo: est.ci_lo,
            ci_hi: est.ci_hi,
            oracle,
            verdict,
        }
    }

    fn csv_line(&self) -> String {
        let oracle = self.oracle.map(|o| o.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.semantics,
            self.n,
            self.trials,
            self.successes,
            self.p_hat,
            self.ci_lo,
            self.ci_hi,
            oracle,
            self.verdict
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub verdict: String,
    pub passed: bool,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("semantics,n,trials,successes,p_hat,ci_lo,ci_hi,oracle,verdict\n");
        for row in &self.rows {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes `<experiment>.csv` and `<experiment>.json` into `dir`.
    pub fn write_files(&self, dir: &Path) -> std::io::Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{}.csv", self.experiment));
        let json_path = dir.join(format!("{}.json", self.experiment));
        std::fs::File::create(&csv_path)?.write_all(self.to_csv().as_bytes())?;
        std::fs::File::create(&json_path)?.write_all(self.to_json().as_bytes())?;
        Ok((csv_path, json_path))
    }
}

/// Runs a canned experiment and writes its report files when an output
/// directory is configured.
pub fn run_experiment(
    which: Experiment,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport, ExperimentError> {
    let report = match which {
        Experiment::Counterexample => counterexample(cfg)?,
        Experiment::FlatZero => flat_zero(cfg)?,
        Experiment::FlatDiamond => flat_diamond(cfg)?,
    };
    if let Some(dir) = &cfg.out_dir {
        report.write_files(dir)?;
    }
    Ok(report)
}

fn counterexample(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    let formula = counterexample_formula();
    let atoms = counterexample_atoms();
    let horizon = COUNTEREXAMPLE_HORIZON;
    let oracle = counterexample_oracle();
    let disc_trials = cfg.trials.unwrap_or(10_000);
    let cont_trials = cfg.trials.unwrap_or(100_000);
    let mut rows = Vec::new();

    // discrete column: zero successes for every sampler and resolution
    let mut all_zero = true;
    for sampler_name in ["bm", "ou(1)", "ramp"] {
        let sampler = Sampler::parse(sampler_name, 0.0).unwrap();
        for n in [2u32, 3, 4, 8, 16, 32] {
            let mc = McConfig {
                trials: disc_trials,
                seed: cfg.seed,
                confidence: 0.95,
                workers: cfg.workers,
            };
            let est = estimate_discrete(&formula, &sampler, &atoms, 0.0, n, horizon, &mc)?;
            let pass = est.successes == 0;
            all_zero &= pass;
            rows.push(ReportRow::from_estimate(
                &est,
                sampler_name,
                Some(0.0),
                if pass { "pass" } else { "fail" }.into(),
            ));
        }
    }

    // continuous column on the same paths as the event-level estimate
    let m = 4096u32;
    let mc = McConfig {
        trials: cont_trials,
        seed: cfg.seed,
        confidence: 0.95,
        workers: cfg.workers,
    };
    let level_region = IntervalSet::parse("[1,inf)").unwrap();
    let (counts, _) = tally(&mc, 2, |i| {
        let grid = crate::stochastic::sample_brownian(m, horizon, 0.0, SeedSpec::new(cfg.seed, i));
        let trace = PlTrace::from_grid(&grid);
        let formula_bit = continuous::holds_at(&formula, &trace, &atoms, 0.0)?;
        let tau = trace.atom_timeset(&level_region).debut(0.0);
        let event_bit = 8.0 < tau && tau < 9.0;
        Ok((vec![formula_bit, event_bit], true))
    })?;
    let cont = Estimate::from_counts(
        SemanticsLabel::ContinuousPl { m },
        counts[0],
        cont_trials,
        0.95,
    );
    let event = Estimate::from_counts(
        SemanticsLabel::ContinuousPl { m },
        counts[1],
        cont_trials,
        0.95,
    );

    // oracle must sit within the CI widened by a 20% relative PL-bias allowance
    let allowance = 0.2 * oracle;
    let oracle_ok = cont.ci_lo - allowance <= oracle && oracle <= cont.ci_hi + allowance;
    // formula-level and event-level estimates agree within combined CIs
    let agree = (cont.p_hat - event.p_hat).abs() <= cont.ci_half_width() + event.ci_half_width();
    // the gap: the 99% interval of the continuous estimate excludes 0
    let (lo99, _) = wilson_ci(cont.successes, cont.trials, 0.99);
    let gap = all_zero && lo99 > 0.0;

    rows.push(ReportRow::from_estimate(
        &cont,
        "bm",
        Some(oracle),
        if oracle_ok { "pass" } else { "fail" }.into(),
    ));
    let mut event_row = ReportRow::from_estimate(
        &event,
        "bm;event-tau",
        Some(oracle),
        if agree { "agrees" } else { "disagrees" }.into(),
    );
    event_row.semantics = format!("event-tau-{m}[bm]");
    rows.push(event_row);

    let passed = gap && oracle_ok && agree;
    Ok(ExperimentReport {
        experiment: Experiment::Counterexample.to_string(),
        seed: cfg.seed,
        verdict: if passed {
            "GAP-CONFIRMED".into()
        } else {
            "NOT-CONFIRMED".into()
        },
        passed,
        rows,
    })
}

fn flat_zero(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    let formula = Formula::parse("!F(0,1) p").unwrap();
    let atoms = AtomMap::from_pairs([("p", IntervalSet::parse("(0,inf)").unwrap())]);
    let sampler = Sampler::parse("bm", 0.0).unwrap();
    let trials = cfg.trials.unwrap_or(200_000);
    let mut rows = Vec::new();
    let mut all_contain = true;
    let mut p_hats = Vec::new();
    for n in [2u32, 4, 8, 16, 32] {
        let mc = McConfig {
            trials,
            seed: cfg.seed,
            confidence: 0.95,
            workers: cfg.workers,
        };
        let est = estimate_discrete(&formula, &sampler, &atoms, 0.0, n, 1.0, &mc)?;
        let oracle = stay_nonpositive_prob(n - 1);
        let contains = est.ci_lo <= oracle && oracle <= est.ci_hi;
        all_contain &= contains;
        p_hats.push(est.p_hat);
        rows.push(ReportRow::from_estimate(
            &est,
            "bm",
            Some(oracle),
            if contains { "pass" } else { "fail" }.into(),
        ));
    }
    let decreasing = p_hats.windows(2).all(|w| w[1] < w[0]);
    let passed = all_contain && decreasing;
    Ok(ExperimentReport {
        experiment: Experiment::FlatZero.to_string(),
        seed: cfg.seed,
        verdict: if passed { "PASS".into() } else { "FAIL".into() },
        passed,
        rows,
    })
}

fn flat_diamond(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    let formula = Formula::parse("F[1,2] p").unwrap();
    let atoms = AtomMap::from_pairs([("p", IntervalSet::parse("[1,inf)").unwrap())]);
    let sampler = Sampler::parse("bm", 0.0).unwrap();
    let trials = cfg.trials.unwrap_or(100_000);
    let mc = McConfig {
        trials,
        seed: cfg.seed,
        confidence: 0.95,
        workers: cfg.workers,
    };
    let ns = [4u32, 8, 16, 32, 64, 128, 256, 512, 1024];
    let sweep = convergence_sweep(&formula, &sampler, &atoms, 0.0, &ns, 2.0, Some(8192), &mc)?;
    let reference = sweep.reference.as_ref().unwrap();
    let monotone = sweep.per_path_nondecreasing == Some(true);
    let finest = sweep.rows.last().unwrap();
    let agree = (finest.p_hat - reference.p_hat).abs()
        <= finest.ci_half_width() + reference.ci_half_width();
    let mut rows: Vec<ReportRow> = sweep
        .rows
        .iter()
        .map(|est| {
            ReportRow::from_estimate(
                est,
                "bm",
                None,
                if monotone { "monotone" } else { "not-monotone" }.into(),
            )
        })
        .collect();
    rows.push(ReportRow::from_estimate(
        reference,
        "bm",
        None,
        if agree { "reference-agrees" } else { "reference-disagrees" }.into(),
    ));
    let passed = monotone && agree;
    Ok(ExperimentReport {
        experiment: Experiment::FlatDiamond.to_string(),
        seed: cfg.seed,
        verdict: if passed { "PASS".into() } else { "FAIL".into() },
        passed,
        rows,
    })
}

/// Deterministic per-path check used by tests: the counterexample evaluated
/// on one sampled grid path. Exposed so callers can sweep manually.
pub fn counterexample_discrete_truth(
    sampler: &Sampler,
    n: u32,
    seed: SeedSpec,
) -> Result<bool, EvalError> {
    let formula = counterexample_formula();
    let atoms = counterexample_atoms();
    let grid = sampler.sample(n, COUNTEREXAMPLE_HORIZON, seed)?;
    crate::discrete::eval_holds(&formula, &grid, &atoms, 0.0)
}

/// PL ramp helper shared with tests and examples.
pub fn adversarial_ramp(seed: SeedSpec) -> PlTrace {
    sample_ramp(COUNTEREXAMPLE_HORIZON, seed)
}
