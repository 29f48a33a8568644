//! Command-line front end: evaluate formulas on trace files, estimate
//! satisfaction probabilities by Monte Carlo, sweep grid resolutions, and
//! reproduce the canned experiments. All logic lives in the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mtl_smc::harness::{
    self, convergence_sweep, estimate_continuous_pl, estimate_discrete, Experiment,
    ExperimentConfig, McConfig,
};
use mtl_smc::stochastic::Sampler;
use mtl_smc::{continuous, discrete, AtomMap, Formula, GridTrace, PlTrace};

#[derive(Parser)]
#[command(
    name = "mtl-smc",
    about = "Metric temporal logic over piecewise-linear and grid traces, \
             with Monte Carlo probability estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a piecewise-linear trace (continuous semantics)
    Eval(EvalArgs),
    /// Evaluate a formula on the grid N/n (discrete semantics)
    EvalDiscrete(EvalDiscreteArgs),
    /// Monte Carlo probability estimate over sampled paths
    Mc(McArgs),
    /// Discrete estimates across several resolutions, with an optional
    /// continuous reference
    Sweep(SweepArgs),
    /// Run a canned experiment and write CSV/JSON reports
    Repro(ReproArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Formula text, e.g. "G(1,2)(F(1,4) p & !F(1,3) p)"
    #[arg(long)]
    formula: String,
    /// Trace CSV with header `t,x`
    #[arg(long)]
    trace: PathBuf,
    /// Atom map config: one `name = <region>` line per atom
    #[arg(long)]
    atoms: PathBuf,
    /// Evaluate satisfaction at one time instead of printing the time set
    #[arg(long)]
    at: Option<f64>,
    /// Horizon for the time set (default: trace horizon minus the formula's
    /// window reach)
    #[arg(long)]
    horizon: Option<f64>,
}

#[derive(Args)]
struct EvalDiscreteArgs {
    #[arg(long)]
    formula: String,
    /// Grid CSV (`# n=...` header) or a PL trace CSV to project with --n
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    atoms: PathBuf,
    /// Resolution used to project a PL trace; must match a grid file's own
    #[arg(long)]
    n: Option<u32>,
    /// Evaluate at one grid time instead of printing the whole sequence
    #[arg(long)]
    at: Option<f64>,
}

#[derive(Args)]
struct McArgs {
    /// `discrete` or `continuous-pl`
    #[arg(long)]
    semantics: String,
    #[arg(long)]
    formula: String,
    #[arg(long)]
    atoms: PathBuf,
    /// Sampler: `bm`, `ou(theta)`, `const-sigma(c)` or `ramp`
    #[arg(long, default_value = "bm")]
    sampler: String,
    /// Initial state of the sampled paths
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    /// Grid resolution (discrete) or PL sampling resolution (continuous-pl)
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Evaluation time
    #[arg(long, default_value_t = 0.0)]
    at: f64,
    /// Sampled horizon (default: evaluation time + formula window reach,
    /// rounded up)
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
    /// Worker threads (0 = rayon default)
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Append the estimate as a CSV row to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    formula: String,
    #[arg(long)]
    atoms: PathBuf,
    #[arg(long, default_value = "bm")]
    sampler: String,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    /// Comma-separated resolutions, ascending, e.g. 2,4,8,16
    #[arg(long, value_delimiter = ',')]
    ns: Vec<u32>,
    /// Also estimate a continuous-PL reference at this resolution
    #[arg(long)]
    reference_m: Option<u32>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    at: f64,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct ReproArgs {
    /// counterexample | flat-zero | flat-diamond
    experiment: Experiment,
    /// Override the experiment's default trial budget
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Directory for the CSV/JSON report files
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Prints a block of output, exiting quietly when the consumer (e.g. `head`)
/// closes the pipe.
fn emit(text: impl std::fmt::Display) {
    use std::io::Write;
    let stdout = std::io::stdout();
    if write!(stdout.lock(), "{text}").is_err() {
        std::process::exit(0);
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Eval(args) => eval(args),
        Command::EvalDiscrete(args) => eval_discrete(args),
        Command::Mc(args) => mc(args),
        Command::Sweep(args) => sweep(args),
        Command::Repro(args) => repro(args),
    }
}

fn parse_formula(text: &str) -> Result<Formula, String> {
    Formula::parse(text).map_err(|e| e.to_string())
}

fn eval(args: EvalArgs) -> Result<ExitCode, String> {
    let formula = parse_formula(&args.formula)?;
    let trace = PlTrace::load(&args.trace).map_err(|e| e.to_string())?;
    let atoms = AtomMap::from_file(&args.atoms)?;
    if let Some(t) = args.at {
        let holds = continuous::holds_at(&formula, &trace, &atoms, t).map_err(|e| e.to_string())?;
        println!("{holds}");
        return Ok(ExitCode::SUCCESS);
    }
    let reach = formula.window_sum();
    let horizon = match args.horizon {
        Some(h) => h,
        None => {
            let h = trace.horizon() - reach;
            if h < 0.0 {
                return Err(format!(
                    "trace horizon {} is shorter than the formula's window reach {reach}; \
                     pass --horizon or --at",
                    trace.horizon()
                ));
            }
            h
        }
    };
    let ts = continuous::eval_timeset(&formula, &trace, &atoms, horizon).map_err(|e| e.to_string())?;
    println!("horizon: {horizon}");
    println!("timeset: {ts}");
    Ok(ExitCode::SUCCESS)
}

fn eval_discrete(args: EvalDiscreteArgs) -> Result<ExitCode, String> {
    let formula = parse_formula(&args.formula)?;
    let atoms = AtomMap::from_file(&args.atoms)?;
    let text = std::fs::read_to_string(&args.trace).map_err(|e| e.to_string())?;
    let grid = if text.starts_with("# n=") {
        let grid = GridTrace::read_csv(text.as_bytes()).map_err(|e| e.to_string())?;
        if let Some(n) = args.n {
            if n != grid.resolution() {
                return Err(format!(
                    "--n {n} does not match the grid file's resolution {}",
                    grid.resolution()
                ));
            }
        }
        grid
    } else {
        let n = args
            .n
            .ok_or("a PL trace needs --n to choose the grid resolution")?;
        PlTrace::read_csv(text.as_bytes())
            .map_err(|e| e.to_string())?
            .grid_project(n)
    };
    if let Some(t) = args.at {
        let holds = discrete::eval_holds(&formula, &grid, &atoms, t).map_err(|e| e.to_string())?;
        println!("{holds}");
        return Ok(ExitCode::SUCCESS);
    }
    let all = discrete::eval_all(&formula, &grid, &atoms).map_err(|e| e.to_string())?;
    let mut table = String::from("k,t,holds\n");
    let n = grid.resolution() as f64;
    for (k, v) in all.iter().enumerate() {
        let shown = match v {
            Some(true) => "true",
            Some(false) => "false",
            None => "-",
        };
        table.push_str(&format!("{k},{},{shown}\n", k as f64 / n));
    }
    emit(table);
    Ok(ExitCode::SUCCESS)
}

fn auto_horizon(requested: Option<f64>, at: f64, formula: &Formula) -> Result<f64, String> {
    match requested {
        Some(h) => Ok(h),
        None => {
            let reach = formula.window_sum();
            if reach.is_infinite() {
                return Err("formula has an unbounded window; pass --horizon".into());
            }
            Ok((at + reach).ceil().max(1.0))
        }
    }
}

fn mc(args: McArgs) -> Result<ExitCode, String> {
    let formula = parse_formula(&args.formula)?;
    let atoms = AtomMap::from_file(&args.atoms)?;
    let sampler = Sampler::parse(&args.sampler, args.x0).map_err(|e| e.to_string())?;
    let horizon = auto_horizon(args.horizon, args.at, &formula)?;
    let cfg = McConfig {
        trials: args.trials,
        seed: args.seed,
        confidence: args.confidence,
        workers: args.workers,
    };
    let est = match args.semantics.as_str() {
        "discrete" => {
            estimate_discrete(&formula, &sampler, &atoms, args.at, args.n, horizon, &cfg)
        }
        "continuous-pl" => {
            estimate_continuous_pl(&formula, &sampler, &atoms, args.at, args.n, horizon, &cfg)
        }
        other => return Err(format!("unknown semantics `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    println!("{est}");
    if let Some(path) = &args.out {
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| e.to_string())?;
        use std::io::Write;
        writeln!(
            file,
            "{},{},{},{},{},{},{},,",
            est.label,
            est.label.resolution(),
            est.trials,
            est.successes,
            est.p_hat,
            est.ci_lo,
            est.ci_hi
        )
        .map_err(|e| e.to_string())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep(args: SweepArgs) -> Result<ExitCode, String> {
    let formula = parse_formula(&args.formula)?;
    let atoms = AtomMap::from_file(&args.atoms)?;
    let sampler = Sampler::parse(&args.sampler, args.x0).map_err(|e| e.to_string())?;
    if args.ns.is_empty() {
        return Err("--ns needs at least one resolution".into());
    }
    let horizon = auto_horizon(args.horizon, args.at, &formula)?;
    let cfg = McConfig {
        trials: args.trials,
        seed: args.seed,
        confidence: args.confidence,
        workers: args.workers,
    };
    let outcome = convergence_sweep(
        &formula,
        &sampler,
        &atoms,
        args.at,
        &args.ns,
        horizon,
        args.reference_m,
        &cfg,
    )
    .map_err(|e| e.to_string())?;
    println!(
        "nested grids: {}{}",
        outcome.nested,
        match outcome.per_path_nondecreasing {
            Some(m) => format!(", per-path nondecreasing: {m}"),
            None => String::new(),
        }
    );
    for est in &outcome.rows {
        println!("{est}");
    }
    if let Some(reference) = &outcome.reference {
        println!("{reference}");
    }
    Ok(ExitCode::SUCCESS)
}

fn repro(args: ReproArgs) -> Result<ExitCode, String> {
    let cfg = ExperimentConfig {
        trials: args.trials,
        seed: args.seed,
        workers: args.workers,
        out_dir: args.out.clone(),
    };
    let report = harness::run_experiment(args.experiment, &cfg).map_err(|e| e.to_string())?;
    emit(report.to_csv());
    println!("verdict: {}", report.verdict);
    if let Some(dir) = &args.out {
        println!("report files written to {}", dir.display());
    }
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
