//! Command-line front end for the exit-time toolkit.
//!
//! Subcommands cover the main workflows: closed-form rate prediction,
//! constrained-minimization cross-checks, single-path simulation, Monte Carlo
//! sweeps over a noise grid, probabilistic verification of the tail bounds,
//! and plain-text reports over sweep output.
//!
//! Exit codes: 0 on success, 1 on runtime failures (estimation, bound
//! violations), 2 on usage errors (bad flags, invalid parameter combinations,
//! malformed input files).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use firstexit::asymptotics::{self, Regime};
use firstexit::dynamics::{Potential, SimConfig, SimMode};
use firstexit::experiments::{self, EstimateResult, SweepPlan};
use firstexit::measures::{LevyTriplet, TailSpec};
use firstexit::processes;
use firstexit::verify::{self, CheckOutcome, SupBoundConfig};
use firstexit::{Error, Result};

const TERM_WIDTH: usize = 100;

#[derive(Parser)]
#[command(
    name = "firstexit",
    version,
    about = "Exit-time prediction and simulation for jump diffusions with light-tailed noise",
    term_width = TERM_WIDTH
)]
struct Cli {
    /// Master random seed for all stochastic subcommands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for parallel sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write primary output here (a file, or a directory for `sweep`)
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the predicted exit rate and log mean exit time as JSON
    Predict(PredictArgs),
    /// Cross-check the constrained-minimization closed form against brute force
    Minimize(MinimizeArgs),
    /// Simulate a single exit path and print the exit record as JSON
    Simulate(SimulateArgs),
    /// Run a Monte Carlo sweep from a plan file, writing sweep.csv and fit.json
    Sweep(SweepArgs),
    /// Sample-based verification of the probabilistic bounds
    VerifyBounds(VerifyBoundsArgs),
    /// Summarize a sweep output directory as plain text
    Report(ReportArgs),
}

#[derive(Args)]
struct MeasureArgs {
    /// Symmetric exponential-power tail exponent (shorthand for the default measure)
    #[arg(long, conflicts_with = "measure_json")]
    alpha: Option<f64>,

    /// Full jump-measure description as inline JSON
    #[arg(long)]
    measure_json: Option<String>,
}

impl MeasureArgs {
    fn build(&self) -> Result<TailSpec> {
        match (self.alpha, self.measure_json.as_deref()) {
            (Some(a), None) => TailSpec::exp_power(a),
            (None, Some(s)) => serde_json::from_str(s)
                .map_err(|e| Error::Config(format!("invalid --measure-json: {e}"))),
            (None, None) => Err(Error::Config(
                "a jump measure is required: pass --alpha or --measure-json".into(),
            )),
            (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum RegimeArg {
    /// Heavy sub-exponential tails (tail exponent below one)
    Subexp,
    /// Super-exponential tails (tail exponent above one)
    Superexp,
    /// Polynomial tails
    Power,
    /// Sub-exponential tails truncated at a finite jump bound
    Bounded,
    /// No jumps: small Gaussian perturbations only
    Gaussian,
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    measure: MeasureArgs,

    /// Asymptotic regime for the prediction
    #[arg(long, value_enum)]
    regime: RegimeArg,

    /// Noise amplitude
    #[arg(long)]
    eps: f64,

    /// Jump bound in noise units (bounded regime only)
    #[arg(long)]
    theta: Option<f64>,

    /// Potential barrier heights as "left,right" (gaussian regime only)
    #[arg(long)]
    barriers: Option<String>,
}

#[derive(Args)]
struct MinimizeArgs {
    /// Tail exponent of the cost function
    #[arg(long)]
    alpha: f64,

    /// Total budget that the jump sizes must reach
    #[arg(long, default_value_t = 1.0)]
    a: f64,

    /// Upper bound on each jump size as a fraction of the budget ("inf" for none)
    #[arg(long, default_value_t = f64::INFINITY)]
    theta: f64,

    /// Number of jumps
    #[arg(long)]
    k: usize,

    /// Grid resolution for the brute-force check
    #[arg(long, default_value_t = 400)]
    grid_n: usize,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    /// Exact event-driven simulation for pure large-jump dynamics
    PdmpExact,
    /// Jump-adapted Euler scheme with small-jump diffusion approximation
    EulerJumpAdapted,
}

impl ModeArg {
    fn to_mode(self) -> SimMode {
        match self {
            ModeArg::PdmpExact => SimMode::PdmpExact,
            ModeArg::EulerJumpAdapted => SimMode::EulerJumpAdapted,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum PotentialArg {
    /// U(x) = x^2 / 2
    Quadratic,
    /// U(x) = x^4 / 4
    Quartic,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    measure: MeasureArgs,

    /// Gaussian variance of the driving noise
    #[arg(long, default_value_t = 0.0)]
    d: f64,

    /// Deterministic drift of the driving noise
    #[arg(long, default_value_t = 0.0)]
    mu: f64,

    /// Noise amplitude
    #[arg(long)]
    eps: f64,

    /// Starting point inside (-1, 1)
    #[arg(long, default_value_t = 0.0)]
    x0: f64,

    /// Censoring horizon
    #[arg(long)]
    t_max: f64,

    /// Simulation scheme
    #[arg(long, value_enum, default_value_t = ModeArg::PdmpExact)]
    mode: ModeArg,

    /// Time step of the Euler grid
    #[arg(long, default_value_t = 0.01)]
    step_h: f64,

    /// Threshold above which jumps are simulated exactly
    #[arg(long)]
    cutoff_g: Option<f64>,

    /// Threshold below which jumps are folded into the Gaussian variance
    #[arg(long)]
    ar_threshold: Option<f64>,

    /// Confining potential
    #[arg(long, value_enum, default_value_t = PotentialArg::Quadratic)]
    potential: PotentialArg,

    /// Also write the large-jump events of the path to this CSV file
    #[arg(long)]
    dump_events: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep plan as a JSON file
    #[arg(long)]
    plan: PathBuf,
}

#[derive(Args)]
struct VerifyBoundsArgs {
    /// Which bound family to verify: 31 (short-time envelope), 33 (small-jump
    /// supremum), or 34 (large-jump sum)
    #[arg(long)]
    lemma: String,

    /// Monte Carlo sample count per check
    #[arg(long, default_value_t = verify::DEFAULT_SAMPLES)]
    samples: u64,

    /// Single-check override: jump cutoff (lemma 33)
    #[arg(long)]
    g: Option<f64>,

    /// Single-check override: deviation level (lemma 33)
    #[arg(long)]
    f_level: Option<f64>,

    /// Horizon: single-check override for lemma 33, envelope span for lemma 31
    #[arg(long)]
    horizon: Option<f64>,

    /// Single-check override: slack parameter (lemma 33)
    #[arg(long)]
    delta: Option<f64>,

    /// Decay rate of the survival law (lemma 31)
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory holding sweep.csv and fit.json from a previous sweep
    #[arg(long, default_value = ".")]
    input: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Predict(args) => cmd_predict(args, cli.output.as_deref()),
        Command::Minimize(args) => cmd_minimize(args, cli.output.as_deref()),
        Command::Simulate(args) => cmd_simulate(args, cli.seed, cli.output.as_deref()),
        Command::Sweep(args) => cmd_sweep(args, cli.output.as_deref()),
        Command::VerifyBounds(args) => cmd_verify_bounds(args, cli.seed, cli.output.as_deref()),
        Command::Report(args) => cmd_report(args, cli.output.as_deref()),
    }
}

fn write_output(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_barriers(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Config(
            "--barriers expects two comma-separated heights, e.g. 0.5,0.7".into(),
        ));
    }
    let left: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid barrier height: {}", parts[0])))?;
    let right: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid barrier height: {}", parts[1])))?;
    Ok((left, right))
}

fn build_regime(args: &PredictArgs) -> Result<Regime> {
    if args.theta.is_some() && !matches!(args.regime, RegimeArg::Bounded) {
        return Err(Error::Config(
            "--theta only applies to --regime bounded".into(),
        ));
    }
    if args.barriers.is_some() && !matches!(args.regime, RegimeArg::Gaussian) {
        return Err(Error::Config(
            "--barriers only applies to --regime gaussian".into(),
        ));
    }
    match args.regime {
        RegimeArg::Subexp => Ok(Regime::SubExp),
        RegimeArg::Superexp => Ok(Regime::SuperExp),
        RegimeArg::Power => Ok(Regime::PowerTail),
        RegimeArg::Bounded => {
            let theta = args.theta.ok_or_else(|| {
                Error::Config("--regime bounded requires --theta".into())
            })?;
            Ok(Regime::BoundedSubExp { theta })
        }
        RegimeArg::Gaussian => {
            let spec = args.barriers.as_deref().ok_or_else(|| {
                Error::Config("--regime gaussian requires --barriers".into())
            })?;
            let (barrier_left, barrier_right) = parse_barriers(spec)?;
            Ok(Regime::Gaussian {
                barrier_left,
                barrier_right,
            })
        }
    }
}

fn cmd_predict(args: PredictArgs, output: Option<&Path>) -> Result<()> {
    let regime = build_regime(&args)?;
    let spec = args.measure.build()?;
    let prediction = asymptotics::predict_rate(&spec, args.eps, &regime)?;
    let mut text = serde_json::to_string_pretty(&prediction)
        .map_err(|e| Error::Numerical(format!("serialize prediction: {e}")))?;
    text.push('\n');
    write_output(&text, output)
}

fn cmd_minimize(args: MinimizeArgs, output: Option<&Path>) -> Result<()> {
    let closed = asymptotics::simplex_min_closed(args.alpha, args.a, args.theta, args.k)?;
    let brute = if args.k <= 5 {
        let hi = if args.theta.is_finite() {
            (args.theta * args.a).min(args.a)
        } else {
            args.a
        };
        let objective = |x: f64| x.powf(args.alpha);
        Some(asymptotics::simplex_min_grid(
            &objective, args.a, 0.0, hi, args.k, args.grid_n,
        )?)
    } else {
        None
    };
    let json = serde_json::json!({
        "closed": closed,
        "brute": brute,
        "abs_diff": brute.map(|b| (b - closed).abs()),
    });
    let mut text = serde_json::to_string_pretty(&json)
        .map_err(|e| Error::Numerical(format!("serialize result: {e}")))?;
    text.push('\n');
    write_output(&text, output)
}

fn cmd_simulate(args: SimulateArgs, seed: u64, output: Option<&Path>) -> Result<()> {
    let spec = args.measure.build()?;
    let triplet = LevyTriplet::new(args.d, spec, args.mu)?;
    let potential = match args.potential {
        PotentialArg::Quadratic => Potential::quadratic(),
        PotentialArg::Quartic => Potential::quartic(),
    };
    let mut config = SimConfig::new(args.eps, args.x0, args.t_max, args.mode.to_mode(), seed)?;
    config.step_h = args.step_h;
    config.cutoff_g = args.cutoff_g;
    config.ar_threshold = args.ar_threshold;
    config.validate()?;

    let (record, events) =
        firstexit::dynamics::simulate_exit_with_events(&triplet, &potential, &config)?;
    if let Some(path) = &args.dump_events {
        let mut csv: Vec<u8> = Vec::new();
        csv.extend_from_slice(processes::PathEvents::csv_header().as_bytes());
        csv.push(b'\n');
        events
            .write_csv_rows(0, &mut csv)
            .map_err(|e| Error::Numerical(format!("format events: {e}")))?;
        fs::write(path, csv)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut text = serde_json::to_string_pretty(&record)
        .map_err(|e| Error::Numerical(format!("serialize record: {e}")))?;
    text.push('\n');
    write_output(&text, output)
}

fn cmd_sweep(args: SweepArgs, output: Option<&Path>) -> Result<()> {
    let plan_text = fs::read_to_string(&args.plan)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", args.plan.display())))?;
    let plan: SweepPlan = serde_json::from_str(&plan_text)
        .map_err(|e| Error::Config(format!("invalid sweep plan: {e}")))?;
    plan.validate()?;

    let out_dir = output.unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(out_dir)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", out_dir.display())))?;

    let batches = experiments::run_batch(&plan)?;
    let mut estimates: Vec<EstimateResult> = Vec::with_capacity(batches.len());
    for (eps, records) in &batches {
        let prediction = plan.prediction(*eps)?;
        estimates.push(experiments::estimate(*eps, records, &prediction)?);
    }

    let mut csv = String::new();
    csv.push_str(EstimateResult::csv_header());
    csv.push('\n');
    for est in &estimates {
        csv.push_str(&est.csv_row());
        csv.push('\n');
    }
    let csv_path = out_dir.join("sweep.csv");
    fs::write(&csv_path, &csv)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", csv_path.display())))?;

    let fit = experiments::fit_log_rate(&estimates)?;
    let fit_json = serde_json::to_string_pretty(&fit)
        .map_err(|e| Error::Numerical(format!("serialize fit: {e}")))?;
    let fit_path = out_dir.join("fit.json");
    fs::write(&fit_path, format!("{fit_json}\n"))
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", fit_path.display())))?;

    let flagged = estimates.iter().filter(|e| e.flagged()).count();
    println!(
        "sweep: {} grid points, {} flagged for censoring, slope {:.4}, r^2 {:.4}",
        estimates.len(),
        flagged,
        fit.slope,
        fit.r_squared
    );
    println!("wrote {}", csv_path.display());
    println!("wrote {}", fit_path.display());
    Ok(())
}

fn render_outcomes(outcomes: &[CheckOutcome]) -> (String, usize) {
    let mut text = String::new();
    let mut violations = 0usize;
    for o in outcomes {
        let status = if o.violated() {
            violations += 1;
            "VIOLATED"
        } else if o.skipped.is_some() {
            "SKIPPED "
        } else {
            "ok      "
        };
        text.push_str(&format!(
            "{status}  {}: p_hat={:.6e} bound={:.6e} margin={:.6e} n={}\n",
            o.label, o.p_hat, o.bound, o.margin, o.n
        ));
        if let Some(note) = &o.skipped {
            text.push_str(&format!("warning: {note}\n"));
        }
    }
    (text, violations)
}

fn cmd_verify_bounds(args: VerifyBoundsArgs, seed: u64, output: Option<&Path>) -> Result<()> {
    let lemma33_overrides =
        args.g.is_some() || args.f_level.is_some() || args.delta.is_some();
    let outcomes = match args.lemma.as_str() {
        "31" => {
            let c = args.c.unwrap_or(0.1);
            let horizon = args.horizon.unwrap_or(1.0);
            verify::envelope_suite(c, horizon, args.samples, seed)?
        }
        "33" => {
            if lemma33_overrides || args.horizon.is_some() {
                let cfg = SupBoundConfig {
                    g: args.g.unwrap_or(2.0),
                    f_level: args.f_level.unwrap_or(8.0),
                    horizon: args.horizon.unwrap_or(0.2),
                    delta: args.delta.unwrap_or(0.0),
                    n: args.samples,
                };
                vec![verify::sup_bound_check(&cfg, seed)?]
            } else {
                verify::sup_bound_suite(args.samples, seed)?
            }
        }
        "34" => verify::sum_bound_suite(args.samples, seed)?,
        other => {
            return Err(Error::Config(format!(
                "unknown bound family --lemma {other}: expected 31, 33, or 34"
            )))
        }
    };

    let (mut text, violations) = render_outcomes(&outcomes);
    if violations == 0 {
        text.push_str(&format!("all {} checks passed\n", outcomes.len()));
    } else {
        text.push_str(&format!(
            "{violations} violation(s) in {} check(s)\n",
            outcomes.len()
        ));
    }
    write_output(&text, output)?;
    if violations > 0 {
        return Err(Error::Estimation(format!(
            "{violations} bound check(s) violated"
        )));
    }
    Ok(())
}

fn cmd_report(args: ReportArgs, output: Option<&Path>) -> Result<()> {
    let csv_path = args.input.join("sweep.csv");
    let fit_path = args.input.join("fit.json");
    let csv = fs::read_to_string(&csv_path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", csv_path.display())))?;
    let fit_text = fs::read_to_string(&fit_path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", fit_path.display())))?;
    let fit: serde_json::Value = serde_json::from_str(&fit_text)
        .map_err(|e| Error::Config(format!("invalid {}: {e}", fit_path.display())))?;

    let mut lines = csv.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config(format!("{} is empty", csv_path.display())))?;
    let columns: Vec<&str> = header.split(',').collect();
    let idx = |name: &str| -> Result<usize> {
        columns
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| Error::Config(format!("missing column {name} in sweep.csv")))
    };
    let (i_eps, i_mean, i_ci, i_cens, i_ks, i_pred, i_logm) = (
        idx("eps")?,
        idx("mean_exit")?,
        idx("ci95")?,
        idx("censored_fraction")?,
        idx("ks_stat")?,
        idx("predicted_log_rate")?,
        idx("log_mean")?,
    );

    let mut text = String::new();
    text.push_str(&format!(
        "{:>8} {:>14} {:>12} {:>10} {:>8} {:>12} {:>10}  flags\n",
        "eps", "mean_exit", "ci95", "censored", "ks", "pred_log", "log_mean"
    ));
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let get = |i: usize| -> Result<f64> {
            fields
                .get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::Config(format!("malformed row in sweep.csv: {line}")))
        };
        let censored = get(i_cens)?;
        let flag = if censored > experiments::CENSOR_FLAG_THRESHOLD {
            "CENSORING"
        } else {
            ""
        };
        text.push_str(&format!(
            "{:>8.4} {:>14.4} {:>12.4} {:>10.4} {:>8.4} {:>12.4} {:>10.4}  {}\n",
            get(i_eps)?,
            get(i_mean)?,
            get(i_ci)?,
            censored,
            get(i_ks)?,
            get(i_pred)?,
            get(i_logm)?,
            flag
        ));
    }
    let slope = fit["slope"].as_f64().unwrap_or(f64::NAN);
    let intercept = fit["intercept"].as_f64().unwrap_or(f64::NAN);
    let r2 = fit["r_squared"].as_f64().unwrap_or(f64::NAN);
    text.push_str(&format!(
        "fit: slope {slope:.4}, intercept {intercept:.4}, r^2 {r2:.4}\n"
    ));
    write_output(&text, output)
}
