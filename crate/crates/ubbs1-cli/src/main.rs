//! Command-line front end: density/CDF/quantile tabulation, moments,
//! stress-strength, sampling, fitting, model comparison, and Monte Carlo
//! simulation campaigns.
//!
//! Exit codes: 0 success, 2 usage error, 1 runtime failure. Machine-readable
//! output goes to stdout (or --output); diagnostics to stderr.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use ubbs1::estimation::{fit, fit_beta_baseline, Method, OptimizerConfig, UnitSample};
use ubbs1::sampling::{sample_ubbs1_with, RatioConvention, RngState};
use ubbs1::simulation::{reports_to_csv, run_grid, InitPolicy, Scenario};
use ubbs1::Ubbs1Params;

const DEFAULT_ORDER: usize = 64;

#[derive(Parser)]
#[command(name = "ubbs1", version, about = "Unit Birnbaum-Saunders ratio distribution toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the density over a z grid (CSV: z,value)
    Pdf(GridArgs),
    /// Tabulate the CDF over a z grid (CSV: z,value)
    Cdf(GridArgs),
    /// Tabulate quantiles over a probability grid (CSV: q,value)
    Quantile(GridArgs),
    /// Raw moments E[Z^k] for k = 1..=n (CSV: n,value)
    Moments(MomentArgs),
    /// Stress-strength probability P(X < Y)
    Stress(StressArgs),
    /// Draw random variates (one per line, or CSV with a z header)
    Sample(SampleArgs),
    /// Fit the five-parameter model to a single-column CSV (JSON result)
    Fit(FitArgs),
    /// Run a Monte Carlo estimator benchmark from a JSON config (CSV report)
    Simulate(SimulateArgs),
    /// Fit several models and rank them by AIC (CSV table)
    Compare(CompareArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Parameters as alpha1,alpha2,beta1,beta2,rho
    #[arg(long, value_parser = parse_params)]
    params: Ubbs1Params,
    /// Evaluation grid start:stop:count with 0 < start < stop < 1
    #[arg(long, value_parser = parse_grid)]
    grid: GridSpec,
    /// Gauss-Hermite order for CDF-based evaluations
    #[arg(long)]
    order: Option<usize>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MomentArgs {
    #[arg(long, value_parser = parse_params)]
    params: Ubbs1Params,
    /// Highest moment order to report
    #[arg(long, default_value_t = 10)]
    n: u32,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StressArgs {
    #[arg(long, value_parser = parse_params)]
    params: Ubbs1Params,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_parser = parse_params)]
    params: Ubbs1Params,
    /// Number of draws
    #[arg(long)]
    n: usize,
    /// RNG seed (required: no wall-clock default)
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SampleFormat::Plain)]
    format: SampleFormat,
    /// Which ratio the sampler returns
    #[arg(long, value_enum, default_value_t = Convention::SecondOverSum)]
    convention: Convention,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Single-column CSV of observations in (0,1); header `z` optional
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    method: FitMethod,
    /// Optional starting point alpha1,alpha2,beta1,beta2,rho
    #[arg(long, value_parser = parse_params)]
    init: Option<Ubbs1Params>,
    /// Multi-start count
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON scenario configuration
    #[arg(long)]
    config: PathBuf,
    /// Override the config's master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's replication count (quick runs)
    #[arg(long)]
    replications: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated subset of ubbs1_mle,ubbs1_mps,beta
    #[arg(long, default_value = "ubbs1_mle,ubbs1_mps,beta")]
    models: String,
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitMethod {
    Mle,
    Mps,
}

impl From<FitMethod> for Method {
    fn from(m: FitMethod) -> Method {
        match m {
            FitMethod::Mle => Method::Mle,
            FitMethod::Mps => Method::Mps,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleFormat {
    Plain,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    SecondOverSum,
    FirstOverSum,
}

impl From<Convention> for RatioConvention {
    fn from(c: Convention) -> RatioConvention {
        match c {
            Convention::SecondOverSum => RatioConvention::SecondOverSum,
            Convention::FirstOverSum => RatioConvention::FirstOverSum,
        }
    }
}

#[derive(Clone, Copy)]
struct GridSpec {
    start: f64,
    stop: f64,
    count: usize,
}

impl GridSpec {
    fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + step * i as f64).collect()
    }
}

fn parse_params(s: &str) -> Result<Ubbs1Params, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err(format!("expected 5 comma-separated values alpha1,alpha2,beta1,beta2,rho, got {}", parts.len()));
    }
    let mut vals = [0.0; 5];
    for (i, p) in parts.iter().enumerate() {
        vals[i] = p.trim().parse::<f64>().map_err(|e| format!("bad number '{p}': {e}"))?;
    }
    Ubbs1Params::new(vals[0], vals[1], vals[2], vals[3], vals[4]).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("grid must be start:stop:count".into());
    }
    let start: f64 = parts[0].trim().parse().map_err(|e| format!("bad grid start: {e}"))?;
    let stop: f64 = parts[1].trim().parse().map_err(|e| format!("bad grid stop: {e}"))?;
    let count: usize = parts[2].trim().parse().map_err(|e| format!("bad grid count: {e}"))?;
    if !(start > 0.0 && start < stop && stop < 1.0) {
        return Err(format!("grid requires 0 < start < stop < 1, got {start}:{stop}"));
    }
    if count < 1 {
        return Err("grid count must be at least 1".into());
    }
    Ok(GridSpec { start, stop, count })
}

/// Usage problems exit 2, runtime failures exit 1.
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<ubbs1::Error> for CliError {
    fn from(e: ubbs1::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

fn quad_order(flag: Option<usize>) -> Result<usize, CliError> {
    let order = match flag {
        Some(o) => o,
        None => match std::env::var("UBBS1_QUAD_ORDER") {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .map_err(|e| CliError::Usage(format!("UBBS1_QUAD_ORDER must be an integer: {e}")))?,
            Err(_) => DEFAULT_ORDER,
        },
    };
    if !(2..=128).contains(&order) {
        return Err(CliError::Usage(format!("quadrature order must be in [2, 128], got {order}")));
    }
    Ok(order)
}

fn emit(output: Option<&Path>, content: &str) -> CliResult {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Loads a single-column CSV (optional `z` header). Non-numeric, non-finite,
/// and out-of-range rows are rejected with row-indexed diagnostics on stderr;
/// the valid remainder becomes the sample.
fn read_sample(path: &Path) -> Result<UnitSample, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    let mut rejected: Vec<(usize, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if idx == 0 && line.eq_ignore_ascii_case("z") {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 && v < 1.0 => values.push(v),
            Ok(v) => rejected.push((idx + 1, format!("{v} outside (0, 1)"))),
            Err(_) => rejected.push((idx + 1, format!("not a number: '{line}'"))),
        }
    }
    if !rejected.is_empty() {
        eprintln!("rejected {} row(s):", rejected.len());
        for (row, why) in rejected.iter().take(20) {
            eprintln!("  line {row}: {why}");
        }
        if rejected.len() > 20 {
            eprintln!("  ... and {} more", rejected.len() - 20);
        }
    }
    if values.is_empty() {
        return Err(CliError::Runtime(format!("{}: no valid observations", path.display())));
    }
    UnitSample::new(values, path.display().to_string()).map_err(|e| CliError::Runtime(e.to_string()))
}

fn fit_result_json(res: &ubbs1::FitResult) -> serde_json::Value {
    let p = res.params;
    serde_json::json!({
        "alpha1": p.alpha1(),
        "alpha2": p.alpha2(),
        "beta1": p.beta1(),
        "beta2": p.beta2(),
        "rho": p.rho(),
        "method": res.method.as_str(),
        "loglik": res.loglik,
        "aic": res.aic,
        "bic": res.bic,
        "converged": res.converged,
        "iterations": res.iterations,
    })
}

fn cmd_pdf(args: &GridArgs) -> CliResult {
    let mut out = String::from("z,value\n");
    for z in args.grid.points() {
        let v = args.params.pdf(z)?;
        writeln!(out, "{z},{v}").unwrap();
    }
    emit(args.output.as_deref(), &out)
}

fn cmd_cdf(args: &GridArgs) -> CliResult {
    let order = quad_order(args.order)?;
    let mut out = String::from("z,value\n");
    for z in args.grid.points() {
        let v = args.params.cdf_with_order(z, order)?;
        writeln!(out, "{z},{v}").unwrap();
    }
    emit(args.output.as_deref(), &out)
}

fn cmd_quantile(args: &GridArgs) -> CliResult {
    let order = quad_order(args.order)?;
    let mut out = String::from("q,value\n");
    for q in args.grid.points() {
        let v = args.params.quantile_with_order(q, order)?;
        writeln!(out, "{q},{v}").unwrap();
    }
    emit(args.output.as_deref(), &out)
}

fn cmd_moments(args: &MomentArgs) -> CliResult {
    if args.n < 1 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let order = quad_order(args.order)?;
    let mut out = String::from("n,value\n");
    for k in 1..=args.n {
        let v = args.params.moment_with_order(k, order)?;
        writeln!(out, "{k},{v}").unwrap();
    }
    emit(args.output.as_deref(), &out)
}

fn cmd_stress(args: &StressArgs) -> CliResult {
    let order = quad_order(args.order)?;
    let r = args.params.stress_strength_with_order(order)?;
    let content = match args.format {
        TableFormat::Csv => format!("stress_strength\n{r}\n"),
        TableFormat::Json => format!("{}\n", serde_json::json!({ "stress_strength": r })),
    };
    emit(args.output.as_deref(), &content)
}

fn cmd_sample(args: &SampleArgs) -> CliResult {
    if args.n < 1 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let mut rng = RngState::new(args.seed);
    let sample = sample_ubbs1_with(args.n, &args.params, args.convention.into(), &mut rng)?;
    let mut out = String::new();
    if matches!(args.format, SampleFormat::Csv) {
        out.push_str("z\n");
    }
    for z in sample.values() {
        writeln!(out, "{z}").unwrap();
    }
    emit(args.output.as_deref(), &out)
}

fn cmd_fit(args: &FitArgs) -> CliResult {
    let sample = read_sample(&args.input)?;
    let mut config = OptimizerConfig::default();
    if let Some(s) = args.starts {
        if s == 0 {
            return Err(CliError::Usage("--starts must be at least 1".into()));
        }
        config.starts = s;
    }
    let res = fit(&sample, args.method.into(), args.init, &config)?;
    if sample.tie_count() > 0 {
        eprintln!("note: {} tied observation(s); spacings were floored", sample.tie_count());
    }
    let content = format!("{}\n", serde_json::to_string_pretty(&fit_result_json(&res)).unwrap());
    emit(args.output.as_deref(), &content)
}

/// JSON layout for `simulate`.
#[derive(serde::Deserialize)]
struct SimulateConfig {
    true_params: Ubbs1Params,
    n_values: Vec<usize>,
    #[serde(default)]
    rho_values: Vec<f64>,
    replications: usize,
    methods: Vec<Method>,
    master_seed: u64,
    #[serde(default)]
    init_policy: InitPolicy,
    #[serde(default)]
    optimizer: Option<OptimizerConfig>,
}

fn cmd_simulate(args: &SimulateArgs) -> CliResult {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg: SimulateConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("malformed config {}: {e}", args.config.display())))?;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(reps) = args.replications {
        cfg.replications = reps;
    }
    if cfg.rho_values.is_empty() {
        cfg.rho_values = vec![cfg.true_params.rho()];
    }
    if cfg.n_values.is_empty() {
        return Err(CliError::Usage("config needs at least one entry in n_values".into()));
    }
    let base = Scenario {
        true_params: cfg.true_params,
        n: cfg.n_values[0],
        replications: cfg.replications,
        methods: cfg.methods,
        master_seed: cfg.master_seed,
        init_policy: cfg.init_policy,
        optimizer: cfg.optimizer,
    };
    let reports = run_grid(&base, &cfg.n_values, &cfg.rho_values)?;
    emit(args.output.as_deref(), &reports_to_csv(&reports))
}

fn cmd_compare(args: &CompareArgs) -> CliResult {
    let sample = read_sample(&args.input)?;
    let mut config = OptimizerConfig::default();
    if let Some(s) = args.starts {
        config.starts = s.max(1);
    }
    struct Row {
        model: &'static str,
        loglik: f64,
        aic: f64,
        bic: f64,
    }
    let mut rows = Vec::new();
    for model in args.models.split(',') {
        match model.trim() {
            "ubbs1_mle" => {
                let r = fit(&sample, Method::Mle, None, &config)?;
                rows.push(Row { model: "ubbs1_mle", loglik: r.loglik, aic: r.aic, bic: r.bic });
            }
            "ubbs1_mps" => {
                let r = fit(&sample, Method::Mps, None, &config)?;
                rows.push(Row { model: "ubbs1_mps", loglik: r.loglik, aic: r.aic, bic: r.bic });
            }
            "beta" => {
                let r = fit_beta_baseline(&sample)?;
                rows.push(Row { model: "beta", loglik: r.loglik, aic: r.aic, bic: r.bic });
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown model '{other}' (expected ubbs1_mle, ubbs1_mps, beta)"
                )))
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Usage("no models requested".into()));
    }
    rows.sort_by(|a, b| a.aic.total_cmp(&b.aic));
    let mut out = String::from("model,loglik,aic,bic,best\n");
    for (i, r) in rows.iter().enumerate() {
        writeln!(out, "{},{},{},{},{}", r.model, r.loglik, r.aic, r.bic, i == 0).unwrap();
    }
    emit(args.output.as_deref(), &out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Pdf(args) => cmd_pdf(args),
        Command::Cdf(args) => cmd_cdf(args),
        Command::Quantile(args) => cmd_quantile(args),
        Command::Moments(args) => cmd_moments(args),
        Command::Stress(args) => cmd_stress(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
