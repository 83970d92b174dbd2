//! Command-line entry point.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sgcov::montecarlo::{far_field_mean, far_field_std_bound};

use crate::config::{self, ConfigError, Quantity, Scenario};
use crate::output::{format_sig, write_csv, CSV_HEADER};
use crate::sweep::{self, AnalyticPoint, RunError, Simulated};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const COMPARE_FAILED: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const QUADRATURE: i32 = 3;
    pub const RUNTIME: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "sgcov", version, about = "Coverage and rate of finite and clustered wireless networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic coverage over the scenario axis.
    Coverage(Common),
    /// Analytic spectral efficiency over the scenario axis.
    SpectralEfficiency(Common),
    /// Analytic contact-distance CDF over the scenario axis.
    ContactCdf(Common),
    /// Monte Carlo estimate of the scenario quantity.
    Simulate(Common),
    /// Analytic and Monte Carlo side by side; exits 1 if any point disagrees.
    Compare(Common),
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Scenario file, or the name of a bundled scenario.
    #[arg(long)]
    pub config: String,
    /// CSV destination (stdout when omitted; compare then prints only its report).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Absolute tolerance floor for compare.
    #[arg(long, default_value_t = 0.005)]
    pub atol: f64,
    /// Worker threads (all cores when omitted). Results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also run the simulator for coverage, spectral-efficiency and contact-cdf.
    #[arg(long)]
    pub mc: bool,
    /// Write per-batch simulation summaries to this CSV.
    #[arg(long)]
    pub dump_batches: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum AppError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Threads(String),
}

impl AppError {
    fn code(&self) -> i32 {
        match self {
            AppError::Config(_) | AppError::Run(RunError::Config(_)) => exit::CONFIG,
            AppError::Run(RunError::Sim(sgcov::montecarlo::SimError::InvalidConfig(_))) => exit::CONFIG,
            AppError::Threads(_) => exit::CONFIG,
            _ => exit::RUNTIME,
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::CONFIG } else { exit::OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Coverage(c)
        | Command::SpectralEfficiency(c)
        | Command::ContactCdf(c)
        | Command::Simulate(c)
        | Command::Compare(c) => c,
    }
}

/// Loads the scenario and applies command-line overrides.
pub fn load_scenario(cmd: &Command) -> Result<Scenario, ConfigError> {
    let c = common(cmd);
    let path = config::resolve(&c.config)?;
    let mut scenario = Scenario::load(&path)?;
    if scenario.name.is_empty() {
        scenario.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    match cmd {
        Command::Coverage(_) => scenario.quantity = Quantity::Coverage,
        Command::SpectralEfficiency(_) => scenario.quantity = Quantity::SpectralEfficiency,
        Command::ContactCdf(_) => scenario.quantity = Quantity::ContactCdf,
        Command::Simulate(_) | Command::Compare(_) => {}
    }
    if let Some(sim) = scenario.sim.as_mut() {
        if let Some(seed) = c.seed {
            sim.seed = seed;
        }
        if let Some(n) = c.trials {
            sim.n_trials = n;
        }
    } else if c.seed.is_some() || c.trials.is_some() {
        return Err(ConfigError::Invalid("--seed/--trials need `sim` settings in the scenario".into()));
    }
    scenario.validate()?;
    Ok(scenario)
}

fn execute(cli: &Cli) -> Result<i32, AppError> {
    let c = common(&cli.command);
    if !(c.atol >= 0.0) {
        return Err(ConfigError::Invalid("--atol must be non-negative".into()).into());
    }
    let scenario = load_scenario(&cli.command)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = c.threads {
        if n == 0 {
            return Err(AppError::Threads("--threads must be positive".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| AppError::Threads(e.to_string()))?;
    pool.install(|| execute_in_pool(cli, &scenario))
}

fn execute_in_pool(cli: &Cli, scenario: &Scenario) -> Result<i32, AppError> {
    let c = common(&cli.command);
    let (want_analytic, want_mc) = match cli.command {
        Command::Simulate(_) => (false, true),
        Command::Compare(_) => (true, true),
        _ => (true, c.mc),
    };
    if (want_mc || c.dump_batches.is_some()) && scenario.sim.is_none() {
        return Err(ConfigError::Invalid("scenario has no `sim` settings".into()).into());
    }
    let analytic: Option<Vec<AnalyticPoint>> = if want_analytic { Some(sweep::analytic(scenario)?) } else { None };
    let simulated: Option<Simulated> = if want_mc || c.dump_batches.is_some() {
        Some(sweep::simulate(scenario)?)
    } else {
        None
    };
    let mut rows = sweep::rows(scenario, analytic.as_deref(), simulated.as_ref());

    let mut code = exit::OK;
    if let Command::Compare(_) = cli.command {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        let mut failed = 0;
        for (i, row) in rows.iter_mut().enumerate() {
            let v = sweep::judge(row, c.atol);
            if !v.pass {
                failed += 1;
            }
            row.flags.push(if v.pass { "pass" } else { "fail" }.into());
            let _ = writeln!(
                out,
                "point index={i} axis={} axis_value={} analytic={} mc_mean={} mc_stderr={} tolerance={} status={}",
                row.axis.as_str(),
                format_sig(row.axis_value),
                row.analytic.map(format_sig).unwrap_or_else(|| "na".into()),
                row.mc_mean.map(format_sig).unwrap_or_else(|| "na".into()),
                row.mc_stderr.map(format_sig).unwrap_or_else(|| "na".into()),
                format_sig(v.tolerance),
                if v.pass { "pass" } else { "fail" },
            );
        }
        let status = if failed == 0 { "pass" } else { "fail" };
        let _ = writeln!(
            out,
            "summary scenario={} points={} failed={failed} status={status}",
            scenario.name,
            rows.len()
        );
        if failed > 0 {
            code = exit::COMPARE_FAILED;
        }
    }
    if analytic.as_ref().is_some_and(|a| a.iter().any(|p| p.budget_exceeded)) {
        eprintln!("error: quadrature budget exceeded at the flagged rows");
        code = exit::QUADRATURE;
    }

    let csv = write_csv(&rows);
    match &c.out {
        Some(path) => {
            write_file(path, &csv)?;
            write_file(&meta_path(path), &metadata(cli, scenario))?;
        }
        None if !matches!(cli.command, Command::Compare(_)) => {
            print!("{csv}");
        }
        None => {}
    }
    if let (Some(path), Some(sim)) = (&c.dump_batches, &simulated) {
        write_file(path, &write_csv(&sweep::batch_rows(scenario, sim)))?;
    }
    Ok(code)
}

fn write_file(path: &Path, text: &str) -> Result<(), AppError> {
    std::fs::write(path, text).map_err(|source| AppError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `<out>.meta.json` next to the CSV.
pub fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Coverage(_) => "coverage",
        Command::SpectralEfficiency(_) => "spectral-efficiency",
        Command::ContactCdf(_) => "contact-cdf",
        Command::Simulate(_) => "simulate",
        Command::Compare(_) => "compare",
    }
}

/// Everything needed to rerun the command. `scenario` is a complete
/// scenario file with the command-line overrides folded in.
fn metadata(cli: &Cli, scenario: &Scenario) -> String {
    let c = common(&cli.command);
    let far_field = scenario.sim.and_then(|sim| {
        let p = scenario.point(scenario.axis.min).ok()?;
        let params = p.multi?;
        let alpha = sim.alpha_override.unwrap_or(p.channel.alpha);
        let r_i = sim.interference_truncation_radius;
        Some(json!({
            "mean_at_axis_min": far_field_mean(&params, alpha, r_i),
            "std_bound_at_axis_min": far_field_std_bound(&params, alpha, r_i),
        }))
    });
    let meta = json!({
        "tool": "sgcov",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command_name(&cli.command),
        "csv_header": CSV_HEADER,
        "atol": c.atol,
        "scenario": scenario,
        "far_field": far_field,
    });
    let mut text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    text.push('\n');
    text
}
