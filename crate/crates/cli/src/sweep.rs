//! Evaluates a scenario over its axis, analytically and by simulation.

use rayon::prelude::*;
use sgcov::montecarlo::{self, CoverageSweep, EstimateWithCI, SimError, Tally};
use sgcov::multi_cluster::{contact_cdf, coverage_closed_access, coverage_open_access_with};
use sgcov::single_cluster::{coverage, coverage_lower_bound, spectral_efficiency};
use sgcov::{ChannelModel, ModelError, QuadratureError, Strategy};

use crate::config::{AxisName, ConfigError, Kind, Point, Quantity, Scenario};

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub axis: AxisName,
    pub axis_value: f64,
    pub analytic: Option<f64>,
    pub lower_bound: Option<f64>,
    pub mc_mean: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub flags: Vec<String>,
}

impl Row {
    fn new(axis: AxisName, axis_value: f64) -> Self {
        Self {
            axis,
            axis_value,
            analytic: None,
            lower_bound: None,
            mc_mean: None,
            mc_stderr: None,
            flags: Vec::new(),
        }
    }
}

/// Analytic value at one point, or why it is missing.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticPoint {
    pub value: Result<f64, String>,
    pub lower_bound: Option<Result<f64, String>>,
    pub budget_exceeded: bool,
}

fn is_budget(e: &ModelError) -> bool {
    matches!(e, ModelError::Quadrature(QuadratureError::BudgetExceeded { .. }))
}

/// Evaluates the analytic model at every grid point. Points run on the
/// current rayon pool and come back in axis order.
pub fn analytic(scenario: &Scenario) -> Result<Vec<AnalyticPoint>, ConfigError> {
    let points: Vec<Point> = scenario
        .axis
        .values()
        .into_iter()
        .map(|v| scenario.point(v))
        .collect::<Result<_, _>>()?;
    let q = scenario.quadrature_settings();
    let oa_model = scenario.open_access_model.into();
    let eval = |p: &Point, lower: bool| -> Result<f64, ModelError> {
        match (scenario.quantity, scenario.kind) {
            (Quantity::Coverage, Kind::SingleCluster) => {
                let g = p.single.expect("single-cluster point");
                if lower {
                    coverage_lower_bound(p.strategy, &g, &p.channel, p.beta, &q)
                } else {
                    coverage(p.strategy, &g, &p.channel, p.beta, &q)
                }
            }
            (Quantity::Coverage, Kind::MultiClusterClosed) => {
                coverage_closed_access(p.strategy, &p.multi.expect("multi-cluster point"), &p.channel, p.beta, &q)
            }
            (Quantity::Coverage, Kind::MultiClusterOpen) => {
                coverage_open_access_with(oa_model, &p.multi.expect("multi-cluster point"), &p.channel, p.beta, &q)
            }
            (Quantity::SpectralEfficiency, _) => {
                spectral_efficiency(p.strategy, &p.single.expect("single-cluster point"), &p.channel, &q)
            }
            (Quantity::ContactCdf, _) => contact_cdf(&p.multi.expect("multi-cluster point"), p.axis_value, &q),
        }
    };
    Ok(points
        .par_iter()
        .map(|p| {
            let mut budget = false;
            let mut run = |lower: bool| {
                eval(p, lower).map_err(|e| {
                    budget |= is_budget(&e);
                    e.to_string()
                })
            };
            let value = run(false);
            let lower_bound = scenario.lower_bound.then(|| run(true));
            AnalyticPoint {
                value,
                lower_bound,
                budget_exceeded: budget,
            }
        })
        .collect())
}

/// Simulated value at every grid point plus the per-batch tallies behind
/// each one (empty for the contact distribution).
#[derive(Debug, Clone, PartialEq)]
pub struct Simulated {
    pub estimates: Vec<EstimateWithCI>,
    pub batches: Vec<Vec<Tally>>,
}

fn sim_channel(scenario: &Scenario, p: &Point) -> Result<ChannelModel, ConfigError> {
    match scenario.sim.and_then(|s| s.alpha_override) {
        Some(a) => ChannelModel::new(a, p.channel.sigma2).map_err(|e| ConfigError::Invalid(e.to_string())),
        None => Ok(p.channel),
    }
}

fn pick(kind: Kind, strategy: Strategy, single: Option<montecarlo::SingleClusterEstimates>, multi: Option<montecarlo::MultiClusterEstimates>) -> CoverageSweep {
    match (kind, strategy) {
        (Kind::SingleCluster, Strategy::Closest) => single.expect("single-cluster run").closest,
        (Kind::SingleCluster, Strategy::Uniform) => single.expect("single-cluster run").uniform,
        (Kind::MultiClusterClosed, Strategy::Closest) => multi.expect("multi-cluster run").closed_closest,
        (Kind::MultiClusterClosed, Strategy::Uniform) => multi.expect("multi-cluster run").closed_uniform,
        (Kind::MultiClusterOpen, _) => multi.expect("multi-cluster run").open_access,
    }
}

/// One simulation over the given thresholds at point `p`.
fn run_sweep(scenario: &Scenario, p: &Point, betas: &[f64]) -> Result<CoverageSweep, RunError> {
    let spec = scenario.sim.expect("caller checked sim settings");
    let sim = spec.sim_config();
    let channel = sim_channel(scenario, p)?;
    Ok(match scenario.kind {
        Kind::SingleCluster => {
            let e = montecarlo::estimate_single_cluster(&p.single.expect("single-cluster point"), &channel, betas, &sim)?;
            pick(scenario.kind, p.strategy, Some(e), None)
        }
        _ => {
            let e = montecarlo::estimate_multi_cluster(&p.multi.expect("multi-cluster point"), &channel, betas, &sim)?;
            pick(scenario.kind, p.strategy, None, Some(e))
        }
    })
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Runs the simulator for every grid point. A threshold sweep shares one
/// set of realizations across all thresholds.
pub fn simulate(scenario: &Scenario) -> Result<Simulated, RunError> {
    let Some(spec) = scenario.sim else {
        return Err(ConfigError::Invalid("scenario has no `sim` settings".into()).into());
    };
    let values = scenario.axis.values();
    let points: Vec<Point> = values.iter().map(|&v| scenario.point(v)).collect::<Result<_, _>>()?;
    match scenario.quantity {
        Quantity::ContactCdf => {
            let p = points[0].multi.expect("multi-cluster point");
            let estimates = montecarlo::estimate_contact_cdf(&p, &values, &spec.sim_config())?;
            Ok(Simulated {
                estimates,
                batches: Vec::new(),
            })
        }
        Quantity::Coverage if scenario.axis.name == AxisName::BetaDb => {
            let betas: Vec<f64> = points.iter().map(|p| p.beta).collect();
            let sweep = run_sweep(scenario, &points[0], &betas)?;
            // Drop the trailing rate tally; one column per threshold remains.
            let batches = sweep.batches.iter().map(|b| b[..betas.len()].to_vec()).collect();
            Ok(Simulated {
                estimates: sweep.coverage,
                batches,
            })
        }
        Quantity::Coverage | Quantity::SpectralEfficiency => {
            let mut estimates = Vec::with_capacity(points.len());
            let mut per_point = Vec::with_capacity(points.len());
            for p in &points {
                let rate = scenario.quantity == Quantity::SpectralEfficiency;
                let betas: &[f64] = if rate { &[] } else { std::slice::from_ref(&p.beta) };
                let sweep = run_sweep(scenario, p, betas)?;
                estimates.push(if rate { sweep.spectral_efficiency } else { sweep.coverage[0] });
                per_point.push(sweep.batches.iter().map(|b| b[0]).collect::<Vec<_>>());
            }
            // Transpose to batch-major like the threshold sweep.
            let n_batches = per_point.first().map_or(0, Vec::len);
            let batches = (0..n_batches).map(|b| per_point.iter().map(|col| col[b]).collect()).collect();
            Ok(Simulated { estimates, batches })
        }
    }
}

/// Assembles CSV rows from whichever parts were computed.
pub fn rows(scenario: &Scenario, analytic: Option<&[AnalyticPoint]>, simulated: Option<&Simulated>) -> Vec<Row> {
    scenario
        .axis
        .values()
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let mut row = Row::new(scenario.axis.name, v);
            if let Some(a) = analytic {
                let a = &a[i];
                match &a.value {
                    Ok(x) => row.analytic = Some(*x),
                    Err(_) => row.flags.push(if a.budget_exceeded { "quadrature_budget" } else { "quadrature_error" }.into()),
                }
                if let Some(lb) = &a.lower_bound {
                    match lb {
                        Ok(x) => row.lower_bound = Some(*x),
                        Err(_) => row.flags.push("lower_bound_error".into()),
                    }
                }
            }
            if let Some(s) = simulated {
                let e = s.estimates[i];
                row.mc_mean = Some(e.mean);
                row.mc_stderr = Some(e.std_error);
            }
            row
        })
        .collect()
}

/// Per-batch rows: the batch mean and standard error at every grid point,
/// tagged `batch=<index>`.
pub fn batch_rows(scenario: &Scenario, simulated: &Simulated) -> Vec<Row> {
    let values = scenario.axis.values();
    let seed = scenario.sim.map_or(0, |s| s.seed);
    let mut out = Vec::new();
    for (b, tallies) in simulated.batches.iter().enumerate() {
        for (v, t) in values.iter().zip(tallies) {
            let e = t.estimate(seed);
            let mut row = Row::new(scenario.axis.name, *v);
            row.mc_mean = Some(e.mean);
            row.mc_stderr = Some(e.std_error);
            row.flags.push(format!("batch={b}"));
            out.push(row);
        }
    }
    out
}

/// Verdict of one compared grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub tolerance: f64,
    pub pass: bool,
}

/// `|analytic − MC| ≤ max(atol, 3·SE)`; a point missing either side fails.
pub fn judge(row: &Row, atol: f64) -> Verdict {
    match (row.analytic, row.mc_mean, row.mc_stderr) {
        (Some(a), Some(m), Some(se)) => {
            let tolerance = atol.max(3.0 * se);
            Verdict {
                tolerance,
                pass: (a - m).abs() <= tolerance,
            }
        }
        _ => Verdict {
            tolerance: atol,
            pass: false,
        },
    }
}
