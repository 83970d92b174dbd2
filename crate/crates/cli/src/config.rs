//! JSON scenario files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sgcov::montecarlo::{Fading, SimConfig};
use sgcov::multi_cluster::OpenAccessModel;
use sgcov::{db_to_linear, ChannelModel, MultiClusterParams, QuadratureSettings, SingleClusterGeometry, Strategy};
use thiserror::Error;

/// Environment variable that replaces the bundled scenario directory.
pub const SCENARIO_DIR_ENV: &str = "SGCOV_SCENARIO_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("scenario not found: {0}")]
    NotFound(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Invalid(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    SingleCluster,
    MultiClusterClosed,
    MultiClusterOpen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    #[default]
    Coverage,
    SpectralEfficiency,
    ContactCdf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyName {
    Closest,
    Uniform,
}

impl From<StrategyName> for Strategy {
    fn from(s: StrategyName) -> Self {
        match s {
            StrategyName::Closest => Strategy::Closest,
            StrategyName::Uniform => Strategy::Uniform,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OpenAccessName {
    #[default]
    Conditioned,
    Unconditioned,
}

impl From<OpenAccessName> for OpenAccessModel {
    fn from(m: OpenAccessName) -> Self {
        match m {
            OpenAccessName::Conditioned => OpenAccessModel::Conditioned,
            OpenAccessName::Unconditioned => OpenAccessModel::Unconditioned,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    BetaDb,
    Delta,
    DeltaC,
    Alpha,
    R,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::BetaDb => "beta_db",
            AxisName::Delta => "delta",
            AxisName::DeltaC => "delta_c",
            AxisName::Alpha => "alpha",
            AxisName::R => "r",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    #[serde(default = "defaults::abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "defaults::rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "defaults::max_subdivisions")]
    pub max_subdivisions: usize,
    #[serde(default = "defaults::tail_tol")]
    pub tail_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        let q = QuadratureSettings::default();
        Self {
            abs_tol: q.abs_tol,
            rel_tol: q.rel_tol,
            max_subdivisions: q.max_subdivisions,
            tail_tol: q.tail_tol,
        }
    }
}

impl From<QuadratureSpec> for QuadratureSettings {
    fn from(q: QuadratureSpec) -> Self {
        QuadratureSettings {
            abs_tol: q.abs_tol,
            rel_tol: q.rel_tol,
            max_subdivisions: q.max_subdivisions,
            tail_tol: q.tail_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSpec {
    pub n_trials: u64,
    #[serde(default = "defaults::seed")]
    pub seed: u64,
    #[serde(default = "defaults::batch_size")]
    pub batch_size: u64,
    #[serde(default = "defaults::truncation")]
    pub interference_truncation_radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_dilation: Option<f64>,
    /// Path-loss exponent used by the simulator only. Exists to build
    /// negative controls; leave unset otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_override: Option<f64>,
}

impl SimSpec {
    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            n_trials: self.n_trials,
            seed: self.seed,
            batch_size: self.batch_size,
            interference_truncation_radius: self.interference_truncation_radius,
            window_dilation: self.window_dilation,
            fading: Fading::Rayleigh,
        }
    }
}

mod defaults {
    use sgcov::montecarlo::SimConfig;
    use sgcov::QuadratureSettings;

    pub fn abs_tol() -> f64 {
        QuadratureSettings::default().abs_tol
    }
    pub fn rel_tol() -> f64 {
        QuadratureSettings::default().rel_tol
    }
    pub fn max_subdivisions() -> usize {
        QuadratureSettings::default().max_subdivisions
    }
    pub fn tail_tol() -> f64 {
        QuadratureSettings::default().tail_tol
    }
    pub fn seed() -> u64 {
        SimConfig::default().seed
    }
    pub fn batch_size() -> u64 {
        SimConfig::default().batch_size
    }
    pub fn truncation() -> f64 {
        SimConfig::default().interference_truncation_radius
    }
    pub fn lambda() -> f64 {
        0.01
    }
    pub fn radius() -> f64 {
        15.0
    }
    pub fn sigma2() -> f64 {
        1e-4
    }
}

/// One scenario file. Fixed parameters give the value used when they are
/// not the swept axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    pub kind: Kind,
    #[serde(default)]
    pub quantity: Quantity,
    #[serde(default = "defaults::lambda")]
    pub lambda: f64,
    #[serde(default = "defaults::radius")]
    pub radius: f64,
    /// Receiver offset over `D` (single cluster).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_p: Option<f64>,
    /// Receiver spread `σ_c` over `D` (closed access).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default = "defaults::sigma2")]
    pub sigma2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategyName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_db: Option<f64>,
    /// Also emit the closed-form lower bound (single cluster coverage).
    #[serde(default)]
    pub lower_bound: bool,
    #[serde(default)]
    pub open_access_model: OpenAccessName,
    pub axis: Axis,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimSpec>,
}

/// Every model input at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub axis_value: f64,
    pub beta: f64,
    pub channel: ChannelModel,
    pub single: Option<SingleClusterGeometry>,
    pub multi: Option<MultiClusterParams>,
    pub strategy: Strategy,
}

impl Scenario {
    pub fn from_json(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let scenario: Scenario = serde_json::from_str(text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, path)
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy.map_or(Strategy::Closest, Strategy::from)
    }

    pub fn quadrature_settings(&self) -> QuadratureSettings {
        self.quadrature.into()
    }

    fn fixed(&self, name: &str, value: Option<f64>, axis: AxisName) -> Result<Option<f64>, ConfigError> {
        match value {
            Some(v) => Ok(Some(v)),
            None if self.axis.name == axis => Ok(None),
            None => invalid(format!("`{name}` is required unless it is the swept axis")),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let axis = self.axis;
        if axis.n_points < 2 {
            return invalid("axis.n_points must be at least 2");
        }
        if !(axis.min.is_finite() && axis.max.is_finite() && axis.min <= axis.max) {
            return invalid("axis needs finite min <= max");
        }
        let allowed: &[AxisName] = match (self.quantity, self.kind) {
            (Quantity::ContactCdf, Kind::SingleCluster) => {
                return invalid("contact_cdf needs a multi-cluster scenario");
            }
            (Quantity::ContactCdf, _) => &[AxisName::R],
            (Quantity::SpectralEfficiency, Kind::SingleCluster) => &[AxisName::Delta, AxisName::Alpha],
            (Quantity::SpectralEfficiency, _) => {
                return invalid("spectral_efficiency is available for single_cluster scenarios");
            }
            (Quantity::Coverage, Kind::SingleCluster) => &[AxisName::BetaDb, AxisName::Delta, AxisName::Alpha],
            (Quantity::Coverage, Kind::MultiClusterClosed) => &[AxisName::BetaDb, AxisName::DeltaC, AxisName::Alpha],
            (Quantity::Coverage, Kind::MultiClusterOpen) => &[AxisName::BetaDb, AxisName::Alpha],
        };
        if !allowed.contains(&axis.name) {
            return invalid(format!(
                "axis `{}` does not apply to {:?} {:?}",
                axis.name.as_str(),
                self.kind,
                self.quantity
            ));
        }
        if self.kind == Kind::MultiClusterOpen && self.strategy == Some(StrategyName::Uniform) {
            return invalid("open-access receivers only use closest selection");
        }
        if self.lower_bound && !(self.kind == Kind::SingleCluster && self.quantity == Quantity::Coverage) {
            return invalid("lower_bound is available for single-cluster coverage only");
        }
        if self.quantity == Quantity::Coverage {
            self.fixed("beta_db", self.beta_db, AxisName::BetaDb)?;
        }
        if self.quantity != Quantity::ContactCdf {
            self.fixed("alpha", self.alpha, AxisName::Alpha)?;
        }
        match self.kind {
            Kind::SingleCluster => {
                self.fixed("delta", self.delta, AxisName::Delta)?;
            }
            Kind::MultiClusterClosed if self.quantity == Quantity::Coverage => {
                self.fixed("delta_c", self.delta_c, AxisName::DeltaC)?;
            }
            _ => {}
        }
        if matches!(self.kind, Kind::MultiClusterOpen | Kind::MultiClusterClosed) && self.lambda_p.is_none() {
            return invalid("`lambda_p` is required for multi-cluster scenarios");
        }
        if let Some(sim) = &self.sim {
            if sim.n_trials == 0 || sim.batch_size == 0 {
                return invalid("sim.n_trials and sim.batch_size must be positive");
            }
        }
        if let Err(e) = self.quadrature_settings().validate() {
            return invalid(e.to_string());
        }
        // Building every point surfaces range errors (negative radii,
        // alpha <= 2, ...) before any work starts.
        for v in axis.values() {
            self.point(v)?;
        }
        Ok(())
    }

    /// Model inputs at axis value `v`.
    pub fn point(&self, v: f64) -> Result<Point, ConfigError> {
        let on = |a: AxisName, fixed: Option<f64>| if self.axis.name == a { v } else { fixed.unwrap_or(f64::NAN) };
        let bad = |e: sgcov::ModelError| ConfigError::Invalid(e.to_string());
        let alpha = if self.quantity == Quantity::ContactCdf {
            self.alpha.unwrap_or(4.0)
        } else {
            on(AxisName::Alpha, self.alpha)
        };
        let channel = ChannelModel::new(alpha, self.sigma2).map_err(bad)?;
        let beta = if self.quantity == Quantity::Coverage {
            db_to_linear(on(AxisName::BetaDb, self.beta_db))
        } else {
            f64::NAN
        };
        let (single, multi) = match self.kind {
            Kind::SingleCluster => {
                let d = on(AxisName::Delta, self.delta) * self.radius;
                (Some(SingleClusterGeometry::new(self.lambda, self.radius, d).map_err(bad)?), None)
            }
            Kind::MultiClusterClosed | Kind::MultiClusterOpen => {
                let lambda_p = self.lambda_p.unwrap_or(f64::NAN);
                // σ_c is irrelevant to open access and to the contact law;
                // any positive value keeps the parameter set valid.
                let delta_c = match self.kind {
                    Kind::MultiClusterClosed if self.quantity == Quantity::Coverage => on(AxisName::DeltaC, self.delta_c),
                    _ => self.delta_c.unwrap_or(1.0),
                };
                let p = MultiClusterParams::new(lambda_p, self.lambda, self.radius, delta_c * self.radius).map_err(bad)?;
                (None, Some(p))
            }
        };
        Ok(Point {
            axis_value: v,
            beta,
            channel,
            single,
            multi,
            strategy: self.strategy(),
        })
    }
}

/// Directory searched for bare scenario names.
pub fn scenario_dir() -> PathBuf {
    match std::env::var_os(SCENARIO_DIR_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios"),
    }
}

/// Resolves `--config`: an existing path, or a name (with or without
/// `.json`) inside [`scenario_dir`].
pub fn resolve(config: &str) -> Result<PathBuf, ConfigError> {
    let direct = PathBuf::from(config);
    if direct.is_file() {
        return Ok(direct);
    }
    let dir = scenario_dir();
    for candidate in [dir.join(config), dir.join(format!("{config}.json"))] {
        if candidate.is_file() {
            return Ok(candidate);
        }
    }
    Err(ConfigError::NotFound(config.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Scenario, ConfigError> {
        Scenario::from_json(text, Path::new("test.json"))
    }

    #[test]
    fn minimal_single_cluster() {
        let s = parse(
            r#"{"kind":"single_cluster","delta":0.5,"alpha":4,"strategy":"uniform",
                "axis":{"name":"beta_db","min":-10,"max":10,"n_points":3}}"#,
        )
        .unwrap();
        assert_eq!(s.axis.values(), vec![-10.0, 0.0, 10.0]);
        let p = s.point(10.0).unwrap();
        assert!((p.beta - 10.0).abs() < 1e-12);
        assert_eq!(p.single.unwrap().d, 7.5);
        assert_eq!(p.strategy, Strategy::Uniform);
    }

    #[test]
    fn rejects_bad_inputs() {
        let cases = [
            // one-point grid
            r#"{"kind":"single_cluster","delta":0.5,"alpha":4,"axis":{"name":"beta_db","min":0,"max":0,"n_points":1}}"#,
            // missing fixed delta
            r#"{"kind":"single_cluster","alpha":4,"axis":{"name":"beta_db","min":0,"max":1,"n_points":2}}"#,
            // axis that does not apply
            r#"{"kind":"multi_cluster_open","lambda_p":4e-4,"alpha":4,"axis":{"name":"delta","min":0,"max":1,"n_points":2}}"#,
            // uniform open access
            r#"{"kind":"multi_cluster_open","lambda_p":4e-4,"alpha":4,"strategy":"uniform","beta_db":0,"axis":{"name":"alpha","min":3,"max":4,"n_points":2}}"#,
            // alpha out of range
            r#"{"kind":"single_cluster","delta":0.5,"beta_db":0,"axis":{"name":"alpha","min":2,"max":4,"n_points":2}}"#,
            // unknown field
            r#"{"kind":"single_cluster","delta":0.5,"alpha":4,"colour":1,"axis":{"name":"beta_db","min":0,"max":1,"n_points":2}}"#,
        ];
        for c in cases {
            assert!(parse(c).is_err(), "{c}");
        }
    }

    #[test]
    fn contact_cdf_needs_only_cluster_params() {
        let s = parse(
            r#"{"kind":"multi_cluster_open","quantity":"contact_cdf","lambda_p":4e-4,
                "axis":{"name":"r","min":1,"max":40,"n_points":5}}"#,
        )
        .unwrap();
        assert!(s.point(5.0).unwrap().multi.is_some());
    }
}
