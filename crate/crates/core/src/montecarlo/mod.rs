//! Seeded Monte Carlo simulator for the single- and multi-cluster models.
//!
//! Trials are split into fixed-size batches. Batch `i` draws from a ChaCha8
//! stream keyed by `(seed, i)`, batches run in parallel on the current rayon
//! pool, and their tallies are merged in batch order. The estimates are
//! therefore bit-identical for any number of worker threads.
//!
//! Multi-cluster realizations keep every transmitter within the truncation
//! radius `R_I` of the receiver (parents are drawn in a window dilated by
//! `D + R_I`). Transmitters beyond `R_I` are replaced by their mean
//! interference, see [`far_field_mean`].

mod sampling;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{ChannelModel, ModelError, MultiClusterParams, SingleClusterGeometry, Strategy};

pub use sampling::{
    nearest, path_loss, realize_sinr, sample_fhppp, sample_fhppp_into, sample_mcp, sample_mcp_into, uniform_in_disk,
    Fading, PointPattern,
};
use sampling::norm2;

/// Fewest accepted samples a conditional estimator will report on.
pub const MIN_ACCEPTED: u64 = 100;

/// Relative half-width of the serving-distance band used by conditional
/// estimators.
pub const CONDITIONING_BAND: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("only {accepted} samples accepted, at least {required} needed")]
    InsufficientSamples { accepted: u64, required: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub type Result<T> = std::result::Result<T, SimError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n_trials: u64,
    pub seed: u64,
    pub batch_size: u64,
    /// Radius `R_I` around the receiver within which transmitters are
    /// simulated individually.
    pub interference_truncation_radius: f64,
    /// Extra radius of the parent window; `None` means `D + R_I`.
    pub window_dilation: Option<f64>,
    pub fading: Fading,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_trials: 100_000,
            seed: 1,
            batch_size: 10_000,
            interference_truncation_radius: 300.0,
            window_dilation: None,
            fading: Fading::Rayleigh,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(SimError::InvalidConfig("n_trials must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(SimError::InvalidConfig("batch_size must be positive".into()));
        }
        let r = self.interference_truncation_radius;
        if !(r > 0.0 && r.is_finite()) {
            return Err(SimError::InvalidConfig(format!("truncation radius {r} must be positive")));
        }
        if let Some(w) = self.window_dilation {
            if !(w > 0.0 && w.is_finite()) {
                return Err(SimError::InvalidConfig(format!("window dilation {w} must be positive")));
            }
        }
        Ok(())
    }

    /// Checks the multi-cluster specific requirements: the parent window
    /// covers every cluster reaching `b(o, R_I)`, and the far-field
    /// fluctuation dropped by the mean-field term is negligible next to the
    /// noise.
    pub fn validate_multi(&self, params: &MultiClusterParams, channel: &ChannelModel) -> Result<()> {
        self.validate()?;
        let r = self.interference_truncation_radius;
        let dilation = self.dilation(params);
        if dilation < params.radius + r {
            return Err(SimError::InvalidConfig(format!(
                "window dilation {dilation} is smaller than D + R_I = {}",
                params.radius + r
            )));
        }
        if r <= params.radius {
            return Err(SimError::InvalidConfig(format!(
                "truncation radius {r} must exceed the cluster radius {}",
                params.radius
            )));
        }
        let std = far_field_std_bound(params, channel.alpha, r);
        let limit = FAR_FIELD_STD_FRACTION * channel.sigma2.max(1e-4);
        if std > limit {
            return Err(SimError::InvalidConfig(format!(
                "far-field fluctuation bound {std:e} beyond R_I = {r} exceeds {limit:e}; increase the truncation radius"
            )));
        }
        Ok(())
    }

    pub fn dilation(&self, params: &MultiClusterParams) -> f64 {
        self.window_dilation
            .unwrap_or(params.radius + self.interference_truncation_radius)
    }

    pub fn n_batches(&self) -> u64 {
        self.n_trials.div_ceil(self.batch_size)
    }

    /// A copy with a different trial count.
    pub fn with_trials(&self, n_trials: u64) -> Self {
        Self { n_trials, ..*self }
    }
}

/// Largest far-field standard deviation accepted, as a fraction of `σ²`
/// (of `10⁻⁴` when the noise is smaller).
pub const FAR_FIELD_STD_FRACTION: f64 = 0.03;

/// Mean interference from transmitters beyond `r_i`:
/// `λ_p λπD² · 2π r_i^{2−α} / (α − 2)`.
pub fn far_field_mean(params: &MultiClusterParams, alpha: f64, r_i: f64) -> f64 {
    params.intensity() * 2.0 * PI * r_i.powf(2.0 - alpha) / (alpha - 2.0)
}

/// Upper bound on the standard deviation of the interference from
/// transmitters beyond `r_i` under unit-mean Rayleigh fading.
///
/// A cluster whose centre is at distance `u` adds at most
/// `(2n̄ + n̄²) m(u)^{2}` to the variance, with `n̄ = λπD²` and `m(u)` the
/// largest path gain of its points beyond `r_i`.
pub fn far_field_std_bound(params: &MultiClusterParams, alpha: f64, r_i: f64) -> f64 {
    let n = params.cluster_mean();
    let big = params.radius;
    let ring = PI * ((r_i + big).powi(2) - (r_i - big).max(0.0).powi(2)) * r_i.powf(-2.0 * alpha);
    let beyond = 2.0 * PI
        * (r_i.powf(2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0) + big * r_i.powf(1.0 - 2.0 * alpha) / (2.0 * alpha - 1.0));
    (params.lambda_p * (2.0 * n + n * n) * (ring + beyond)).sqrt()
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithCI {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
    pub seed: u64,
}

impl EstimateWithCI {
    /// `true` when `value` lies within `k` standard errors, or within `atol`.
    pub fn agrees_with(&self, value: f64, k: f64, atol: f64) -> bool {
        (self.mean - value).abs() <= (k * self.std_error).max(atol)
    }
}

/// A conditional estimate together with how many trials survived the
/// conditioning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalEstimate {
    pub estimate: EstimateWithCI,
    pub accepted: u64,
    pub acceptance_rate: f64,
    /// Accepted serving distances.
    pub band: (f64, f64),
}

/// Running count, sum and sum of squares.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Tally {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Tally {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &Tally) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn estimate(&self, seed: u64) -> EstimateWithCI {
        if self.n == 0 {
            return EstimateWithCI {
                mean: f64::NAN,
                std_error: f64::NAN,
                n: 0,
                seed,
            };
        }
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = if self.n > 1 {
            ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        EstimateWithCI {
            mean,
            std_error: (var / n).sqrt(),
            n: self.n,
            seed,
        }
    }
}

fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

/// Runs `trial` `sim.n_trials` times, one private RNG stream per batch, and
/// returns the per-batch results in batch order.
fn run_batches<T, F>(sim: &SimConfig, init: impl Fn() -> T + Sync, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, &mut T) + Sync,
{
    let n_batches = sim.n_batches();
    (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = batch_rng(sim.seed, b);
            let count = sim.batch_size.min(sim.n_trials - b * sim.batch_size);
            let mut acc = init();
            for _ in 0..count {
                trial(&mut rng, &mut acc);
            }
            acc
        })
        .collect()
}

/// Coverage at several thresholds plus the ergodic rate, from one set of
/// realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageSweep {
    pub betas: Vec<f64>,
    pub coverage: Vec<EstimateWithCI>,
    /// `E[log₂(1 + SINR)]`, counting an empty cluster as zero rate.
    pub spectral_efficiency: EstimateWithCI,
    /// Per-batch tallies: one per threshold, then the rate.
    pub batches: Vec<Vec<Tally>>,
}

#[derive(Debug, Clone)]
struct SweepTally {
    coverage: Vec<Tally>,
    rate: Tally,
}

impl SweepTally {
    fn new(k: usize) -> Self {
        Self {
            coverage: vec![Tally::default(); k],
            rate: Tally::default(),
        }
    }

    fn record(&mut self, betas: &[f64], sinr: Option<f64>) {
        match sinr {
            Some(x) => {
                for (t, &b) in self.coverage.iter_mut().zip(betas) {
                    t.push(if x > b { 1.0 } else { 0.0 });
                }
                self.rate.push(x.ln_1p() / std::f64::consts::LN_2);
            }
            None => {
                for t in &mut self.coverage {
                    t.push(0.0);
                }
                self.rate.push(0.0);
            }
        }
    }
}

fn finish_sweep(betas: &[f64], batches: Vec<SweepTally>, seed: u64) -> CoverageSweep {
    let mut total = SweepTally::new(betas.len());
    let mut per_batch = Vec::with_capacity(batches.len());
    for b in &batches {
        for (t, bt) in total.coverage.iter_mut().zip(&b.coverage) {
            t.merge(bt);
        }
        total.rate.merge(&b.rate);
        let mut row = b.coverage.clone();
        row.push(b.rate);
        per_batch.push(row);
    }
    CoverageSweep {
        betas: betas.to_vec(),
        coverage: total.coverage.iter().map(|t| t.estimate(seed)).collect(),
        spectral_efficiency: total.rate.estimate(seed),
        batches: per_batch,
    }
}

fn check_betas(betas: &[f64]) -> Result<()> {
    if betas.iter().any(|b| !(*b >= 0.0)) {
        return Err(SimError::InvalidConfig("thresholds must be non-negative".into()));
    }
    Ok(())
}

/// Single-cluster coverage for both strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleClusterEstimates {
    pub closest: CoverageSweep,
    pub uniform: CoverageSweep,
}

/// Simulates the single-cluster model once per trial and scores both
/// selection strategies on the same realization.
pub fn estimate_single_cluster(
    g: &SingleClusterGeometry,
    channel: &ChannelModel,
    betas: &[f64],
    sim: &SimConfig,
) -> Result<SingleClusterEstimates> {
    g.validate()?;
    channel.validate()?;
    sim.validate()?;
    check_betas(betas)?;
    let k = betas.len();
    let center = [g.d, 0.0];
    let none = PointPattern::new();
    let batches = run_batches(
        sim,
        || (SweepTally::new(k), SweepTally::new(k), PointPattern::new()),
        |rng, (closest, uniform, pattern)| {
            pattern.clear();
            sample_fhppp_into(g.lambda, center, g.radius, rng, &mut pattern.points);
            let c = realize_sinr(pattern, &none, Strategy::Closest, channel, sim.fading, 0.0, rng);
            let u = realize_sinr(pattern, &none, Strategy::Uniform, channel, sim.fading, 0.0, rng);
            closest.record(betas, c);
            uniform.record(betas, u);
        },
    );
    let (c, u): (Vec<_>, Vec<_>) = batches.into_iter().map(|(c, u, _)| (c, u)).unzip();
    Ok(SingleClusterEstimates {
        closest: finish_sweep(betas, c, sim.seed),
        uniform: finish_sweep(betas, u, sim.seed),
    })
}

/// Closed-access (both strategies) and open-access coverage.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiClusterEstimates {
    pub closed_closest: CoverageSweep,
    pub closed_uniform: CoverageSweep,
    pub open_access: CoverageSweep,
}

#[derive(Debug, Default)]
struct MultiScratch {
    representative: PointPattern,
    network: PointPattern,
}

/// Rayleigh(`sigma`) draw by inversion.
fn rayleigh<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    sigma * (-2.0 * (1.0 - u).ln()).sqrt()
}

/// Simulates the cluster network once per trial. The same realization
/// scores the closed-access receiver (an extra cluster at a Rayleigh offset,
/// both strategies) and the open-access receiver (nearest point of the
/// network without that extra cluster).
pub fn estimate_multi_cluster(
    params: &MultiClusterParams,
    channel: &ChannelModel,
    betas: &[f64],
    sim: &SimConfig,
) -> Result<MultiClusterEstimates> {
    params.validate()?;
    channel.validate()?;
    sim.validate_multi(params, channel)?;
    check_betas(betas)?;
    let k = betas.len();
    let r_i = sim.interference_truncation_radius;
    let dilation = sim.dilation(params);
    let far = far_field_mean(params, channel.alpha, r_i);
    let none = PointPattern::new();
    let batches = run_batches(
        sim,
        || {
            (
                [SweepTally::new(k), SweepTally::new(k), SweepTally::new(k)],
                MultiScratch::default(),
            )
        },
        |rng, (tallies, scratch)| {
            scratch.representative.clear();
            scratch.network.clear();
            let v = rayleigh(params.sigma_c, rng);
            sample_fhppp_into(params.lambda, [v, 0.0], params.radius, rng, &mut scratch.representative.points);
            sample_mcp_into(params, 0.0, dilation, r_i, rng, &mut scratch.network.points);
            let cc = realize_sinr(
                &scratch.representative,
                &scratch.network,
                Strategy::Closest,
                channel,
                sim.fading,
                far,
                rng,
            );
            let cu = realize_sinr(
                &scratch.representative,
                &scratch.network,
                Strategy::Uniform,
                channel,
                sim.fading,
                far,
                rng,
            );
            let oa = realize_sinr(&scratch.network, &none, Strategy::Closest, channel, sim.fading, far, rng);
            tallies[0].record(betas, cc);
            tallies[1].record(betas, cu);
            tallies[2].record(betas, oa);
        },
    );
    let mut cc = Vec::with_capacity(batches.len());
    let mut cu = Vec::with_capacity(batches.len());
    let mut oa = Vec::with_capacity(batches.len());
    for ([a, b, c], _) in batches {
        cc.push(a);
        cu.push(b);
        oa.push(c);
    }
    Ok(MultiClusterEstimates {
        closed_closest: finish_sweep(betas, cc, sim.seed),
        closed_uniform: finish_sweep(betas, cu, sim.seed),
        open_access: finish_sweep(betas, oa, sim.seed),
    })
}

/// A receiver setting whose coverage can be simulated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    SingleCluster {
        geometry: SingleClusterGeometry,
        channel: ChannelModel,
        strategy: Strategy,
    },
    ClosedAccess {
        params: MultiClusterParams,
        channel: ChannelModel,
        strategy: Strategy,
    },
    OpenAccess {
        params: MultiClusterParams,
        channel: ChannelModel,
    },
}

/// Coverage sweep for one scenario.
pub fn estimate_coverage_sweep(scenario: &Scenario, betas: &[f64], sim: &SimConfig) -> Result<CoverageSweep> {
    match *scenario {
        Scenario::SingleCluster {
            geometry,
            channel,
            strategy,
        } => {
            let e = estimate_single_cluster(&geometry, &channel, betas, sim)?;
            Ok(match strategy {
                Strategy::Closest => e.closest,
                Strategy::Uniform => e.uniform,
            })
        }
        Scenario::ClosedAccess {
            params,
            channel,
            strategy,
        } => {
            let e = estimate_multi_cluster(&params, &channel, betas, sim)?;
            Ok(match strategy {
                Strategy::Closest => e.closed_closest,
                Strategy::Uniform => e.closed_uniform,
            })
        }
        Scenario::OpenAccess { params, channel } => Ok(estimate_multi_cluster(&params, &channel, betas, sim)?.open_access),
    }
}

/// `P(SINR > β)` for one scenario.
pub fn estimate_coverage(scenario: &Scenario, beta: f64, sim: &SimConfig) -> Result<EstimateWithCI> {
    Ok(estimate_coverage_sweep(scenario, &[beta], sim)?.coverage[0])
}

/// `E[log₂(1 + SINR)]` for one scenario, zero rate without a serving
/// transmitter.
pub fn estimate_spectral_efficiency(scenario: &Scenario, sim: &SimConfig) -> Result<EstimateWithCI> {
    Ok(estimate_coverage_sweep(scenario, &[], sim)?.spectral_efficiency)
}

/// The interference whose Laplace transform [`estimate_lt`] targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LtTarget {
    /// Single cluster, closest selection, serving distance near `r_c`.
    SingleClosest {
        geometry: SingleClusterGeometry,
        channel: ChannelModel,
        r_c: f64,
    },
    /// Single cluster, uniform selection, given a non-empty cluster.
    SingleUniform {
        geometry: SingleClusterGeometry,
        channel: ChannelModel,
    },
    /// Every transmitter of the cluster network.
    InterCluster {
        params: MultiClusterParams,
        channel: ChannelModel,
    },
    /// Network minus its nearest point, given that point is near `r_t`.
    TotalGivenContact {
        params: MultiClusterParams,
        channel: ChannelModel,
        r_t: f64,
    },
}

/// `E[exp(−s Σ h ℓ)]` over interferers with given squared distances. Under
/// Rayleigh fading the fading average is taken in closed form,
/// `Π 1/(1 + s ℓ)`.
fn laplace_sample<R: Rng + ?Sized>(
    r2s: impl Iterator<Item = f64>,
    s: f64,
    alpha: f64,
    fading: Fading,
    extra: f64,
    rng: &mut R,
) -> f64 {
    match fading {
        Fading::Rayleigh => {
            let mut log = -s * extra;
            for r2 in r2s {
                log -= (s * path_loss(r2, alpha)).ln_1p();
            }
            log.exp()
        }
        Fading::Unit => {
            let mut i = extra;
            for r2 in r2s {
                i += fading.sample(rng) * path_loss(r2, alpha);
            }
            (-s * i).exp()
        }
    }
}

#[derive(Debug, Default)]
struct LtTally {
    tally: Tally,
    pattern: PointPattern,
}

/// Monte Carlo estimate of an interference Laplace transform at `s`.
/// Conditional targets accept trials whose serving distance falls within
/// [`CONDITIONING_BAND`] of the requested one.
pub fn estimate_lt(target: &LtTarget, s: f64, sim: &SimConfig) -> Result<ConditionalEstimate> {
    sim.validate()?;
    if !(s >= 0.0 && s.is_finite()) {
        return Err(SimError::InvalidConfig(format!("s = {s} must be finite and non-negative")));
    }
    let band_of = |r: f64| ((1.0 - CONDITIONING_BAND) * r, (1.0 + CONDITIONING_BAND) * r);
    let (band, batches) = match *target {
        LtTarget::SingleClosest { geometry: g, channel, r_c } => {
            g.validate()?;
            channel.validate()?;
            let band = band_of(r_c);
            let (lo2, hi2) = (band.0 * band.0, band.1 * band.1);
            let out = run_batches(sim, LtTally::default, |rng, acc| {
                acc.pattern.clear();
                sample_fhppp_into(g.lambda, [g.d, 0.0], g.radius, rng, &mut acc.pattern.points);
                let Some(k) = nearest(&acc.pattern.points) else { return };
                let r2 = norm2(acc.pattern.points[k]);
                if r2 < lo2 || r2 > hi2 {
                    return;
                }
                let others = acc.pattern.points.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| norm2(*p));
                let x = laplace_sample(others, s, channel.alpha, sim.fading, 0.0, rng);
                acc.tally.push(x);
            });
            (band, out)
        }
        LtTarget::SingleUniform { geometry: g, channel } => {
            g.validate()?;
            channel.validate()?;
            let out = run_batches(sim, LtTally::default, |rng, acc| {
                acc.pattern.clear();
                sample_fhppp_into(g.lambda, [g.d, 0.0], g.radius, rng, &mut acc.pattern.points);
                if acc.pattern.is_empty() {
                    return;
                }
                let k = rng.random_range(0..acc.pattern.len());
                let others = acc.pattern.points.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| norm2(*p));
                let x = laplace_sample(others, s, channel.alpha, sim.fading, 0.0, rng);
                acc.tally.push(x);
            });
            ((0.0, f64::INFINITY), out)
        }
        LtTarget::InterCluster { params, channel } => {
            params.validate()?;
            channel.validate()?;
            sim.validate_multi(&params, &channel)?;
            let r_i = sim.interference_truncation_radius;
            let dilation = sim.dilation(&params);
            let far = far_field_mean(&params, channel.alpha, r_i);
            let out = run_batches(sim, LtTally::default, |rng, acc| {
                acc.pattern.clear();
                sample_mcp_into(&params, 0.0, dilation, r_i, rng, &mut acc.pattern.points);
                let x = laplace_sample(acc.pattern.points.iter().map(|p| norm2(*p)), s, channel.alpha, sim.fading, far, rng);
                acc.tally.push(x);
            });
            ((0.0, f64::INFINITY), out)
        }
        LtTarget::TotalGivenContact { params, channel, r_t } => {
            params.validate()?;
            channel.validate()?;
            sim.validate_multi(&params, &channel)?;
            let r_i = sim.interference_truncation_radius;
            let dilation = sim.dilation(&params);
            let far = far_field_mean(&params, channel.alpha, r_i);
            let band = band_of(r_t);
            let (lo2, hi2) = (band.0 * band.0, band.1 * band.1);
            let out = run_batches(sim, LtTally::default, |rng, acc| {
                acc.pattern.clear();
                sample_mcp_into(&params, 0.0, dilation, r_i, rng, &mut acc.pattern.points);
                let Some(k) = nearest(&acc.pattern.points) else { return };
                let r2 = norm2(acc.pattern.points[k]);
                if r2 < lo2 || r2 > hi2 {
                    return;
                }
                let others = acc.pattern.points.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| norm2(*p));
                let x = laplace_sample(others, s, channel.alpha, sim.fading, far, rng);
                acc.tally.push(x);
            });
            (band, out)
        }
    };
    let mut total = Tally::default();
    for b in &batches {
        total.merge(&b.tally);
    }
    if total.n < MIN_ACCEPTED {
        return Err(SimError::InsufficientSamples {
            accepted: total.n,
            required: MIN_ACCEPTED,
        });
    }
    Ok(ConditionalEstimate {
        estimate: total.estimate(sim.seed),
        accepted: total.n,
        acceptance_rate: total.n as f64 / sim.n_trials as f64,
        band,
    })
}

/// Empirical CDF of the distance from the origin to the nearest point of the
/// cluster network, at each radius of `r_grid`.
pub fn estimate_contact_cdf(params: &MultiClusterParams, r_grid: &[f64], sim: &SimConfig) -> Result<Vec<EstimateWithCI>> {
    params.validate()?;
    sim.validate()?;
    if r_grid.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
        return Err(SimError::InvalidConfig("contact radii must be finite and non-negative".into()));
    }
    let r_max = r_grid.iter().copied().fold(0.0, f64::max);
    let k = r_grid.len();
    let batches = run_batches(
        sim,
        || (vec![Tally::default(); k], PointPattern::new()),
        |rng, (tallies, pattern)| {
            pattern.clear();
            // Only clusters centred within r_max + D can reach b(o, r_max).
            sample_mcp_into(params, r_max, params.radius, r_max, rng, &mut pattern.points);
            let r = nearest(&pattern.points).map_or(f64::INFINITY, |i| norm2(pattern.points[i]).sqrt());
            for (t, &g) in tallies.iter_mut().zip(r_grid) {
                t.push(if r <= g { 1.0 } else { 0.0 });
            }
        },
    );
    let mut total = vec![Tally::default(); k];
    for (b, _) in &batches {
        for (t, bt) in total.iter_mut().zip(b) {
            t.merge(bt);
        }
    }
    Ok(total.iter().map(|t| t.estimate(sim.seed)).collect())
}
