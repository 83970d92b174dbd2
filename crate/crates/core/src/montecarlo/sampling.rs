//! Point-pattern samplers and per-realization SINR.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use crate::model::{ChannelModel, MultiClusterParams, Strategy};

/// Transmitter positions in metres, receiver at the origin.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointPattern {
    pub points: Vec<[f64; 2]>,
}

impl PointPattern {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn clear(&mut self) {
        self.points.clear();
    }
}

/// Small-scale fading of every link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fading {
    /// Unit-mean exponential power gain.
    Rayleigh,
    /// Deterministic unit gain, for hand-checkable tests.
    Unit,
}

impl Fading {
    #[inline]
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            Fading::Rayleigh => Exp1.sample(rng),
            Fading::Unit => 1.0,
        }
    }
}

/// `Poisson(mean)` draw; zero for a non-positive mean.
pub(crate) fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    match Poisson::new(mean) {
        Ok(p) => {
            let k: f64 = p.sample(rng);
            k as u64
        }
        Err(_) => 0,
    }
}

/// Uniform point on the disk of radius `radius` centred at `center`.
#[inline]
pub fn uniform_in_disk<R: Rng + ?Sized>(center: [f64; 2], radius: f64, rng: &mut R) -> [f64; 2] {
    let r = radius * rng.random::<f64>().sqrt();
    let (sin, cos) = (2.0 * PI * rng.random::<f64>()).sin_cos();
    [center[0] + r * cos, center[1] + r * sin]
}

/// Appends a finite Poisson process of intensity `lambda` on
/// `b(center, radius)` to `out`.
pub fn sample_fhppp_into<R: Rng + ?Sized>(
    lambda: f64,
    center: [f64; 2],
    radius: f64,
    rng: &mut R,
    out: &mut Vec<[f64; 2]>,
) {
    let n = poisson(lambda * PI * radius * radius, rng);
    out.reserve(n as usize);
    for _ in 0..n {
        out.push(uniform_in_disk(center, radius, rng));
    }
}

pub fn sample_fhppp<R: Rng + ?Sized>(lambda: f64, center: [f64; 2], radius: f64, rng: &mut R) -> PointPattern {
    let mut points = Vec::new();
    sample_fhppp_into(lambda, center, radius, rng, &mut points);
    PointPattern { points }
}

/// Matérn cluster process around the origin. Parents are drawn on the disk of
/// radius `window_radius + dilation`; offspring farther than `keep_radius`
/// from the origin are dropped.
pub fn sample_mcp_into<R: Rng + ?Sized>(
    params: &MultiClusterParams,
    window_radius: f64,
    dilation: f64,
    keep_radius: f64,
    rng: &mut R,
    out: &mut Vec<[f64; 2]>,
) {
    let parent_radius = window_radius + dilation;
    let parents = poisson(params.lambda_p * PI * parent_radius * parent_radius, rng);
    let keep2 = keep_radius * keep_radius;
    let mean = params.cluster_mean();
    for _ in 0..parents {
        let c = uniform_in_disk([0.0, 0.0], parent_radius, rng);
        let n = poisson(mean, rng);
        for _ in 0..n {
            let p = uniform_in_disk(c, params.radius, rng);
            if p[0] * p[0] + p[1] * p[1] <= keep2 {
                out.push(p);
            }
        }
    }
}

pub fn sample_mcp<R: Rng + ?Sized>(
    params: &MultiClusterParams,
    window_radius: f64,
    dilation: f64,
    keep_radius: f64,
    rng: &mut R,
) -> PointPattern {
    let mut points = Vec::new();
    sample_mcp_into(params, window_radius, dilation, keep_radius, rng, &mut points);
    PointPattern { points }
}

/// `r^{-α}` from `r²`, with cheap paths for the common exponents.
#[inline]
pub fn path_loss(r2: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        1.0 / (r2 * r2)
    } else if alpha == 3.0 {
        1.0 / (r2 * r2.sqrt())
    } else {
        r2.powf(-0.5 * alpha)
    }
}

#[inline]
pub(crate) fn norm2(p: [f64; 2]) -> f64 {
    p[0] * p[0] + p[1] * p[1]
}

/// Index of the point nearest the origin.
pub fn nearest(points: &[[f64; 2]]) -> Option<usize> {
    let mut best = None;
    let mut best_r2 = f64::INFINITY;
    for (i, p) in points.iter().enumerate() {
        let r2 = norm2(*p);
        if r2 < best_r2 {
            best_r2 = r2;
            best = Some(i);
        }
    }
    best
}

/// SINR at the origin when the serving transmitter is picked from
/// `candidates` and every other point of `candidates` and `others`
/// interferes. `extra` is added to the interference (a deterministic
/// far-field term). Returns `None` when there is no candidate.
pub fn realize_sinr<R: Rng + ?Sized>(
    candidates: &PointPattern,
    others: &PointPattern,
    strategy: Strategy,
    channel: &ChannelModel,
    fading: Fading,
    extra: f64,
    rng: &mut R,
) -> Option<f64> {
    let serving = match strategy {
        Strategy::Closest => nearest(&candidates.points)?,
        Strategy::Uniform => {
            if candidates.is_empty() {
                return None;
            }
            rng.random_range(0..candidates.len())
        }
    };
    let alpha = channel.alpha;
    let mut interference = extra;
    let mut signal = 0.0;
    for (i, p) in candidates.points.iter().enumerate() {
        let g = fading.sample(rng) * path_loss(norm2(*p), alpha);
        if i == serving {
            signal = g;
        } else {
            interference += g;
        }
    }
    for p in &others.points {
        interference += fading.sample(rng) * path_loss(norm2(*p), alpha);
    }
    Some(signal / (channel.sigma2 + interference))
}
