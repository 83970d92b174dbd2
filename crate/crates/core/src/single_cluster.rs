//! One Poisson cluster on a disk, seen from a receiver at distance `d` from
//! its centre.
//!
//! Every distribution and Laplace transform here is conditioned on the
//! cluster being non-empty. Coverage probabilities multiply by
//! `P(n(Φ) > 0)` exactly once.

use std::f64::consts::{LN_2, PI};

use crate::geometry::{self, area_growth, far_radius, half_angle, intersection_area, near_radius, tangent_angle};
use crate::model::{check, ChannelModel, ModelError, Result, SingleClusterGeometry, Strategy};
use crate::quadrature::{try_integrate, try_integrate_pieces, Kernel, QuadratureSettings};

/// Relative slack when deciding which side of a branch boundary a serving
/// distance falls on.
const BRANCH_TOL: f64 = 1e-9;

/// `expm1(x) / x`, continuous at zero.
pub(crate) fn expm1_ratio(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 + 0.5 * x
    } else {
        x.exp_m1() / x
    }
}

// ---------------------------------------------------------------------------
// Serving distance
// ---------------------------------------------------------------------------

/// `P(R_c > r)` for the closest transmitter.
pub fn serving_ccdf_closest(g: &SingleClusterGeometry, r: f64) -> Result<f64> {
    g.validate()?;
    let area = intersection_area(g.circle(), r)?;
    let mu = g.mean_count();
    // (e^{−λ|C|} − e^{−μ}) / (1 − e^{−μ}) written without cancellation
    let num = (-g.lambda * area).exp() * (-(-(mu - g.lambda * area)).exp_m1());
    Ok((num / g.nonempty_probability()).clamp(0.0, 1.0))
}

/// Density of the closest-transmitter distance.
pub fn serving_pdf_closest(g: &SingleClusterGeometry, r: f64) -> Result<f64> {
    g.validate()?;
    let area = intersection_area(g.circle(), r)?;
    Ok(g.lambda * area_growth(g.circle(), r) * (-g.lambda * area).exp() / g.nonempty_probability())
}

/// `P(R_u ≤ r)` for a uniformly chosen transmitter.
pub fn serving_cdf_uniform(g: &SingleClusterGeometry, r: f64) -> Result<f64> {
    g.validate()?;
    let cfg = g.circle();
    Ok((intersection_area(cfg, r)? / cfg.disk_area()).clamp(0.0, 1.0))
}

/// Density of the uniformly chosen transmitter's distance.
pub fn serving_pdf_uniform(g: &SingleClusterGeometry, r: f64) -> Result<f64> {
    g.validate()?;
    if !(r >= 0.0) {
        return Err(ModelError::InvalidParameter { name: "r", value: r });
    }
    let cfg = g.circle();
    Ok(area_growth(cfg, r) / cfg.disk_area())
}

// ---------------------------------------------------------------------------
// Interference Laplace transforms
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClosestBranch {
    Inside,
    Lens,
    Shadow,
}

fn closest_branch(d: f64, big: f64, r_c: f64) -> Result<(ClosestBranch, f64)> {
    let hi = d + big;
    let slack = BRANCH_TOL * hi;
    let err = || ModelError::Branch { d, radius: big, r: r_c };
    if !(r_c >= 0.0) || r_c > hi + slack {
        return Err(err());
    }
    let r = r_c.min(hi);
    if d <= big {
        if r < big - d || d == 0.0 {
            Ok((ClosestBranch::Inside, r))
        } else {
            Ok((ClosestBranch::Lens, r))
        }
    } else {
        if r < d - big - slack {
            return Err(err());
        }
        let r = r.max(d - big);
        if r < (d * d - big * big).sqrt() {
            Ok((ClosestBranch::Shadow, r))
        } else {
            Ok((ClosestBranch::Lens, r))
        }
    }
}

/// `ln L(s | R_c)` for the closest-selection interference of a cluster of
/// intensity `lambda`, radius `big`, at distance `d`. Shared with the
/// multi-cluster module, which evaluates it for interfering clusters.
pub(crate) fn closest_log_lt(
    lambda: f64,
    d: f64,
    big: f64,
    kernel: &Kernel,
    s: f64,
    r_c: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let (branch, r_c) = closest_branch(d, big, r_c)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let exponent = match branch {
        ClosestBranch::Inside => {
            if d == 0.0 {
                PI * kernel.diff(s, r_c, big)?
            } else {
                try_integrate(
                    |t| Ok::<_, ModelError>(kernel.diff(s, r_c, far_radius(d, big, t))?),
                    0.0,
                    PI,
                    settings,
                )?
                .value
            }
        }
        ClosestBranch::Lens => {
            let phi1 = half_angle(geometry::CircleConfig { d, radius: big }, r_c)?;
            lens_part(kernel, s, d, big, r_c, phi1, settings)?
        }
        ClosestBranch::Shadow => {
            let cfg = geometry::CircleConfig { d, radius: big };
            let phi1 = half_angle(cfg, r_c)?;
            let phi0 = tangent_angle(cfg)?;
            let phi1 = phi1.min(phi0);
            let lens = lens_part(kernel, s, d, big, r_c, phi1, settings)?;
            // θ = φ₀ − (φ₀ − φ₁)w² smooths the chord's square-root edge at φ₀.
            let width = phi0 - phi1;
            let shadow = try_integrate(
                |w: f64| {
                    let t = phi0 - width * w * w;
                    let chord = kernel.diff(s, near_radius(d, big, t).max(0.0), far_radius(d, big, t))?;
                    Ok::<_, ModelError>(chord * 2.0 * width * w)
                },
                0.0,
                1.0,
                settings,
            )?
            .value;
            lens + shadow
        }
    };
    Ok(-lambda * exponent.max(0.0))
}

fn lens_part(
    kernel: &Kernel,
    s: f64,
    d: f64,
    big: f64,
    r_c: f64,
    phi1: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    Ok(try_integrate(
        |t| Ok::<_, ModelError>(kernel.diff(s, r_c, far_radius(d, big, t))?),
        0.0,
        phi1,
        settings,
    )?
    .value)
}

fn check_s(s: f64) -> Result<()> {
    check("s", s, s >= 0.0 && s.is_finite())
}

/// Laplace transform of the interference given the closest transmitter is at
/// distance `r_c`.
pub fn lt_interference_closest(
    g: &SingleClusterGeometry,
    channel: &ChannelModel,
    s: f64,
    r_c: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    g.validate()?;
    channel.validate()?;
    check_s(s)?;
    let kernel = channel.kernel()?;
    Ok(closest_log_lt(g.lambda, g.d, g.radius, &kernel, s, r_c, settings)?.exp())
}

/// `∫ |C_x|′ / (1 + xᵅ/s) dx`: the part of the disk area "absorbed" by the
/// interference kernel.
fn absorbed_area(g: &SingleClusterGeometry, alpha: f64, s: f64, settings: &QuadratureSettings) -> Result<f64> {
    let cfg = g.circle();
    let lo = cfg.min_distance();
    let hi = cfg.max_distance();
    let breaks = [(g.radius - g.d).abs()];
    let ln_s = s.ln();
    Ok(try_integrate_pieces(
        |x: f64| {
            let z = (alpha * x.ln() - ln_s).exp();
            Ok::<_, ModelError>(area_growth(cfg, x) / (1.0 + z))
        },
        lo,
        hi,
        &breaks,
        settings,
    )?
    .value)
}

/// Conditional LT of a Poisson number of interferers when `K` out of the
/// cluster's `πD²` area is absorbed by the kernel.
fn uniform_lt_from_absorbed(mu: f64, kappa: f64) -> f64 {
    let rest = (1.0 - kappa).max(0.0);
    let nonempty = -(-mu).exp_m1();
    ((-mu).exp() * mu * expm1_ratio(mu * rest) / nonempty).clamp(0.0, 1.0)
}

/// Laplace transform of the interference under uniform selection. It does
/// not depend on the serving distance.
pub fn lt_interference_uniform(
    g: &SingleClusterGeometry,
    channel: &ChannelModel,
    s: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    g.validate()?;
    channel.validate()?;
    check_s(s)?;
    if s == 0.0 {
        return Ok(1.0);
    }
    let disk = g.circle().disk_area();
    let k = absorbed_area(g, channel.alpha, s, settings)?;
    Ok(uniform_lt_from_absorbed(g.mean_count(), k / disk))
}

/// Closed-form lower bound on [`lt_interference_closest`], obtained by
/// replacing the disk with a covering union of sectors.
pub fn lt_lb_closest(g: &SingleClusterGeometry, channel: &ChannelModel, s: f64, r_c: f64) -> Result<f64> {
    g.validate()?;
    channel.validate()?;
    check_s(s)?;
    let kernel = channel.kernel()?;
    Ok(closest_lb_log(g, &kernel, s, r_c)?.exp())
}

fn closest_lb_log(g: &SingleClusterGeometry, kernel: &Kernel, s: f64, r_c: f64) -> Result<f64> {
    let (d, big, lambda) = (g.d, g.radius, g.lambda);
    let (_, r_c) = closest_branch(d, big, r_c)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let f = |x: f64| kernel.try_eval(s, x);
    let f_rc = f(r_c)?;
    let f_far = f(d + big)?;
    let exponent = if d <= big {
        let back = (big * big - d * d).max(0.0).sqrt();
        if r_c <= back {
            PI * lambda * (f_rc - 0.5 * f_far - 0.5 * f(back)?)
        } else {
            0.5 * PI * lambda * (f_rc - f_far)
        }
    } else {
        let cfg = g.circle();
        let phi1 = half_angle(cfg, r_c)?;
        if r_c < (d * d - big * big).sqrt() {
            let phi0 = tangent_angle(cfg)?;
            let phi1 = phi1.min(phi0);
            let mid = f(far_radius(d, big, phi1))?;
            lambda * (phi0 * f_rc + (phi1 - phi0) * mid - phi1 * f_far)
        } else {
            lambda * phi1 * (f_rc - f_far)
        }
    };
    Ok(exponent.min(0.0))
}

/// Closed-form lower bound on [`lt_interference_uniform`].
pub fn lt_lb_uniform(g: &SingleClusterGeometry, channel: &ChannelModel, s: f64) -> Result<f64> {
    g.validate()?;
    channel.validate()?;
    check_s(s)?;
    if s == 0.0 {
        return Ok(1.0);
    }
    let kernel = channel.kernel()?;
    let (d, big, lambda) = (g.d, g.radius, g.lambda);
    let (mu, kappa) = if d <= big {
        let sum = kernel.try_eval(s, (big * big - d * d).max(0.0).sqrt())? + kernel.try_eval(s, big + d)?;
        (lambda * PI * big * (big + d), sum / (2.0 * big * (big + d)))
    } else {
        let phi0 = tangent_angle(g.circle())?;
        let diff = kernel.try_eval(s, d + big)? - kernel.try_eval(s, d - big)?;
        (4.0 * lambda * d * big * phi0, diff / (4.0 * d * big))
    };
    Ok(uniform_lt_from_absorbed(mu, kappa))
}

// ---------------------------------------------------------------------------
// Coverage and spectral efficiency
// ---------------------------------------------------------------------------

/// Which interference transform a coverage integral uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LtKind {
    Exact,
    LowerBound,
}

fn radial_breaks(g: &SingleClusterGeometry) -> Vec<f64> {
    let (d, big) = (g.d, g.radius);
    let mut breaks = Vec::with_capacity(4);
    if d < big {
        breaks.push(big - d);
    } else if d > big {
        breaks.push((d * d - big * big).sqrt());
    }
    // Where the nearest-point density lives when the disk is large.
    let scale = 1.0 / (g.lambda * PI).sqrt();
    for m in [1.0, 4.0] {
        breaks.push(m * scale);
    }
    breaks
}

fn coverage_impl(
    strategy: Strategy,
    kind: LtKind,
    g: &SingleClusterGeometry,
    channel: &ChannelModel,
    beta: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    g.validate()?;
    channel.validate()?;
    check("beta", beta, beta > 0.0)?;
    let kernel = channel.kernel()?;
    let cfg = g.circle();
    let inner = settings.tightened(10.0);
    let (alpha, sigma2) = (channel.alpha, channel.sigma2);
    let lo = cfg.min_distance();
    let hi = cfg.max_distance();
    let breaks = radial_breaks(g);
    match strategy {
        Strategy::Closest => {
            let integrand = |r: f64| -> Result<f64> {
                let growth = area_growth(cfg, r);
                if growth == 0.0 {
                    return Ok(0.0);
                }
                let sr = beta * r.powf(alpha);
                let density = g.lambda * growth * (-g.lambda * intersection_area(cfg, r)?).exp();
                let log_lt = match kind {
                    LtKind::Exact => closest_log_lt(g.lambda, g.d, g.radius, &kernel, sr, r, &inner)?,
                    LtKind::LowerBound => closest_lb_log(g, &kernel, sr, r)?,
                };
                Ok(density * (log_lt - sigma2 * sr).exp())
            };
            Ok(try_integrate_pieces(integrand, lo, hi, &breaks, settings)?.value.clamp(0.0, 1.0))
        }
        Strategy::Uniform => {
            let disk = cfg.disk_area();
            let integrand = |r: f64| -> Result<f64> {
                let growth = area_growth(cfg, r);
                if growth == 0.0 {
                    return Ok(0.0);
                }
                let sr = beta * r.powf(alpha);
                let noise = (-sigma2 * sr).exp();
                if noise == 0.0 {
                    return Ok(0.0);
                }
                let lt = match kind {
                    LtKind::Exact => lt_interference_uniform(g, channel, sr, &inner)?,
                    LtKind::LowerBound => lt_lb_uniform(g, channel, sr)?,
                };
                Ok(growth / disk * noise * lt)
            };
            let conditional = try_integrate_pieces(integrand, lo, hi, &breaks[..1], settings)?.value;
            Ok((g.nonempty_probability() * conditional).clamp(0.0, 1.0))
        }
    }
}

/// `P(SINR > β)` with `β` linear, including the empty-cluster outage.
pub fn coverage(
    strategy: Strategy,
    g: &SingleClusterGeometry,
    channel: &ChannelModel,
    beta: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    coverage_impl(strategy, LtKind::Exact, g, channel, beta, settings)
}

/// [`coverage`] with the interference transform replaced by its closed-form
/// lower bound.
pub fn coverage_lower_bound(
    strategy: Strategy,
    g: &SingleClusterGeometry,
    channel: &ChannelModel,
    beta: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    coverage_impl(strategy, LtKind::LowerBound, g, channel, beta, settings)
}

/// `(1/ln 2) ∫₀^∞ P_C(t) / (1 + t) dt` for any coverage curve, integrated
/// after the substitution `t = v / (1 − v)`.
pub fn spectral_efficiency_of<F>(mut coverage_at: F, settings: &QuadratureSettings) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let integral = try_integrate(
        |v: f64| {
            if v <= 0.0 {
                return Ok(0.0);
            }
            let t = v / (1.0 - v);
            if !t.is_finite() {
                return Ok(0.0);
            }
            Ok::<_, ModelError>(coverage_at(t)? / (1.0 - v))
        },
        0.0,
        1.0,
        settings,
    )?;
    Ok(integral.value / LN_2)
}

/// Ergodic rate `E[log₂(1 + SINR)]` in bits per channel use, zero rate when
/// the cluster is empty.
pub fn spectral_efficiency(
    strategy: Strategy,
    g: &SingleClusterGeometry,
    channel: &ChannelModel,
    settings: &QuadratureSettings,
) -> Result<f64> {
    let inner = settings.tightened(10.0);
    match strategy {
        Strategy::Closest => spectral_efficiency_of(|t| coverage(strategy, g, channel, t, &inner), settings),
        Strategy::Uniform => spectral_efficiency_uniform(g, channel, settings),
    }
}

/// Uniform-selection rate with the threshold integral swapped inside:
/// with `s = t rᵅ` the rate becomes
/// `(P(N>0)/ln 2) ∫₀^∞ e^{−σ²s} L(s) E[1/(Rᵅ + s)] ds`, where `R` is the
/// uniform serving distance. The weight is purely geometric, so only one
/// level of nesting remains.
fn spectral_efficiency_uniform(
    g: &SingleClusterGeometry,
    channel: &ChannelModel,
    settings: &QuadratureSettings,
) -> Result<f64> {
    g.validate()?;
    channel.validate()?;
    let cfg = g.circle();
    let inner = settings.tightened(10.0);
    let (alpha, sigma2) = (channel.alpha, channel.sigma2);
    let (lo, hi) = (cfg.min_distance(), cfg.max_distance());
    let breaks = radial_breaks(g);
    let disk = cfg.disk_area();
    let weight = |s: f64| -> Result<f64> {
        let w = try_integrate_pieces(
            |r: f64| Ok::<_, ModelError>(area_growth(cfg, r) / disk / (r.powf(alpha) + s)),
            lo,
            hi,
            &breaks[..1],
            &inner,
        )?;
        Ok(w.value)
    };
    let scale = g.d.max(g.radius).powf(alpha);
    let integral = try_integrate(
        |v: f64| {
            if v <= 0.0 || v >= 1.0 {
                return Ok(0.0);
            }
            let s = scale * v / (1.0 - v);
            let noise = (-sigma2 * s).exp();
            if noise == 0.0 {
                return Ok(0.0);
            }
            let lt = lt_interference_uniform(g, channel, s, &inner)?;
            Ok::<_, ModelError>(noise * lt * weight(s)? * scale / ((1.0 - v) * (1.0 - v)))
        },
        0.0,
        1.0,
        settings,
    )?;
    Ok(g.nonempty_probability() * integral.value / LN_2)
}
