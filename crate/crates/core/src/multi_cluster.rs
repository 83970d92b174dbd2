//! Matérn cluster networks: closed-access receivers served by their own
//! cluster, and open-access receivers served by the nearest transmitter of
//! the whole network.

use std::f64::consts::PI;

use crate::geometry::{area_growth, far_radius, intersection_area, near_radius, CircleConfig};
use crate::model::{check, ChannelModel, ModelError, MultiClusterParams, Result, Strategy};
use crate::quadrature::{try_integrate, try_integrate_pieces, try_integrate_tail, Kernel, QuadratureSettings, TailBound};
use crate::single_cluster::{closest_log_lt, lt_interference_uniform};

/// Rayleigh density of the receiver's offset from its cluster centre.
pub fn receiver_offset_pdf(params: &MultiClusterParams, v: f64) -> f64 {
    if v < 0.0 {
        return 0.0;
    }
    let s2 = params.sigma_c * params.sigma_c;
    v / s2 * (-0.5 * v * v / s2).exp()
}

/// Offset beyond which the Rayleigh weight carries less than `tail_tol` mass.
pub fn offset_cutoff(params: &MultiClusterParams, settings: &QuadratureSettings) -> f64 {
    params.sigma_c * (2.0 * (1.0 / settings.tail_tol).ln()).sqrt()
}

/// `∫` over a disk of radius `big` centred at distance `u` of
/// `1 / (1 + |y|ᵅ/s)`: the mean "absorbed" interference of one cluster.
/// Covers both the case where the origin is inside the disk and outside.
fn cluster_absorption(kernel: &Kernel, s: f64, u: f64, big: f64, settings: &QuadratureSettings) -> Result<f64> {
    if u == 0.0 {
        return Ok(PI * kernel.try_eval(s, big)?);
    }
    if u <= big {
        return Ok(try_integrate(
            |t| Ok::<_, ModelError>(kernel.try_eval(s, far_radius(u, big, t))?),
            0.0,
            PI,
            settings,
        )?
        .value);
    }
    // θ = φ(1 − w²) removes the square-root edge of the chord at θ = φ.
    let phi = (big / u).asin();
    Ok(try_integrate(
        |w: f64| {
            let t = phi * (1.0 - w * w);
            let chord = kernel.diff(s, near_radius(u, big, t).max(0.0), far_radius(u, big, t))?;
            Ok::<_, ModelError>(chord * 2.0 * phi * w)
        },
        0.0,
        1.0,
        settings,
    )?
    .value)
}

/// Power-law majorant of `(1 − e^{−λ g(s,u)}) u` valid for `u ≥ 2D`.
fn far_cluster_bound(lambda: f64, big: f64, alpha: f64, s: f64) -> TailBound<'static> {
    TailBound::PowerLaw {
        scale: 2.0 * lambda * PI * big * big * s,
        exponent: alpha - 1.0,
        shift: big,
        valid_from: 2.0 * big,
    }
}

/// `∫_a^∞ (1 − e^{−λ g(s,u)}) u du` for clusters that do not contain the
/// origin, plus the truncation point used.
fn far_clusters(
    params: &MultiClusterParams,
    kernel: &Kernel,
    s: f64,
    a: f64,
    settings: &QuadratureSettings,
) -> Result<(f64, f64)> {
    let inner = settings.tightened(10.0);
    // The caller multiplies by 2πλ_p; budget the tail accordingly.
    let outer = QuadratureSettings {
        tail_tol: settings.tail_tol / (2.0 * PI * params.lambda_p),
        ..*settings
    };
    let bound = far_cluster_bound(params.lambda, params.radius, kernel.alpha(), s);
    let tail = try_integrate_tail(
        |u: f64| {
            let g = cluster_absorption(kernel, s, u, params.radius, &inner)?;
            Ok::<_, ModelError>(-(-params.lambda * g).exp_m1() * u)
        },
        a,
        &bound,
        &outer,
    )?;
    Ok((tail.value, tail.cutoff))
}

/// Laplace transform of the interference from every cluster of the network,
/// with the cutoff radius used for the outer integral.
pub fn lt_inter_cluster_with_cutoff(
    params: &MultiClusterParams,
    channel: &ChannelModel,
    s: f64,
    settings: &QuadratureSettings,
) -> Result<(f64, f64)> {
    params.validate()?;
    channel.validate()?;
    check("s", s, s >= 0.0 && s.is_finite())?;
    if s == 0.0 {
        return Ok((1.0, params.radius));
    }
    let kernel = channel.kernel()?;
    let inner = settings.tightened(10.0);
    let near = try_integrate(
        |u: f64| {
            let f = cluster_absorption(&kernel, s, u, params.radius, &inner)?;
            Ok::<_, ModelError>(-(-params.lambda * f).exp_m1() * u)
        },
        0.0,
        params.radius,
        settings,
    )?
    .value;
    let (far, cutoff) = far_clusters(params, &kernel, s, params.radius, settings)?;
    Ok(((-2.0 * PI * params.lambda_p * (near + far)).exp(), cutoff))
}

/// Laplace transform of the inter-cluster interference.
pub fn lt_inter_cluster(
    params: &MultiClusterParams,
    channel: &ChannelModel,
    s: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    Ok(lt_inter_cluster_with_cutoff(params, channel, s, settings)?.0)
}

/// Coverage of a closed-access receiver, served from its own cluster with
/// either selection strategy.
pub fn coverage_closed_access(
    strategy: Strategy,
    params: &MultiClusterParams,
    channel: &ChannelModel,
    beta: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    params.validate()?;
    channel.validate()?;
    check("beta", beta, beta > 0.0)?;
    let kernel = channel.kernel()?;
    let big = params.radius;
    let lambda = params.lambda;
    let v_max = offset_cutoff(params, settings);
    let r_max = v_max + big;
    let inner = settings.tightened(10.0);
    let innermost = inner.tightened(10.0);
    let disk = PI * big * big;
    let nonempty = params.cluster(0.0).nonempty_probability();
    let (alpha, sigma2) = (channel.alpha, channel.sigma2);

    // For a fixed serving distance r, the receiver offsets v compatible with
    // it lie in [max(0, r − D), min(r + D, v_max)].
    let offset_integral = |r: f64, s: f64| -> Result<f64> {
        let lo = (r - big).max(0.0);
        let hi = (r + big).min(v_max);
        if hi <= lo {
            return Ok(0.0);
        }
        let breaks = [big - r, big, (r * r + big * big).sqrt(), params.sigma_c];
        let integrand = |v: f64| -> Result<f64> {
            let cfg = CircleConfig { d: v, radius: big };
            let growth = area_growth(cfg, r);
            if growth == 0.0 {
                return Ok(0.0);
            }
            let w = receiver_offset_pdf(params, v);
            if w == 0.0 {
                return Ok(0.0);
            }
            match strategy {
                Strategy::Closest => {
                    let density = lambda * growth * (-lambda * intersection_area(cfg, r)?).exp();
                    let log_lt = closest_log_lt(lambda, v, big, &kernel, s, r, &innermost)?;
                    Ok(w * density * log_lt.exp())
                }
                Strategy::Uniform => {
                    let lt = lt_interference_uniform(&params.cluster(v), channel, s, &innermost)?;
                    Ok(w * growth / disk * lt)
                }
            }
        };
        Ok(try_integrate_pieces(integrand, lo, hi, &breaks, &inner)?.value)
    };

    let outer = |r: f64| -> Result<f64> {
        if r <= 0.0 {
            return Ok(0.0);
        }
        let s = beta * r.powf(alpha);
        let noise = (-sigma2 * s).exp();
        if noise == 0.0 {
            return Ok(0.0);
        }
        let inter = lt_inter_cluster(params, channel, s, &inner)?;
        if inter == 0.0 {
            return Ok(0.0);
        }
        Ok(noise * inter * offset_integral(r, s)?)
    };
    let breaks = [big, params.sigma_c, params.sigma_c + big, (1.0 / (lambda * PI)).sqrt()];
    let value = try_integrate_pieces(outer, 0.0, r_max, &breaks, settings)?.value;
    let value = match strategy {
        Strategy::Closest => value,
        Strategy::Uniform => nonempty * value,
    };
    Ok(value.clamp(0.0, 1.0))
}

/// `∫ (1 − e^{−λ|C_u(r)|}) u du` over all cluster centres: the exponent of
/// the contact distribution, divided by `2πλ_p`.
fn contact_exponent(params: &MultiClusterParams, r: f64, settings: &QuadratureSettings) -> Result<f64> {
    let big = params.radius;
    let lambda = params.lambda;
    let (inside, lo) = if r < big {
        (-(-lambda * PI * r * r).exp_m1() * (big - r).powi(2) / 2.0, big - r)
    } else {
        (-(-lambda * PI * big * big).exp_m1() * (r - big).powi(2) / 2.0, r - big)
    };
    let lens = try_integrate(
        |u: f64| {
            let area = intersection_area(CircleConfig { d: u, radius: big }, r)?;
            Ok::<_, ModelError>(-(-lambda * area).exp_m1() * u)
        },
        lo,
        big + r,
        settings,
    )?
    .value;
    Ok(inside + lens)
}

/// CDF of the distance from an arbitrary location to the nearest transmitter
/// of the network.
pub fn contact_cdf(params: &MultiClusterParams, r: f64, settings: &QuadratureSettings) -> Result<f64> {
    params.validate()?;
    check("r", r, r >= 0.0)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    if r.is_infinite() {
        return Ok(1.0);
    }
    let h = contact_exponent(params, r, settings)?;
    Ok(-(-2.0 * PI * params.lambda_p * h).exp_m1())
}

/// Density of the contact distance.
pub fn contact_pdf(params: &MultiClusterParams, r: f64, settings: &QuadratureSettings) -> Result<f64> {
    params.validate()?;
    check("r", r, r >= 0.0)?;
    if r == 0.0 || r.is_infinite() {
        return Ok(0.0);
    }
    let big = params.radius;
    let lambda = params.lambda;
    let h = contact_exponent(params, r, settings)?;
    let (inside, lo) = if r < big {
        (PI * lambda * r * (-lambda * PI * r * r).exp() * (big - r).powi(2), big - r)
    } else {
        (0.0, r - big)
    };
    let lens = try_integrate(
        |u: f64| {
            let cfg = CircleConfig { d: u, radius: big };
            let area = intersection_area(cfg, r)?;
            Ok::<_, ModelError>(lambda * area_growth(cfg, r) * (-lambda * area).exp() * u)
        },
        lo,
        big + r,
        settings,
    )?
    .value;
    Ok(2.0 * PI * params.lambda_p * (inside + lens) * (-2.0 * PI * params.lambda_p * h).exp())
}

/// `P(R_t > U)` is at most this for `U ≥ D`.
fn contact_tail_mass(params: &MultiClusterParams, u: f64) -> f64 {
    let excess = (u - params.radius).max(0.0);
    let nonempty = params.cluster(0.0).nonempty_probability();
    (-PI * params.lambda_p * nonempty * excess * excess).exp()
}

/// Laplace transform of the total interference seen by an open-access
/// receiver whose nearest transmitter is at distance `r_t`.
///
/// Each interfering cluster within reach of `b(o, r_t)` contributes through
/// the single-cluster closest-selection transform with its centre at `u`;
/// clusters farther than `D + r_t` contribute as in [`lt_inter_cluster`].
pub fn lt_total_interference(
    params: &MultiClusterParams,
    channel: &ChannelModel,
    s: f64,
    r_t: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    params.validate()?;
    channel.validate()?;
    check("s", s, s >= 0.0 && s.is_finite())?;
    check("r_t", r_t, r_t >= 0.0 && r_t.is_finite())?;
    if s == 0.0 {
        return Ok(1.0);
    }
    let kernel = channel.kernel()?;
    let big = params.radius;
    let inner = settings.tightened(10.0);
    let lo = (r_t - big).max(0.0);
    let hi = big + r_t;
    let breaks = [(big - r_t).abs(), big, (big * big + r_t * r_t).sqrt()];
    let near = try_integrate_pieces(
        |u: f64| {
            let log_lt = closest_log_lt(params.lambda, u, big, &kernel, s, r_t, &inner)?;
            Ok::<_, ModelError>(-log_lt.exp_m1() * u)
        },
        lo,
        hi,
        &breaks,
        settings,
    )?
    .value;
    let (far, _) = far_clusters(params, &kernel, s, hi, settings)?;
    Ok((-2.0 * PI * params.lambda_p * (near + far)).exp())
}

/// Coverage of an open-access receiver served by the nearest transmitter of
/// the network.
pub fn coverage_open_access(
    params: &MultiClusterParams,
    channel: &ChannelModel,
    beta: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    open_access_impl(params, channel, beta, settings, lt_total_interference)
}

type TotalLt = fn(&MultiClusterParams, &ChannelModel, f64, f64, &QuadratureSettings) -> Result<f64>;

fn open_access_impl(
    params: &MultiClusterParams,
    channel: &ChannelModel,
    beta: f64,
    settings: &QuadratureSettings,
    lt: TotalLt,
) -> Result<f64> {
    params.validate()?;
    channel.validate()?;
    check("beta", beta, beta > 0.0)?;
    let inner = settings.tightened(10.0);
    let (alpha, sigma2) = (channel.alpha, channel.sigma2);
    let big = params.radius;
    let mass = |u: f64| contact_tail_mass(params, u);
    let tail = TailBound::Mass(&mass);
    let integrand = |r: f64| -> Result<f64> {
        if r <= 0.0 {
            return Ok(0.0);
        }
        let s = beta * r.powf(alpha);
        let noise = (-sigma2 * s).exp();
        if noise == 0.0 {
            return Ok(0.0);
        }
        let pdf = contact_pdf(params, r, &inner)?;
        if pdf == 0.0 {
            return Ok(0.0);
        }
        Ok(noise * pdf * lt(params, channel, s, r, &inner)?)
    };
    // Split at D, where both the contact law and the transform change form.
    let head = try_integrate(integrand, 0.0, big, settings)?.value;
    let rest = try_integrate_tail(integrand, big, &tail, settings)?.value;
    Ok((head + rest).clamp(0.0, 1.0))
}

/// Laplace transform of the total interference at an open-access receiver
/// whose nearest transmitter is at distance `r_t`, accounting for what that
/// event implies about the rest of the network.
///
/// Knowing `R_t = r_t` empties `b(o, r_t)`, which thins every interfering
/// cluster by `e^{−λ|C_u|}`, and the serving transmitter's own cluster keeps
/// its remaining points outside `b(o, r_t)` as interferers. Writing
/// `a(u) = |b(u,D) ∩ b(o,r_t)|`, `ℓ(u) = ∂a/∂r_t` and `A(u)` for the absorbed
/// mass of `b(u,D) ∖ b(o,r_t)`, the transform is
/// `∫ℓ e^{−λ(a+A)} u du / ∫ℓ e^{−λa} u du · exp(−2πλ_p ∫ e^{−λa}(1 − e^{−λA}) u du)`.
/// [`lt_total_interference`] drops both effects.
pub fn lt_total_interference_conditioned(
    params: &MultiClusterParams,
    channel: &ChannelModel,
    s: f64,
    r_t: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    params.validate()?;
    channel.validate()?;
    check("s", s, s >= 0.0 && s.is_finite())?;
    check("r_t", r_t, r_t > 0.0 && r_t.is_finite())?;
    if s == 0.0 {
        return Ok(1.0);
    }
    let kernel = channel.kernel()?;
    let big = params.radius;
    let lambda = params.lambda;
    let inner = settings.tightened(10.0);
    let lo = (r_t - big).max(0.0);
    let hi = big + r_t;
    let breaks = [(big - r_t).abs(), big, (big * big + r_t * r_t).sqrt()];
    let parts = |u: f64| -> Result<(f64, f64, f64)> {
        let cfg = CircleConfig { d: u, radius: big };
        let void = (-lambda * intersection_area(cfg, r_t)?).exp();
        let log_lt = closest_log_lt(lambda, u, big, &kernel, s, r_t, &inner)?;
        Ok((void, log_lt, area_growth(cfg, r_t)))
    };
    let thinned = try_integrate_pieces(
        |u: f64| {
            let (void, log_lt, _) = parts(u)?;
            Ok::<_, ModelError>(-void * log_lt.exp_m1() * u)
        },
        lo,
        hi,
        &breaks,
        settings,
    )?
    .value;
    let (far, _) = far_clusters(params, &kernel, s, hi, settings)?;
    let serving = |with_siblings: bool| {
        try_integrate_pieces(
            |u: f64| {
                let (void, log_lt, growth) = parts(u)?;
                let siblings = if with_siblings { log_lt.exp() } else { 1.0 };
                Ok::<_, ModelError>(growth * void * siblings * u)
            },
            lo,
            hi,
            &breaks,
            settings,
        )
    };
    let den = serving(false)?.value;
    if den <= 0.0 {
        return Err(ModelError::InvalidParameter { name: "r_t", value: r_t });
    }
    let siblings = (serving(true)?.value / den).clamp(0.0, 1.0);
    Ok(siblings * (-2.0 * PI * params.lambda_p * (thinned + far)).exp())
}

/// Which total-interference transform an open-access coverage uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OpenAccessModel {
    /// [`lt_total_interference`]: every other cluster as an unconditioned
    /// Matérn cluster.
    Unconditioned,
    /// [`lt_total_interference_conditioned`]. Agrees with simulation.
    #[default]
    Conditioned,
}

/// [`coverage_open_access`] with a choice of interference transform.
pub fn coverage_open_access_with(
    model: OpenAccessModel,
    params: &MultiClusterParams,
    channel: &ChannelModel,
    beta: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    match model {
        OpenAccessModel::Unconditioned => coverage_open_access(params, channel, beta, settings),
        OpenAccessModel::Conditioned => open_access_impl(params, channel, beta, settings, lt_total_interference_conditioned),
    }
}
