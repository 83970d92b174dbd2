//! Planar geometry of a disk seen from an external or internal point.
//!
//! The reference receiver sits at the origin and the transmitter disk of
//! radius `D` is centred at distance `d`. Everything in this module is a pure
//! function of `(d, D)` and a radius or angle measured from the origin.

use std::f64::consts::PI;

use thiserror::Error;

/// Largest overshoot of an inverse-trig argument beyond `[-1, 1]` that is
/// silently clamped. Anything larger is a genuine domain violation.
pub const TRIG_CLAMP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid circle configuration: d = {d}, D = {radius}")]
    InvalidConfig { d: f64, radius: f64 },
    #[error("radius {r} outside the admissible range [{lo}, {hi}]")]
    RadiusOutOfRange { r: f64, lo: f64, hi: f64 },
    #[error("angle {theta} outside the admissible range [-{limit}, {limit}]")]
    AngleOutOfRange { theta: f64, limit: f64 },
    #[error("inverse-trig argument {0} is outside [-1, 1]")]
    TrigArgument(f64),
    #[error("negative radicand {0}")]
    NegativeRadicand(f64),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// Two circles: the fixed disk of radius `radius` (the `D` of the model) whose
/// centre lies at distance `d` from the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleConfig {
    pub d: f64,
    pub radius: f64,
}

/// Entry and exit distances of a ray from the origin through the disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordRadii {
    pub r_near: f64,
    pub r_far: f64,
}

impl CircleConfig {
    pub fn new(d: f64, radius: f64) -> Result<Self> {
        let cfg = Self { d, radius };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || !(self.d >= 0.0) || !self.radius.is_finite() || !self.d.is_finite()
        {
            return Err(GeometryError::InvalidConfig {
                d: self.d,
                radius: self.radius,
            });
        }
        Ok(())
    }

    pub fn disk_area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    /// `true` when the origin lies inside (or on) the disk.
    pub fn contains_origin(&self) -> bool {
        self.d <= self.radius
    }

    /// Open interval of radii for which the circle `b(o, r)` cuts the disk
    /// boundary in two points.
    pub fn lens_interval(&self) -> (f64, f64) {
        ((self.radius - self.d).abs(), self.radius + self.d)
    }

    /// Farthest point of the disk from the origin.
    pub fn max_distance(&self) -> f64 {
        self.radius + self.d
    }

    /// Closest point of the disk from the origin (zero when the origin is inside).
    pub fn min_distance(&self) -> f64 {
        (self.d - self.radius).max(0.0)
    }
}

/// Clamp `x` into `[-1, 1]` if the overshoot is within [`TRIG_CLAMP_TOL`].
pub(crate) fn guard_unit(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(GeometryError::TrigArgument(x));
    }
    if x > 1.0 {
        if x - 1.0 <= TRIG_CLAMP_TOL {
            return Ok(1.0);
        }
        return Err(GeometryError::TrigArgument(x));
    }
    if x < -1.0 {
        if -1.0 - x <= TRIG_CLAMP_TOL {
            return Ok(-1.0);
        }
        return Err(GeometryError::TrigArgument(x));
    }
    Ok(x)
}

/// Area of two intersecting circles in the lens regime, without the
/// containment short-cuts of [`intersection_area`].
///
/// The chord half-height comes from the factored radicand and both
/// half-angles from `atan2`, which stays accurate at the tangency radii where
/// the textbook `acos` form loses half its digits.
pub fn lens_area(cfg: CircleConfig, r: f64) -> f64 {
    let big = cfg.radius;
    let d = cfg.d;
    let radicand = (r + d - big) * (r + d + big) * (big - r + d) * (big + r - d);
    let h = 0.5 * radicand.max(0.0).sqrt() / d;
    // Signed distance from the origin to the chord, along the centre line.
    let a = ((r - big) * (r + big) + d * d) / (2.0 * d);
    let phi_r = h.atan2(a);
    let phi_big = h.atan2(d - a);
    r * r * phi_r + big * big * phi_big - d * h
}

/// `|b(o, r) ∩ b(x_o, D)|`, the area of the part of the disk within distance
/// `r` of the origin.
pub fn intersection_area(cfg: CircleConfig, r: f64) -> Result<f64> {
    cfg.validate()?;
    if !(r >= 0.0) {
        return Err(GeometryError::RadiusOutOfRange {
            r,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let big = cfg.radius;
    let d = cfg.d;
    if d == 0.0 {
        return Ok(if r < big { PI * r * r } else { cfg.disk_area() });
    }
    if r + d <= big {
        Ok(PI * r * r)
    } else if r + big <= d {
        Ok(0.0)
    } else if r >= big + d {
        Ok(cfg.disk_area())
    } else {
        let area = lens_area(cfg, r);
        Ok(area.clamp(0.0, PI * r.min(big).powi(2)))
    }
}

/// `φ₁(r)`: half-angle, seen from the origin, of the arc of `b(o, r)` lying
/// inside the disk.
pub fn half_angle(cfg: CircleConfig, r: f64) -> Result<f64> {
    cfg.validate()?;
    if cfg.d == 0.0 {
        return Err(GeometryError::InvalidConfig {
            d: cfg.d,
            radius: cfg.radius,
        });
    }
    let (lo, hi) = cfg.lens_interval();
    let slack = TRIG_CLAMP_TOL * hi;
    if !(r >= lo - slack && r <= hi + slack) || r <= 0.0 {
        return Err(GeometryError::RadiusOutOfRange { r, lo, hi });
    }
    let arg = (r * r + cfg.d * cfg.d - cfg.radius * cfg.radius) / (2.0 * cfg.d * r);
    Ok(guard_unit(arg)?.acos())
}

/// `φ₀ = asin(D/d)`: half-angle of the cone of tangents from the origin to
/// the disk. Only defined when the origin is outside or on the disk.
pub fn tangent_angle(cfg: CircleConfig) -> Result<f64> {
    cfg.validate()?;
    if cfg.d < cfg.radius {
        return Err(GeometryError::InvalidConfig {
            d: cfg.d,
            radius: cfg.radius,
        });
    }
    Ok(guard_unit(cfg.radius / cfg.d)?.asin())
}

/// `∂|C_r|/∂r` inside the lens interval, i.e. the length `2 r φ₁(r)` of the
/// arc of `b(o, r)` inside the disk.
pub fn intersection_area_derivative(cfg: CircleConfig, r: f64) -> Result<f64> {
    cfg.validate()?;
    let (lo, hi) = cfg.lens_interval();
    if cfg.d == 0.0 || !(r > lo && r < hi) {
        return Err(GeometryError::RadiusOutOfRange { r, lo, hi });
    }
    Ok(2.0 * r * half_angle(cfg, r)?)
}

/// Derivative of [`intersection_area`] over the whole half-line: `2πr` while
/// `b(o, r)` is inside the disk, the arc length in the lens regime, and zero
/// otherwise.
pub fn area_growth(cfg: CircleConfig, r: f64) -> f64 {
    let big = cfg.radius;
    let d = cfg.d;
    if r < 0.0 {
        return 0.0;
    }
    if r + d <= big {
        return 2.0 * PI * r;
    }
    if r + big <= d || r >= big + d || d == 0.0 {
        return 0.0;
    }
    let arg = ((r * r + d * d - big * big) / (2.0 * d * r)).clamp(-1.0, 1.0);
    2.0 * r * arg.acos()
}

/// Near and far radii `(R̂₁(θ), R₁(θ))` at which the ray of angle `θ` (measured
/// from the direction of the disk centre) meets the disk boundary.
///
/// When the origin is inside the disk `r_near` is negative; callers clamp it
/// to zero since the ray starts inside.
pub fn chord_radii(cfg: CircleConfig, theta: f64) -> Result<ChordRadii> {
    cfg.validate()?;
    let d = cfg.d;
    let big = cfg.radius;
    let limit = if cfg.contains_origin() {
        PI
    } else {
        tangent_angle(cfg)?
    };
    if !(theta.abs() <= limit * (1.0 + TRIG_CLAMP_TOL)) {
        return Err(GeometryError::AngleOutOfRange { theta, limit });
    }
    let sin = theta.sin();
    let mut radicand = big * big - d * d * sin * sin;
    if radicand < 0.0 {
        if radicand >= -1e-9 * big * big {
            radicand = 0.0;
        } else {
            return Err(GeometryError::NegativeRadicand(radicand));
        }
    }
    let root = radicand.sqrt();
    let base = d * theta.cos();
    Ok(ChordRadii {
        r_near: base - root,
        r_far: base + root,
    })
}

/// Far boundary radius `R₁(θ)` without range checks, for hot inner loops.
#[inline]
pub(crate) fn far_radius(d: f64, big: f64, theta: f64) -> f64 {
    let s = theta.sin();
    d * theta.cos() + (big * big - d * d * s * s).max(0.0).sqrt()
}

/// Near boundary radius `R̂₁(θ)` without range checks.
#[inline]
pub(crate) fn near_radius(d: f64, big: f64, theta: f64) -> f64 {
    let s = theta.sin();
    d * theta.cos() - (big * big - d * d * s * s).max(0.0).sqrt()
}
