//! Parameter records shared by the analytic and simulation modules.

use std::f64::consts::PI;

use thiserror::Error;

use crate::geometry::{CircleConfig, GeometryError};
use crate::quadrature::{Kernel, QuadratureError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("serving distance {r} is impossible for receiver offset {d} and disk radius {radius}")]
    Branch { d: f64, radius: f64, r: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

pub type Result<T> = std::result::Result<T, ModelError>;

pub(crate) fn check(name: &'static str, value: f64, ok: bool) -> Result<()> {
    if ok && !value.is_nan() {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter { name, value })
    }
}

/// A finite Poisson process of intensity `lambda` on a disk of radius
/// `radius`, whose centre is at distance `d` from the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleClusterGeometry {
    pub lambda: f64,
    pub radius: f64,
    pub d: f64,
}

impl SingleClusterGeometry {
    pub fn new(lambda: f64, radius: f64, d: f64) -> Result<Self> {
        let g = Self { lambda, radius, d };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        check("lambda", self.lambda, self.lambda > 0.0 && self.lambda.is_finite())?;
        check("D", self.radius, self.radius > 0.0 && self.radius.is_finite())?;
        check("d", self.d, self.d >= 0.0 && self.d.is_finite())
    }

    pub fn circle(&self) -> CircleConfig {
        CircleConfig {
            d: self.d,
            radius: self.radius,
        }
    }

    /// Expected number of transmitters, `λπD²`.
    pub fn mean_count(&self) -> f64 {
        self.lambda * PI * self.radius * self.radius
    }

    /// `P(n(Φ) > 0) = 1 − exp(−λπD²)`.
    pub fn nonempty_probability(&self) -> f64 {
        -(-self.mean_count()).exp_m1()
    }

    /// Same process seen from a receiver at distance `d`.
    pub fn with_offset(&self, d: f64) -> Self {
        Self { d, ..*self }
    }
}

/// Path loss `r^{-α}`, noise power `σ²` and unit-mean Rayleigh fading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub alpha: f64,
    pub sigma2: f64,
}

impl ChannelModel {
    pub fn new(alpha: f64, sigma2: f64) -> Result<Self> {
        let c = Self { alpha, sigma2 };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        check("alpha", self.alpha, self.alpha > 2.0 && self.alpha.is_finite())?;
        check("sigma2", self.sigma2, self.sigma2 >= 0.0 && self.sigma2.is_finite())
    }

    pub fn kernel(&self) -> Result<Kernel> {
        Ok(Kernel::new(self.alpha)?)
    }
}

/// How the receiver picks its serving transmitter within a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Closest,
    Uniform,
}

/// Matérn cluster process: parents of intensity `lambda_p`, each carrying a
/// Poisson cluster of intensity `lambda` on a disk of radius `radius`.
/// Closed-access receivers sit at a Rayleigh(`sigma_c`) offset from their
/// cluster centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiClusterParams {
    pub lambda_p: f64,
    pub lambda: f64,
    pub radius: f64,
    pub sigma_c: f64,
}

impl MultiClusterParams {
    pub fn new(lambda_p: f64, lambda: f64, radius: f64, sigma_c: f64) -> Result<Self> {
        let p = Self {
            lambda_p,
            lambda,
            radius,
            sigma_c,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check("lambda_p", self.lambda_p, self.lambda_p > 0.0 && self.lambda_p.is_finite())?;
        check("lambda", self.lambda, self.lambda > 0.0 && self.lambda.is_finite())?;
        check("D", self.radius, self.radius > 0.0 && self.radius.is_finite())?;
        check("sigma_c", self.sigma_c, self.sigma_c > 0.0 && self.sigma_c.is_finite())
    }

    /// The representative cluster seen from a receiver at offset `v`.
    pub fn cluster(&self, v: f64) -> SingleClusterGeometry {
        SingleClusterGeometry {
            lambda: self.lambda,
            radius: self.radius,
            d: v,
        }
    }

    /// Mean number of transmitters per cluster.
    pub fn cluster_mean(&self) -> f64 {
        self.lambda * PI * self.radius * self.radius
    }

    /// Mean number of transmitters per unit area.
    pub fn intensity(&self) -> f64 {
        self.lambda_p * self.cluster_mean()
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
