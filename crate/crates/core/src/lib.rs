//! Coverage analysis for finite Poisson clusters and Matérn cluster networks.
//!
//! Transmitters form a Poisson process on a disk of radius `D` (one cluster)
//! or a Matérn cluster process (many clusters). A reference receiver at the
//! origin picks a serving transmitter and sees Rayleigh-faded interference
//! from the rest. The crate provides
//!
//! * [`geometry`]: areas, angles and chords of a disk seen from the origin,
//! * [`quadrature`]: the interference kernel and adaptive integrators,
//! * [`single_cluster`]: serving-distance laws, interference Laplace
//!   transforms, lower bounds, coverage and spectral efficiency for one
//!   cluster,
//! * [`multi_cluster`]: the same quantities for closed- and open-access
//!   receivers in a cluster network,
//! * [`montecarlo`]: a seeded, thread-count-independent simulator used to
//!   check all of the above.

pub mod geometry;
pub mod model;
pub mod montecarlo;
pub mod multi_cluster;
pub mod quadrature;
pub mod single_cluster;

pub use geometry::{CircleConfig, ChordRadii, GeometryError};
pub use model::{db_to_linear, linear_to_db, ChannelModel, ModelError, MultiClusterParams, SingleClusterGeometry, Strategy};
pub use quadrature::{Kernel, KernelArgs, QuadratureError, QuadratureSettings};
