//! Numerical laboratory for the energy-momentum transfer of bounded operators.
//!
//! Finite-dimensional quantum models (commuting momentum operators with joint
//! spectrum in the closed forward cone) make every translation, smearing and
//! frequency filter exact: matrix elements live at discrete Bohr transfer
//! frequencies, so operator-norm inequalities can be measured rather than
//! merely trusted. The crate provides
//!
//! * Minkowski geometry, finite complex measures and the spacelike decay
//!   envelope ([`spacetime`]),
//! * fractional time derivatives split into positive/negative frequency
//!   parts, both as spectral filters on sampled signals and as singular
//!   convolution kernels ([`signal`]),
//! * the smooth cutoff and dyadic band decomposition used to control
//!   low-frequency parts ([`dyadic`]),
//! * toy models, operator fields and their exact filters ([`model`]),
//! * verification harnesses for the operator-norm bounds ([`bounds`]),
//! * momentum scaling degrees and the allowed-singularity classifier
//!   ([`scaling`]),
//! * generic integral/decay lemma verifiers ([`inequalities`]).
//!
//! All randomness is seeded and hierarchically split; identical seeds
//! reproduce identical results.

pub mod bounds;
pub mod dyadic;
pub mod inequalities;
pub mod linalg;
pub mod model;
pub mod scaling;
pub mod signal;
pub mod spacetime;
pub mod util;

pub use spacetime::{DiscreteMeasure, EnvelopeParams, FourVector};

/// Crate-wide error type. Variants name the violated contract.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("grid too small: {0}")]
    GridTooSmall(String),
    #[error("unstable fit: {0}")]
    UnstableFit(String),
    #[error("null-space threshold ambiguous: {0}")]
    AmbiguousThreshold(String),
    #[error("chart domain violated: {0}")]
    ChartDomain(String),
    #[error("aliasing detected: {0}")]
    Aliasing(String),
    #[error("dominance violated: {0}")]
    DominanceViolated(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
