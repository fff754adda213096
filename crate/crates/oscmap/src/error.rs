use thiserror::Error;

/// Errors produced by the numeric layers of the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square")]
    NotSquare,

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {diff:e}")]
    Asymmetric { i: usize, j: usize, diff: f64 },

    #[error(
        "diagonal entry {index} is {value}; the classical oscillator construction \
         requires positive natural frequencies on the diagonal"
    )]
    NonPositiveDiagonal { index: usize, value: f64 },

    #[error("coupling {coupling} is not smaller in magnitude than {limit}")]
    CouplingTooStrong { coupling: f64, limit: f64 },

    #[error("parameter {name} must be positive and finite, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("ring needs at least 3 sites, got {n}; use the dimer builder for two sites")]
    RingTooSmall { n: usize },

    #[error("damping rate {value} at site {index} is negative")]
    NegativeDamping { index: usize, value: f64 },

    #[error("matrix is singular or too close to singular to invert")]
    Singular,

    #[error("eigensolver failed to converge after {sweeps} sweeps")]
    NonConvergence { sweeps: usize },

    #[error("invalid integration plan: {0}")]
    InvalidPlan(String),

    #[error("system has velocity damping; the Verlet integrator only handles undamped systems")]
    DampedSystem,

    #[error("trajectories are not on the same time grid")]
    GridMismatch,

    #[error("index {index} out of range for dimension {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("state norm^2 is {norm_sq}, too far from 1 for a normalized state")]
    NotNormalized { norm_sq: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
