use thiserror::Error;

/// Errors produced by the numerical and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left} vs {right}")]
    DimensionMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },

    #[error(
        "matrix entries must be finite and form a square array (got {len} entries for dim {dim})"
    )]
    MalformedMatrix { dim: usize, len: usize },

    #[error("matrix is not Hermitian: relative residual {residual:.3e}")]
    NotHermitian { residual: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:.3e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("Bloch vector must have unit length, got norm {norm}")]
    NonUnitBloch { norm: f64 },

    #[error("observable {label} does not square to the identity (residual {residual:.3e})")]
    NotDichotomic { label: String, residual: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid outcome distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid hidden-variable mixture: {0}")]
    InvalidMixture(String),

    #[error("outcome assignment must be +1 or -1, got {0}")]
    InvalidOutcome(i8),

    #[error("observables of different parties fail to commute (residual {residual:.3e})")]
    CrossPartyNoncommuting { residual: f64 },

    #[error("scenario has no state")]
    MissingState,

    #[error("shots_per_pair ≥ 1 required, got {0}")]
    InvalidShots(u64),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("invalid optimizer parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
