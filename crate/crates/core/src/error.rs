use thiserror::Error;

/// Errors raised by beablekit operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not an orthogonal projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("matrices do not span a unital *-algebra: {0}")]
    NotAnAlgebra(String),

    #[error("algebra is not abelian (worst commutator residual {residual:.3e})")]
    NotAbelian { residual: f64 },

    #[error("algebra is not contained in the ambient algebra (residual {residual:.3e})")]
    NotContained { residual: f64 },

    #[error("generic element failed to separate minimal projections after {attempts} attempts")]
    GenericityFailure { attempts: usize },

    #[error("seed algebra is not beable for the state (residual {residual:.3e})")]
    SeedNotBeable { residual: f64 },

    #[error("privileged observable {index} does not commute with the state (residual {residual:.3e})")]
    NotCommutingWithState { index: usize, residual: f64 },

    #[error("privileged observables {first} and {second} do not commute (residual {residual:.3e})")]
    GeneratorsNotMutuallyCommuting {
        first: usize,
        second: usize,
        residual: f64,
    },

    #[error("extra commuting element {index} is not admissible: {reason}")]
    ExtraNotAdmissible { index: usize, reason: String },

    #[error("degenerate angles: {0}")]
    DegenerateAngles(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
