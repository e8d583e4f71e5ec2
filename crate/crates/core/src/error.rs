use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (asymmetry {defect:e} exceeds tolerance {tolerance:e})")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("operator is not positive semi-definite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state has trace {trace}, expected 1")]
    NotNormalized { trace: f64 },

    #[error("state is not pure (purity {purity})")]
    NotPure { purity: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    EigenNoConvergence { sweeps: usize, off_norm: f64 },

    #[error("function is not finite at in-support eigenvalue {eigenvalue:e}")]
    Domain { eigenvalue: f64 },

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("optimizer did not converge after {iterations} iterations (projected gradient norm {gradient_norm:e}, objective {objective})")]
    OptimizerNoConvergence {
        iterations: usize,
        gradient_norm: f64,
        objective: f64,
    },

    #[error("objective is not finite at s = {at}")]
    NonFiniteObjective { at: f64 },

    #[error("operator of dimension {dim} exceeds the memory budget of {limit}")]
    MemoryBudget { dim: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(alloc::format!($($arg)*))
    };
}

macro_rules! precondition {
    ($($arg:tt)*) => {
        $crate::error::Error::Precondition(alloc::format!($($arg)*))
    };
}

pub(crate) use invalid;
pub(crate) use precondition;
