use thiserror::Error;

/// Failure modes shared by every solver stage.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TakagiError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("nodes {first} and {second} coincide (distance {distance:.3e})")]
    CoincidentNodes {
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("node {index} is not inside the open unit disk (modulus {modulus})")]
    NodeOutsideDisk { index: usize, modulus: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("J-Gram mismatch between domain and range ({mismatch:.3e})")]
    JGramMismatch { mismatch: f64 },

    #[error("{side} vectors are linearly dependent (smallest singular value ratio {ratio:.3e})")]
    DependentVectors { side: &'static str, ratio: f64 },

    #[error("resolvent is singular at {point}")]
    ResolventSingular { point: String },

    #[error("zero polynomial has no roots")]
    ZeroPolynomial,

    #[error("declared degree {declared} is below actual degree {actual}")]
    DegreeTooSmall { declared: usize, actual: usize },

    #[error("Möbius parameter must lie in the open unit disk (|a| = {modulus})")]
    MoebiusOutsideDisk { modulus: f64 },

    #[error("no real combination found after {attempts} attempts (best node margin {best_margin:.3e})")]
    CombinationFailed { attempts: usize, best_margin: f64 },

    #[error("shifted solve {index} failed: {source}")]
    ShiftFailed {
        index: usize,
        #[source]
        source: Box<TakagiError>,
    },

    #[error("decomposition residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    DecompositionResidual { residual: f64, tol: f64 },

    #[error("rank conditions fail for the decomposition ({0})")]
    RankConditions(String),

    #[error("regularization failed up to rank {max_rank}")]
    RegularizationFailed { max_rank: usize },

    #[error("no usable level set found: {0}")]
    LevelSetUnavailable(String),

    #[error("Blaschke products share a zero near {zero}")]
    SharedZeros { zero: String },

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("certificate failed: {0}")]
    CertificateFailed(String),
}

impl TakagiError {
    /// True for errors caused by the caller's data rather than the numerics.
    /// Process exit status: 1 for input errors, 2 for failed certificates,
    /// 3 for numerical breakdown.
    pub fn exit_code(&self) -> i32 {
        match self {
            e if e.is_input_error() => 1,
            TakagiError::CertificateFailed(_) => 2,
            TakagiError::ShiftFailed { source, .. } if source.is_input_error() => 1,
            _ => 3,
        }
    }

    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            TakagiError::InvalidInput(_)
                | TakagiError::NotHermitian { .. }
                | TakagiError::CoincidentNodes { .. }
                | TakagiError::NodeOutsideDisk { .. }
                | TakagiError::DimensionMismatch { .. }
                | TakagiError::MoebiusOutsideDisk { .. }
                | TakagiError::DecompositionResidual { .. }
                | TakagiError::SharedZeros { .. }
                | TakagiError::DegreeTooSmall { .. }
                | TakagiError::ZeroPolynomial
        )
    }
}

pub type Result<T> = std::result::Result<T, TakagiError>;
