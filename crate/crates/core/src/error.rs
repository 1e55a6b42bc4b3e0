use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry count {found} does not match shape {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositive { eigenvalue: f64 },
    #[error("vectors are not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("density operator trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },
    #[error("operator is not a projector (residual {residual:e})")]
    NotProjector { residual: f64 },
    #[error("projectors are not mutually orthogonal (residual {residual:e})")]
    NotOrthogonal { residual: f64 },
    #[error("projectors do not resolve the identity (residual {residual:e})")]
    IncompleteResolution { residual: f64 },
    #[error("eigenvalues are not distinct: {value}")]
    RepeatedEigenvalue { value: f64 },
    #[error("completeness relation violated: ||sum M_i^dag M_i - 1|| = {residual:e}")]
    CompletenessViolation { residual: f64 },
    #[error("effects do not sum to the identity (residual {residual:e})")]
    EffectsNotComplete { residual: f64 },
    #[error("measurement needs at least one outcome")]
    NoOutcomes,
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("duplicate outcome label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown outcome label {0:?}")]
    UnknownLabel(String),
    #[error("index {index} out of range for {len} outcomes")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("outcome {label:?} has probability {probability:e}; post-measurement state undefined")]
    ZeroProbabilityOutcome { label: String, probability: f64 },
    #[error("outcome probabilities sum to {sum}, expected 1")]
    ProbabilityNormalization { sum: f64 },
    #[error("mixture does not reproduce the state (residual {residual:e})")]
    InvalidDecomposition { residual: f64 },
    #[error("invalid mixture weights: {0}")]
    InvalidWeights(&'static str),
    #[error("criteria disagree for outcome {label:?}: {detail}")]
    ConsistencyFailure { label: String, detail: String },
    #[error("positive polar factor has full rank; no larger projector exists")]
    NotSingular,
    #[error("unitary acts as 1 (x) V; it is trivial on the first subsystem")]
    NotLocallyNontrivial,
    #[error("invalid dilation model: {0}")]
    InvalidModel(&'static str),
}
