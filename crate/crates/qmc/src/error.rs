use thiserror::Error;

/// Which structural check rejected a channel as not irreducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum IrreducibilityCheck {
    /// Eigenvalue 1 of the transfer operator is degenerate (or missing).
    EigenvalueOneNotSimple,
    /// The stationary state has a (numerically) zero eigenvalue.
    StationaryNotFaithful,
}

#[derive(Debug, Error)]
pub enum QmcError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not an isometry: ||V*V - I|| = {residual:.3e} exceeds {tol:.1e}")]
    NotIsometry { residual: f64, tol: f64 },
    #[error("unit dimension mismatch: {0}")]
    UnitDimMismatch(String),
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig:.3e}")]
    NotPsd { min_eig: f64 },
    #[error("channel is not irreducible ({check:?}): {detail}")]
    NotIrreducible {
        check: IrreducibilityCheck,
        detail: String,
        eigenvalues: Vec<(f64, f64)>,
    },
    #[error("peripheral spectrum is not a group of roots of unity: {0}")]
    PeripheralMismatch(String),
    #[error("could not label the cyclic blocks consistently: {0}")]
    LabelingFailure(String),
    #[error("size cap exceeded: {what} needs {needed}, cap is {cap}")]
    SizeCap {
        what: String,
        needed: usize,
        cap: usize,
    },
    #[error("gauge constraint violated: {0}")]
    GaugeConstraintViolated(String),
    #[error("resolvent is singular on the constraint space (smallest singular value {sigma_min:.3e})")]
    SingularResolvent { sigma_min: f64 },
    #[error("tangent is not identifiable: ||V*A|| = {residual:.3e}")]
    NotIdentifiable { residual: f64 },
    #[error("not a tangent vector: anti-Hermitian part of V*A is {residual:.3e}")]
    NotTangent { residual: f64 },
    #[error("equivalence witness is inconsistent: {0}")]
    WitnessInconsistent(String),
    #[error("retraction failed: {0}")]
    RetractionFailure(String),
    #[error("resolvent is ill-conditioned (condition number {condition:.3e})")]
    ResolventIllConditioned { condition: f64 },
    #[error("profile does not match the isometry: {0}")]
    ProfileMismatch(String),
    #[error("Gram matrix is not positive semidefinite: min eigenvalue {min_eig:.3e}")]
    GramNotPsd { min_eig: f64 },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("incomplete measurement: {0}")]
    IncompleteMeasurement(String),
    #[error("degenerate state: {0}")]
    DegenerateState(String),
    #[error("parameter {value} outside the admissible interval {interval}")]
    OutOfInterval { value: f64, interval: String },
    #[error("parametrisation is reducible: {0}")]
    ReducibleParameters(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl QmcError {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            QmcError::DimensionMismatch(_) => "DimensionMismatch",
            QmcError::NotIsometry { .. } => "NotIsometry",
            QmcError::UnitDimMismatch(_) => "UnitDimMismatch",
            QmcError::NotDensity(_) => "NotDensity",
            QmcError::NotPsd { .. } => "NotPSD",
            QmcError::NotIrreducible { .. } => "NotIrreducible",
            QmcError::PeripheralMismatch(_) => "PeripheralMismatch",
            QmcError::LabelingFailure(_) => "LabelingFailure",
            QmcError::SizeCap { .. } => "SizeCap",
            QmcError::GaugeConstraintViolated(_) => "GaugeConstraintViolated",
            QmcError::SingularResolvent { .. } => "SingularResolvent",
            QmcError::NotIdentifiable { .. } => "NotIdentifiable",
            QmcError::NotTangent { .. } => "NotTangent",
            QmcError::WitnessInconsistent(_) => "WitnessInconsistent",
            QmcError::RetractionFailure(_) => "RetractionFailure",
            QmcError::ResolventIllConditioned { .. } => "ResolventIllConditioned",
            QmcError::ProfileMismatch(_) => "ProfileMismatch",
            QmcError::GramNotPsd { .. } => "GramNotPSD",
            QmcError::IndexOutOfRange(_) => "IndexOutOfRange",
            QmcError::IncompleteMeasurement(_) => "IncompleteMeasurement",
            QmcError::DegenerateState(_) => "DegenerateState",
            QmcError::OutOfInterval { .. } => "OutOfInterval",
            QmcError::ReducibleParameters(_) => "ReducibleParameters",
            QmcError::InvalidInput(_) => "InvalidInput",
            QmcError::Numerical(_) => "Numerical",
            QmcError::Json(_) => "Json",
            QmcError::Io(_) => "Io",
        }
    }
}

pub type Result<T> = std::result::Result<T, QmcError>;
