use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mass must be positive and finite, got {0}")]
    NonPositiveMass(f64),

    #[error("expected a unit 3-vector, got norm {0}")]
    NotUnitVector(f64),

    #[error("matrix does not preserve the Minkowski metric (defect {defect:e})")]
    NotLorentz { defect: f64 },

    #[error("Lorentz matrix is not proper orthochronous (det {det}, Λ⁰₀ {time_component})")]
    NotProperOrthochronous { det: f64, time_component: f64 },

    #[error("matrix is not a proper rotation (defect {defect:e})")]
    NotRotation { defect: f64 },

    #[error("spinor is not normalized (norm² {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),

    #[error("momentum direction undefined at p = 0")]
    UndefinedDirection,

    #[error("unknown representation `{0}`")]
    UnknownRepresentation(String),

    #[error("unknown operator kind `{0}`")]
    UnknownKind(String),

    #[error("expectation table is inconsistent: trace part {residual:e} exceeds tolerance {tolerance:e}")]
    InconsistentTable { residual: f64, tolerance: f64 },

    #[error("expectation value {value} for {entry} is outside [-1/2, 1/2]")]
    ExpectationOutOfRange { entry: String, value: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
