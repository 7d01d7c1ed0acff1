use thiserror::Error;

use crate::spinor::Half;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("prime {0} is too large (fields are limited to p < 65536)")]
    PrimeTooLarge(u32),
    #[error("operation requires characteristic different from 2")]
    CharacteristicTwo,
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("expected a spinor in S{expected}, found S{found}")]
    HalfMismatch { expected: Half, found: Half },
    #[error("the zero spinor has no annihilator")]
    ZeroSpinor,
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("expected dimension {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("spinor is pure; the map is undefined on the spinor variety")]
    PureSpinor,
    #[error("spinor is not pure")]
    NotPure,
    #[error("vector does not lie in the subspace")]
    NotInSubspace,
    #[error("non-transversal intersection: expected dimension {expected}, found {found}")]
    NonTransversal { expected: usize, found: usize },
    #[error("unsupported field size q = {0} (scans support q in {{2, 3}})")]
    UnsupportedField(u32),
    #[error("operation unavailable in characteristic {0}")]
    UnsupportedCharacteristic(u32),
    #[error("codimension {0} is out of range")]
    CodimensionOutOfRange(usize),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("retry budget exhausted after {0} attempts")]
    RetryBudgetExhausted(usize),
    #[error("scene error: {0}")]
    Scene(String),
    #[error("usage error: {0}")]
    Usage(String),
}
