use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Every variant is a precondition failure on otherwise well-typed input;
/// callers map them onto the "domain error" exit path.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus must be at least 1, got {0}")]
    InvalidGenus(i64),
    #[error("class {0} is not exceptional (euler pairing with itself is {1}, expected 1)")]
    NotExceptional(String, String),
    #[error("class {0} has rank zero")]
    ZeroRank(String),
    #[error("genus {got} is outside the supported range ({need})")]
    GenusOutOfRange { got: u32, need: &'static str },
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("invalid envelope: {0}")]
    InvalidEnvelope(String),
    #[error("alpha must be nonnegative, got {0}")]
    NegativeAlpha(String),
    #[error("alpha must be nonzero")]
    ZeroAlpha,
    #[error("central charge vanishes")]
    ZeroCharge,
    #[error("central charge lies in the open lower half plane")]
    LowerHalfPlane,
    #[error("z1 and z2 are linearly dependent over the reals")]
    DegenerateFrame,
    #[error("frame (z1, z2) has nonnegative determinant; no orientation-preserving normalization exists")]
    WrongOrientation,
    #[error("point ({0}, {1}) is not strictly above the upper envelope")]
    NotAboveEnvelope(String, String),
    #[error("wall owned by {found} cannot be decomposed for class {expected}")]
    MixedOwnership { expected: String, found: String },
    #[error("non-invertible matrix (determinant must be positive)")]
    NonPositiveDeterminant,
    #[error("lift {index} disagrees with the direction of its charge")]
    InconsistentLift { index: usize },
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
