use thiserror::Error;

/// Errors raised by the numerical-algebra routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumaError {
  #[error("not numerical: {0}")]
  NotNumerical(String),
  #[error("arity mismatch: expected {expected}, found {found}")]
  ArityMismatch { expected: usize, found: usize },
  #[error("not a cocycle: coboundary has {0} nonzero terms")]
  NotACocycle(usize),
  #[error("face or degeneracy map {0} is not additive; graded cohomology is unavailable")]
  NonAdditiveFaces(String),
  #[error("not a group: {0}")]
  NotAGroup(String),
  #[error("invalid twisting function: {0}")]
  InvalidTwisting(String),
  #[error("p-adic precision exhausted: needed {needed} digits, had {available}")]
  PrecisionExhausted { needed: u32, available: u32 },
  #[error("truncation too small: complex has degree {degree} above n_max = {n_max}")]
  TruncationTooSmall { degree: usize, n_max: usize },
  #[error("inconsistent data: {0}")]
  InconsistentData(String),
  #[error("augmentation action is not nilpotent after {0} steps")]
  NonNilpotentAction(usize),
  #[error("invalid input: {0}")]
  InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, NumaError>;
