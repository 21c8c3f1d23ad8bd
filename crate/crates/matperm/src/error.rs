use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("enumeration budget exceeded: {needed} states requested, cap is {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },

    #[error("field too large: q = {0} exceeds the table cap")]
    FieldTooLarge(u64),

    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("series has nonzero constant term")]
    NonzeroConstantTerm,

    #[error("series constant term is not 1")]
    ConstantTermNotOne,

    #[error("coefficient index {index} out of range (order {order})")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("series carries marker variables where pure rationals are required")]
    MarkerCoefficients,

    #[error("constraint degrees collide: degree {0} listed twice")]
    DegreeCollision(u32),

    #[error("precision K = {k} too small for the requested cokernel sizes (need K > {needed})")]
    PrecisionTooSmall { k: u32, needed: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
