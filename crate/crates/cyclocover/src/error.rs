use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),

    #[error("{0} is not a prime power")]
    InvalidQ(u64),

    /// An operation would exceed a configured resource bound; the bound is a
    /// hard error, never a silent truncation.
    #[error("resource bound exceeded: {what} requires {required}, bound is {bound}")]
    ResourceExceeded {
        what: &'static str,
        required: u128,
        bound: u128,
    },

    #[error("field elements belong to different field descriptors")]
    DescriptorMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("no element of order {order}: it does not divide the group order {group_order}")]
    OrderUnavailable { order: u64, group_order: u64 },

    #[error("polynomial is not monic")]
    NonMonic,

    #[error("modulus {m} is not coprime to {q}")]
    NotCoprime { m: u64, q: u64 },

    #[error("inconsistent parameters: {0}")]
    ParameterMismatch(String),

    #[error("the zero element has no annihilator inverse")]
    ZeroElement,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
