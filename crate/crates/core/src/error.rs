use thiserror::Error;

use crate::formulas::TheoremId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("{len} coefficients do not fit in a series of order {order}")]
    TooManyCoefficients { len: usize, order: usize },

    #[error("non-unit constant term; only series with constant term +1 or -1 are invertible")]
    NonUnitConstant,

    #[error("divergent product: an infinite q-Pochhammer symbol needs offset >= 1 and step >= 1")]
    DivergentProduct,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{theorem} requires {requirement}, got r={r}")]
    RDomain {
        theorem: TheoremId,
        requirement: &'static str,
        r: u32,
    },

    #[error("{0} is not valid for this operation")]
    WrongKind(TheoremId),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
}
