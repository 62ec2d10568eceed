use thiserror::Error;

use crate::exactnum::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("repeated node {0}")]
    RepeatedNode(Rational),

    #[error("cannot parse rational {0:?}")]
    Parse(String),

    #[error("product leaves the q*sqrt(r)*pi^e family (pi power {0})")]
    PiPowerOverflow(u32),

    #[error("matrix is not positive definite (pivot {index} = {pivot})")]
    NotPositiveDefinite { index: usize, pivot: Rational },

    #[error("root refinement failed for degree {degree}: {reason}")]
    RootRefinement { degree: usize, reason: String },

    #[error("fixed-point iteration did not stabilise after {0} iterations")]
    NonConvergence(usize),

    #[error("identity check failed: {0}")]
    Identity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
