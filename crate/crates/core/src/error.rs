use alloc::string::String;

use crate::design::Design;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid arm set: {0}")]
    InvalidArmSet(String),

    #[error("vector lies outside the span of the design (residual {residual:.3e})")]
    OutsideSpan { residual: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("design solver did not reach the value bound after {iterations} iterations (value {value:.6}, bound {bound:.6})")]
    DesignNotConverged {
        iterations: usize,
        value: f64,
        bound: f64,
        best: alloc::boxed::Box<Design>,
    },

    #[error("design support {support} exceeds bound {bound}")]
    SupportTooLarge { support: usize, bound: usize },

    #[error("protocol violation: {0}")]
    Protocol(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("trial {index} (seed {seed}): {source}")]
    Trial {
        index: usize,
        seed: u64,
        #[source]
        source: alloc::boxed::Box<Error>,
    },
}

impl Error {
    /// The innermost error, looking through [`Error::Trial`].
    pub fn root(&self) -> &Error {
        match self {
            Error::Trial { source, .. } => source.root(),
            other => other,
        }
    }
}
