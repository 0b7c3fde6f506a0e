use thiserror::Error;

use crate::cbpoint::DegeneracyReport;

/// Which vanishing quantity blocked a cross-ratio evaluation.
///
/// Indices are the role labels used by the formula (e.g. `[514]` for the
/// line cross ratio with the base point in the role of point 5).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vanishing {
    Bracket([usize; 3]),
    Conic([usize; 6]),
}

impl std::fmt::Display for Vanishing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |idx: &[usize]| idx.iter().map(|i| i.to_string()).collect::<String>();
        match self {
            Vanishing::Bracket(idx) => write!(f, "bracket [{}]", join(idx)),
            Vanishing::Conic(idx) => write!(f, "conic [[{}]]", join(idx)),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("singular matrix")]
    Singular,

    #[error("the zero vector is not a projective point")]
    ZeroPoint,

    #[error("index triple {0:?} must be three distinct labels in 1..=8")]
    BadTriple([usize; 3]),

    #[error("degenerate cross ratio: {0} vanishes")]
    DegenerateCrossRatio(Vanishing),

    #[error("degenerate configuration: {reason}")]
    Degenerate {
        reason: String,
        report: Box<DegeneracyReport>,
    },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("tropical factor {0} is +infinity")]
    InfiniteValuation(String),

    #[error("unknown identity '{0}'")]
    UnknownIdentity(String),

    #[error("sampler gave up after {0} degenerate draws")]
    SamplerExhausted(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
