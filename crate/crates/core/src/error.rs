use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("evaluation point {0} is a pole")]
    PoleHit(String),
    #[error("function has a pole on the unit circle")]
    PoleOnCircle,
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("function has a pole at the origin")]
    PoleAtOrigin,
    #[error("function is not in the Smirnov class")]
    NotSmirnov,
    #[error("function is not in the Hardy space: {0}")]
    NotHardy(String),
    #[error("modulus is not log-integrable: {clamped} of {total} samples below the clamp floor")]
    NotLogIntegrable { clamped: usize, total: usize },
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("no spectral gap >= 10 at the kernel threshold (gap {gap:.3e})")]
    IllConditioned { gap: f64 },
    #[error("grid sizes differ: {0} vs {1}")]
    GridMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("kernel is empty at this truncation")]
    EmptyKernel,
    #[error("inner function does not divide the input")]
    NotDivisible,
    #[error("pivot coordinate is identically zero")]
    ZeroPivot,
    #[error("quotient is not in the Smirnov class")]
    QuotientNotSmirnov,
    #[error("hypothesis fails: {0}")]
    HypothesisFails(String),
    #[error("input vector is identically zero")]
    ZeroInput,
    #[error("inner function does not vanish at 0")]
    InnerNotVanishing,
    #[error("matrix inner function does not vanish at 0 or is not inner")]
    NotInnerVanishing,
    #[error("columns are not isometric on the grid (defect {0:.3e})")]
    NotIsometric(f64),
    #[error("determinant is not invertible (min |det| = {0:.3e})")]
    DetNotInvertible(f64),
    #[error("factorization does not reproduce the symbol (defect {0:.3e})")]
    FactorizationMismatch(f64),
    #[error("supplied factor is not inner (defect {0:.3e})")]
    NotInner(f64),
    #[error("function does not carry a declared cyclic flag")]
    NotCyclicFlag,
    #[error("cyclicity of {0} is unknown")]
    UndecidedCyclicity(String),
    #[error("operation needs a rational representation: {0}")]
    NeedsRational(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("schema error at {pointer}: {msg}")]
    Schema { pointer: String, msg: String },
}

impl Error {
    /// Stable machine-readable code used in CLI error documents.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::PoleHit(_) => "PoleHit",
            Error::PoleOnCircle => "PoleOnCircle",
            Error::ZeroFunction => "ZeroFunction",
            Error::PoleAtOrigin => "PoleAtOrigin",
            Error::NotSmirnov => "NotSmirnov",
            Error::NotHardy(_) => "NotHardy",
            Error::NotLogIntegrable { .. } => "NotLogIntegrable",
            Error::TruncationTooSmall(_) => "TruncationTooSmall",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::GridMismatch(..) => "GridMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::EmptyKernel => "EmptyKernel",
            Error::NotDivisible => "NotDivisible",
            Error::ZeroPivot => "ZeroPivot",
            Error::QuotientNotSmirnov => "QuotientNotSmirnov",
            Error::HypothesisFails(_) => "HypothesisFails",
            Error::ZeroInput => "ZeroInput",
            Error::InnerNotVanishing => "InnerNotVanishing",
            Error::NotInnerVanishing => "NotInnerVanishing",
            Error::NotIsometric(_) => "NotIsometric",
            Error::DetNotInvertible(_) => "DetNotInvertible",
            Error::FactorizationMismatch(_) => "FactorizationMismatch",
            Error::NotInner(_) => "NotInner",
            Error::NotCyclicFlag => "NotCyclicFlag",
            Error::UndecidedCyclicity(_) => "UndecidedCyclicity",
            Error::NeedsRational(_) => "NeedsRational",
            Error::Parse { .. } => "ParseError",
            Error::Schema { .. } => "SchemaError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
