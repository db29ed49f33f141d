use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("insufficient precision: need truncation order {needed}, have {have}")]
    InsufficientPrecision { needed: u32, have: u32 },

    #[error("seed does not isolate a branch: ambiguous at total degree {degree}")]
    Ambiguity { degree: u32 },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("state ceiling of {ceiling} exceeded after {states} states (theoretical bound: {bound})")]
    Resource { states: usize, ceiling: usize, bound: String },

    #[error("orthant automata disagree at boundary point {point:?}")]
    Boundary { point: Vec<i64> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Parse(_) => "parse",
            Error::InsufficientPrecision { .. } => "precision",
            Error::Ambiguity { .. } => "ambiguity",
            Error::Inconsistent(_) => "inconsistent",
            Error::Resource { .. } => "resource",
            Error::Boundary { .. } => "boundary",
            Error::Unsupported(_) => "unsupported",
            Error::Invariant(_) => "invariant",
            Error::Io(_) => "io",
        }
    }
}

impl Error {
    /// Process exit status: 2 usage, 3 resource ceiling, 4 inconsistent input,
    /// 5 internal failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) | Error::Parse(_) | Error::Unsupported(_) | Error::Io(_) => 2,
            Error::Resource { .. } => 3,
            Error::InsufficientPrecision { .. } | Error::Ambiguity { .. } | Error::Inconsistent(_) | Error::Boundary { .. } => 4,
            Error::Invariant(_) => 5,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
