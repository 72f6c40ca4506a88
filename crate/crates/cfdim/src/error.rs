use thiserror::Error;

/// Failure classes shared by every module.
///
/// The CLI maps them onto exit codes: domain/config/parse → 2,
/// resource → 3, invariant → 4, io → 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A greedy selection target fell outside its feasible interval.
    #[error("infeasible selection at step {step}: target {side} the feasible interval")]
    Infeasible { step: usize, side: &'static str },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Config(_) | Error::Range(_) | Error::Parse(_) => 2,
            Error::Resource(_) => 3,
            Error::Invariant(_) | Error::Infeasible { .. } => 4,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
