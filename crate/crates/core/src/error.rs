use thiserror::Error;

use crate::chain::ValidationReport;

/// Errors produced by the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid chain:\n{0}")]
    InvalidChain(ValidationReport),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("acyclic: no beta (the transient part of the chain is nilpotent, regime is finitary)")]
    Acyclic,

    #[error("transient block is not strictly substochastic: spectral radius {radius} >= 1 at exponent 1")]
    NotTransient { radius: f64 },

    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("spectral radius {radius} outside row-sum bracket [{lower}, {upper}]")]
    BracketViolation { radius: f64, lower: f64, upper: f64 },

    #[error(
        "simple-cycle catalog exceeds cap of {cap} cycles; regime classification is still \
         available from the component tags"
    )]
    CycleCap { cap: usize },

    #[error("set of words with nonrepeating states exceeds cap of {cap}")]
    WordSetCap { cap: usize },

    #[error("enumeration stopped at the expansion cap of {cap} heap pops after {words} words")]
    ExpansionCap { cap: u64, words: u64 },

    #[error("brute-force word list exceeds guard of {cap} words")]
    BruteForceGuard { cap: usize },

    #[error("regime mismatch: operation requires {expected}, chain is {found}")]
    RegimeMismatch {
        expected: &'static str,
        found: String,
    },

    #[error("degenerate fit window: {0}")]
    DegenerateWindow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors caused by numerical non-convergence rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::BracketViolation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
