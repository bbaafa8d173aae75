use thiserror::Error;

use crate::arith::Rational;

/// Every failure the engine can report. `exit_code` maps each variant onto the
/// process exit status used by the command-line driver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("basis has no Groebner basis attached")]
    MissingGroebner,

    #[error("monomial order is not sharp-graded")]
    OrderNotSharp,

    #[error("no Euler vector field with coefficients of degree <= {bound}")]
    NoEulerField { bound: u32 },

    #[error("invalid annihilator: {0}")]
    InvalidAnnihilator(String),

    #[error("root sanity violation ({0}); the supplied annihilator is probably incomplete")]
    RootSanity(String),

    #[error("root window violated: roots {} lie outside the open interval", fmt_roots(.offending))]
    WindowFailure { offending: Vec<Rational> },

    #[error("missing hypothesis: {0}")]
    MissingHypothesis(String),

    #[error("pole {pole} exceeds pole level {level}")]
    PoleExceeded { pole: u32, level: u32 },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("oracle inconclusive at budget: {0}")]
    BudgetInconclusive(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

fn fmt_roots(roots: &[Rational]) -> String {
    let parts: Vec<String> = roots.iter().map(|r| r.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::WindowFailure { .. }
            | Error::NoEulerField { .. }
            | Error::MissingHypothesis(_)
            | Error::RootSanity(_)
            | Error::InvalidAnnihilator(_) => 2,
            Error::BudgetInconclusive(_) => 3,
            Error::Syntax { .. } | Error::UnknownVariable(_) | Error::Config(_) | Error::InvalidInput(_) => 4,
            Error::SignatureMismatch(_)
            | Error::MissingGroebner
            | Error::OrderNotSharp
            | Error::PoleExceeded { .. }
            | Error::Inconsistency(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
