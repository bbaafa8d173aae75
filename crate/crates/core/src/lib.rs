//! Exact computation of Bernstein-Sato polynomials, the ideals Gamma and the
//! Hodge filtration on twisted localizations `O(*f) f^(-alpha)`, with an
//! independent truncated model of the graph-embedding module for cross-checks.

pub mod annbs;
pub mod arith;
pub mod error;
pub mod groebner;
pub mod hodge;
pub mod job;
pub mod oracle;
pub mod parse;
pub mod weyl;

pub use arith::Rational;
pub use error::{Error, Result};
