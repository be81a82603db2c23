//! Exact Hurwitz, Faber-Hurwitz and Faber intersection number engine.
//!
//! Everything is computed over arbitrary precision rationals; series are
//! truncated multivariate power series with explicit truncation caps.

pub mod combinat;
pub mod degeneration;
pub mod faber;
pub mod hurwitz;
pub mod localization;
pub mod pseries;
pub mod suites;

pub use combinat::{Partition, Q};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("incompatible variables: {0}")]
    Vars(String),
    #[error("truncation too small: {0}")]
    Truncation(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("missing symbol {0}")]
    MissingSymbol(String),
    #[error("linear system: {0}")]
    Linear(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
