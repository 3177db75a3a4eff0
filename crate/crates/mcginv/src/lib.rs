//! Exact mapping class group invariants from finite-dimensional factorizable
//! ribbon Hopf algebras.
//!
//! Everything is computed over cyclotomic fields; equality checks are exact.

use thiserror::Error;

pub mod bimod;
pub mod bundle;
pub mod coend;
pub mod dsl;
pub mod examples;
pub mod frobenius;
pub mod mcg;
pub mod hopf;
pub mod report;
pub mod ribbon;

pub use hopf::{Elem, HopfData};
pub use report::{Check, Report};
pub use ribbon::RibbonData;

#[derive(Debug, Error)]
pub enum McgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("singular: {0}")]
    Singular(String),
    #[error("Hopf algebra is not factorizable (rank of Drinfeld map {rank} < {dim})")]
    NotFactorizable { rank: usize, dim: usize },
    #[error("integral normalization needs a square root of {value} beyond cyclotomic order {max_order}")]
    NormalizationNeedsLargerField { value: String, max_order: u32 },
    #[error("unbound identifier `{0}`")]
    UnboundIdentifier(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown token {token:?} at line {line}, column {col}")]
    UnknownToken { token: String, line: usize, col: usize },
    #[error("`{0}` is already defined")]
    Shadowing(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("automorphism rejected: {0}")]
    AutomorphismRejected(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("ribbon element missing: {0}")]
    MissingRibbon(String),
    #[error("resource budget exceeded: {0}")]
    ResourceBudgetExceeded(String),
    #[error("{a} is not a unit modulo {k}")]
    NotCoprime { a: i64, k: usize },
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<linmap::LinError> for McgError {
    fn from(e: linmap::LinError) -> McgError {
        match e {
            linmap::LinError::ShapeMismatch(s) => McgError::ShapeMismatch(s),
            linmap::LinError::Singular => McgError::Singular("matrix".into()),
            linmap::LinError::Format(s) => McgError::Format(s),
        }
    }
}

impl From<serde_json::Error> for McgError {
    fn from(e: serde_json::Error) -> McgError {
        McgError::Format(e.to_string())
    }
}
