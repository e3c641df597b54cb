//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid domain: {0}")]
    Domain(String),
    #[error("domain is not tilable: (n, m, M) = ({n}, {m}, {big_m})")]
    NotTilable { n: i64, m: i64, big_m: i64 },
    #[error("coordinate out of range: {0}")]
    OutOfRange(String),
    #[error("enumeration cap exceeded: {cells} cells > cap {cap}")]
    CapExceeded { cells: usize, cap: usize },
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("invalid tiling: {0}")]
    InvalidTiling(String),
}

pub type Result<T> = std::result::Result<T, Error>;
