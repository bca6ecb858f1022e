//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid transform parameters: {0}")]
    InvalidParams(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("grid too large for the direct oracle: {h}x{w} (limit {limit}x{limit})")]
    GridTooLarge { h: usize, w: usize, limit: usize },

    #[error("spectrum does not decay: tail energy fraction {fraction:.3e} exceeds {limit:.1e}")]
    NonDecayingSpectrum { fraction: f64, limit: f64 },

    #[error("malformed {format} data at byte {offset}: {msg}")]
    Malformed {
        format: &'static str,
        offset: usize,
        msg: String,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
