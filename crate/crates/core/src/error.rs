//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by channel construction and the analyses built on it.
#[derive(Debug, Error)]
pub enum Error {
    /// A channel spec violates its invariants (n = 0, d > n, q < 2, ...).
    #[error("invalid channel spec: {0}")]
    InvalidSpec(String),

    /// An operation was called outside its stated contract.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A guarded computation would exceed its resource cap.
    #[error("resource cap exceeded: {what} requires {required}, cap is {cap}")]
    ResourceCap {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    /// The state graph is not strongly connected, so spectral and
    /// cycle-based quantities are undefined.
    #[error("state graph is not strongly connected")]
    NotStronglyConnected,

    /// Power iteration failed to converge within the iteration cap.
    #[error("eigenvalue iteration did not converge within {0} iterations")]
    NonConvergence(usize),

    /// An input symbol was outside the channel alphabet.
    #[error("symbol {symbol} out of range for alphabet size {q}")]
    SymbolOutOfRange { symbol: usize, q: usize },

    /// Two words that must have equal length do not.
    #[error("word length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    /// A codebook was used where a verified zero-error codebook is required.
    #[error("codebook is not verified zero-error")]
    CodebookNotVerified,

    /// The plant model is outside the supported scalar/diagonal class.
    #[error("unsupported plant: {0}")]
    UnsupportedPlant(String),

    /// Serialization or file-format problem.
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
