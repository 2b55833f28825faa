use thiserror::Error;

/// Errors reported by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameter tuple rejected by validation/normalization.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A word or error vector has the wrong number of coordinates.
    #[error("length mismatch: expected {expected} coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A word lies outside the channel alphabet.
    #[error("word outside alphabet: {0}")]
    AlphabetViolation(String),

    /// An enumeration, probe budget, or memory limit was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The requested quantity is infinite over the integer alphabet.
    #[error("{0} is not defined over the unbounded integer alphabet")]
    InfiniteAlphabet(&'static str),

    /// The requested quantity needs the integer alphabet.
    #[error("{0} requires the integer alphabet")]
    RequiresIntegerAlphabet(&'static str),

    /// An operation got an empty code.
    #[error("code is empty")]
    EmptyCode,

    /// Malformed codeword file or inline word/grid text.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
