use thiserror::Error;

/// Errors produced while building codes, interleavers and decoders.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial {poly:#x} is not primitive for GF(2^{m})")]
    NonPrimitivePoly { m: u32, poly: u32 },

    #[error("field degree m = {0} is outside 2..=16")]
    UnsupportedDegree(u32),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid code parameters: {0}")]
    InvalidParams(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("incompatible BCH/RS pair: {0}")]
    IncompatiblePair(String),

    #[error("interleaver geometry {rows}x{cols} does not cover {size} positions")]
    BadGeometry { rows: usize, cols: usize, size: usize },

    #[error("incompatible component codes: {0}")]
    IncompatibleCodes(String),

    #[error("no test sequence produced a codeword")]
    EmptyCandidateSet,
}

pub type Result<T> = std::result::Result<T, Error>;
