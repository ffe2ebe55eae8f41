use thiserror::Error;

/// Errors raised by encoding, simulation and training routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet size must be a power of two >= 2, got {0}")]
    InvalidAlphabet(u32),

    #[error("digit {digit} is out of range for alphabet size {m}")]
    DigitOutOfRange { digit: u32, m: u32 },

    #[error("angle {0} is outside [0, pi)")]
    AngleOutOfRange(f64),

    #[error("pattern must contain at least one element")]
    EmptyPattern,

    #[error("invalid bit {0:?}, expected '0' or '1'")]
    InvalidBit(char),

    #[error("invalid pattern code {0:?}")]
    InvalidCode(String),

    #[error("pattern lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("alphabet sizes differ: {left} vs {right}")]
    AlphabetMismatch { left: u32, right: u32 },

    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error(
        "circuits with {0} data qubits are not supported: QASM emission covers up to 4 controls, \
         larger multi-controlled NOT decompositions are future work"
    )]
    UnsupportedSize(usize),

    #[error("grid of {0} codes per axis is too large")]
    GridTooLarge(u64),

    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
