use thiserror::Error;

/// Errors surfaced by the laboratory.
///
/// Contract violations (mismatched moduli, repeated equality pairs, gates on
/// foreign wires) panic instead: they indicate a broken caller, not a state
/// the experiments are expected to recover from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("linear system is singular modulo {modulus}")]
    SingularSystem { modulus: u64 },

    #[error("decode failure: {0}")]
    DecodeFailure(String),

    #[error("encoder produced no usable collision: {0}")]
    NothingToEncode(String),

    #[error("register layout needs {needed} amplitudes, cap is {cap}")]
    LayoutTooLarge { needed: usize, cap: usize },

    #[error("quantum program is malformed: {0}")]
    BadProgram(String),

    #[error("experiment config rejected: {0}")]
    BadConfig(String),

    #[error("unfaithful query: label {0:#x} was never issued by the oracle")]
    UnfaithfulQuery(u128),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
