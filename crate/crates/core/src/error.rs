use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("linear engine `{0}` cannot be seeded with the all-zero state")]
    ZeroState(String),
    #[error("state bit {position} out of range for a {state_bits}-bit state")]
    StateOutOfRange { position: usize, state_bits: usize },
    #[error("state has {got} bits, generator expects {expected}")]
    StateLength { got: usize, expected: usize },
    #[error("generator `{0}` is not declared linear")]
    NotLinear(String),
    #[error("linearity violation in `{generator}`: {detail}")]
    LinearityViolation { generator: String, detail: String },
    #[error("resource limit: {0}")]
    Resource(String),
}
