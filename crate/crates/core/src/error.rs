use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("site {site} out of range for {n} qubits")]
    SiteOutOfRange { site: usize, n: usize },

    #[error("qubit count must be even and at least {min}, got {n}")]
    InvalidQubitCount { n: usize, min: usize },

    #[error("invalid block pair [{p}, {q}] for {blocks} blocks")]
    InvalidBlocks { p: usize, q: usize, blocks: usize },

    #[error("group element must be nontrivial")]
    TrivialElement,

    #[error("group elements must be distinct and nontrivial")]
    InvalidPair,

    #[error("operator is not Hermitian")]
    NotHermitian,

    #[error("operators do not commute")]
    NonCommuting,

    #[error("{what} needs n <= {max}, got n = {n}")]
    ResourceGuard { what: &'static str, n: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("player {player} reads the input of corner {corner} outside its light cone")]
    LightConeViolation { player: usize, corner: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::ResourceGuard { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
