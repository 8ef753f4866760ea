use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("not a unital multiplicative series (constant term {0})")]
    NotUnital(String),
    #[error("pole hit: {0}")]
    PoleHit(String),
    #[error("pole: s has a pole at z = {0}")]
    Pole(String),
    #[error("parity required: series is neither even nor odd")]
    ParityRequired,
    #[error("Euler class not invertible: {0}")]
    EulerNotInvertible(String),
    #[error("special point: Euler class vanishes at u = {0}")]
    SpecialPoint(String),
    #[error("every grid point was excluded ({0} points)")]
    GridExhausted(usize),
    #[error("not a torsion point (n_max = {0})")]
    NotTorsion(u32),
    #[error("not injective: matrix has rank {rank} < {cols} columns")]
    NotInjective { rank: usize, cols: usize },
    #[error("not BT-compatible: {0}")]
    NotBtCompatible(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
