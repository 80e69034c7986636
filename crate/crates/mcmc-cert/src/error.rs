use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not row-stochastic: {0}")]
    NotStochastic(String),
    #[error("chain is not reversible: max detailed-balance defect {defect:e}")]
    NotReversible { defect: f64 },
    #[error("chain is reducible: state {state} is not mutually reachable from state 0")]
    ReducibleChain { state: usize },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("state space of size {size} exceeds the cap {cap}")]
    SizeOverflow { size: u128, cap: u128 },
    #[error("exhaustive enumeration over {size} states exceeds the cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("spectral gap exhausted: rate {rate} is not below 1")]
    GapExhausted { rate: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate chord: bracket length {length:e} below {eps0:e}")]
    DegenerateChord { length: f64, eps0: f64 },
    #[error("quadrature did not stabilize after {doublings} grid doublings")]
    NonConvergent { doublings: usize },
    #[error("planned count {value:e} does not fit in 64 bits")]
    CountOverflow { value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
