use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what} is out of its domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid interval [{lo}, {hi}): lower bound must be below upper bound")]
    InvalidBounds { lo: f64, hi: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter space: {0}")]
    InvalidSpace(&'static str),

    #[error("invalid model: {0}")]
    InvalidModel(&'static str),

    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("cannot map the origin to spherical coordinates")]
    DegeneratePoint,

    #[error("sphere proposal hit the origin {retries} times in a row")]
    ProposalRetriesExhausted { retries: usize },

    #[error("series did not converge within {terms} terms")]
    SeriesNotConverged { terms: usize },

    #[error("grid quadrature refused for {dims} dimensions (at most 3)")]
    GridTooLarge { dims: usize },

    #[error("need at least 2 livepoints, got {n}")]
    TooFewLivePoints { n: usize },

    #[error("log-likelihood {value} is not finite at {theta:?}")]
    NonFiniteLikelihood { theta: Vec<f64>, value: f64 },

    #[error(
        "sampler stalled: no trial accepted in {attempts} chains of {trials_per_chain} trials \
         above log-likelihood {threshold}"
    )]
    SamplerStall {
        attempts: usize,
        trials_per_chain: usize,
        threshold: f64,
    },

    #[error("unknown model key {0:?}")]
    UnknownModel(alloc::string::String),
}
