use thiserror::Error;

/// Errors raised by constructors, validators and checkers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("metric axiom violated: {0}")]
    MetricAxiom(String),

    #[error("graph is disconnected: no path between {0} and {1}")]
    Disconnected(usize, usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("chain is reducible (second eigenvalue {0} is numerically 1)")]
    Reducible(f64),

    #[error("numerical drift in matrix power: {0}")]
    Drift(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("size cap exceeded: {what} needs {requested}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("map is not injective: points {0} and {1} share an image")]
    NotInjective(usize, usize),

    #[error("Lipschitz hypothesis fails on pair ({0}, {1}): {2}")]
    NotLipschitz(usize, usize, String),

    #[error("hypothesis audit failed: {0}")]
    Hypothesis(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
