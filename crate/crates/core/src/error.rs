//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// A random generator failed to produce a connected graph within the
    /// retry budget (the edge density is too low for the node count).
    #[error("no connected graph after {attempts} attempts (n={n}); increase density or n")]
    ConnectivityExhausted { attempts: usize, n: usize },

    /// Vector/matrix dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Eigendecomposition requires a symmetric matrix.
    #[error("matrix is not symmetric (max |L - L^T| = {max_asym:.3e})")]
    NotSymmetric { max_asym: f64 },

    /// The eigensolver produced non-finite output.
    #[error("eigendecomposition failed: non-finite values in the result")]
    EigenFailure,

    /// The state left the numerical validity region during integration.
    #[error("simulation diverged at step {step} (t = {time} s)")]
    Diverged { step: usize, time: f64 },

    /// Controller samples must be strictly increasing in time.
    #[error("non-monotone controller timestamp: {now} <= {last}")]
    NonMonotoneTime { now: f64, last: f64 },

    /// A metric needed a converged trajectory and did not get one.
    #[error("H(T) has not converged over the horizon; {0}")]
    NotConverged(String),

    /// A metric horizon exceeded the simulated time span.
    #[error("requested horizon {requested} s exceeds trajectory end {available} s")]
    HorizonExceeded { requested: f64, available: f64 },

    /// Paired runs must share network, disturbance, seed and horizon.
    #[error("run metadata mismatch: {0}")]
    MetadataMismatch(String),

    /// Experiment configuration is structurally invalid.
    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("toml error: {0}")]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParam(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
