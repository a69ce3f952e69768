use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameter set violates a physical constraint.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The linearized model has a closed-loop pole in the right half-plane.
    #[error("unstable configuration: drift eigenvalue with real part {max_re:.3e} rad/s")]
    Unstable { max_re: f64 },

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Config file failed to parse or violated an invariant.
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    /// Nonlinear fit failed to converge or found no peak.
    #[error("fit failed: {0}")]
    FitFailed(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
