use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph with {n} vertices")]
    InvalidSet { vertex: usize, n: usize },

    #[error("seed set is empty")]
    EmptySeed,

    #[error("seed volume {seed_volume} exceeds half the graph volume ({half_volume})")]
    SeedTooLarge { seed_volume: f64, half_volume: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("no finite s-t cut exists")]
    UnboundedFlow,

    #[error("max-flow/min-cut duality violated: flow {flow} vs cut {cut}")]
    Duality { flow: f64, cut: f64 },

    #[error("rho {rho} must exceed -lambda2 = {}", -lambda2)]
    RhoOutOfRange { rho: f64, lambda2: f64 },

    #[error("correlation {kappa} is not attainable; achievable range is [{low}, {high}]")]
    UnattainableCorrelation { kappa: f64, low: f64, high: f64 },

    #[error("degenerate result: {0}")]
    Degenerate(String),

    #[error("instance too large for exhaustive search: {size} > {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("line {line}: self-loop on '{label}'")]
    SelfLoop { line: usize, label: String },

    #[error("line {line}: edge weight must be positive, got {weight}")]
    NonPositiveWeight { line: usize, weight: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is disconnected: '{reached}' cannot reach '{unreached}'")]
    Disconnected { reached: String, unreached: String },

    #[error("input contains no edges")]
    EmptyInput,

    #[error("unknown node label '{0}'")]
    UnknownLabel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
