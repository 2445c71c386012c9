use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A value object failed one of its invariants.
    #[error("invariant `{invariant}` violated: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    /// The characteristic function has not decayed below the threshold inside the
    /// largest admissible transform window.
    #[error("characteristic function does not decay: |G| = {residual:.3e} at |beta| = {radius:.2}")]
    InsufficientDecay { radius: f64, residual: f64 },

    /// P is not a regular function for this state.
    #[error("ill-posed P reconstruction: e^|v|^2 <-v|rho|v> = {residual:.3e} at |v| = {radius:.2}")]
    IllPosed { radius: f64, residual: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("wavefunction not resolved on grid: edge amplitude {edge:.3e}")]
    Resolution { edge: f64 },

    /// Output mass fell off the grid.
    #[error("support overflow: captured mass {mass:.6}; suggested |alpha| extent >= {suggested_extent:.2}")]
    SupportOverflow { mass: f64, suggested_extent: f64 },

    #[error("distribution kind mismatch: {0}")]
    KindMismatch(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("numeric overflow: {0}")]
    Overflow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            invariant,
            detail: detail.into(),
        }
    }
}
