use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("non-finite sample at index {index} ({context})")]
    NonFinite { index: usize, context: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field is not resolved: {0}")]
    Unresolved(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("M(t) requires t > 0 (got t = {0})")]
    ZeroTime(f64),

    #[error("kernel width delta = {delta} needs a grid spacing <= {required_spacing} (have {spacing})")]
    UnderResolvedKernel {
        delta: f64,
        spacing: f64,
        required_spacing: f64,
    },

    #[error("profile blow-up at s = {s}, xi = {xi} (W = {w:e})")]
    ProfileBlowUp { s: f64, xi: f64, w: f64 },

    #[error("profile horizon exceeded: s = {s} > B = {b}")]
    Horizon { s: f64, b: f64 },

    #[error("RK4 step-size underflow at s = {s} (xi = {xi})")]
    StepUnderflow { s: f64, xi: f64 },

    #[error("boundary leak at t = {t}: |u| at the edge is {ratio:e} of the peak (L too small)")]
    BoundaryLeak { t: f64, ratio: f64 },

    #[error("no blow-up before the horizon t = {horizon}: {hint}")]
    HorizonExhausted { horizon: f64, hint: String },

    #[error("quadrature did not converge ({what}); nodes: {nodes:?}")]
    Quadrature { what: String, nodes: Vec<f64> },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
