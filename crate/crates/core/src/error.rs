use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid too coarse: spectral self-consistency residual {residual:.3e} exceeds {tolerance:.1e}")]
    GridTooCoarse { residual: f64, tolerance: f64 },

    #[error("window does not decay at the grid edge: edge/peak = {ratio:.3e} (limit {limit:.1e})")]
    EdgeLeak { ratio: f64, limit: f64 },

    #[error("window takes negative values (min {min:.3e})")]
    NegativeWindow { min: f64 },

    #[error("flow pole reached: lambda = {lambda} >= {pole}")]
    FlowPole { lambda: f64, pole: f64 },

    #[error("mu = {mu} outside the radius of validity {radius}")]
    OutOfRadius { mu: f64, radius: f64 },

    #[error("moment sequence is not Gamma-like: third cumulant {0} <= 0")]
    NotGammaLike(String),

    #[error("degenerate moments: second cumulant {0} <= 0")]
    DegenerateMoments(String),

    #[error("cycle length {k} exceeds the configured budget {budget}")]
    Intractable { k: usize, budget: usize },

    #[error("order {order}: computed {computed}, golden {golden}")]
    MismatchAgainstGolden {
        order: usize,
        computed: String,
        golden: String,
    },

    #[error("incompatible moment units: {0}")]
    IncompatibleUnits(String),

    #[error("special function failed to converge: {0}")]
    Convergence(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}
