use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("profile has no p* crossing")]
    NoCrossing,

    #[error("profile increases by {amount:e} between nodes {index} and {}", index + 1)]
    NonMonotone { index: usize, amount: f64 },

    #[error("no sign change of the front equation on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("root solve stalled with residual {residual:e}")]
    NoConvergence { residual: f64 },

    #[error("non-finite value at node {node}")]
    NonFinite { node: usize },

    #[error("degenerate jump |p_L - p_R| = {0:e}")]
    DegenerateJump(f64),

    #[error("front moved left by {0:e}")]
    FrontReceded(f64),

    #[error("front left the interior at x = {0}")]
    FrontOutOfDomain(f64),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("need at least two points, got {0}")]
    TooFewPoints(usize),

    #[error("step {step} (t = {t:e}): {source}")]
    Step {
        step: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Step { source, .. } => source.is_numerical(),
            Error::InvalidParameter(_) | Error::LengthMismatch(..) | Error::TooFewPoints(_) => {
                false
            }
            _ => true,
        }
    }
}
