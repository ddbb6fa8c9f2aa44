use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates an admissibility constraint (ensemble constraints,
    /// Jack parameter positivity, argument ranges).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The parameters are admissible for the ensemble but not for the
    /// requested evaluation path (e.g. a non-integer `alpha1` on an exact path).
    #[error("{0}")]
    ModeMismatch(String),

    /// The request lies outside the documented accuracy envelope.
    #[error("outside validity envelope: {0}")]
    OutsideEnvelope(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("lower parameter pole: {0}")]
    LowerParameterPole(String),

    #[error("series truncation failed: weight {max_weight} reached with last layer {last_layer:e} (partial sum {partial_sum:e})")]
    TruncationFailure {
        max_weight: usize,
        last_layer: f64,
        partial_sum: f64,
    },

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("degenerate eigenvalue gap between {lambda} and {mu} at sigma = {sigma}")]
    DegenerateEigenvalue { lambda: String, mu: String, sigma: f64 },

    #[error("ill-conditioned input: {0}")]
    IllConditioned(String),

    #[error("matrix is not symmetric (max deviation {max_deviation:e})")]
    Asymmetric { max_deviation: f64 },

    #[error("numerically singular matrix: {0}")]
    Singular(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::ModeMismatch(msg.into())
    }
}
