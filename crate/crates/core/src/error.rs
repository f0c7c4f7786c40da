use thiserror::Error;

/// Errors raised by the arithmetic, evaluation and verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `Im τ ≤ 0`.
    #[error("tau = {re} + {im}i is not in the upper half-plane")]
    NotUpperHalfPlane { re: f64, im: f64 },

    /// The entries do not form a matrix of determinant 1.
    #[error("matrix [[{a},{b}],[{c},{d}]] has determinant {det}, expected 1")]
    Determinant {
        a: String,
        b: String,
        c: String,
        d: String,
        det: String,
    },

    /// The matrix is not congruent to the identity mod 2.
    #[error("matrix {0} is not in Γ(2)")]
    NotGamma2(String),

    /// The requested tolerance needs more terms than the configured cap.
    #[error("tolerance {tol:e} unreachable within {cap} terms; best achievable bound is {achievable:e}")]
    PrecisionUnreachable { tol: f64, cap: usize, achievable: f64 },

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// A suite name outside the registry.
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    /// A broken internal invariant.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
