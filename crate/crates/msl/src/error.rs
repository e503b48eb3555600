//! Error type shared by the whole crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The ODE integration produced non-finite values.
    #[error("integration diverged at lambda = {lambda} (non-finite values)")]
    IntegrationDiverged { lambda: num_complex::Complex64 },

    /// The requested grid cannot resolve oscillations at this `lambda`.
    #[error("grid with {steps} steps is too coarse for |rho| = {rho_abs:.3}; need at least {needed} steps")]
    GridTooCoarse {
        steps: usize,
        rho_abs: f64,
        needed: usize,
    },

    /// `lambda` is too close to an eigenvalue for the Weyl matrix to be
    /// evaluated reliably.
    #[error("lambda = {lambda} is within the pole guard of an eigenvalue")]
    NearPole { lambda: num_complex::Complex64 },

    /// Root search could not account for all eigenvalues.
    #[error("eigenvalue localization failed on [{lo:.6}, {hi:.6}]: expected {expected} roots (with multiplicity), found {found}")]
    LocalizationFailure {
        lo: f64,
        hi: f64,
        expected: usize,
        found: usize,
    },

    /// Contour quadrature for a residue did not converge.
    #[error("residue contour around lambda = {lambda0:.9} (radius {radius:.3e}) did not converge: 64- vs 128-node disagreement {disagreement:.3e}")]
    ContourNotConverged {
        lambda0: f64,
        radius: f64,
        disagreement: f64,
    },

    /// The truncated main-equation operator is numerically singular.
    #[error("truncated main equation is ill-conditioned at x = {x:.6} (condition estimate {estimate:.3e}); increase the truncation order or re-validate the data")]
    IllConditioned { x: f64, estimate: f64 },

    /// A matrix that must be Hermitian is not.
    #[error("{what} is not Hermitian: max |A - A*| entry = {asymmetry:.3e}")]
    NotHermitian { what: String, asymmetry: f64 },

    /// `h + H + (1/2) int Q` is not diagonal nondecreasing; the problem must
    /// be normalized first.
    #[error("omega matrix is not diagonal nondecreasing (max off-diagonal {off_diagonal:.3e}); apply normalize_to_a_omega first")]
    NotNormalized { off_diagonal: f64 },

    /// Mismatched dimensions between two objects that must agree.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// Semantic problem in input data, with a JSON-pointer-like path.
    #[error("invalid data at {path}: {message}")]
    InvalidData { path: String, message: String },

    /// JSON syntax error.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidData {
            path: path.into(),
            message: message.into(),
        }
    }
}
