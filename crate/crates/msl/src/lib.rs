//! Forward and inverse spectral problems for self-adjoint matrix
//! Sturm-Liouville operators on `[0, pi]`.
//!
//! The boundary value problem is
//!
//! ```text
//! -Y'' + Q(x) Y = lambda Y,          x in (0, pi),
//!  Y'(0) - h Y(0) = 0,   Y'(pi) + H Y(pi) = 0,
//! ```
//!
//! with an `m x m` Hermitian potential `Q` and Hermitian boundary matrices
//! `h`, `H`. The crate computes the spectral data `{lambda_nq, alpha_nq}`
//! (eigenvalues and Weyl-matrix residues) of such a problem, decides whether
//! candidate data is admissible, and reconstructs `(Q, h, H)` from spectral
//! data by solving a truncated main equation in a block sequence space.
//!
//! Entry points:
//! - [`forward::assemble_spectral_data`] computes spectral data from a [`Problem`].
//! - [`validator::validate`] checks candidate data against the admissibility
//!   conditions.
//! - [`inverse::reconstruct`] recovers `(Q, h, H)` from spectral data.
//!
//! See the `book/` directory of the repository for a guided tour.

pub mod error;
pub mod util;

pub mod grid;
pub mod potential;
pub mod problem;

pub mod operator;

pub mod spectral;

pub mod forward;
pub mod validator;
pub mod inverse;

pub mod io;

pub use error::{Error, Result};
pub use grid::Grid;
pub use potential::Potential;
pub use problem::{OmegaClass, Problem};
pub use spectral::SpectralData;

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;
/// Dense complex matrix used throughout.
pub type CMatrix = nalgebra::DMatrix<Complex>;
