//! Reconstruction of `(Q, h, H)` from spectral data via the truncated main
//! equation in a block sequence space.

mod model_data;
mod reconstruct;
mod system;
mod weyl_series;
mod xi;

pub use model_data::model_spectral_data;
pub use reconstruct::{
    reconstruct, reconstruct_with_model, DerivativePath, ModelStrategy,
    ReconstructDiagnostics, ReconstructOptions, ReconstructionResult,
};
pub use system::{
    build_system, derivative_system, recover_phi, solve_main_equation, IndexSetV,
    MainEquationSystem, ModelTables, SolvedSystem,
};
pub use weyl_series::weyl_from_data;
pub use xi::{compute_xi, XiWeights};
