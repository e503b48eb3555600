//! Matrix-valued solutions of the Sturm-Liouville equation, boundary forms,
//! the characteristic function, the Weyl matrix, and the two-point kernel
//! built from them.

mod dkernel;
mod integrate;
mod model;
mod solution;
mod weyl;

pub use dkernel::{d_kernel, d_kernel_profile, pair_integral, wronskian_form, DKernelValue, DIAGONAL_SWITCH};
pub use integrate::{integrate_solution, Evaluator, PotentialTable};
pub use model::{
    model_d_kernel, model_d_kernel_deriv, model_mu, model_phi_deriv, model_phi_solution,
    model_phi_value, model_s_solution, model_s_value, model_weyl_matrix,
};
pub use solution::{boundary_form_u, boundary_form_v, MatrixSolution};
pub use weyl::{characteristic_function, weyl_matrix, weyl_solution};
