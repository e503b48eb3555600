//! Closed-form solutions and kernels of the model problem
//! `Q = (2/pi) omega`, `h = H = 0`.

use crate::grid::Grid;
use crate::problem::OmegaClass;
use crate::util::sinc;
use crate::{CMatrix, Complex};

use super::solution::MatrixSolution;

/// Channel wavenumber `mu_q = sqrt(lambda - 2 omega_q / pi)`, principal
/// branch (`Re mu >= 0`).
pub fn model_mu(omega: &OmegaClass, q: usize, lambda: Complex) -> Complex {
    (lambda - Complex::new(2.0 * omega.value(q) / std::f64::consts::PI, 0.0)).sqrt()
}

/// `phi(x) = diag(cos(mu_q x))`.
pub fn model_phi_value(omega: &OmegaClass, lambda: Complex, x: f64) -> CMatrix {
    let m = omega.m();
    let mut y = CMatrix::zeros(m, m);
    for q in 0..m {
        y[(q, q)] = (model_mu(omega, q, lambda) * x).cos();
    }
    y
}

/// `phi'(x) = diag(-mu_q sin(mu_q x))`.
pub fn model_phi_deriv(omega: &OmegaClass, lambda: Complex, x: f64) -> CMatrix {
    let m = omega.m();
    let mut y = CMatrix::zeros(m, m);
    for q in 0..m {
        let mu = model_mu(omega, q, lambda);
        // -mu sin(mu x) = -mu^2 x sinc(mu x): even in mu.
        y[(q, q)] = -mu * mu * x * sinc(mu * x);
    }
    y
}

/// `S(x) = diag(sin(mu_q x)/mu_q)`, with the removable singularity at
/// `mu_q = 0` filled (`S = x`).
pub fn model_s_value(omega: &OmegaClass, lambda: Complex, x: f64) -> CMatrix {
    let m = omega.m();
    let mut y = CMatrix::zeros(m, m);
    for q in 0..m {
        y[(q, q)] = sinc(model_mu(omega, q, lambda) * x) * x;
    }
    y
}

/// `S'(x) = diag(cos(mu_q x))`.
pub fn model_s_deriv(omega: &OmegaClass, lambda: Complex, x: f64) -> CMatrix {
    model_phi_value(omega, lambda, x)
}

fn sample(omega: &OmegaClass, lambda: Complex, grid: Grid, phi: bool) -> MatrixSolution {
    let values = grid
        .nodes()
        .map(|x| {
            if phi {
                model_phi_value(omega, lambda, x)
            } else {
                model_s_value(omega, lambda, x)
            }
        })
        .collect();
    let derivatives = grid
        .nodes()
        .map(|x| {
            if phi {
                model_phi_deriv(omega, lambda, x)
            } else {
                model_s_deriv(omega, lambda, x)
            }
        })
        .collect();
    MatrixSolution { lambda, grid, values, derivatives }
}

/// The model `phi` sampled on a grid.
pub fn model_phi_solution(omega: &OmegaClass, lambda: Complex, grid: Grid) -> MatrixSolution {
    sample(omega, lambda, grid, true)
}

/// The model `S` sampled on a grid.
pub fn model_s_solution(omega: &OmegaClass, lambda: Complex, grid: Grid) -> MatrixSolution {
    sample(omega, lambda, grid, false)
}

/// Scalar two-point kernel of one cosine channel:
/// `int_0^x cos(b t) cos(a t) dt = x (sinc((a+b)x) + sinc((a-b)x)) / 2`.
/// The sinc form is stable for `a = b`, `a = -b`, and tiny differences.
fn channel_kernel(x: f64, a: Complex, b: Complex) -> Complex {
    ((sinc((a + b) * x) + sinc((a - b) * x)) * x) * Complex::new(0.5, 0.0)
}

/// Model two-point kernel `D(x, lambda, mu) = int_0^x phi*(t, mu) phi(t, lambda) dt`
/// (diagonal), in closed form. Both parameters must be real for the adjoint
/// to reduce to plain transposition of the diagonal, which is the case for
/// spectral data.
pub fn model_d_kernel(omega: &OmegaClass, lambda: f64, mu: f64, x: f64) -> CMatrix {
    let m = omega.m();
    let mut d = CMatrix::zeros(m, m);
    for q in 0..m {
        let a = model_mu(omega, q, Complex::new(lambda, 0.0));
        let b = model_mu(omega, q, Complex::new(mu, 0.0));
        // conj(cos(b t)) = cos(conj(b) t); for real mu, b is real or purely
        // imaginary and cos(b t) is real either way.
        d[(q, q)] = channel_kernel(x, a, b.conj());
    }
    d
}

/// `d/dx` of the model kernel: `phi*(x, mu) phi(x, lambda)` (diagonal).
pub fn model_d_kernel_deriv(omega: &OmegaClass, lambda: f64, mu: f64, x: f64) -> CMatrix {
    let m = omega.m();
    let mut d = CMatrix::zeros(m, m);
    for q in 0..m {
        let a = model_mu(omega, q, Complex::new(lambda, 0.0));
        let b = model_mu(omega, q, Complex::new(mu, 0.0));
        d[(q, q)] = (b.conj() * x).cos() * (a * x).cos();
    }
    d
}

/// Closed-form Weyl matrix of the model problem,
/// `diag(cos(mu_q pi) / (mu_q sin(mu_q pi)))`.
pub fn model_weyl_matrix(omega: &OmegaClass, lambda: Complex) -> CMatrix {
    let m = omega.m();
    let pi = std::f64::consts::PI;
    let mut w = CMatrix::zeros(m, m);
    for q in 0..m {
        let mu = model_mu(omega, q, lambda);
        // mu sin(mu pi) = mu^2 pi sinc(mu pi): even in mu.
        let denom = mu * mu * pi * sinc(mu * pi);
        w[(q, q)] = (mu * pi).cos() / denom;
    }
    w
}
