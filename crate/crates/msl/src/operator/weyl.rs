//! Characteristic function and Weyl matrix.

use crate::error::Result;
use crate::grid::Grid;
use crate::problem::Problem;
use crate::{CMatrix, Complex};

use super::integrate::Evaluator;
use super::solution::MatrixSolution;

/// `Delta(lambda) = det V(phi(., lambda))`, entire in `lambda`; its zeros are
/// the eigenvalues, with matching multiplicities.
pub fn characteristic_function(problem: &Problem, lambda: Complex) -> Result<Complex> {
    Evaluator::new(problem, Grid::default_forward()).char_fn(lambda)
}

/// `M(lambda) = -(V(phi))^{-1} V(S)`; errors with `NearPole` when `lambda`
/// is too close to an eigenvalue for the inversion to be trustworthy.
pub fn weyl_matrix(problem: &Problem, lambda: Complex) -> Result<CMatrix> {
    Evaluator::new(problem, Grid::default_forward()).weyl(lambda)
}

/// The Weyl solution `Phi = phi M + S`; satisfies `U(Phi) = I`, `V(Phi) = 0`.
pub fn weyl_solution(problem: &Problem, lambda: Complex, grid: Grid) -> Result<MatrixSolution> {
    Evaluator::new(problem, grid).weyl_solution(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::solution::{boundary_form_u, boundary_form_v};
    use crate::potential::Potential;
    use crate::util;
    use std::f64::consts::PI;

    fn free_problem() -> Problem {
        Problem::new(Potential::zero(1), util::zeros(1), util::zeros(1)).unwrap()
    }

    #[test]
    fn characteristic_free_quarter() {
        // rho = 1/2: Delta = -(1/2) sin(pi/2) = -0.5
        let p = free_problem();
        let d = characteristic_function(&p, Complex::new(0.25, 0.0)).unwrap();
        assert!((d - Complex::new(-0.5, 0.0)).norm() < 1e-12, "{d}");
    }

    #[test]
    fn characteristic_vanishes_at_free_eigenvalues() {
        let p = free_problem();
        for n in [1.0f64, 2.0, 3.0] {
            let d = characteristic_function(&p, Complex::new(n * n, 0.0)).unwrap();
            assert!(d.norm() < 1e-9, "Delta({}) = {}", n * n, d);
        }
    }

    #[test]
    fn characteristic_second_channel_model() {
        // omega = diag(0, pi/2): channel-2 eigenvalues are n^2 + 1.
        let omega = crate::problem::OmegaClass::new(vec![0.0, PI / 2.0]).unwrap();
        let p = Problem::model(&omega);
        for n in [1.0f64, 2.0] {
            let d = characteristic_function(&p, Complex::new(n * n + 1.0, 0.0)).unwrap();
            assert!(d.norm() < 1e-9, "Delta({}) = {}", n * n + 1.0, d);
        }
    }

    #[test]
    fn weyl_free_values() {
        let p = free_problem();
        // lambda = 1/9: M = cos(pi/3) / ((1/3) sin(pi/3)) = sqrt(3)
        let m = weyl_matrix(&p, Complex::new(1.0 / 9.0, 0.0)).unwrap();
        assert!((m[(0, 0)].re - 3.0f64.sqrt()).abs() < 1e-10, "{}", m[(0, 0)]);
        // lambda = 1/4: M = 0
        let m = weyl_matrix(&p, Complex::new(0.25, 0.0)).unwrap();
        assert!(m[(0, 0)].norm() < 1e-11);
    }

    #[test]
    fn weyl_near_pole_guard() {
        let p = free_problem();
        let err = weyl_matrix(&p, Complex::new(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, crate::Error::NearPole { .. }));
    }

    #[test]
    fn block_diagonal_weyl_decouples() {
        use crate::potential::Term;
        // Q = diag(0.4 cos x, 0.2 cos 2x): M is diag of the scalar Weyl fns.
        let q = Potential::closed_form(
            2,
            vec![
                vec![vec![Term::Cos { coeff: Complex::new(0.4, 0.0), freq: 1.0 }], vec![]],
                vec![vec![], vec![Term::Cos { coeff: Complex::new(0.2, 0.0), freq: 2.0 }]],
            ],
        )
        .unwrap();
        let p2 = Problem::new(q, util::zeros(2), util::zeros(2)).unwrap();
        let q1 = Potential::closed_form(
            1,
            vec![vec![vec![Term::Cos { coeff: Complex::new(0.4, 0.0), freq: 1.0 }]]],
        )
        .unwrap();
        let p_a = Problem::new(q1, util::zeros(1), util::zeros(1)).unwrap();
        let q2 = Potential::closed_form(
            1,
            vec![vec![vec![Term::Cos { coeff: Complex::new(0.2, 0.0), freq: 2.0 }]]],
        )
        .unwrap();
        let p_b = Problem::new(q2, util::zeros(1), util::zeros(1)).unwrap();
        let lambda = Complex::new(0.37, 0.0);
        let m2 = weyl_matrix(&p2, lambda).unwrap();
        let ma = weyl_matrix(&p_a, lambda).unwrap();
        let mb = weyl_matrix(&p_b, lambda).unwrap();
        assert!((m2[(0, 0)] - ma[(0, 0)]).norm() < 1e-10);
        assert!((m2[(1, 1)] - mb[(0, 0)]).norm() < 1e-10);
        assert!(m2[(0, 1)].norm() < 1e-11);
    }

    #[test]
    fn weyl_solution_boundary_conditions() {
        use crate::potential::Term;
        let q = Potential::closed_form(
            1,
            vec![vec![vec![Term::Cos { coeff: Complex::new(1.0, 0.0), freq: 1.0 }]]],
        )
        .unwrap();
        let p = Problem::new(q, util::zeros(1), util::zeros(1)).unwrap();
        let grid = Grid::new(1024);
        for lambda in [Complex::new(0.41, 0.0), Complex::new(2.3, 0.7)] {
            let phi_w = weyl_solution(&p, lambda, grid).unwrap();
            let u = boundary_form_u(&phi_w, p.h());
            let v = boundary_form_v(&phi_w, p.h_pi());
            assert!((u[(0, 0)] - Complex::new(1.0, 0.0)).norm() < 1e-9, "U(Phi) = {u}");
            assert!(v[(0, 0)].norm() < 1e-9, "V(Phi) = {v}");
        }
    }
}
