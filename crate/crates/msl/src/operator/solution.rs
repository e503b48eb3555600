//! Sampled matrix-valued solutions and the boundary forms `U`, `V`.

use crate::grid::Grid;
use crate::{CMatrix, Complex};

/// A matrix solution `Y(x)` of the equation at a fixed spectral parameter,
/// sampled with its derivative on a uniform grid of `[0, pi]`.
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone)]
pub struct MatrixSolution {
    pub lambda: Complex,
    pub grid: Grid,
    pub values: Vec<CMatrix>,
    pub derivatives: Vec<CMatrix>,
}

impl MatrixSolution {
    pub fn m(&self) -> usize {
        self.values[0].nrows()
    }

    pub fn at_zero(&self) -> (&CMatrix, &CMatrix) {
        (&self.values[0], &self.derivatives[0])
    }

    pub fn at_pi(&self) -> (&CMatrix, &CMatrix) {
        (
            self.values.last().expect("nonempty grid"),
            self.derivatives.last().expect("nonempty grid"),
        )
    }
}

/// `V(Y) = Y'(pi) + H Y(pi)`.
pub fn boundary_form_v(sol: &MatrixSolution, h_pi: &CMatrix) -> CMatrix {
    let (y, dy) = sol.at_pi();
    dy + h_pi * y
}

/// `U(Y) = Y'(0) - h Y(0)`.
pub fn boundary_form_u(sol: &MatrixSolution, h: &CMatrix) -> CMatrix {
    let (y, dy) = sol.at_zero();
    dy - h * y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::integrate::integrate_solution;
    use crate::potential::Potential;
    use crate::problem::Problem;
    use crate::util;

    #[test]
    fn boundary_forms_on_free_problem() {
        // phi = cos(rho x) for the free scalar problem.
        let p = Problem::new(Potential::zero(1), util::zeros(1), util::zeros(1)).unwrap();
        let grid = Grid::new(1024);
        let rho = 0.7;
        let lambda = Complex::new(rho * rho, 0.0);
        let phi =
            integrate_solution(&p, lambda, &util::identity(1), &util::zeros(1), grid).unwrap();
        // V(phi) = phi'(pi) = -rho sin(rho pi)
        let v = boundary_form_v(&phi, p.h_pi());
        let expected = -rho * (rho * std::f64::consts::PI).sin();
        assert!((v[(0, 0)].re - expected).abs() < 1e-11);
        // U(phi) = 0 by the initial conditions.
        let u = boundary_form_u(&phi, p.h());
        assert!(util::max_abs(&u) < 1e-14);
        // V(S) = cos(rho pi)
        let s = integrate_solution(&p, lambda, &util::zeros(1), &util::identity(1), grid).unwrap();
        let vs = boundary_form_v(&s, p.h_pi());
        let expected_s = (rho * std::f64::consts::PI).cos();
        assert!((vs[(0, 0)].re - expected_s).abs() < 1e-11);
    }
}
