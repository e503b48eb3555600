//! Residues of the Weyl matrix by contour quadrature.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::Evaluator;
use crate::problem::Problem;
use crate::{CMatrix, Complex};

/// `alpha_0 = (1/2 pi i) oint M(lambda) d lambda` over a circle of radius
/// `min(gap/2, 0.5)` around the eigenvalue. The quadrature is the trapezoid
/// rule on the circle (geometrically convergent for a simple pole), checked
/// by doubling the node count.
pub fn residue_matrix(problem: &Problem, lambda0: f64, gap: f64) -> Result<CMatrix> {
    let ev = Evaluator::new(problem, crate::grid::Grid::default_forward());
    residue_with_evaluator(&ev, lambda0, gap)
}

fn contour_sum(ev: &Evaluator, lambda0: f64, radius: f64, nodes: usize) -> Result<CMatrix> {
    let c = Complex::new(lambda0, 0.0);
    let terms: Vec<CMatrix> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
            let e = Complex::new(th.cos(), th.sin());
            let z = c + e * radius;
            Ok(ev.weyl(z)? * e)
        })
        .collect::<Result<Vec<_>>>()?;
    let m = ev.problem().m();
    let mut acc = CMatrix::zeros(m, m);
    for t in &terms {
        acc += t;
    }
    Ok(acc * Complex::new(radius / nodes as f64, 0.0))
}

pub(crate) fn residue_with_evaluator(ev: &Evaluator, lambda0: f64, gap: f64) -> Result<CMatrix> {
    if gap <= 0.0 {
        return Err(Error::ContourNotConverged {
            lambda0,
            radius: 0.0,
            disagreement: f64::INFINITY,
        });
    }
    let radius = (gap / 2.0).min(0.5);
    let coarse = contour_sum(ev, lambda0, radius, 64)?;
    let fine = contour_sum(ev, lambda0, radius, 128)?;
    let scale = crate::util::max_abs(&fine).max(1e-12);
    let disagreement = crate::util::max_abs(&(&coarse - &fine)) / scale;
    if disagreement > 1e-8 {
        return Err(Error::ContourNotConverged { lambda0, radius, disagreement });
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Potential;
    use crate::problem::{OmegaClass, Problem};
    use crate::util;
    use std::f64::consts::PI;

    fn free_problem() -> Problem {
        Problem::new(Potential::zero(1), util::zeros(1), util::zeros(1)).unwrap()
    }

    #[test]
    fn free_residues_match_symbolic_derivative() {
        // Oracle: Res at rho = n of cos(rho pi)/(rho sin(rho pi)) via
        // d/d lambda [rho sin rho pi] = (sin rho pi + rho pi cos rho pi)/(2 rho),
        // giving 2/pi for n >= 1 and 1/pi at n = 0.
        let p = free_problem();
        for n in [1usize, 2, 3] {
            let a = residue_matrix(&p, (n * n) as f64, 1.0).unwrap();
            assert!(
                (a[(0, 0)].re - 2.0 / PI).abs() < 1e-9,
                "residue at n={n}: {}",
                a[(0, 0)]
            );
            assert!(a[(0, 0)].im.abs() < 1e-10);
        }
        let a0 = residue_matrix(&p, 0.0, 1.0).unwrap();
        assert!((a0[(0, 0)].re - 1.0 / PI).abs() < 1e-9, "{}", a0[(0, 0)]);
    }

    #[test]
    fn collision_residue_has_rank_two() {
        // Merged eigenvalue lambda = 1 of the omega = diag(0, pi/2) model:
        // channel-wise residues diag(2/pi, 1/pi).
        let omega = OmegaClass::new(vec![0.0, PI / 2.0]).unwrap();
        let p = Problem::model(&omega);
        let a = residue_matrix(&p, 1.0, 1.0).unwrap();
        assert!((a[(0, 0)].re - 2.0 / PI).abs() < 1e-9);
        assert!((a[(1, 1)].re - 1.0 / PI).abs() < 1e-9);
        assert!(a[(0, 1)].norm() < 1e-10);
        assert_eq!(util::hermitian_rank(&a, 1e-6), 2);
    }

    #[test]
    fn tight_gap_shrinks_radius() {
        let p = free_problem();
        // gap = 0.1 forces radius 0.05; the quadrature still converges.
        let a = residue_matrix(&p, 4.0, 0.1).unwrap();
        assert!((a[(0, 0)].re - 2.0 / PI).abs() < 1e-8);
    }
}
