//! Unitary normalization of `(Q, h, H)` into the class with diagonal
//! nondecreasing omega matrix.

use crate::error::Result;
use crate::potential::Potential;
use crate::problem::Problem;
use crate::util;
use crate::{CMatrix, Complex};

/// Conjugate `(Q, h, H)` by the unitary `U` that diagonalizes
/// `h + H + (1/2) int Q` with nondecreasing eigenvalues, returning the
/// normalized problem and `U`. The spectral data of the two problems are
/// related by the same conjugation. Column phases of `U` are fixed so that
/// each column's largest entry is real positive.
pub fn normalize_to_a_omega(
    potential: Potential,
    h: CMatrix,
    h_pi: CMatrix,
) -> Result<(Problem, CMatrix)> {
    let h = util::hermitian_part(&h);
    let h_pi = util::hermitian_part(&h_pi);
    let potential = potential.symmetrized();
    let w = &h + &h_pi + potential.integral() * Complex::new(0.5, 0.0);
    let (_, mut u) = util::hermitian_eigen(&w);
    let m = u.nrows();
    for c in 0..m {
        let mut best = 0usize;
        let mut best_norm = 0.0;
        for r in 0..m {
            let nn = u[(r, c)].norm();
            if nn > best_norm {
                best_norm = nn;
                best = r;
            }
        }
        if best_norm > 0.0 {
            let phase = u[(best, c)] / best_norm;
            for r in 0..m {
                u[(r, c)] /= phase;
            }
        }
    }
    let q_rot = potential.conjugate(&u);
    let h_rot = u.adjoint() * &h * &u;
    let hp_rot = u.adjoint() * &h_pi * &u;
    let problem = Problem::new(q_rot, h_rot, hp_rot)?;
    Ok((problem, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::characteristic_function;

    #[test]
    fn already_diagonal_is_untouched() {
        let mut h = util::zeros(2);
        h[(0, 0)] = Complex::new(0.5, 0.0);
        h[(1, 1)] = Complex::new(1.5, 0.0);
        let (p, u) = normalize_to_a_omega(Potential::zero(2), h, util::zeros(2)).unwrap();
        assert!(util::max_abs(&(&u - util::identity(2))) < 1e-12);
        assert_eq!(p.omega().values(), &[0.5, 1.5]);
    }

    #[test]
    fn swap_matrix_diagonalization() {
        // omega-matrix [[0,1],[1,0]] -> diag(-1, 1) with
        // U = (1/sqrt(2)) [[1, 1], [-1, 1]] up to column phase.
        let mut h = util::zeros(2);
        h[(0, 1)] = Complex::new(1.0, 0.0);
        h[(1, 0)] = Complex::new(1.0, 0.0);
        let (p, u) = normalize_to_a_omega(Potential::zero(2), h, util::zeros(2)).unwrap();
        assert!((p.omega().value(0) + 1.0).abs() < 1e-12);
        assert!((p.omega().value(1) - 1.0).abs() < 1e-12);
        let s = 1.0 / 2.0f64.sqrt();
        for (r, c, expect) in [(0usize, 0usize, s), (1, 0, -s), (0, 1, s), (1, 1, s)] {
            assert!(
                (u[(r, c)].norm() - expect.abs()).abs() < 1e-12,
                "entry ({r},{c}) = {}",
                u[(r, c)]
            );
        }
        // Unitarity.
        assert!(util::max_abs(&(u.adjoint() * &u - util::identity(2))) < 1e-12);
    }

    #[test]
    fn characteristic_function_is_conjugation_invariant() {
        use crate::potential::Term;
        let q = Potential::closed_form(
            2,
            vec![
                vec![
                    vec![Term::Cos { coeff: Complex::new(0.4, 0.0), freq: 1.0 }],
                    vec![Term::Sin { coeff: Complex::new(0.2, 0.1), freq: 1.0 }],
                ],
                vec![
                    vec![Term::Sin { coeff: Complex::new(0.2, -0.1), freq: 1.0 }],
                    vec![Term::Cos { coeff: Complex::new(-0.3, 0.0), freq: 2.0 }],
                ],
            ],
        )
        .unwrap();
        // Cancel the off-diagonal part of (1/2) int Q with h.
        // int sin x = 2, int of the rest vanishes.
        let mut h = util::zeros(2);
        h[(0, 1)] = Complex::new(-0.2, -0.1);
        h[(1, 0)] = Complex::new(-0.2, 0.1);
        h[(0, 0)] = Complex::new(0.6, 0.0);
        // Raw problem: omega-matrix is h + 0 + (1/2) int Q, not diagonal
        // in general; normalize and compare Delta before/after.
        let (norm, u) = normalize_to_a_omega(q.clone(), h.clone(), util::zeros(2)).unwrap();
        assert!(util::max_abs(&(u.adjoint() * &u - util::identity(2))) < 1e-12);
        // Delta of the raw problem: build the boundary forms by hand via a
        // direct integration, since Problem::new would reject it when the
        // omega matrix is off-diagonal. Conjugating back must reproduce it.
        // Here we instead verify invariance using the normalized problem
        // conjugated by a fixed extra unitary.
        let extra = {
            let s = 1.0 / 2.0f64.sqrt();
            CMatrix::from_row_slice(
                2,
                2,
                &[
                    Complex::new(s, 0.0),
                    Complex::new(s, 0.0),
                    Complex::new(-s, 0.0),
                    Complex::new(s, 0.0),
                ],
            )
        };
        let q2 = norm.potential().conjugate(&extra);
        let h2 = extra.adjoint() * norm.h() * &extra;
        let hp2 = extra.adjoint() * norm.h_pi() * &extra;
        let (renorm, _) = normalize_to_a_omega(q2, h2, hp2).unwrap();
        for lam in [0.13, 0.77, 2.9, 5.1, -0.8] {
            let d1 = characteristic_function(&norm, Complex::new(lam, 0.0)).unwrap();
            let d2 = characteristic_function(&renorm, Complex::new(lam, 0.0)).unwrap();
            assert!((d1 - d2).norm() < 1e-9 * d1.norm().max(1.0), "lambda {lam}: {d1} vs {d2}");
        }
    }
}
