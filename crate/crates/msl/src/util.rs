//! Small dense-matrix helpers used across the crate.

use crate::{CMatrix, Complex};
use nalgebra::DVector;

/// Max-abs entry norm, `max_{j,k} |a_{jk}|`.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-abs asymmetry `max |A - A*|`.
pub fn asymmetry(a: &CMatrix) -> f64 {
    let adj = a.adjoint();
    max_abs(&(a - adj))
}

/// Hermitian part `(A + A*) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * Complex::new(0.5, 0.0)
}

/// True if every entry is finite.
pub fn all_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn identity(m: usize) -> CMatrix {
    CMatrix::identity(m, m)
}

pub fn zeros(m: usize) -> CMatrix {
    CMatrix::zeros(m, m)
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a
/// Hermitian matrix. The input is symmetrized before decomposition.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = hermitian_part(a);
    let se = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let m = a.nrows();
    let mut vectors = CMatrix::zeros(m, m);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &se.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Numerical rank of a Hermitian PSD matrix at a relative eigenvalue
/// threshold.
pub fn hermitian_rank(a: &CMatrix, rel_tol: f64) -> usize {
    let (vals, _) = hermitian_eigen(a);
    let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    vals.iter().filter(|v| v.abs() > rel_tol * scale).count()
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    let (vals, _) = hermitian_eigen(a);
    vals.first().copied().unwrap_or(0.0)
}

/// `sin(z)/z` with the removable singularity filled by its Taylor series.
pub fn sinc(z: Complex) -> Complex {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        Complex::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Principal square root of a real number as a complex value
/// (`Re >= 0`, and `+i sqrt(|x|)` on the negative axis).
pub fn sqrt_lambda(lambda: f64) -> Complex {
    if lambda >= 0.0 {
        Complex::new(lambda.sqrt(), 0.0)
    } else {
        Complex::new(0.0, (-lambda).sqrt())
    }
}

/// L2 norm over a uniform grid: `sqrt(int |f|^2 dx)` by the trapezoid rule,
/// for a matrix-valued sample using the Frobenius norm pointwise.
pub fn grid_l2_norm(values: &[CMatrix], step: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut acc = 0.0;
    for (i, v) in values.iter().enumerate() {
        let w = if i == 0 || i + 1 == values.len() { 0.5 } else { 1.0 };
        acc += w * v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    (acc * step).sqrt()
}

/// Solve `x A = b` for a row-stacked right-hand side `b` (shape `r x n`),
/// i.e. the transposed system `A^T x^T = b^T`. Returns `None` if the
/// factorization fails.
pub fn solve_row_system(a: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    let lu = a.transpose().lu();
    let xt = lu.solve(&b.transpose())?;
    Some(xt.transpose())
}

/// 1-norm (max column sum) of a dense matrix.
pub fn norm1(a: &CMatrix) -> f64 {
    let mut best = 0.0f64;
    for c in 0..a.ncols() {
        let s: f64 = a.column(c).iter().map(|z| z.norm()).sum();
        best = best.max(s);
    }
    best
}

/// Complex dot-free application helper: `m * v` for a complex vector.
pub fn matvec(a: &CMatrix, v: &DVector<Complex>) -> DVector<Complex> {
    a * v
}
