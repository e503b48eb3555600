//! Synthetic spectral data of the model problem `Q = (2/pi) omega`,
//! `h = H = 0`.

use crate::problem::OmegaClass;
use crate::spectral::SpectralData;
use crate::{CMatrix, Complex};

/// Exact model spectral data up to cluster `n_max`:
/// `lambda_nq = n^2 + 2 omega_q / pi` with channel residues
/// `(2/pi) e_q e_q^T` for `n >= 1` and `(1/pi) e_q e_q^T` at `n = 0`,
/// merged across coincident eigenvalues.
///
/// Omega values are taken per group so coincident channels produce bitwise
/// equal eigenvalues; near-coincidences across clusters are snapped together
/// at relative tolerance 1e-8 so the sharing structure is exact.
pub fn model_spectral_data(omega: &OmegaClass, n_max: usize) -> SpectralData {
    let m = omega.m();
    let pi = std::f64::consts::PI;
    let mut lambda = vec![vec![0.0f64; m]; n_max + 1];
    for (n, row) in lambda.iter_mut().enumerate() {
        for (q, l) in row.iter_mut().enumerate() {
            let s = omega.group_of(q);
            *l = (n * n) as f64 + 2.0 * omega.group_value(s) / pi;
        }
    }
    // Snap near-coincident values (across clusters) to the value of the
    // lexicographically first member.
    let mut flat: Vec<(f64, usize, usize)> = Vec::with_capacity((n_max + 1) * m);
    for (n, row) in lambda.iter().enumerate() {
        for (q, &l) in row.iter().enumerate() {
            flat.push((l, n, q));
        }
    }
    flat.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut i = 0;
    while i < flat.len() {
        let mut j = i + 1;
        let tol = 1e-8 * flat[i].0.abs().max(1.0);
        while j < flat.len() && (flat[j].0 - flat[i].0).abs() <= tol {
            j += 1;
        }
        // Canonical value: the lex-first member's original value.
        let canon = flat[i..j]
            .iter()
            .min_by(|a, b| (a.1, a.2).cmp(&(b.1, b.2)))
            .map(|t| lambda[t.1][t.2])
            .unwrap();
        for t in &flat[i..j] {
            lambda[t.1][t.2] = canon;
        }
        i = j;
    }
    // Residues: sum channel contributions over every member of each
    // coincidence set.
    let mut alpha = vec![vec![CMatrix::zeros(m, m); m]; n_max + 1];
    for n in 0..=n_max {
        for q in 0..m {
            let v = lambda[n][q];
            let mut a = CMatrix::zeros(m, m);
            for (np, row) in lambda.iter().enumerate() {
                for (qp, &l) in row.iter().enumerate() {
                    if l == v {
                        let c = if np == 0 { 1.0 / pi } else { 2.0 / pi };
                        a[(qp, qp)] += Complex::new(c, 0.0);
                    }
                }
            }
            alpha[n][q] = a;
        }
    }
    SpectralData::new(omega.clone(), lambda, alpha).expect("model data is well-formed")
}
