//! CSV output: '.' decimal, ',' separator, header row, 17-significant-digit
//! floats. Column order is fixed so identical runs are byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use msl::inverse::ReconstructionResult;
use msl::{CMatrix, Problem};

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_matrix_headers(out: &mut String, tag: &str, m: usize) {
    for r in 0..m {
        for c in 0..m {
            let _ = write!(out, ",{tag}_{}{}_re,{tag}_{}{}_im", r + 1, c + 1, r + 1, c + 1);
        }
    }
}

fn push_matrix_values(out: &mut String, a: &CMatrix) {
    for r in 0..a.nrows() {
        for c in 0..a.ncols() {
            let z = a[(r, c)];
            let _ = write!(out, ",{},{}", fmt(z.re), fmt(z.im));
        }
    }
}

/// `x, Q entries, eps0 entries`.
pub fn write_inverse_csv(path: &Path, rec: &ReconstructionResult) -> msl::Result<()> {
    let m = rec.problem.m();
    let mut out = String::new();
    out.push('x');
    push_matrix_headers(&mut out, "Q", m);
    push_matrix_headers(&mut out, "eps0", m);
    out.push('\n');
    for i in 0..rec.x_points() {
        let x = rec.x(i);
        out.push_str(&fmt(x));
        push_matrix_values(&mut out, &rec.problem.potential().eval(x));
        push_matrix_values(&mut out, &rec.eps0[i]);
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// `x, Q_true entries, Q_rec entries, eps0 entries`.
pub fn write_roundtrip_csv(
    path: &Path,
    rec: &ReconstructionResult,
    truth: &Problem,
) -> msl::Result<()> {
    let m = truth.m();
    let mut out = String::new();
    out.push('x');
    push_matrix_headers(&mut out, "Q_true", m);
    push_matrix_headers(&mut out, "Q_rec", m);
    push_matrix_headers(&mut out, "eps0", m);
    out.push('\n');
    for i in 0..rec.x_points() {
        let x = rec.x(i);
        out.push_str(&fmt(x));
        push_matrix_values(&mut out, &truth.potential().eval(x));
        push_matrix_values(&mut out, &rec.problem.potential().eval(x));
        push_matrix_values(&mut out, &rec.eps0[i]);
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}
