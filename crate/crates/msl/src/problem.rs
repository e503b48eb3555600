//! The boundary value problem `(Q, h, H)` and its omega class.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::util;
use crate::{CMatrix, Complex};

/// Tolerance above which non-Hermitian input is rejected outright; below it,
/// inputs are symmetrized with a warning when the defect exceeds
/// `SYMMETRIZE_WARN`.
const HERMITIAN_REJECT: f64 = 1e-6;
const SYMMETRIZE_WARN: f64 = 1e-10;

/// Grouping of the diagonal `omega` matrix into runs of equal values.
///
/// `values` is nondecreasing; `starts` holds the 0-based start index of each
/// run plus a final sentinel `m`, so run `s` (0-based) covers channels
/// `starts[s]..starts[s + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaClass {
    values: Vec<f64>,
    starts: Vec<usize>,
}

impl OmegaClass {
    /// Tolerance for deciding that two omega values belong to the same run.
    pub const GROUP_TOL: f64 = 1e-9;

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "omega must have at least one value".into(),
            });
        }
        for w in values.windows(2) {
            if w[1] < w[0] - Self::GROUP_TOL {
                return Err(Error::invalid(
                    "/omega",
                    format!("omega values must be nondecreasing, got {} before {}", w[0], w[1]),
                ));
            }
        }
        let scale = values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let tol = Self::GROUP_TOL * scale;
        let mut starts = vec![0];
        for q in 1..values.len() {
            if values[q] - values[starts[starts.len() - 1]] > tol {
                starts.push(q);
            }
        }
        starts.push(values.len());
        Ok(OmegaClass { values, starts })
    }

    pub fn m(&self) -> usize {
        self.values.len()
    }

    /// Number of distinct values `p`.
    pub fn p(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, q: usize) -> f64 {
        self.values[q]
    }

    /// Channels of group `s` (0-based group index).
    pub fn group(&self, s: usize) -> std::ops::Range<usize> {
        self.starts[s]..self.starts[s + 1]
    }

    /// The common value of group `s`.
    pub fn group_value(&self, s: usize) -> f64 {
        self.values[self.starts[s]]
    }

    /// Group index of channel `q` (0-based).
    pub fn group_of(&self, q: usize) -> usize {
        match self.starts.binary_search(&q) {
            Ok(s) if s < self.p() => s,
            Ok(s) => s - 1,
            Err(s) => s - 1,
        }
    }

    /// Head channel (first channel of the group) of channel `q`.
    pub fn head_of(&self, q: usize) -> usize {
        self.starts[self.group_of(q)]
    }

    /// Diagonal 0/1 projector onto group `s`.
    pub fn projector(&self, s: usize) -> CMatrix {
        let m = self.m();
        let mut p = CMatrix::zeros(m, m);
        for q in self.group(s) {
            p[(q, q)] = Complex::new(1.0, 0.0);
        }
        p
    }

    /// The diagonal matrix `omega`.
    pub fn matrix(&self) -> CMatrix {
        let m = self.m();
        let mut w = CMatrix::zeros(m, m);
        for q in 0..m {
            w[(q, q)] = Complex::new(self.values[q], 0.0);
        }
        w
    }
}

/// A self-adjoint matrix Sturm-Liouville boundary value problem in the class
/// `A(omega)` with `omega` diagonal nondecreasing.
#[derive(Debug, Clone)]
pub struct Problem {
    m: usize,
    potential: Potential,
    /// Boundary matrix at `x = 0` (`Y'(0) = h Y(0)`).
    h: CMatrix,
    /// Boundary matrix at `x = pi` (`Y'(pi) = -H Y(pi)`).
    h_pi: CMatrix,
    omega: OmegaClass,
}

impl Problem {
    /// Build a problem whose omega matrix `h + H + (1/2) int Q` is already
    /// diagonal nondecreasing. Inputs are symmetrized; a defect above
    /// `1e-6` is an error, above `1e-10` a logged warning.
    pub fn new(potential: Potential, h: CMatrix, h_pi: CMatrix) -> Result<Self> {
        let m = potential.dim();
        for (name, mat) in [("h", &h), ("H", &h_pi)] {
            if mat.nrows() != m || mat.ncols() != m {
                return Err(Error::DimensionMismatch {
                    context: format!("{name} must be {m} x {m}"),
                });
            }
            let defect = util::asymmetry(mat);
            if defect > HERMITIAN_REJECT {
                return Err(Error::NotHermitian { what: name.into(), asymmetry: defect });
            }
            if defect > SYMMETRIZE_WARN {
                log::warn!("symmetrizing {name}: Hermitian defect {defect:.3e}");
            }
        }
        let q_defect = potential.hermitian_defect();
        if q_defect > HERMITIAN_REJECT {
            return Err(Error::NotHermitian { what: "Q".into(), asymmetry: q_defect });
        }
        if q_defect > SYMMETRIZE_WARN {
            log::warn!("symmetrizing Q: Hermitian defect {q_defect:.3e}");
        }
        let potential = potential.symmetrized();
        let h = util::hermitian_part(&h);
        let h_pi = util::hermitian_part(&h_pi);

        let w = &h + &h_pi + potential.integral() * Complex::new(0.5, 0.0);
        let mut off = 0.0f64;
        let mut diag = Vec::with_capacity(m);
        for j in 0..m {
            for k in 0..m {
                if j != k {
                    off = off.max(w[(j, k)].norm());
                }
            }
            off = off.max(w[(j, j)].im.abs());
            diag.push(w[(j, j)].re);
        }
        let scale = diag.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        if off > 1e-8 * scale {
            return Err(Error::NotNormalized { off_diagonal: off });
        }
        let omega = OmegaClass::new(diag)?;
        Ok(Problem { m, potential, h, h_pi, omega })
    }

    /// Build a problem carrying a declared omega class, checking class
    /// membership only loosely. Reconstructed problems satisfy
    /// `h + H + (1/2) int Q = omega` up to truncation error, which would
    /// fail the strict constructor; the deviation is returned for
    /// diagnostics. Inputs are still symmetrized.
    pub fn with_declared_omega(
        potential: Potential,
        h: CMatrix,
        h_pi: CMatrix,
        omega: OmegaClass,
    ) -> Result<(Self, f64)> {
        let m = potential.dim();
        if omega.m() != m || h.nrows() != m || h_pi.nrows() != m {
            return Err(Error::DimensionMismatch {
                context: "declared omega and matrices must match the potential dimension".into(),
            });
        }
        let potential = potential.symmetrized();
        let h = util::hermitian_part(&h);
        let h_pi = util::hermitian_part(&h_pi);
        let w = &h + &h_pi + potential.integral() * Complex::new(0.5, 0.0);
        let defect = util::max_abs(&(&w - omega.matrix()));
        let scale = omega.values().iter().fold(1.0f64, |a, v| a.max(v.abs()));
        if defect > 5e-2 * scale.max(1.0) {
            return Err(Error::NotNormalized { off_diagonal: defect });
        }
        if defect > 1e-6 {
            log::warn!("declared omega deviates from h + H + (1/2) int Q by {defect:.3e}");
        }
        Ok((Problem { m, potential, h, h_pi, omega }, defect))
    }

    /// The model problem of the class: `Q = (2/pi) omega`, `h = H = 0`.
    pub fn model(omega: &OmegaClass) -> Self {
        let m = omega.m();
        let q = Potential::constant(&(omega.matrix() * Complex::new(2.0 / PI, 0.0)));
        Problem {
            m,
            potential: q,
            h: CMatrix::zeros(m, m),
            h_pi: CMatrix::zeros(m, m),
            omega: omega.clone(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn h(&self) -> &CMatrix {
        &self.h
    }

    pub fn h_pi(&self) -> &CMatrix {
        &self.h_pi
    }

    pub fn omega(&self) -> &OmegaClass {
        &self.omega
    }
}
