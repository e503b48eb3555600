//! Matrix potentials: closed-form term tables or grid samples with cubic
//! spline interpolation.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::{CMatrix, Complex};

/// One additive term of a closed-form potential entry.
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    /// `coeff * x^degree`
    Poly { coeff: Complex, degree: u32 },
    /// `coeff * cos(freq x)`
    Cos { coeff: Complex, freq: f64 },
    /// `coeff * sin(freq x)`
    Sin { coeff: Complex, freq: f64 },
}

impl Term {
    fn eval(&self, x: f64) -> Complex {
        match *self {
            Term::Poly { coeff, degree } => coeff * x.powi(degree as i32),
            Term::Cos { coeff, freq } => coeff * (freq * x).cos(),
            Term::Sin { coeff, freq } => coeff * (freq * x).sin(),
        }
    }

    /// Exact `int_0^pi` of the term.
    fn integral(&self) -> Complex {
        match *self {
            Term::Poly { coeff, degree } => coeff * PI.powi(degree as i32 + 1) / (degree as f64 + 1.0),
            Term::Cos { coeff, freq } => {
                if freq == 0.0 {
                    coeff * PI
                } else {
                    coeff * (freq * PI).sin() / freq
                }
            }
            Term::Sin { coeff, freq } => {
                if freq == 0.0 {
                    Complex::new(0.0, 0.0)
                } else {
                    coeff * (1.0 - (freq * PI).cos()) / freq
                }
            }
        }
    }

    fn scaled(&self, factor: Complex) -> Term {
        match *self {
            Term::Poly { coeff, degree } => Term::Poly { coeff: coeff * factor, degree },
            Term::Cos { coeff, freq } => Term::Cos { coeff: coeff * factor, freq },
            Term::Sin { coeff, freq } => Term::Sin { coeff: coeff * factor, freq },
        }
    }

    fn conjugated(&self) -> Term {
        match *self {
            Term::Poly { coeff, degree } => Term::Poly { coeff: coeff.conj(), degree },
            Term::Cos { coeff, freq } => Term::Cos { coeff: coeff.conj(), freq },
            Term::Sin { coeff, freq } => Term::Sin { coeff: coeff.conj(), freq },
        }
    }
}

/// An `m x m` matrix potential on `[0, pi]`.
#[derive(Debug, Clone)]
pub enum Potential {
    /// Entry `(j, k)` is the sum of `terms[j][k]`.
    ClosedForm { m: usize, terms: Vec<Vec<Vec<Term>>> },
    /// Samples on a uniform grid of `[0, pi]` (including both endpoints),
    /// interpolated with natural cubic splines.
    Grid { m: usize, samples: Vec<CMatrix>, splines: Vec<Spline> },
}

impl Potential {
    /// The zero potential.
    pub fn zero(m: usize) -> Self {
        Potential::ClosedForm {
            m,
            terms: vec![vec![Vec::new(); m]; m],
        }
    }

    /// Constant potential `c` (must be square).
    pub fn constant(c: &CMatrix) -> Self {
        let m = c.nrows();
        let terms = (0..m)
            .map(|j| {
                (0..m)
                    .map(|k| {
                        if c[(j, k)].norm() == 0.0 {
                            Vec::new()
                        } else {
                            vec![Term::Poly { coeff: c[(j, k)], degree: 0 }]
                        }
                    })
                    .collect()
            })
            .collect();
        Potential::ClosedForm { m, terms }
    }

    pub fn closed_form(m: usize, terms: Vec<Vec<Vec<Term>>>) -> Result<Self> {
        if terms.len() != m || terms.iter().any(|row| row.len() != m) {
            return Err(Error::DimensionMismatch {
                context: format!("closed-form potential term table is not {m} x {m}"),
            });
        }
        Ok(Potential::ClosedForm { m, terms })
    }

    /// Build a grid potential from samples at `pi * i / (samples.len() - 1)`.
    pub fn from_grid(samples: Vec<CMatrix>) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::DimensionMismatch {
                context: "grid potential needs at least 4 samples".into(),
            });
        }
        let m = samples[0].nrows();
        if samples.iter().any(|s| s.nrows() != m || s.ncols() != m) {
            return Err(Error::DimensionMismatch {
                context: "grid potential samples must all be square of equal size".into(),
            });
        }
        let n = samples.len();
        let mut splines = Vec::with_capacity(m * m);
        for j in 0..m {
            for k in 0..m {
                let re: Vec<f64> = (0..n).map(|i| samples[i][(j, k)].re).collect();
                let im: Vec<f64> = (0..n).map(|i| samples[i][(j, k)].im).collect();
                splines.push(Spline::natural(re, im));
            }
        }
        Ok(Potential::Grid { m, samples, splines })
    }

    pub fn dim(&self) -> usize {
        match self {
            Potential::ClosedForm { m, .. } => *m,
            Potential::Grid { m, .. } => *m,
        }
    }

    /// Evaluate at a point of `[0, pi]`.
    pub fn eval(&self, x: f64) -> CMatrix {
        let m = self.dim();
        match self {
            Potential::ClosedForm { terms, .. } => {
                let mut q = CMatrix::zeros(m, m);
                for j in 0..m {
                    for k in 0..m {
                        let mut z = Complex::new(0.0, 0.0);
                        for t in &terms[j][k] {
                            z += t.eval(x);
                        }
                        q[(j, k)] = z;
                    }
                }
                q
            }
            Potential::Grid { m, splines, .. } => {
                let mm = *m;
                let mut q = CMatrix::zeros(mm, mm);
                for j in 0..mm {
                    for k in 0..mm {
                        q[(j, k)] = splines[j * mm + k].eval(x);
                    }
                }
                q
            }
        }
    }

    /// `int_0^pi Q(x) dx` — exact for closed forms, spline-exact for grids.
    pub fn integral(&self) -> CMatrix {
        let m = self.dim();
        match self {
            Potential::ClosedForm { terms, .. } => {
                let mut q = CMatrix::zeros(m, m);
                for j in 0..m {
                    for k in 0..m {
                        let mut z = Complex::new(0.0, 0.0);
                        for t in &terms[j][k] {
                            z += t.integral();
                        }
                        q[(j, k)] = z;
                    }
                }
                q
            }
            Potential::Grid { m, splines, .. } => {
                let mm = *m;
                let mut q = CMatrix::zeros(mm, mm);
                for j in 0..mm {
                    for k in 0..mm {
                        q[(j, k)] = splines[j * mm + k].integral();
                    }
                }
                q
            }
        }
    }

    /// Conjugated potential `U* Q(x) U` (stays in the same representation).
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        let m = self.dim();
        match self {
            Potential::ClosedForm { terms, .. } => {
                let mut out: Vec<Vec<Vec<Term>>> = vec![vec![Vec::new(); m]; m];
                for j in 0..m {
                    for k in 0..m {
                        // (U* Q U)_{jk} = sum_{a,b} conj(u_{aj}) u_{bk} Q_{ab}
                        for a in 0..m {
                            for b in 0..m {
                                let f = u[(a, j)].conj() * u[(b, k)];
                                if f.norm() == 0.0 {
                                    continue;
                                }
                                for t in &terms[a][b] {
                                    out[j][k].push(t.scaled(f));
                                }
                            }
                        }
                    }
                }
                Potential::ClosedForm { m, terms: out }
            }
            Potential::Grid { samples, .. } => {
                let conj: Vec<CMatrix> = samples.iter().map(|s| u.adjoint() * s * u).collect();
                Potential::from_grid(conj).expect("conjugation preserves grid shape")
            }
        }
    }

    /// Max-abs Hermitian defect over a coarse sample of `[0, pi]`.
    pub fn hermitian_defect(&self) -> f64 {
        let probes = 64;
        (0..=probes)
            .map(|i| PI * i as f64 / probes as f64)
            .map(|x| crate::util::asymmetry(&self.eval(x)))
            .fold(0.0, f64::max)
    }

    /// Replace the potential with its pointwise Hermitian part.
    pub fn symmetrized(&self) -> Self {
        match self {
            Potential::ClosedForm { m, terms } => {
                let mm = *m;
                let mut out: Vec<Vec<Vec<Term>>> = vec![vec![Vec::new(); mm]; mm];
                let half = Complex::new(0.5, 0.0);
                for j in 0..mm {
                    for k in 0..mm {
                        for t in &terms[j][k] {
                            out[j][k].push(t.scaled(half));
                        }
                        for t in &terms[k][j] {
                            out[j][k].push(t.conjugated().scaled(half));
                        }
                    }
                }
                Potential::ClosedForm { m: mm, terms: out }
            }
            Potential::Grid { samples, .. } => {
                let sym: Vec<CMatrix> = samples.iter().map(crate::util::hermitian_part).collect();
                Potential::from_grid(sym).expect("symmetrization preserves grid shape")
            }
        }
    }

    /// Grid samples if this is a grid-kind potential.
    pub fn grid_samples(&self) -> Option<&[CMatrix]> {
        match self {
            Potential::Grid { samples, .. } => Some(samples),
            Potential::ClosedForm { .. } => None,
        }
    }
}

/// Natural cubic spline of a complex-valued function sampled uniformly on
/// `[0, pi]`.
#[derive(Debug, Clone)]
pub struct Spline {
    re: SplineChannel,
    im: SplineChannel,
}

impl Spline {
    fn natural(re: Vec<f64>, im: Vec<f64>) -> Self {
        Spline {
            re: SplineChannel::natural(re),
            im: SplineChannel::natural(im),
        }
    }

    fn eval(&self, x: f64) -> Complex {
        Complex::new(self.re.eval(x), self.im.eval(x))
    }

    fn integral(&self) -> Complex {
        Complex::new(self.re.integral(), self.im.integral())
    }
}

#[derive(Debug, Clone)]
struct SplineChannel {
    values: Vec<f64>,
    /// Second derivatives at the nodes.
    second: Vec<f64>,
    step: f64,
}

impl SplineChannel {
    fn natural(values: Vec<f64>) -> Self {
        let n = values.len();
        let h = PI / (n - 1) as f64;
        // Tridiagonal system for interior second derivatives,
        // natural boundary conditions: M_0 = M_{n-1} = 0.
        let mut second = vec![0.0; n];
        if n > 2 {
            let dim = n - 2;
            let mut diag = vec![4.0; dim];
            let mut rhs = vec![0.0; dim];
            for i in 0..dim {
                rhs[i] = 6.0 * (values[i] - 2.0 * values[i + 1] + values[i + 2]) / (h * h);
            }
            // Thomas algorithm with unit off-diagonals.
            for i in 1..dim {
                let w = 1.0 / diag[i - 1];
                diag[i] -= w;
                rhs[i] -= w * rhs[i - 1];
            }
            second[dim] = rhs[dim - 1] / diag[dim - 1];
            for i in (1..dim).rev() {
                second[i] = (rhs[i - 1] - second[i + 1]) / diag[i - 1];
            }
        }
        SplineChannel { values, second, step: h }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        let t = (x / self.step).clamp(0.0, (n - 1) as f64);
        let mut i = t.floor() as usize;
        if i >= n - 1 {
            i = n - 2;
        }
        let a = (self.step * (i + 1) as f64 - x) / self.step;
        let b = (x - self.step * i as f64) / self.step;
        let h2 = self.step * self.step / 6.0;
        a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h2
    }

    fn integral(&self) -> f64 {
        let n = self.values.len();
        let h = self.step;
        let mut acc = 0.0;
        for i in 0..n - 1 {
            acc += h * (self.values[i] + self.values[i + 1]) / 2.0
                - h * h * h * (self.second[i] + self.second[i + 1]) / 24.0;
        }
        acc
    }
}
