//! Fixed-step sixth-order symmetric integrator for `-Y'' + Q(x) Y = lambda Y`.
//!
//! The first-order system `z' = (L + N(x)) z`, `z = (Y, Y')`, is split into
//! the constant free part `L = [[0, I], [-lambda I, 0]]`, propagated exactly
//! by a closed-form rotation, and the potential kick `N = [[0, 0], [Q, 0]]`,
//! which is nilpotent so its exact flow is `Y' += tau Q Y`. A symmetric
//! second-order step (half rotation, kick, half rotation) is composed to
//! sixth order. With `Q = 0` the scheme is exact up to roundoff for any
//! step size.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::problem::Problem;
use crate::util;
use crate::{CMatrix, Complex};

use super::solution::MatrixSolution;

/// Sixth-order symmetric composition weights (triple-jump family).
const W1: f64 = -1.17767998417887;
const W2: f64 = 0.235573213359357;
const W3: f64 = 0.784513610477560;

const SUBSTEPS: usize = 7;

fn weights() -> [f64; SUBSTEPS] {
    let w0 = 1.0 - 2.0 * (W1 + W2 + W3);
    [W3, W2, W1, w0, W1, W2, W3]
}

/// Potential samples at the kick points of every step of a grid.
/// Building the table costs `7 * n_steps` potential evaluations; it is
/// immutable afterwards and shared across spectral-parameter sweeps.
pub struct PotentialTable {
    grid: Grid,
    kicks: Vec<CMatrix>,
}

impl PotentialTable {
    pub fn new(problem: &Problem, grid: Grid) -> Self {
        let w = weights();
        let h = grid.step();
        let mut offsets = [0.0; SUBSTEPS];
        let mut acc = 0.0;
        for (j, wj) in w.iter().enumerate() {
            offsets[j] = acc + wj / 2.0;
            acc += wj;
        }
        let mut kicks = Vec::with_capacity(SUBSTEPS * grid.n_steps());
        for i in 0..grid.n_steps() {
            let x0 = grid.x(i);
            for off in offsets {
                kicks.push(problem.potential().eval(x0 + off * h));
            }
        }
        PotentialTable { grid, kicks }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }
}

/// Rotation coefficients for the free flow over a time `t`:
/// `Y -> c Y + u Y'`, `Y' -> -lambda u Y + c Y'` with
/// `c = cos(rho t)`, `u = sin(rho t) / rho = t sinc(rho t)`.
/// Both are even in `rho`, hence entire in `lambda`.
fn rotation(lambda: Complex, t: f64) -> (Complex, Complex) {
    let rho = lambda.sqrt();
    let z = rho * t;
    (z.cos(), util::sinc(z) * t)
}

fn apply_rotation(y: &mut CMatrix, dy: &mut CMatrix, c: Complex, u: Complex, lambda: Complex) {
    let lu = lambda * u;
    for (a, b) in y.iter_mut().zip(dy.iter_mut()) {
        let ya = *a;
        let yb = *b;
        *a = c * ya + u * yb;
        *b = -lu * ya + c * yb;
    }
}

/// One macro step starting at step index `i`; the eight merged rotation
/// coefficient pairs are precomputed in `rots`.
fn step(
    table: &PotentialTable,
    i: usize,
    lambda: Complex,
    rots: &[(Complex, Complex); SUBSTEPS + 1],
    taus: &[f64; SUBSTEPS],
    y: &mut CMatrix,
    dy: &mut CMatrix,
) {
    let base = i * SUBSTEPS;
    for j in 0..SUBSTEPS {
        let (c, u) = rots[j];
        apply_rotation(y, dy, c, u, lambda);
        let q = &table.kicks[base + j];
        // Y' += tau Q Y
        dy.gemm(Complex::new(taus[j], 0.0), q, y, Complex::new(1.0, 0.0));
    }
    let (c, u) = rots[SUBSTEPS];
    apply_rotation(y, dy, c, u, lambda);
}

fn prepare(
    lambda: Complex,
    h: f64,
) -> ([(Complex, Complex); SUBSTEPS + 1], [f64; SUBSTEPS]) {
    let w = weights();
    let mut rots = [(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)); SUBSTEPS + 1];
    rots[0] = rotation(lambda, w[0] * h / 2.0);
    for j in 1..SUBSTEPS {
        rots[j] = rotation(lambda, (w[j - 1] + w[j]) * h / 2.0);
    }
    rots[SUBSTEPS] = rotation(lambda, w[SUBSTEPS - 1] * h / 2.0);
    let mut taus = [0.0; SUBSTEPS];
    for j in 0..SUBSTEPS {
        taus[j] = w[j] * h;
    }
    (rots, taus)
}

fn check_resolution(grid: Grid, lambda: Complex) -> Result<()> {
    let rho_abs = lambda.sqrt().norm();
    let needed = (8.0 * rho_abs).ceil() as usize;
    if grid.n_steps() < needed {
        return Err(Error::GridTooCoarse { steps: grid.n_steps(), rho_abs, needed });
    }
    Ok(())
}

/// Integrate with the given initial values, recording the whole grid.
pub(crate) fn integrate_table(
    table: &PotentialTable,
    lambda: Complex,
    y0: &CMatrix,
    dy0: &CMatrix,
) -> Result<(Vec<CMatrix>, Vec<CMatrix>)> {
    let grid = table.grid;
    check_resolution(grid, lambda)?;
    let (rots, taus) = prepare(lambda, grid.step());
    let mut y = y0.clone();
    let mut dy = dy0.clone();
    let mut values = Vec::with_capacity(grid.len());
    let mut derivatives = Vec::with_capacity(grid.len());
    values.push(y.clone());
    derivatives.push(dy.clone());
    for i in 0..grid.n_steps() {
        step(table, i, lambda, &rots, &taus, &mut y, &mut dy);
        if i % 128 == 127 && !(util::all_finite(&y) && util::all_finite(&dy)) {
            return Err(Error::IntegrationDiverged { lambda });
        }
        values.push(y.clone());
        derivatives.push(dy.clone());
    }
    if !(util::all_finite(&y) && util::all_finite(&dy)) {
        return Err(Error::IntegrationDiverged { lambda });
    }
    Ok((values, derivatives))
}

/// Integrate keeping only the state at `x = pi`.
pub(crate) fn endpoint_state(
    table: &PotentialTable,
    lambda: Complex,
    y0: &CMatrix,
    dy0: &CMatrix,
) -> Result<(CMatrix, CMatrix)> {
    let grid = table.grid;
    check_resolution(grid, lambda)?;
    let (rots, taus) = prepare(lambda, grid.step());
    let mut y = y0.clone();
    let mut dy = dy0.clone();
    for i in 0..grid.n_steps() {
        step(table, i, lambda, &rots, &taus, &mut y, &mut dy);
        if i % 128 == 127 && !(util::all_finite(&y) && util::all_finite(&dy)) {
            return Err(Error::IntegrationDiverged { lambda });
        }
    }
    if !(util::all_finite(&y) && util::all_finite(&dy)) {
        return Err(Error::IntegrationDiverged { lambda });
    }
    Ok((y, dy))
}

/// Solve `-Y'' + Q Y = lambda Y` on the grid with initial values
/// `Y(0) = y0`, `Y'(0) = dy0`.
pub fn integrate_solution(
    problem: &Problem,
    lambda: Complex,
    y0: &CMatrix,
    dy0: &CMatrix,
    grid: Grid,
) -> Result<MatrixSolution> {
    let table = PotentialTable::new(problem, grid);
    let (values, derivatives) = integrate_table(&table, lambda, y0, dy0)?;
    Ok(MatrixSolution { lambda, grid, values, derivatives })
}

/// Reusable evaluator bundling a problem with a potential table, for
/// spectral-parameter sweeps (root scans, contours).
pub struct Evaluator<'a> {
    problem: &'a Problem,
    table: PotentialTable,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a Problem, grid: Grid) -> Self {
        Evaluator { problem, table: PotentialTable::new(problem, grid) }
    }

    pub fn problem(&self) -> &Problem {
        self.problem
    }

    pub fn grid(&self) -> Grid {
        self.table.grid
    }

    /// The solution `phi` (`phi(0) = I`, `phi'(0) = h`) on the full grid.
    pub fn phi(&self, lambda: Complex) -> Result<MatrixSolution> {
        let m = self.problem.m();
        let (values, derivatives) =
            integrate_table(&self.table, lambda, &util::identity(m), self.problem.h())?;
        Ok(MatrixSolution { lambda, grid: self.table.grid, values, derivatives })
    }

    /// The solution `S` (`S(0) = 0`, `S'(0) = I`) on the full grid.
    pub fn s(&self, lambda: Complex) -> Result<MatrixSolution> {
        let m = self.problem.m();
        let (values, derivatives) =
            integrate_table(&self.table, lambda, &util::zeros(m), &util::identity(m))?;
        Ok(MatrixSolution { lambda, grid: self.table.grid, values, derivatives })
    }

    /// Endpoint boundary forms `(V(phi), V(S))` from one joint pass.
    pub fn boundary_forms(&self, lambda: Complex) -> Result<(CMatrix, CMatrix)> {
        let m = self.problem.m();
        let mut y0 = CMatrix::zeros(m, 2 * m);
        let mut dy0 = CMatrix::zeros(m, 2 * m);
        y0.view_mut((0, 0), (m, m)).copy_from(&util::identity(m));
        dy0.view_mut((0, 0), (m, m)).copy_from(self.problem.h());
        dy0.view_mut((0, m), (m, m)).copy_from(&util::identity(m));
        let (y, dy) = endpoint_state(&self.table, lambda, &y0, &dy0)?;
        let h_pi = self.problem.h_pi();
        let v = &dy + h_pi * &y;
        let v_phi = v.view((0, 0), (m, m)).clone_owned();
        let v_s = v.view((0, m), (m, m)).clone_owned();
        Ok((v_phi, v_s))
    }

    /// `V(phi(., lambda))` only.
    pub fn v_phi(&self, lambda: Complex) -> Result<CMatrix> {
        let m = self.problem.m();
        let (y, dy) =
            endpoint_state(&self.table, lambda, &util::identity(m), self.problem.h())?;
        Ok(&dy + self.problem.h_pi() * &y)
    }

    /// Characteristic function `det V(phi)`.
    pub fn char_fn(&self, lambda: Complex) -> Result<Complex> {
        Ok(self.v_phi(lambda)?.determinant())
    }

    /// Weyl matrix `M(lambda) = -(V(phi))^{-1} V(S)`, guarded against
    /// near-singular `V(phi)`. The scale reference includes `V(S)` so the
    /// guard works in the scalar case, where `V(phi)` has a single
    /// singular value.
    pub fn weyl(&self, lambda: Complex) -> Result<CMatrix> {
        let (v_phi, v_s) = self.boundary_forms(lambda)?;
        let svd = v_phi.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        let scale = smax.max(util::max_abs(&v_s)).max(1e-300);
        if smin <= 1e-12 * scale {
            return Err(Error::NearPole { lambda });
        }
        let minus_m = v_phi.lu().solve(&v_s).ok_or(Error::NearPole { lambda })?;
        Ok(-minus_m)
    }

    /// The Weyl solution `Phi = phi M + S` on the full grid.
    pub fn weyl_solution(&self, lambda: Complex) -> Result<MatrixSolution> {
        let m_mat = self.weyl(lambda)?;
        let phi = self.phi(lambda)?;
        let s = self.s(lambda)?;
        let values = phi
            .values
            .iter()
            .zip(&s.values)
            .map(|(p, sv)| p * &m_mat + sv)
            .collect();
        let derivatives = phi
            .derivatives
            .iter()
            .zip(&s.derivatives)
            .map(|(p, sv)| p * &m_mat + sv)
            .collect();
        Ok(MatrixSolution { lambda, grid: phi.grid, values, derivatives })
    }
}
