//! Assembly and solution of the truncated main equation
//! `psi~(x) = psi(x) (I + R~(x))` over the block index set
//! `V = {(n, q, i) : n <= N, q = 1..m, i = 0, 1}`.
//!
//! Per cluster the block layout is `(q=1,i=0), (q=1,i=1), ..., (q=m,i=1)`;
//! `i = 0` refers to the given data, `i = 1` to the model data. For the
//! canonical model `Q~ = (2/pi) omega` every kernel is closed-form; an
//! arbitrary model problem of the same class is supported through
//! numerically integrated solutions.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::operator::{
    integrate_solution, model_mu, wronskian_form, DIAGONAL_SWITCH,
};
use crate::problem::{OmegaClass, Problem};
use crate::spectral::SpectralData;
use crate::util;
use crate::{CMatrix, Complex};

use super::xi::XiWeights;

/// Flat ordering of the truncated index set.
#[derive(Debug, Clone)]
pub struct IndexSetV {
    m: usize,
    n_trunc: usize,
    /// Head channel (first member of its omega group) per channel.
    heads: Vec<usize>,
}

impl IndexSetV {
    pub fn new(omega: &OmegaClass, n_trunc: usize) -> Self {
        let m = omega.m();
        let heads = (0..m).map(|q| omega.head_of(q)).collect();
        IndexSetV { m, n_trunc, heads }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    /// Total number of `m x m` blocks, `2 m (n_trunc + 1)`.
    pub fn blocks(&self) -> usize {
        2 * self.m * (self.n_trunc + 1)
    }

    /// Flat block position of `(n, q, i)`.
    pub fn block(&self, n: usize, q: usize, i: usize) -> usize {
        debug_assert!(n <= self.n_trunc && q < self.m && i < 2);
        n * 2 * self.m + 2 * q + i
    }

    /// Inverse of [`IndexSetV::block`].
    pub fn decode(&self, b: usize) -> (usize, usize, usize) {
        let per = 2 * self.m;
        (b / per, (b % per) / 2, b % 2)
    }

    pub fn head_of(&self, q: usize) -> usize {
        self.heads[q]
    }

    pub fn is_head(&self, q: usize) -> bool {
        self.heads[q] == q
    }
}

/// Where the model solutions and kernels come from.
enum KernelSource {
    /// Model `Q~ = (2/pi) omega`: diagonal closed forms.
    Canonical {
        /// `mu[b * m + c]`: channel-`c` wavenumber of `lambda[b]`.
        mu: Vec<Complex>,
    },
    /// Arbitrary model problem: integrated solutions on an ODE grid whose
    /// every `stride`-th node is an x-grid node.
    Numeric {
        stride: usize,
        /// One solution per distinct block eigenvalue.
        solutions: Vec<crate::operator::MatrixSolution>,
        /// Block index -> solution index.
        sol_of_block: Vec<usize>,
        /// Cumulative `int phi~* phi~` profiles (at x-grid nodes) for
        /// solution pairs too close in lambda for the bilinear form.
        close_profiles: HashMap<(usize, usize), Vec<CMatrix>>,
    },
}

/// x-independent tables of the truncated system: eigenvalues per block,
/// the `alpha'` factors of both data sets, and the model kernel source.
pub struct ModelTables {
    idx: IndexSetV,
    omega: OmegaClass,
    /// Eigenvalue per block.
    lambda: Vec<f64>,
    /// `alpha'` per block (`None` when zero, i.e. non-representatives).
    alpha_prime: Vec<Option<CMatrix>>,
    kernels: KernelSource,
}

fn block_data(
    data: &SpectralData,
    model: &SpectralData,
    n_trunc: usize,
) -> Result<(IndexSetV, Vec<f64>, Vec<Option<CMatrix>>)> {
    if data.n_max() < n_trunc || model.n_max() < n_trunc {
        return Err(Error::DimensionMismatch {
            context: format!(
                "tables need clusters up to {n_trunc}; data has {}, model has {}",
                data.n_max(),
                model.n_max()
            ),
        });
    }
    if data.m() != model.m() {
        return Err(Error::DimensionMismatch {
            context: "data and model dimension mismatch".into(),
        });
    }
    let omega = data.omega().clone();
    let idx = IndexSetV::new(&omega, n_trunc);
    let m = idx.m();
    let b_total = idx.blocks();
    let mut lambda = vec![0.0; b_total];
    let mut alpha_prime: Vec<Option<CMatrix>> = vec![None; b_total];
    for n in 0..=n_trunc {
        for q in 0..m {
            for i in 0..2 {
                let b = idx.block(n, q, i);
                let side = if i == 0 { data } else { model };
                lambda[b] = side.lambda(n, q);
                alpha_prime[b] = side.alpha_prime(n, q).cloned();
            }
        }
    }
    Ok((idx, lambda, alpha_prime))
}

impl ModelTables {
    /// Tables for the canonical model (closed-form kernels).
    /// `data` and `model` must both cover clusters up to `n_trunc`.
    pub fn new(data: &SpectralData, model: &SpectralData, n_trunc: usize) -> Result<Self> {
        let (idx, lambda, alpha_prime) = block_data(data, model, n_trunc)?;
        let omega = data.omega().clone();
        let m = idx.m();
        let mut mu = vec![Complex::new(0.0, 0.0); idx.blocks() * m];
        for (b, &l) in lambda.iter().enumerate() {
            for c in 0..m {
                mu[b * m + c] = model_mu(&omega, c, Complex::new(l, 0.0));
            }
        }
        Ok(ModelTables { idx, omega, lambda, alpha_prime, kernels: KernelSource::Canonical { mu } })
    }

    /// Tables for an arbitrary model problem of the same class. The model
    /// solutions are integrated on a grid aligned with the `x_points`-node
    /// reconstruction grid.
    pub fn new_numeric(
        data: &SpectralData,
        model_data: &SpectralData,
        model_problem: &Problem,
        n_trunc: usize,
        x_points: usize,
    ) -> Result<Self> {
        let (idx, lambda, alpha_prime) = block_data(data, model_data, n_trunc)?;
        let omega = data.omega().clone();
        let m = idx.m();
        let intervals = x_points - 1;
        let stride = (2048 + intervals - 1) / intervals;
        let grid = Grid::new(stride * intervals);

        // One integration per distinct eigenvalue.
        let mut sol_of_block = vec![0usize; idx.blocks()];
        let mut distinct: Vec<f64> = Vec::new();
        for (b, &l) in lambda.iter().enumerate() {
            let si = match distinct.iter().position(|&d| d == l) {
                Some(i) => i,
                None => {
                    distinct.push(l);
                    distinct.len() - 1
                }
            };
            sol_of_block[b] = si;
        }
        use rayon::prelude::*;
        let solutions: Vec<crate::operator::MatrixSolution> = distinct
            .par_iter()
            .map(|&l| {
                integrate_solution(
                    model_problem,
                    Complex::new(l, 0.0),
                    &util::identity(m),
                    model_problem.h(),
                    grid,
                )
            })
            .collect::<Result<Vec<_>>>()?;

        // Quadrature profiles for pairs too close for the bilinear form.
        let mut close_profiles = HashMap::new();
        for si in 0..distinct.len() {
            for sj in 0..distinct.len() {
                if (distinct[si] - distinct[sj]).abs() < DIAGONAL_SWITCH
                    && !close_profiles.contains_key(&(si, sj))
                {
                    let profile =
                        crate::operator::d_kernel_profile(&solutions[sj], &solutions[si])?;
                    let sampled: Vec<CMatrix> =
                        (0..x_points).map(|i| profile[i * stride].clone()).collect();
                    close_profiles.insert((si, sj), sampled);
                }
            }
        }
        Ok(ModelTables {
            idx,
            omega,
            lambda,
            alpha_prime,
            kernels: KernelSource::Numeric {
                stride,
                solutions,
                sol_of_block,
                close_profiles,
            },
        })
    }

    pub fn index_set(&self) -> &IndexSetV {
        &self.idx
    }

    pub fn lambda_of_block(&self, b: usize) -> f64 {
        self.lambda[b]
    }

    pub fn alpha_prime_of(&self, b: usize) -> Option<&CMatrix> {
        self.alpha_prime[b].as_ref()
    }

    /// Model `phi` and `phi'` blocks at x-node `ix`, flattened row-major
    /// per block (`m * m` entries each).
    pub fn phi_blocks_at(&self, ix: usize, x: f64) -> (Vec<Complex>, Vec<Complex>) {
        let b_total = self.idx.blocks();
        let m = self.idx.m();
        let mut phi = vec![Complex::new(0.0, 0.0); b_total * m * m];
        let mut dphi = vec![Complex::new(0.0, 0.0); b_total * m * m];
        match &self.kernels {
            KernelSource::Canonical { mu } => {
                for b in 0..b_total {
                    for c in 0..m {
                        let muv = mu[b * m + c];
                        phi[(b * m + c) * m + c] = (muv * x).cos();
                        dphi[(b * m + c) * m + c] = -muv * muv * x * util::sinc(muv * x);
                    }
                }
            }
            KernelSource::Numeric { stride, solutions, sol_of_block, .. } => {
                let node = ix * stride;
                for b in 0..b_total {
                    let sol = &solutions[sol_of_block[b]];
                    for r in 0..m {
                        for c in 0..m {
                            phi[(b * m + r) * m + c] = sol.values[node][(r, c)];
                            dphi[(b * m + r) * m + c] = sol.derivatives[node][(r, c)];
                        }
                    }
                }
            }
        }
        (phi, dphi)
    }

    /// All kernel tables at x-node `ix` (position `x`).
    pub fn kernels_at(&self, ix: usize, x: f64, derivative: bool) -> KernelsAtX {
        let b_total = self.idx.blocks();
        let m = self.idx.m();
        let mm = m * m;
        let (phi, dphi) = self.phi_blocks_at(ix, x);
        let mut d = vec![Complex::new(0.0, 0.0); b_total * b_total * mm];
        let mut dp = if derivative {
            vec![Complex::new(0.0, 0.0); b_total * b_total * mm]
        } else {
            Vec::new()
        };
        match &self.kernels {
            KernelSource::Canonical { mu } => {
                for u in 0..b_total {
                    for v in u..b_total {
                        for c in 0..m {
                            let a = mu[u * m + c];
                            let bb = mu[v * m + c];
                            let val = ((util::sinc((a + bb) * x) + util::sinc((a - bb) * x)) * x)
                                * Complex::new(0.5, 0.0);
                            d[(u * b_total + v) * mm + c * m + c] = val;
                            d[(v * b_total + u) * mm + c * m + c] = val.conj();
                            if derivative {
                                let dval = (a * x).cos() * (bb * x).cos();
                                dp[(u * b_total + v) * mm + c * m + c] = dval;
                                dp[(v * b_total + u) * mm + c * m + c] = dval.conj();
                            }
                        }
                    }
                }
            }
            KernelSource::Numeric { stride, solutions, sol_of_block, close_profiles, .. } => {
                let node = ix * stride;
                for u in 0..b_total {
                    for v in u..b_total {
                        let (su, sv) = (sol_of_block[u], sol_of_block[v]);
                        let (lu, lv) = (self.lambda[u], self.lambda[v]);
                        // D(x, lambda_u, lambda_v) and its adjoint mirror.
                        let val = if (lu - lv).abs() < DIAGONAL_SWITCH {
                            close_profiles[&(su, sv)][ix].clone()
                        } else {
                            wronskian_form(&solutions[sv], &solutions[su], node)
                                / Complex::new(lu - lv, 0.0)
                        };
                        let adj = val.adjoint();
                        for r in 0..m {
                            for c in 0..m {
                                d[(u * b_total + v) * mm + r * m + c] = val[(r, c)];
                                d[(v * b_total + u) * mm + r * m + c] = adj[(r, c)];
                            }
                        }
                        if derivative {
                            // d/dx D = phi~*(x, lambda_v) phi~(x, lambda_u).
                            let dval = solutions[sv].values[node].adjoint()
                                * &solutions[su].values[node];
                            let dadj = dval.adjoint();
                            for r in 0..m {
                                for c in 0..m {
                                    dp[(u * b_total + v) * mm + r * m + c] = dval[(r, c)];
                                    dp[(v * b_total + u) * mm + r * m + c] = dadj[(r, c)];
                                }
                            }
                        }
                    }
                }
            }
        }
        KernelsAtX { b_total, phi, dphi, d, dp }
    }

    /// Raw block `F~_{v,u} = alpha'_v D~(x, lambda_u, lambda_v)` added into
    /// `dst` with a scale; no-op when `alpha'_v` vanishes.
    fn add_f_block(
        &self,
        kern_d: &[Complex],
        b_total: usize,
        v: usize,
        u: usize,
        scale: f64,
        dst: &mut CMatrix,
    ) {
        let Some(alpha) = self.alpha_prime[v].as_ref() else {
            return;
        };
        let m = self.idx.m();
        let base = (u * b_total + v) * m * m;
        let s = Complex::new(scale, 0.0);
        for r in 0..m {
            for c in 0..m {
                let mut acc = Complex::new(0.0, 0.0);
                for k in 0..m {
                    acc += alpha[(r, k)] * kern_d[base + k * m + c];
                }
                dst[(r, c)] += s * acc;
            }
        }
    }

    /// Standalone `F~_{v,u}` (test and diagnostic use).
    pub fn f_block(&self, kern: &KernelsAtX, v: usize, u: usize) -> Option<CMatrix> {
        self.alpha_prime[v].as_ref()?;
        let m = self.idx.m();
        let mut f = CMatrix::zeros(m, m);
        self.add_f_block(&kern.d, kern.b_total, v, u, 1.0, &mut f);
        Some(f)
    }
}

/// Model kernel values at one x-node: `phi~`, `phi~'` per block and
/// `D~`, `D~'` per block pair, all row-major flat.
pub struct KernelsAtX {
    b_total: usize,
    pub phi: Vec<Complex>,
    pub dphi: Vec<Complex>,
    pub d: Vec<Complex>,
    pub dp: Vec<Complex>,
}

/// The truncated main-equation system at one `x`.
pub struct MainEquationSystem {
    pub x: f64,
    pub idx: IndexSetV,
    /// `I + R~(x)`, flattened to `(m B) x (m B)`.
    pub a: CMatrix,
    /// Right-hand side `psi~(x)`, `m x (m B)`.
    pub psi_tilde: CMatrix,
    /// `R~'(x)` when the derivative path is requested.
    pub r_prime: Option<CMatrix>,
    /// `psi~'(x)` when the derivative path is requested.
    pub psi_tilde_prime: Option<CMatrix>,
}

fn add_block(target: &mut CMatrix, m: usize, v: usize, u: usize, block: &CMatrix, scale: f64) {
    if scale == 0.0 {
        return;
    }
    let s = Complex::new(scale, 0.0);
    for col in 0..m {
        for row in 0..m {
            target[(v * m + row, u * m + col)] += s * block[(row, col)];
        }
    }
}

/// Assemble `R~` (without the identity) from a kernel table.
fn assemble_r(tables: &ModelTables, xi: &XiWeights, kern_d: &[Complex]) -> CMatrix {
    let idx = &tables.idx;
    let m = idx.m();
    let b_total = idx.blocks();
    let p = tables.omega.p();
    let n_trunc = idx.n_trunc();
    let mut r = CMatrix::zeros(m * b_total, m * b_total);

    let mut gf = [
        [CMatrix::zeros(m, m), CMatrix::zeros(m, m)],
        [CMatrix::zeros(m, m), CMatrix::zeros(m, m)],
    ];
    let mut f_u = CMatrix::zeros(m, m);
    let mut f_t = CMatrix::zeros(m, m);
    for u in 0..b_total {
        let (n, q, i) = idx.decode(u);
        let chi_n = xi.chi[n];
        let head = idx.head_of(q);
        let u_is_head = head == q;
        let u_h1 = idx.block(n, head, 1);
        let u_hi = if i == 0 { idx.block(n, head, 0) } else { u_h1 };
        // The column twin entering the difference formulas.
        let twin = if u_is_head { u_h1 } else { u_hi };

        for k in 0..=n_trunc {
            let xi_k = xi.xi[k];
            for s in 0..p {
                let group = tables.omega.group(s);
                let head_s = group.start;
                // Group sums: gf[j][0] over F~((k,l,j), u), gf[j][1] at the
                // twin column.
                for j in 0..2 {
                    for t in 0..2 {
                        gf[j][t].fill(Complex::new(0.0, 0.0));
                    }
                }
                for l in group.clone() {
                    for j in 0..2 {
                        let v = idx.block(k, l, j);
                        tables.add_f_block(kern_d, b_total, v, u, 1.0, &mut gf[j][0]);
                        tables.add_f_block(kern_d, b_total, v, twin, 1.0, &mut gf[j][1]);
                    }
                }
                let v0 = idx.block(k, head_s, 0);
                let v1 = idx.block(k, head_s, 1);
                if u_is_head && i == 0 {
                    let b0 = &gf[0][0] - &gf[0][1];
                    add_block(&mut r, m, v0, u, &b0, chi_n * xi_k);
                    let b1 = &b0 - (&gf[1][0] - &gf[1][1]);
                    add_block(&mut r, m, v1, u, &b1, chi_n);
                } else if u_is_head && i == 1 {
                    add_block(&mut r, m, v0, u, &gf[0][0], xi_k);
                    let b1 = &gf[0][0] - &gf[1][0];
                    add_block(&mut r, m, v1, u, &b1, 1.0);
                } else {
                    let b0 = &gf[0][0] - &gf[0][1];
                    add_block(&mut r, m, v0, u, &b0, chi_n * xi_k);
                    let b1 = &b0 - (&gf[1][0] - &gf[1][1]);
                    add_block(&mut r, m, v1, u, &b1, chi_n);
                }
                // Interior rows of this group.
                for l in group.clone().skip(1) {
                    for j in 0..2 {
                        let v = idx.block(k, l, j);
                        if tables.alpha_prime[v].is_none() {
                            continue;
                        }
                        let sign = if j == 0 { 1.0 } else { -1.0 };
                        f_u.fill(Complex::new(0.0, 0.0));
                        tables.add_f_block(kern_d, b_total, v, u, 1.0, &mut f_u);
                        if u_is_head && i == 1 {
                            add_block(&mut r, m, v, u, &f_u, sign * xi_k);
                        } else {
                            f_t.fill(Complex::new(0.0, 0.0));
                            tables.add_f_block(kern_d, b_total, v, twin, 1.0, &mut f_t);
                            let b = &f_u - &f_t;
                            add_block(&mut r, m, v, u, &b, sign * chi_n * xi_k);
                        }
                    }
                }
            }
        }
    }
    r
}

/// Assemble `psi~` from a block table (`phi~` values or derivatives).
fn assemble_psi(tables: &ModelTables, xi: &XiWeights, blocks: &[Complex]) -> CMatrix {
    let idx = &tables.idx;
    let m = idx.m();
    let b_total = idx.blocks();
    let mut psi = CMatrix::zeros(m, m * b_total);
    let entry = |b: usize, r: usize, c: usize| blocks[(b * m + r) * m + c];
    for u in 0..b_total {
        let (n, q, i) = idx.decode(u);
        let chi_n = Complex::new(xi.chi[n], 0.0);
        let head = idx.head_of(q);
        for r in 0..m {
            for c in 0..m {
                let own = entry(u, r, c);
                let val = if head == q {
                    if i == 0 {
                        chi_n * (own - entry(idx.block(n, q, 1), r, c))
                    } else {
                        own
                    }
                } else {
                    chi_n * (own - entry(idx.block(n, head, i), r, c))
                };
                psi[(r, u * m + c)] = val;
            }
        }
    }
    psi
}

/// Assemble the truncated system at x-node `ix` from precomputed tables.
pub fn build_system_from_tables(
    tables: &ModelTables,
    xi: &XiWeights,
    ix: usize,
    x: f64,
    derivative: bool,
) -> MainEquationSystem {
    let kern = tables.kernels_at(ix, x, derivative);
    let m = tables.idx.m();
    let b_total = tables.idx.blocks();
    let r = assemble_r(tables, xi, &kern.d);
    let a = CMatrix::identity(m * b_total, m * b_total) + r;
    let psi_tilde = assemble_psi(tables, xi, &kern.phi);
    let (r_prime, psi_tilde_prime) = if derivative {
        (
            Some(assemble_r(tables, xi, &kern.dp)),
            Some(assemble_psi(tables, xi, &kern.dphi)),
        )
    } else {
        (None, None)
    };
    MainEquationSystem {
        x,
        idx: tables.idx.clone(),
        a,
        psi_tilde,
        r_prime,
        psi_tilde_prime,
    }
}

/// Assemble the truncated system at `x` directly from the two data sets
/// (canonical model kernels).
pub fn build_system(
    data: &SpectralData,
    model: &SpectralData,
    xi: &XiWeights,
    x: f64,
    n_trunc: usize,
) -> Result<MainEquationSystem> {
    let tables = ModelTables::new(data, model, n_trunc)?;
    Ok(build_system_from_tables(&tables, xi, 0, x, false))
}

/// A solved system, retaining the factorization for derivative solves.
pub struct SolvedSystem {
    /// `psi(x)`, `m x (m B)`.
    pub psi: CMatrix,
    /// Relative residual `||psi~ - psi (I + R~)|| / ||psi~||`.
    pub residual: f64,
    lu: nalgebra::LU<Complex, nalgebra::Dyn, nalgebra::Dyn>,
}

impl SolvedSystem {
    /// 1-norm condition estimate of `I + R~` (computes the full inverse;
    /// used on diagnostic subsamples).
    pub fn condition_estimate(&self, a: &CMatrix) -> f64 {
        match a.clone().try_inverse() {
            Some(inv) => util::norm1(a) * util::norm1(&inv),
            None => f64::INFINITY,
        }
    }
}

/// Solve `psi (I + R~) = psi~` by dense LU with partial pivoting (the
/// equation is transposed so rows become the unknowns).
pub fn solve_main_equation(sys: &MainEquationSystem) -> Result<SolvedSystem> {
    let lu = sys.a.transpose().lu();
    let psi_t = lu
        .solve(&sys.psi_tilde.transpose())
        .ok_or(Error::IllConditioned { x: sys.x, estimate: f64::INFINITY })?;
    let psi = psi_t.transpose();
    let scale = util::max_abs(&sys.psi_tilde).max(1e-300);
    let residual = util::max_abs(&(&sys.psi_tilde - &psi * &sys.a)) / scale;
    Ok(SolvedSystem { psi, residual, lu })
}

/// One extra solve with the same operator gives `psi'`:
/// `psi'(I + R~) = psi~' - psi R~'`.
pub fn derivative_system(sys: &MainEquationSystem, solved: &SolvedSystem) -> Result<CMatrix> {
    let (Some(r_prime), Some(psi_tp)) = (&sys.r_prime, &sys.psi_tilde_prime) else {
        return Err(Error::DimensionMismatch {
            context: "system was assembled without derivative tables".into(),
        });
    };
    let rhs = psi_tp - &solved.psi * r_prime;
    let psi_prime_t = solved
        .lu
        .solve(&rhs.transpose())
        .ok_or(Error::IllConditioned { x: sys.x, estimate: f64::INFINITY })?;
    Ok(psi_prime_t.transpose())
}

/// Unwind the block transform: recover `phi_{nqi}(x)` from `psi(x)`.
/// Returns one `m x m` matrix per block index.
pub fn recover_phi(psi: &CMatrix, xi: &XiWeights, idx: &IndexSetV) -> Vec<CMatrix> {
    let m = idx.m();
    let b_total = idx.blocks();
    let block_of = |u: usize| -> CMatrix {
        let mut b = CMatrix::zeros(m, m);
        for col in 0..m {
            for row in 0..m {
                b[(row, col)] = psi[(row, u * m + col)];
            }
        }
        b
    };
    let mut phi: Vec<CMatrix> = vec![CMatrix::zeros(m, m); b_total];
    // Heads first: phi_{n h 1} = psi_{n h 1}; phi_{n h 0} = phi_{n h 1} + xi_n psi_{n h 0}.
    for u in 0..b_total {
        let (n, q, i) = idx.decode(u);
        if idx.is_head(q) && i == 1 {
            phi[u] = block_of(u);
            let u0 = idx.block(n, q, 0);
            phi[u0] = &phi[u] + block_of(u0) * Complex::new(xi.xi[n], 0.0);
        }
    }
    // Interiors: phi_{nqi} = phi_{n h i} + xi_n psi_{nqi}.
    for u in 0..b_total {
        let (n, q, i) = idx.decode(u);
        if !idx.is_head(q) {
            let h = idx.block(n, idx.head_of(q), i);
            phi[u] = &phi[h] + block_of(u) * Complex::new(xi.xi[n], 0.0);
        }
    }
    phi
}
