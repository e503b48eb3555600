//! Per-cluster distance between given and model spectral data.

use crate::error::{Error, Result};
use crate::spectral::SpectralData;
use crate::util;

/// The weights `xi_n`, their reciprocals `chi_n` (zero at `xi_n = 0`), and
/// the aggregate `Omega = (sum ((n+1) xi_n)^2)^{1/2}`.
#[derive(Debug, Clone)]
pub struct XiWeights {
    pub xi: Vec<f64>,
    pub chi: Vec<f64>,
    /// Weighted l2 aggregate of the xi sequence.
    pub omega: f64,
}

impl XiWeights {
    pub fn n_max(&self) -> usize {
        self.xi.len() - 1
    }
}

/// `xi_n = sum_q |rho_nq - rho~_nq| + sum_s sum_q |rho_nq - rho_{n m_s}|
///       + sum_s sum_q |rho~_nq - rho~_{n m_s}|
///       + sum_s || alpha_n^{(s)} - alpha~_n^{(s)} ||` (max-abs entry norm).
pub fn compute_xi(data: &SpectralData, model: &SpectralData) -> Result<XiWeights> {
    if data.m() != model.m() {
        return Err(Error::DimensionMismatch {
            context: format!("data has m = {}, model has m = {}", data.m(), model.m()),
        });
    }
    if data.n_max() != model.n_max() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "data has n_max = {}, model has n_max = {}",
                data.n_max(),
                model.n_max()
            ),
        });
    }
    let omega = data.omega();
    let m = data.m();
    let mut xi = Vec::with_capacity(data.n_max() + 1);
    let mut chi = Vec::with_capacity(data.n_max() + 1);
    let mut agg = 0.0;
    for n in 0..=data.n_max() {
        let mut v = 0.0;
        for q in 0..m {
            v += (data.rho(n, q) - model.rho(n, q)).norm();
        }
        for s in 0..omega.p() {
            let head = omega.group(s).start;
            for q in omega.group(s) {
                v += (data.rho(n, q) - data.rho(n, head)).norm();
                v += (model.rho(n, q) - model.rho(n, head)).norm();
            }
            v += util::max_abs(&(data.alpha_group_sum(n, s) - model.alpha_group_sum(n, s)));
        }
        xi.push(v);
        chi.push(if v != 0.0 { 1.0 / v } else { 0.0 });
        agg += ((n + 1) as f64 * v).powi(2);
    }
    Ok(XiWeights { xi, chi, omega: agg.sqrt() })
}
