//! The Weyl matrix as a pole expansion over the spectral data,
//! `M(lambda) = sum_{k,l} alpha'_{kl} / (lambda - lambda_{kl})`,
//! truncated at the data range with the model sum as the tail.

use crate::error::{Error, Result};
use crate::operator::model_weyl_matrix;
use crate::spectral::SpectralData;
use crate::{CMatrix, Complex};

use super::model_data::model_spectral_data;

/// Evaluate the pole expansion at `lambda`:
/// `M(lambda) ~ M~(lambda) + sum_{k <= n_max, l} (alpha'_{kl0} / (lambda - lambda_{kl0})
///  - alpha'_{kl1} / (lambda - lambda_{kl1}))`, where the closed-form model
/// Weyl matrix `M~` carries the tail beyond the data range.
pub fn weyl_from_data(data: &SpectralData, lambda: Complex) -> Result<CMatrix> {
    let omega = data.omega();
    let model = model_spectral_data(omega, data.n_max());
    // Pole guard against both data and model poles.
    for side in [data, &model] {
        for g in side.groups() {
            if (lambda - Complex::new(g.lambda, 0.0)).norm() < 1e-6 * g.lambda.abs().max(1.0) {
                return Err(Error::NearPole { lambda });
            }
        }
    }
    let mut acc = model_weyl_matrix(omega, lambda);
    for g in data.groups() {
        let (n, q) = g.members[0];
        let alpha = data.alpha(n, q);
        acc += alpha / (lambda - Complex::new(g.lambda, 0.0));
    }
    for g in model.groups() {
        let (n, q) = g.members[0];
        let alpha = model.alpha(n, q);
        acc -= alpha / (lambda - Complex::new(g.lambda, 0.0));
    }
    Ok(acc)
}
