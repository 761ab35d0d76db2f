//! Least-squares fit of `P = A + 10·γ·log10(d)` to sensor powers.

use crate::error::{invalid, Error, Result};

/// Relative threshold on `n·Σ(log d)² − (Σ log d)²` below which the
/// regressor is treated as constant.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Fitted intercept `A′`; estimates `A + mean(S)`.
    pub a_hat: f64,
    /// Fitted exponent `γ′`.
    pub gamma_hat: f64,
    /// `S′ᵢ = Pᵢ − (A′ + 10·γ′·log10 dᵢ)`; these always sum to zero.
    pub residuals: Vec<f64>,
}

impl FitResult {
    pub fn median_at_distance(&self, d: f64) -> f64 {
        self.a_hat + 10.0 * self.gamma_hat * d.log10()
    }
}

/// `log10` of each distance, rejecting non-positive entries.
pub(crate) fn log_distances(distances: &[f64]) -> Result<Vec<f64>> {
    distances
        .iter()
        .map(|&d| {
            if d > 0.0 && d.is_finite() {
                Ok(d.log10())
            } else {
                Err(invalid("distances", format!("must be > 0, got {d}")))
            }
        })
        .collect()
}

/// Centred sum of squares `Σ(lᵢ − l̄)²` of the log-distances, checked for
/// degeneracy. `n` times this is the usual `n·Σl² − (Σl)²` denominator.
pub(crate) fn centred_spread(logs: &[f64]) -> Result<(f64, f64)> {
    let n = logs.len();
    if n <= 2 {
        return Err(invalid("distances", format!("need n > 2, got {n}")));
    }
    let mean = logs.iter().sum::<f64>() / n as f64;
    let sxx: f64 = logs.iter().map(|l| (l - mean).powi(2)).sum();
    let sum_sq: f64 = logs.iter().map(|l| l * l).sum();
    if !(sxx > DEGENERACY_TOLERANCE * sum_sq) || sxx == 0.0 {
        return Err(Error::DegenerateLse {
            denominator: n as f64 * sxx,
        });
    }
    Ok((mean, sxx))
}

pub fn lse_fit(distances: &[f64], powers: &[f64]) -> Result<FitResult> {
    if distances.len() != powers.len() {
        return Err(Error::DimensionMismatch {
            expected: distances.len(),
            found: powers.len(),
        });
    }
    let logs = log_distances(distances)?;
    let (l_mean, sxx) = centred_spread(&logs)?;
    let n = powers.len() as f64;
    let p_mean = powers.iter().sum::<f64>() / n;
    let sxy: f64 = logs
        .iter()
        .zip(powers)
        .map(|(l, p)| (l - l_mean) * (p - p_mean))
        .sum();
    let slope = sxy / sxx;
    let a_hat = p_mean - slope * l_mean;
    let residuals = logs
        .iter()
        .zip(powers)
        .map(|(l, p)| p - (a_hat + slope * l))
        .collect();
    Ok(FitResult {
        a_hat,
        gamma_hat: slope / 10.0,
        residuals,
    })
}
