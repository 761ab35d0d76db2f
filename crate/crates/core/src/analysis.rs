//! Closed-form interpolation error.
//!
//! For a fixed geometry every estimator's error `P_{r,0} − P′_{r,0}` is
//! `bias + a·[S0, S1..Sn]`, a Gaussian with mean `bias` and variance
//! `aᵀ·C·a` where `C` is the joint covariance over `[p0, sensors]`. The
//! forms here are derived from [`AffinePowerMap`]s, so every method gets the
//! same treatment. The hand-expanded SM-1/SM-2 coefficients in
//! [`fitted_error_expansion`] exist to cross-check that derivation.
//!
//! [`AffinePowerMap`]: crate::estimators::AffinePowerMap

use crate::correlation::CorrelationModel;
use crate::error::{Error, Result};
use crate::estimators::{centred_spread, log_distances, sm0_weights, EstimatorOptions, Interpolator, Method};
use crate::field::{median_power, sensor_medians, ShadowSample};
use crate::geometry::{Point, Scenario};
use crate::linalg::{dot, quadratic_form, solve_spd};

/// Error of one estimator at one point as an affine form over the joint
/// shadow vector `[S0, S1..Sn]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineErrorForm {
    pub bias: f64,
    pub coeffs: Vec<f64>,
}

impl AffineErrorForm {
    pub fn eval(&self, sample: &ShadowSample) -> f64 {
        self.bias + self.coeffs[0] * sample.s0 + dot(&self.coeffs[1..], &sample.s)
    }
}

/// Linear coefficients of the least-squares estimation errors.
///
/// With `lᵢ = log10 dᵢ`, `Σ = Σⱼ lⱼ` and `Δ = n·Σⱼ lⱼ² − Σ²`:
///
/// * `αᵢ = (Σ − n·lᵢ) / Δ`
/// * `βᵢ = (lᵢ·Σ − Σ²/n) / Δ`
///
/// so that `10·Δγ = Σ αᵢSᵢ`, `A″ − A′ = Σ βᵢSᵢ` (with `A″ = A + mean(S)`),
/// and the median error at distance `d_k` is
/// `δ_k = ΔA + 10·Δγ·log10 d_k = log10(d_k)·Σ αᵢSᵢ + Σ βᵢSᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LseErrorCoeffs {
    /// `Δγ = γ − γ′ = Σ gᵢSᵢ`
    pub dgamma_coeffs: Vec<f64>,
    /// `ΔA = A″ − A′ = Σ aᵢSᵢ`
    pub da_coeffs: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// `A − A′ = Σ tᵢSᵢ` against the true intercept; `tᵢ = (lᵢ·Σ − Σⱼ lⱼ²)/Δ`.
    pub da_true_coeffs: Vec<f64>,
}

impl LseErrorCoeffs {
    pub fn delta_gamma(&self, s: &[f64]) -> f64 {
        dot(&self.dgamma_coeffs, s)
    }

    pub fn delta_a(&self, s: &[f64]) -> f64 {
        dot(&self.da_coeffs, s)
    }

    /// `δ_k` for a point at emitter distance `d_k`.
    pub fn delta_median(&self, s: &[f64], d_k: f64) -> f64 {
        self.delta_a(s) + 10.0 * self.delta_gamma(s) * d_k.log10()
    }
}

pub fn lse_error_coeffs(distances: &[f64]) -> Result<LseErrorCoeffs> {
    let logs = log_distances(distances)?;
    centred_spread(&logs)?;
    let n = logs.len() as f64;
    let sum: f64 = logs.iter().sum();
    let sum_sq: f64 = logs.iter().map(|l| l * l).sum();
    let denom = n * sum_sq - sum * sum;

    let alpha: Vec<f64> = logs.iter().map(|l| (sum - n * l) / denom).collect();
    let beta: Vec<f64> = logs
        .iter()
        .map(|l| (l * sum - sum * sum / n) / denom)
        .collect();
    let dgamma_coeffs = logs
        .iter()
        .map(|l| (sum - n * l) / (10.0 * denom))
        .collect();
    let da_true_coeffs = logs.iter().map(|l| (l * sum - sum_sq) / denom).collect();
    Ok(LseErrorCoeffs {
        dgamma_coeffs,
        da_coeffs: beta.clone(),
        alpha,
        beta,
        da_true_coeffs,
    })
}

/// Error form of `method` at `p0`, read off its affine power map:
/// `bias = P_m,0 − (intercept + c·P_m)`, coefficients `(1, −c)`.
pub fn error_form(
    method: Method,
    scn: &Scenario,
    p0: Point,
    opts: EstimatorOptions,
) -> Result<AffineErrorForm> {
    let map = Interpolator::new(method, scn, p0, opts)?.affine()?;
    let medians = sensor_medians(scn);
    let bias = median_power(scn, p0)? - map.eval(&medians);
    let mut coeffs = Vec::with_capacity(scn.n() + 1);
    coeffs.push(1.0);
    coeffs.extend(map.coeffs.iter().map(|c| -c));
    Ok(AffineErrorForm { bias, coeffs })
}

/// Hand expansion of the fitted-median estimators' error for residual
/// weights `w`:
///
/// `ΔP = S0 + Σ Sᵢ(αᵢ·log10(d0 / Πⱼ dⱼ^wⱼ) − wᵢ) + Σ Sᵢ(1 − Σⱼwⱼ)(βᵢ − 1/n)`.
pub fn fitted_error_expansion(distances: &[f64], d0: f64, weights: &[f64]) -> Result<AffineErrorForm> {
    if weights.len() != distances.len() {
        return Err(Error::DimensionMismatch {
            expected: distances.len(),
            found: weights.len(),
        });
    }
    let lse = lse_error_coeffs(distances)?;
    let logs = log_distances(distances)?;
    let n = distances.len() as f64;
    let w_sum: f64 = weights.iter().sum();
    let lever = d0.log10() - dot(weights, &logs);
    let mut coeffs = Vec::with_capacity(distances.len() + 1);
    coeffs.push(1.0);
    for i in 0..distances.len() {
        coeffs.push(lse.alpha[i] * lever - weights[i] + (1.0 - w_sum) * (lse.beta[i] - 1.0 / n));
    }
    Ok(AffineErrorForm { bias: 0.0, coeffs })
}

/// SM-1's error form from the hand expansion.
pub fn sm1_error_expansion(scn: &Scenario, p0: Point) -> Result<AffineErrorForm> {
    let w = sm0_weights(scn.correlation(), scn.sensors(), p0)?;
    fitted_error_expansion(&scn.sensor_distances(), scn.emitter_distance(p0), &w)
}

/// The two-part error of a fitted-median estimator for one shadow draw:
/// median error `(δ₀ − Σ wᵢδᵢ)` plus residual-interpolation error
/// `(S″₀ − Σ wᵢS″ᵢ)`, with `S″ = S − mean(S_sensors)`.
pub fn fitted_two_part_error(
    distances: &[f64],
    d0: f64,
    weights: &[f64],
    sample: &ShadowSample,
) -> Result<f64> {
    let lse = lse_error_coeffs(distances)?;
    let s = &sample.s;
    let z = s.iter().sum::<f64>() / s.len() as f64;
    let median_part = lse.delta_median(s, d0)
        - weights
            .iter()
            .zip(distances)
            .map(|(w, &d)| w * lse.delta_median(s, d))
            .sum::<f64>();
    let shadow_part = (sample.s0 - z)
        - weights
            .iter()
            .zip(s)
            .map(|(w, si)| w * (si - z))
            .sum::<f64>();
    Ok(median_part + shadow_part)
}

/// `√(bias² + aᵀ·C_joint·a)`.
pub fn analytic_rmse(
    form: &AffineErrorForm,
    model: &CorrelationModel,
    p0: Point,
    sensors: &[Point],
) -> Result<f64> {
    let cov = model.joint_covariance(p0, sensors);
    let var = quadratic_form(&cov, &form.coeffs)?;
    Ok((form.bias * form.bias + var.max(0.0)).sqrt())
}

/// Mean and standard deviation of the error, for callers that need both.
pub fn error_moments(
    form: &AffineErrorForm,
    model: &CorrelationModel,
    p0: Point,
    sensors: &[Point],
) -> Result<(f64, f64)> {
    let cov = model.joint_covariance(p0, sensors);
    let var = quadratic_form(&cov, &form.coeffs)?;
    Ok((form.bias, var.max(0.0).sqrt()))
}

/// Negative Schur complements down to this fraction of σ² are round-off.
pub const SIGMA0_ROUNDOFF: f64 = 1e-9;

/// Irreducible RMS error of the ideal estimator,
/// `σ0 = √(σ² − c0ᵀ·C_n⁻¹·c0)`.
pub fn sm0_sigma0(model: &CorrelationModel, sensors: &[Point], p0: Point) -> Result<f64> {
    let cn = model.covariance_matrix(sensors);
    let c0 = model.cross_covariance(p0, sensors);
    let w = solve_spd(&cn, &c0)?;
    let var = model.variance() - dot(&c0, &w);
    if var < -SIGMA0_ROUNDOFF * model.variance() {
        return Err(Error::NegativeVariance { value: var });
    }
    Ok(var.max(0.0).sqrt())
}
