//! The six interpolators.
//!
//! Each estimator is available as a direct prediction from a measurement
//! vector and as an [`AffinePowerMap`] (`P′₀ = intercept + coeffs·P`), which
//! is exact because every estimator here is linear in the measurements.

mod lse;
pub mod sibson;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationModel;
use crate::error::{invalid, Error, Result};
use crate::field::{median_power, sensor_medians};
use crate::geometry::{distance, Point, Scenario};
use crate::linalg::{dot, solve_spd};

pub use lse::{lse_fit, FitResult, DEGENERACY_TOLERANCE};
pub use sibson::sibson_weights;

pub(crate) use lse::{centred_spread, log_distances};

/// Queries closer than this fraction of the sensor extent snap to the
/// sensor for the distance- and area-weighted methods.
pub const SNAP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sm0,
    Sm1,
    Sm2,
    Nn,
    Idw,
    Nan,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Sm0,
        Method::Sm1,
        Method::Sm2,
        Method::Nn,
        Method::Idw,
        Method::Nan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sm0 => "sm0",
            Method::Sm1 => "sm1",
            Method::Sm2 => "sm2",
            Method::Nn => "nn",
            Method::Idw => "idw",
            Method::Nan => "nan",
        }
    }

    /// Whether the method first fits `(A′, γ′)` and interpolates residuals.
    pub fn fits_path_loss(self) -> bool {
        matches!(self, Method::Sm1 | Method::Sm2)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownMethod(pub String);

impl fmt::Display for UnknownMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let valid: Vec<&str> = Method::ALL.iter().map(|m| m.name()).collect();
        write!(f, "unknown method `{}` (valid: {})", self.0, valid.join(", "))
    }
}

impl std::error::Error for UnknownMethod {}

impl FromStr for Method {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect::<String>()
            .to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| UnknownMethod(s.to_string()))
    }
}

/// Tunables shared by the distance-weighted methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorOptions {
    /// Inverse-distance exponent for SM-2 and IDW.
    pub nu: f64,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self { nu: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub value: f64,
    pub method: Method,
    /// Weights actually applied: to raw powers for NN/IDW/NaN, to shadow
    /// estimates for the SM family.
    pub weights: Vec<f64>,
}

/// `P′₀ = intercept + coeffs·P` for a fixed geometry and query point.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePowerMap {
    pub intercept: f64,
    pub coeffs: Vec<f64>,
}

impl AffinePowerMap {
    pub fn eval(&self, measurements: &[f64]) -> f64 {
        self.intercept + dot(&self.coeffs, measurements)
    }
}

fn check_len(expected: usize, measurements: &[f64]) -> Result<()> {
    if measurements.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: measurements.len(),
        });
    }
    Ok(())
}

fn snapped_sensor(sensors: &[Point], p0: Point) -> Option<usize> {
    let tol = SNAP_TOLERANCE * crate::geometry::extent(sensors);
    sensors.iter().position(|&s| distance(s, p0) <= tol)
}

fn one_hot(n: usize, j: usize) -> Vec<f64> {
    let mut w = vec![0.0; n];
    w[j] = 1.0;
    w
}

/// Conditional-mean weights `W = C_n⁻¹·c₀`.
pub fn sm0_weights(model: &CorrelationModel, sensors: &[Point], p0: Point) -> Result<Vec<f64>> {
    let cn = model.covariance_matrix(sensors);
    let c0 = model.cross_covariance(p0, sensors);
    solve_spd(&cn, &c0)
}

/// Normalised inverse-distance weights `y₀ᵢ^−ν / Σ y₀ⱼ^−ν`, snapping to a
/// one-hot vector when `p0` sits on a sensor.
pub fn sm2_weights(sensors: &[Point], p0: Point, nu: f64) -> Result<Vec<f64>> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(invalid("nu", format!("must be > 0, got {nu}")));
    }
    if let Some(j) = snapped_sensor(sensors, p0) {
        return Ok(one_hot(sensors.len(), j));
    }
    let raw: Vec<f64> = sensors
        .iter()
        .map(|&s| distance(s, p0).powf(-nu))
        .collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w / total).collect())
}

/// Index of the nearest sensor, lowest index on ties.
pub fn nearest_sensor(sensors: &[Point], p0: Point) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &s) in sensors.iter().enumerate() {
        let d = distance(s, p0);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

pub fn nn_weights(sensors: &[Point], p0: Point) -> Vec<f64> {
    one_hot(sensors.len(), nearest_sensor(sensors, p0))
}

/// Sibson weights, with the collocation snap applied first.
pub fn nan_weights(sensors: &[Point], p0: Point) -> Result<Vec<f64>> {
    if let Some(j) = snapped_sensor(sensors, p0) {
        return Ok(one_hot(sensors.len(), j));
    }
    sibson_weights(sensors, p0)
}

pub fn sm0_predict(scn: &Scenario, p0: Point, measurements: &[f64]) -> Result<Prediction> {
    Interpolator::new(Method::Sm0, scn, p0, EstimatorOptions::default())?.predict(measurements)
}

/// SM-1: fit `(A′, γ′)` from the measurements, then add the conditional-mean
/// weights (computed from the covariance of the raw shadow values) applied
/// to the fitted residuals. The true path-loss parameters are not used.
pub fn sm1_predict(scn: &Scenario, p0: Point, measurements: &[f64]) -> Result<Prediction> {
    Interpolator::new(Method::Sm1, scn, p0, EstimatorOptions::default())?.predict(measurements)
}

pub fn sm2_predict(scn: &Scenario, p0: Point, measurements: &[f64], nu: f64) -> Result<Prediction> {
    Interpolator::new(Method::Sm2, scn, p0, EstimatorOptions { nu })?.predict(measurements)
}

pub fn nn_predict(sensors: &[Point], p0: Point, measurements: &[f64]) -> Result<Prediction> {
    check_len(sensors.len(), measurements)?;
    let weights = nn_weights(sensors, p0);
    Ok(weighted(Method::Nn, weights, measurements))
}

pub fn idw_predict(sensors: &[Point], p0: Point, measurements: &[f64], nu: f64) -> Result<Prediction> {
    check_len(sensors.len(), measurements)?;
    let weights = sm2_weights(sensors, p0, nu)?;
    Ok(weighted(Method::Idw, weights, measurements))
}

pub fn nan_predict(sensors: &[Point], p0: Point, measurements: &[f64]) -> Result<Prediction> {
    check_len(sensors.len(), measurements)?;
    let weights = nan_weights(sensors, p0)?;
    Ok(weighted(Method::Nan, weights, measurements))
}

fn weighted(method: Method, weights: Vec<f64>, measurements: &[f64]) -> Prediction {
    Prediction {
        value: dot(&weights, measurements),
        method,
        weights,
    }
}

#[derive(Debug, Clone)]
enum Plan {
    /// True medians known.
    Ideal { median0: f64, medians: Vec<f64> },
    /// Fit the path loss, interpolate residuals.
    Fitted { distances: Vec<f64>, d0: f64 },
    /// Weighted sum of raw powers.
    Raw,
}

/// An estimator bound to one scenario and query point, with its
/// geometry-only work (weights, medians) done up front.
#[derive(Debug, Clone)]
pub struct Interpolator {
    method: Method,
    weights: Vec<f64>,
    plan: Plan,
}

impl Interpolator {
    pub fn new(method: Method, scn: &Scenario, p0: Point, opts: EstimatorOptions) -> Result<Self> {
        let sensors = scn.sensors();
        let (weights, plan) = match method {
            Method::Sm0 => (
                sm0_weights(scn.correlation(), sensors, p0)?,
                Plan::Ideal {
                    median0: median_power(scn, p0)?,
                    medians: sensor_medians(scn),
                },
            ),
            Method::Sm1 | Method::Sm2 => {
                let distances = scn.sensor_distances();
                centred_spread(&log_distances(&distances)?)?;
                let d0 = scn.emitter_distance(p0);
                if !(d0 > 0.0) {
                    return Err(Error::ZeroDistance { x: p0.x, y: p0.y });
                }
                let weights = if method == Method::Sm1 {
                    sm0_weights(scn.correlation(), sensors, p0)?
                } else {
                    sm2_weights(sensors, p0, opts.nu)?
                };
                (weights, Plan::Fitted { distances, d0 })
            }
            Method::Nn => (nn_weights(sensors, p0), Plan::Raw),
            Method::Idw => (sm2_weights(sensors, p0, opts.nu)?, Plan::Raw),
            Method::Nan => (nan_weights(sensors, p0)?, Plan::Raw),
        };
        Ok(Self {
            method,
            weights,
            plan,
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Predicted power at the query point. Cheaper than [`predict`]
    /// (no allocation for the raw methods).
    ///
    /// [`predict`]: Interpolator::predict
    pub fn predict_value(&self, measurements: &[f64]) -> Result<f64> {
        check_len(self.weights.len(), measurements)?;
        Ok(match &self.plan {
            Plan::Ideal { median0, medians } => {
                let shadow: f64 = self
                    .weights
                    .iter()
                    .zip(measurements.iter().zip(medians))
                    .map(|(w, (p, m))| w * (p - m))
                    .sum();
                median0 + shadow
            }
            Plan::Fitted { distances, d0 } => {
                let fit = lse_fit(distances, measurements)?;
                fit.median_at_distance(*d0) + dot(&self.weights, &fit.residuals)
            }
            Plan::Raw => dot(&self.weights, measurements),
        })
    }

    pub fn predict(&self, measurements: &[f64]) -> Result<Prediction> {
        Ok(Prediction {
            value: self.predict_value(measurements)?,
            method: self.method,
            weights: self.weights.clone(),
        })
    }

    /// The exact affine representation of this estimator.
    pub fn affine(&self) -> Result<AffinePowerMap> {
        let w = &self.weights;
        Ok(match &self.plan {
            Plan::Ideal { median0, medians } => AffinePowerMap {
                intercept: median0 - dot(w, medians),
                coeffs: w.clone(),
            },
            Plan::Fitted { distances, d0 } => {
                // Γ′ = Σ gᵢPᵢ and A′ = Σ aᵢPᵢ for the least-squares line in l = log10 d.
                let logs = log_distances(distances)?;
                let (l_mean, sxx) = centred_spread(&logs)?;
                let n = logs.len() as f64;
                let w_sum: f64 = w.iter().sum();
                let lever = d0.log10() - dot(w, &logs);
                let coeffs = logs
                    .iter()
                    .zip(w)
                    .map(|(l, wi)| {
                        let g = (l - l_mean) / sxx;
                        let a = 1.0 / n - l_mean * g;
                        a * (1.0 - w_sum) + g * lever + wi
                    })
                    .collect();
                AffinePowerMap {
                    intercept: 0.0,
                    coeffs,
                }
            }
            Plan::Raw => AffinePowerMap {
                intercept: 0.0,
                coeffs: w.clone(),
            },
        })
    }
}

pub fn as_affine(
    method: Method,
    scn: &Scenario,
    p0: Point,
    opts: EstimatorOptions,
) -> Result<AffinePowerMap> {
    Interpolator::new(method, scn, p0, opts)?.affine()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::Kernel;
    use crate::field::{received_powers, sample_shadow, SeedSpec, ShadowSample};
    use crate::geometry::{build_square_scenario, square_sensors, PathLoss};
    use crate::linalg::solve_spd;
    use proptest::prelude::*;

    const D: f64 = 640.0;

    fn scenario_with(xc: f64, emitter: Point) -> Scenario {
        build_square_scenario(
            D,
            emitter,
            PathLoss::REFERENCE,
            CorrelationModel::new(Kernel::Exponential, 5.0, xc).unwrap(),
        )
        .unwrap()
    }

    fn scenario() -> Scenario {
        scenario_with(640.0, Point::new(-100.0, 0.0))
    }

    fn measurements(scn: &Scenario, p0: Point, seed: u64) -> Vec<f64> {
        let s = sample_shadow(scn, p0, SeedSpec::new(seed, 0, 0)).unwrap();
        received_powers(scn, &s, p0).unwrap().pr
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert_eq!("SM-2".parse::<Method>().unwrap(), Method::Sm2);
        let err = "kriging".parse::<Method>().unwrap_err().to_string();
        assert!(err.contains("sm0") && err.contains("nan"), "{err}");
    }

    #[test]
    fn sm0_weights_near_a_sensor() {
        let scn = scenario();
        let s = scn.sensors();
        let p0 = Point::new(s[2].x - 1e-6 * D, s[2].y);
        let w = sm0_weights(scn.correlation(), s, p0).unwrap();
        // Oracle: at the sensor itself W = e_j exactly; the offset moves it by O(1e-6).
        assert!((w[2] - 1.0).abs() < 1e-3, "{w:?}");
        for (i, v) in w.iter().enumerate() {
            if i != 2 {
                assert!(v.abs() < 1e-3, "{w:?}");
            }
        }
    }

    #[test]
    fn sm0_weights_vanish_without_correlation() {
        let scn = scenario_with(1e-6 * D, Point::new(-100.0, 0.0));
        let w = sm0_weights(scn.correlation(), scn.sensors(), Point::new(200.0, 350.0)).unwrap();
        assert!(w.iter().all(|v| v.abs() < 1e-6));
    }

    #[test]
    fn sm0_weights_at_center_are_equal() {
        let scn = scenario();
        let c = Point::new(320.0, 320.0);
        let w = sm0_weights(scn.correlation(), scn.sensors(), c).unwrap();
        // Oracle: same solve done directly.
        let direct = solve_spd(
            &scn.correlation().covariance_matrix(scn.sensors()),
            &scn.correlation().cross_covariance(c, scn.sensors()),
        )
        .unwrap();
        for (a, b) in w.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-15);
            assert!((a - w[0]).abs() < 1e-12);
        }
        // By symmetry each weight is c/(σ²(1 + 2e⁻¹ + e^−√2)).
        let c0 = 25.0 * (-std::f64::consts::FRAC_1_SQRT_2).exp();
        let row = 25.0 * (1.0 + 2.0 * (-1f64).exp() + (-std::f64::consts::SQRT_2).exp());
        assert!((w[0] - c0 / row).abs() < 1e-12);
    }

    #[test]
    fn sm0_predict_examples() {
        let scn = scenario();
        let p0 = Point::new(150.0, 410.0);
        let zero = received_powers(&scn, &ShadowSample::zeros(4), p0).unwrap();
        let pred = sm0_predict(&scn, p0, &zero.pr).unwrap();
        assert!((pred.value - zero.pr0).abs() < 1e-12);

        let s = scn.sensors();
        let near = Point::new(s[1].x + 1e-6 * D, s[1].y);
        let m = measurements(&scn, near, 3);
        let pred = sm0_predict(&scn, near, &m).unwrap();
        assert!((pred.value - m[1]).abs() < 1e-3, "{} vs {}", pred.value, m[1]);

        let tiny = scenario_with(1e-9 * D, Point::new(-100.0, 0.0));
        let m = measurements(&tiny, p0, 4);
        let pred = sm0_predict(&tiny, p0, &m).unwrap();
        assert!((pred.value - median_power(&tiny, p0).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn fitted_methods_are_exact_without_shadowing() {
        let scn = scenario();
        let p0 = Point::new(90.0, 500.0);
        let zero = received_powers(&scn, &ShadowSample::zeros(4), p0).unwrap();
        for pred in [
            sm1_predict(&scn, p0, &zero.pr).unwrap(),
            sm2_predict(&scn, p0, &zero.pr, 1.0).unwrap(),
        ] {
            assert!((pred.value - zero.pr0).abs() < 1e-9, "{pred:?}");
        }
    }

    #[test]
    fn fitted_methods_shift_with_measurements() {
        let scn = scenario();
        let p0 = Point::new(300.0, 111.0);
        let m = measurements(&scn, p0, 9);
        let shifted: Vec<f64> = m.iter().map(|v| v + 3.5).collect();
        for method in [Method::Sm1, Method::Sm2] {
            let it = Interpolator::new(method, &scn, p0, EstimatorOptions::default()).unwrap();
            let a = it.predict_value(&m).unwrap();
            let b = it.predict_value(&shifted).unwrap();
            assert!((b - a - 3.5).abs() < 1e-9, "{method}");
        }
    }

    #[test]
    fn sm2_weights_examples() {
        let sq = square_sensors(D);
        let w = sm2_weights(&sq, Point::new(320.0, 320.0), 1.0).unwrap();
        assert!(w.iter().all(|v| (v - 0.25).abs() < 1e-15));

        // Distances (1, 2, 2, 2) from the origin.
        let sites = [
            Point::new(1.0, 0.0),
            Point::new(-2.0, 0.0),
            Point::new(0.0, 2.0),
            Point::new(0.0, -2.0),
        ];
        let w = sm2_weights(&sites, Point::new(0.0, 0.0), 1.0).unwrap();
        for (a, b) in w.iter().zip([0.4, 0.2, 0.2, 0.2]) {
            assert!((a - b).abs() < 1e-15);
        }

        let w = sm2_weights(&sq, Point::new(D, D - 1e-10 * D), 1.0).unwrap();
        assert_eq!(w, vec![0.0, 0.0, 1.0, 0.0]);
        assert!(sm2_weights(&sq, Point::new(1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn nn_examples() {
        let sq = square_sensors(D);
        let m = [1.0, 2.0, 3.0, 4.0];
        let p = nn_predict(&sq, Point::new(600.0, 630.0), &m).unwrap();
        assert_eq!(p.value, 3.0);
        assert_eq!(p.weights, vec![0.0, 0.0, 1.0, 0.0]);
        let p = nn_predict(&sq, Point::new(320.0, 320.0), &m).unwrap();
        assert_eq!(p.value, 1.0);
    }

    #[test]
    fn idw_examples() {
        let sq = square_sensors(D);
        let p = idw_predict(&sq, Point::new(77.0, 421.0), &[-60.0; 4], 2.0).unwrap();
        assert!((p.value + 60.0).abs() < 1e-12);
        let m = [1.0, 2.0, 3.0, 6.0];
        let p = idw_predict(&sq, Point::new(320.0, 320.0), &m, 1.0).unwrap();
        assert!((p.value - 3.0).abs() < 1e-12);
        let p = idw_predict(&sq, Point::new(0.0, D), &m, 1.0).unwrap();
        assert_eq!(p.value, 2.0);
    }

    #[test]
    fn nan_examples() {
        let sq = square_sensors(D);
        let m = [1.0, 2.0, 3.0, 6.0];
        let p = nan_predict(&sq, Point::new(320.0, 320.0), &m).unwrap();
        assert!((p.value - 3.0).abs() < 1e-12);
        let p = nan_predict(&sq, Point::new(D, 0.0), &m).unwrap();
        assert_eq!(p.value, 6.0);
        assert!(matches!(
            nan_predict(&sq, Point::new(-5.0, 10.0), &m),
            Err(Error::OutOfHull { .. })
        ));
    }

    #[test]
    fn degenerate_fit_surfaces_from_fitted_methods() {
        // The square's center is equidistant from all four sensors.
        let scn = scenario_with(640.0, Point::new(320.0, 320.0));
        let err = Interpolator::new(Method::Sm2, &scn, Point::new(100.0, 100.0), EstimatorOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::DegenerateLse { .. }));
        // Methods that do not fit are unaffected.
        assert!(Interpolator::new(Method::Idw, &scn, Point::new(100.0, 100.0), EstimatorOptions::default()).is_ok());
    }

    #[test]
    fn affine_map_special_shapes() {
        let scn = scenario();
        let p0 = Point::new(210.0, 40.0);
        let nn = as_affine(Method::Nn, &scn, p0, EstimatorOptions::default()).unwrap();
        assert_eq!(nn.intercept, 0.0);
        assert_eq!(nn.coeffs, vec![1.0, 0.0, 0.0, 0.0]);
        for m in [Method::Sm2, Method::Idw, Method::Nan] {
            let a = as_affine(m, &scn, p0, EstimatorOptions::default()).unwrap();
            assert!((a.coeffs.iter().sum::<f64>() - 1.0).abs() < 1e-12, "{m}");
        }
        let sm0 = as_affine(Method::Sm0, &scn, p0, EstimatorOptions::default()).unwrap();
        let w = sm0_weights(scn.correlation(), scn.sensors(), p0).unwrap();
        let pm0 = median_power(&scn, p0).unwrap();
        assert!((sm0.intercept - (pm0 - dot(&w, &sensor_medians(&scn)))).abs() < 1e-12);
    }

    #[test]
    fn affine_map_matches_direct_calls() {
        let scn = scenario();
        let opts = EstimatorOptions::default();
        for (k, p0) in [Point::new(160.0, 160.0), Point::new(33.0, 600.0), Point::new(590.0, 322.0)]
            .into_iter()
            .enumerate()
        {
            for method in Method::ALL {
                let it = Interpolator::new(method, &scn, p0, opts).unwrap();
                let map = it.affine().unwrap();
                for r in 0..100 {
                    let s = sample_shadow(&scn, p0, SeedSpec::new(77, k as u64, r)).unwrap();
                    let m = received_powers(&scn, &s, p0).unwrap().pr;
                    let direct = it.predict_value(&m).unwrap();
                    assert!((map.eval(&m) - direct).abs() < 1e-9, "{method} r={r}");
                }
            }
        }
    }

    fn interior() -> impl Strategy<Value = Point> {
        (1.0..639.0f64, 1.0..639.0f64).prop_map(|(x, y)| Point::new(x, y))
    }

    proptest! {
        #[test]
        fn weights_normalised_and_convex(p0 in interior(), m in prop::collection::vec(-120.0..-40.0f64, 4), nu in 1.0..3.0f64) {
            let sq = square_sensors(D);
            let lo = m.iter().cloned().fold(f64::MAX, f64::min);
            let hi = m.iter().cloned().fold(f64::MIN, f64::max);
            for pred in [
                idw_predict(&sq, p0, &m, nu).unwrap(),
                nan_predict(&sq, p0, &m).unwrap(),
            ] {
                prop_assert!((pred.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
                prop_assert!(pred.weights.iter().all(|w| *w >= 0.0));
                prop_assert!(pred.value >= lo - 1e-9 && pred.value <= hi + 1e-9);
            }
            let w = sm2_weights(&sq, p0, nu).unwrap();
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn fitted_shift_equivariance(p0 in interior(), m in prop::collection::vec(-120.0..-40.0f64, 4), c in -30.0..30.0f64) {
            let scn = scenario();
            let shifted: Vec<f64> = m.iter().map(|v| v + c).collect();
            for method in [Method::Sm1, Method::Sm2] {
                let it = Interpolator::new(method, &scn, p0, EstimatorOptions::default()).unwrap();
                let d = it.predict_value(&shifted).unwrap() - it.predict_value(&m).unwrap();
                prop_assert!((d - c).abs() <= 1e-9);
            }
        }
    }
}
