//! Experiment orchestration: per-point RMS error, grid surfaces, spatial
//! aggregation, `D/Xc` sweeps and RMSE distributions.
//!
//! Grid points are evaluated in parallel. Each point draws its realizations
//! from its own substream (keyed by the point index), every method at a
//! point sees the same realizations, and results are reduced in point-index
//! order, so output does not depend on the worker count.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{analytic_rmse, error_form, lse_error_coeffs};
use crate::correlation::{CorrelationModel, Kernel};
use crate::error::Error;
use crate::estimators::{EstimatorOptions, Interpolator, Method};
use crate::field::{median_power, sensor_medians, ShadowSampler};
use crate::geometry::{
    build_square_scenario, emitter_preset, make_grid, PathLoss, Point, QueryGrid, Scenario,
    EMITTER_PRESETS,
};

pub const DEFAULT_RATIOS: [f64; 9] = [0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];
pub const DEFAULT_REALIZATIONS: usize = 10_000;
pub const DEFAULT_BINS: usize = 40;

/// How per-point RMS errors are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[serde(alias = "mc")]
    MonteCarlo,
    #[default]
    Analytic,
    Both,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::MonteCarlo => "monte_carlo",
            Mode::Analytic => "analytic",
            Mode::Both => "both",
        }
    }

    fn wants_mc(self) -> bool {
        self != Mode::Analytic
    }

    fn wants_analytic(self) -> bool {
        self != Mode::MonteCarlo
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Emitter position: a preset name (`"E1"`, `"E2"`, `"E3"`) or coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EmitterSpec {
    Preset(String),
    At { x: f64, y: f64 },
}

impl Default for EmitterSpec {
    fn default() -> Self {
        EmitterSpec::Preset("E1".into())
    }
}

impl EmitterSpec {
    pub fn resolve(&self) -> Option<Point> {
        match self {
            EmitterSpec::Preset(name) => emitter_preset(name),
            EmitterSpec::At { x, y } => Some(Point::new(*x, *y)),
        }
    }
}

/// A full experiment description. Field names are the JSON keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Sensor square side `D` in meters.
    pub side: f64,
    pub emitter: EmitterSpec,
    /// Path-loss intercept `A` in dB.
    pub a: f64,
    pub gamma: f64,
    /// Shadow-fading standard deviation in dB.
    pub sigma: f64,
    pub kernel: Kernel,
    /// `D/Xc` values, strictly ascending.
    pub ratios: Vec<f64>,
    pub resolution: usize,
    pub realizations: usize,
    pub methods: Vec<Method>,
    pub master_seed: u64,
    pub mode: Mode,
    /// Inverse-distance exponent for SM-2 and IDW.
    pub nu: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let pl = PathLoss::REFERENCE;
        Self {
            side: 640.0,
            emitter: EmitterSpec::default(),
            a: pl.a,
            gamma: pl.gamma,
            sigma: 5.0,
            kernel: Kernel::Exponential,
            ratios: DEFAULT_RATIOS.to_vec(),
            resolution: crate::geometry::DEFAULT_RESOLUTION,
            realizations: DEFAULT_REALIZATIONS,
            methods: Method::ALL.to_vec(),
            master_seed: 0,
            mode: Mode::Analytic,
            nu: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid config field `{field}`: {message}")]
pub struct ConfigError {
    pub field: &'static str,
    pub message: String,
}

fn config_error(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("emitter at ({x}, {y}): {source}")]
    Degenerate { x: f64, y: f64, source: Error },
    #[error(transparent)]
    Model(#[from] Error),
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |field, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_error(field, format!("must be a finite number > 0, got {v}")))
            }
        };
        positive("side", self.side)?;
        positive("gamma", self.gamma)?;
        positive("sigma", self.sigma)?;
        positive("nu", self.nu)?;
        if !self.a.is_finite() {
            return Err(config_error("a", "must be finite"));
        }
        match self.emitter.resolve() {
            None => {
                let names: Vec<_> = EMITTER_PRESETS.iter().map(|(n, _)| *n).collect();
                return Err(config_error(
                    "emitter",
                    format!("unknown preset; expected one of {} or {{\"x\":..,\"y\":..}}", names.join(", ")),
                ));
            }
            Some(p) if !p.is_finite() => return Err(config_error("emitter", "coordinates must be finite")),
            Some(_) => {}
        }
        if let Kernel::Elliptical { axis_ratio, rotation } = self.kernel {
            positive("kernel.axis_ratio", axis_ratio)?;
            if !rotation.is_finite() {
                return Err(config_error("kernel.rotation", "must be finite"));
            }
        }
        if self.ratios.is_empty() {
            return Err(config_error("ratios", "must be non-empty"));
        }
        for &r in &self.ratios {
            positive("ratios", r)?;
        }
        if self.ratios.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config_error("ratios", "must be strictly ascending"));
        }
        if self.resolution == 0 {
            return Err(config_error("resolution", "must be >= 1"));
        }
        if self.realizations == 0 {
            return Err(config_error("realizations", "must be >= 1"));
        }
        if self.methods.is_empty() {
            return Err(config_error("methods", "must be non-empty"));
        }
        Ok(())
    }

    pub fn emitter_point(&self) -> Result<Point, ConfigError> {
        self.emitter
            .resolve()
            .ok_or_else(|| config_error("emitter", "unknown preset"))
    }

    pub fn estimator_options(&self) -> EstimatorOptions {
        EstimatorOptions { nu: self.nu }
    }

    pub fn grid(&self) -> HarnessResult<QueryGrid> {
        Ok(make_grid(self.side, self.resolution)?)
    }

    /// The scenario at `D/Xc = ratio`, checked for degenerate geometry.
    pub fn scenario(&self, ratio: f64) -> HarnessResult<Scenario> {
        self.validate()?;
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(config_error("ratio", format!("must be > 0, got {ratio}")).into());
        }
        let emitter = self.emitter_point()?;
        let model = CorrelationModel::new(self.kernel, self.sigma, self.side / ratio)?;
        let pl = PathLoss {
            a: self.a,
            gamma: self.gamma,
        };
        let scn = build_square_scenario(self.side, emitter, pl, model).map_err(|e| match e {
            Error::DegenerateScenario(_) => HarnessError::Degenerate {
                x: emitter.x,
                y: emitter.y,
                source: e,
            },
            other => other.into(),
        })?;
        if self.methods.iter().any(|m| m.fits_path_loss()) {
            check_lse_geometry(&scn)?;
        }
        Ok(scn)
    }
}

/// Fails if the emitter is (nearly) equidistant from all sensors.
pub fn check_lse_geometry(scn: &Scenario) -> HarnessResult<()> {
    lse_error_coeffs(&scn.sensor_distances()).map_err(|source| {
        let e = scn.emitter();
        HarnessError::Degenerate {
            x: e.x,
            y: e.y,
            source,
        }
    })?;
    Ok(())
}

/// Startup check: every named emitter preset supports the path-loss fit.
pub fn verify_presets(side: f64) -> HarnessResult<()> {
    let model = CorrelationModel::new(Kernel::Exponential, 1.0, side)?;
    for (_, p) in EMITTER_PRESETS {
        let scn = build_square_scenario(side, p, PathLoss::REFERENCE, model)?;
        check_lse_geometry(&scn)?;
    }
    Ok(())
}

/// Monte Carlo estimate of one method's RMS error at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub rmse: f64,
    /// Delta-method standard error of `rmse`.
    pub stderr: f64,
    pub mean_error: f64,
}

/// Monte Carlo RMS errors of several methods at `p0`, all driven by the
/// same `realizations` draws from substream `(seed, point_index)`.
pub fn point_rmse_mc_all(
    scn: &Scenario,
    p0: Point,
    methods: &[Method],
    opts: EstimatorOptions,
    realizations: usize,
    seed: u64,
    point_index: u64,
) -> crate::Result<Vec<McEstimate>> {
    if realizations == 0 {
        return Err(crate::error::invalid("realizations", "must be >= 1"));
    }
    let interps = methods
        .iter()
        .map(|&m| Interpolator::new(m, scn, p0, opts))
        .collect::<crate::Result<Vec<_>>>()?;
    let sampler = ShadowSampler::new(scn, p0)?;
    let medians = sensor_medians(scn);
    let m0 = median_power(scn, p0)?;
    let mut stream = sampler.stream(seed, point_index);
    let k = sampler.dim();
    let (mut z, mut x, mut pr) = (vec![0.0; k], vec![0.0; k], vec![0.0; k - 1]);
    // Σe, Σe², Σe⁴ per method.
    let mut acc = vec![[0.0f64; 3]; methods.len()];
    for _ in 0..realizations {
        stream.next_into(&mut z);
        sampler.colour(&z, &mut x);
        for (p, (m, s)) in pr.iter_mut().zip(medians.iter().zip(&x[1..])) {
            *p = m + s;
        }
        let pr0 = m0 + x[0];
        for (a, it) in acc.iter_mut().zip(&interps) {
            let e = pr0 - it.predict_value(&pr)?;
            let e2 = e * e;
            a[0] += e;
            a[1] += e2;
            a[2] += e2 * e2;
        }
    }
    let r = realizations as f64;
    Ok(acc
        .into_iter()
        .map(|[s1, s2, s4]| {
            let ms = s2 / r;
            let rmse = ms.sqrt();
            let var_sq = (s4 / r - ms * ms).max(0.0);
            let stderr = if rmse > 0.0 {
                (var_sq / r).sqrt() / (2.0 * rmse)
            } else {
                0.0
            };
            McEstimate {
                rmse,
                stderr,
                mean_error: s1 / r,
            }
        })
        .collect())
}

pub fn point_rmse_mc(
    scn: &Scenario,
    p0: Point,
    method: Method,
    opts: EstimatorOptions,
    realizations: usize,
    seed: u64,
) -> crate::Result<McEstimate> {
    Ok(point_rmse_mc_all(scn, p0, &[method], opts, realizations, seed, 0)?[0])
}

/// Exact RMS error of `method` at `p0`.
pub fn point_rmse_analytic(
    scn: &Scenario,
    p0: Point,
    method: Method,
    opts: EstimatorOptions,
) -> crate::Result<f64> {
    let form = error_form(method, scn, p0, opts)?;
    analytic_rmse(&form, scn.correlation(), p0, scn.sensors())
}

/// `√(mean xⱼ²)`.
pub fn spatial_rmse(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

/// Per-point RMS errors of one method over a query grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RmseSurface {
    pub method: Method,
    pub ratio: f64,
    pub mode: Mode,
    pub side: f64,
    pub resolution: usize,
    /// Per-point values aligned with the grid: analytic when computed,
    /// otherwise Monte Carlo.
    pub values: Vec<f64>,
    /// `√(mean values²)`.
    pub spatial_rmse: f64,
    pub analytic: Option<Vec<f64>>,
    pub mc: Option<Vec<f64>>,
    pub mc_stderr: Option<Vec<f64>>,
    pub spatial_rmse_mc: Option<f64>,
    pub spatial_mc_stderr: Option<f64>,
    /// Indices of points where `|MC − analytic| > 3·analytic/√(2R)`.
    pub cross_check_failures: Option<Vec<usize>>,
}

impl RmseSurface {
    pub fn points(&self) -> Vec<Point> {
        make_grid(self.side, self.resolution)
            .map(|g| g.points().to_vec())
            .unwrap_or_default()
    }
}

fn run_in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> HarnessResult<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| config_error("threads", e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct PointResult {
    analytic: f64,
    mc: McEstimate,
}

impl Default for McEstimate {
    fn default() -> Self {
        Self {
            rmse: f64::NAN,
            stderr: f64::NAN,
            mean_error: f64::NAN,
        }
    }
}

/// Surfaces of every method in `methods` at one ratio. `threads` bounds the
/// worker count (`None` uses the global pool).
pub fn grid_rmse_all(
    config: &ExperimentConfig,
    ratio: f64,
    methods: &[Method],
    threads: Option<usize>,
) -> HarnessResult<Vec<RmseSurface>> {
    if methods.is_empty() {
        return Err(config_error("methods", "must be non-empty").into());
    }
    let cfg = ExperimentConfig {
        methods: methods.to_vec(),
        ..config.clone()
    };
    let scn = cfg.scenario(ratio)?;
    let grid = cfg.grid()?;
    let opts = cfg.estimator_options();
    let mode = cfg.mode;

    let per_point = run_in_pool(threads, || {
        grid.points()
            .par_iter()
            .enumerate()
            .map(|(idx, &p0)| -> crate::Result<Vec<PointResult>> {
                let mut out = vec![PointResult::default(); methods.len()];
                if mode.wants_analytic() {
                    for (slot, &m) in out.iter_mut().zip(methods) {
                        slot.analytic = point_rmse_analytic(&scn, p0, m, opts)?;
                    }
                }
                if mode.wants_mc() {
                    let mc = point_rmse_mc_all(
                        &scn,
                        p0,
                        methods,
                        opts,
                        cfg.realizations,
                        cfg.master_seed,
                        idx as u64,
                    )?;
                    for (slot, est) in out.iter_mut().zip(mc) {
                        slot.mc = est;
                    }
                }
                Ok(out)
            })
            .collect::<crate::Result<Vec<_>>>()
    })??;

    let r = cfg.realizations as f64;
    Ok(methods
        .iter()
        .enumerate()
        .map(|(k, &method)| {
            let column: Vec<PointResult> = per_point.iter().map(|v| v[k]).collect();
            let analytic: Option<Vec<f64>> =
                mode.wants_analytic().then(|| column.iter().map(|p| p.analytic).collect());
            let mc: Option<Vec<f64>> = mode.wants_mc().then(|| column.iter().map(|p| p.mc.rmse).collect());
            let mc_stderr: Option<Vec<f64>> =
                mode.wants_mc().then(|| column.iter().map(|p| p.mc.stderr).collect());
            let spatial_rmse_mc = mc.as_deref().map(spatial_rmse);
            let spatial_mc_stderr = match (&mc, &mc_stderr, spatial_rmse_mc) {
                (Some(x), Some(se), Some(agg)) if agg > 0.0 => {
                    let var: f64 = x.iter().zip(se).map(|(x, s)| (x * s).powi(2)).sum();
                    Some(var.sqrt() / (x.len() as f64 * agg))
                }
                (Some(_), Some(_), Some(_)) => Some(0.0),
                _ => None,
            };
            let cross_check_failures = match (&analytic, &mc) {
                (Some(a), Some(m)) => Some(
                    a.iter()
                        .zip(m)
                        .enumerate()
                        .filter(|(_, (a, m))| (*m - *a).abs() > 3.0 * *a / (2.0 * r).sqrt())
                        .map(|(i, _)| i)
                        .collect(),
                ),
                _ => None,
            };
            let values = analytic.clone().or_else(|| mc.clone()).unwrap_or_default();
            RmseSurface {
                method,
                ratio,
                mode,
                side: cfg.side,
                resolution: cfg.resolution,
                spatial_rmse: spatial_rmse(&values),
                values,
                analytic,
                mc,
                mc_stderr,
                spatial_rmse_mc,
                spatial_mc_stderr,
                cross_check_failures,
            }
        })
        .collect())
}

pub fn grid_rmse(
    config: &ExperimentConfig,
    ratio: f64,
    method: Method,
    threads: Option<usize>,
) -> HarnessResult<RmseSurface> {
    Ok(grid_rmse_all(config, ratio, &[method], threads)?.remove(0))
}

/// One `(ratio, method)` aggregate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub ratio: f64,
    pub method: Method,
    pub spatial_rmse: f64,
    /// `analytic` or `monte_carlo`.
    pub mode: Mode,
    pub mc_stderr: Option<f64>,
}

/// ⟨RMSE⟩ for every `(ratio, method)` with `Xc = D/ratio`. In
/// [`Mode::Both`] each pair yields an analytic row followed by a Monte Carlo
/// row.
pub fn sweep(config: &ExperimentConfig, threads: Option<usize>) -> HarnessResult<Vec<SweepRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &ratio in &config.ratios {
        for s in grid_rmse_all(config, ratio, &config.methods, threads)? {
            if config.mode.wants_analytic() {
                rows.push(SweepRow {
                    ratio,
                    method: s.method,
                    spatial_rmse: spatial_rmse(s.analytic.as_deref().unwrap_or_default()),
                    mode: Mode::Analytic,
                    mc_stderr: None,
                });
            }
            if let Some(v) = s.spatial_rmse_mc {
                rows.push(SweepRow {
                    ratio,
                    method: s.method,
                    spatial_rmse: v,
                    mode: Mode::MonteCarlo,
                    mc_stderr: s.spatial_mc_stderr,
                });
            }
        }
    }
    Ok(rows)
}

/// Histogram density and empirical CDF of per-point RMS errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RmseDistribution {
    pub bin_centers: Vec<f64>,
    pub bin_width: f64,
    /// Density: `count / (m · bin_width)`; integrates to 1.
    pub pdf: Vec<f64>,
    /// Fraction of points at or below each bin's upper edge.
    pub cdf: Vec<f64>,
}

pub fn rmse_distribution(values: &[f64], bins: usize) -> RmseDistribution {
    let bins = bins.max(1);
    let m = values.len();
    if m == 0 {
        return RmseDistribution {
            bin_centers: Vec::new(),
            bin_width: 0.0,
            pdf: Vec::new(),
            cdf: Vec::new(),
        };
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (start, width) = if hi > lo {
        (lo, (hi - lo) / bins as f64)
    } else {
        // Constant surface: one occupied bin centred on the value.
        let w = (lo.abs() * 1e-6).max(1e-12);
        (lo - 0.5 * w, w)
    };
    let mut counts = vec![0usize; bins];
    for &v in values {
        let k = (((v - start) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let mut running = 0usize;
    let mut cdf = Vec::with_capacity(bins);
    for &c in &counts {
        running += c;
        cdf.push(running as f64 / m as f64);
    }
    RmseDistribution {
        bin_centers: (0..bins).map(|k| start + (k as f64 + 0.5) * width).collect(),
        bin_width: width,
        pdf: counts.iter().map(|&c| c as f64 / (m as f64 * width)).collect(),
        cdf,
    }
}

/// Fraction of `values` within `tol` of `center`.
pub fn fraction_within(values: &[f64], center: f64, tol: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().filter(|v| (*v - center).abs() <= tol).count() as f64 / values.len() as f64
}
