//! Subcommand implementations. Each returns the files it wrote or a
//! [`Failure`] carrying the process exit code.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, ValueEnum};
use radiomap::harness::{
    grid_rmse, rmse_distribution, sweep, verify_presets, ExperimentConfig, HarnessError, Mode,
    DEFAULT_BINS,
};
use radiomap::{Error, Method};
use serde::Serialize;

use crate::output::{csv_bytes, ensure_dir, now, num, write_atomic, write_manifest, RunManifest};
use crate::svg::{heatmap, line_chart, Series};
use crate::validate::{self, Fault};

#[derive(Debug)]
pub enum Failure {
    Io(anyhow::Error),
    Config(String),
    Degenerate(String),
    Validation(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Degenerate(_) => 3,
            Failure::Validation(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Io(e) => write!(f, "{e:#}"),
            Failure::Config(m) | Failure::Degenerate(m) | Failure::Validation(m) => f.write_str(m),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(c) => Failure::Config(c.to_string()),
            HarnessError::Degenerate { .. } => Failure::Degenerate(e.to_string()),
            HarnessError::Model(Error::InvalidParameter { .. }) => Failure::Config(e.to_string()),
            HarnessError::Model(_) => Failure::Degenerate(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Mc,
    Analytic,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Mc => Mode::MonteCarlo,
            ModeArg::Analytic => Mode::Analytic,
            ModeArg::Both => Mode::Both,
        }
    }
}

/// Overrides applied on top of the JSON config.
#[derive(Debug, Clone, Default, Args)]
pub struct RunFlags {
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub res: Option<usize>,
    #[arg(long)]
    pub realizations: Option<usize>,
    /// Inverse-distance exponent for SM-2 and IDW.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub nu: Option<u8>,
    /// Upper bound on worker threads (default: all cores).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
}

impl RunFlags {
    fn threads(&self) -> Option<usize> {
        self.threads.map(|t| t as usize)
    }

    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(m) = self.mode {
            cfg.mode = m.into();
        }
        if let Some(s) = self.seed {
            cfg.master_seed = s;
        }
        if let Some(r) = self.res {
            cfg.resolution = r;
        }
        if let Some(r) = self.realizations {
            cfg.realizations = r;
        }
        if let Some(nu) = self.nu {
            cfg.nu = nu as f64;
        }
    }
}

pub fn load_config(path: &Path, flags: &RunFlags) -> Result<ExperimentConfig, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut cfg: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| Failure::Config(format!("config {}: {e}", path.display())))?;
    flags.apply(&mut cfg);
    cfg.validate().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(cfg)
}

pub fn startup_checks(side: f64) -> Result<(), Failure> {
    verify_presets(side).map_err(Failure::from)
}

fn write(dir: &Path, name: &str, bytes: &[u8], written: &mut Vec<String>) -> Result<(), Failure> {
    write_atomic(&dir.join(name), bytes)?;
    written.push(name.to_string());
    Ok(())
}

fn finish<C: Serialize>(
    dir: &Path,
    command: &str,
    config: C,
    seed: Option<u64>,
    threads: Option<usize>,
    started_at: String,
    mut outputs: Vec<String>,
) -> Result<Vec<PathBuf>, Failure> {
    outputs.push("manifest.json".into());
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: command.into(),
        config,
        master_seed: seed,
        threads,
        started_at,
        finished_at: now(),
        outputs: outputs.clone(),
    };
    write_manifest(dir, &manifest)?;
    Ok(outputs.iter().map(|o| dir.join(o)).collect())
}

pub fn cmd_sweep(config_path: &Path, out_dir: &Path, flags: &RunFlags) -> Result<Vec<PathBuf>, Failure> {
    let started = now();
    let cfg = load_config(config_path, flags)?;
    ensure_dir(out_dir)?;
    let rows = sweep(&cfg, flags.threads())?;

    let records: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                num(r.ratio),
                r.method.name().to_string(),
                num(r.spatial_rmse),
                r.mode.name().to_string(),
                r.mc_stderr.map(num).unwrap_or_default(),
            ]
        })
        .collect();
    let mut written = Vec::new();
    let header = ["ratio", "method", "spatial_rmse_db", "mode", "mc_stderr_db"];
    write(out_dir, "sweep.csv", &csv_bytes(&header, &records)?, &mut written)?;

    let mut series: Vec<Series> = Vec::new();
    for mode in [Mode::Analytic, Mode::MonteCarlo] {
        for &m in &cfg.methods {
            let points: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.method == m && r.mode == mode)
                .map(|r| (r.ratio, r.spatial_rmse))
                .collect();
            if points.is_empty() {
                continue;
            }
            let label = if cfg.mode == Mode::Both {
                format!("{m} ({})", if mode == Mode::Analytic { "analytic" } else { "mc" })
            } else {
                m.to_string()
            };
            series.push(Series { label, points });
        }
    }
    let title = format!("Spatial RMS error vs D/Xc ({} kernel, sigma = {} dB)", cfg.kernel.name(), cfg.sigma);
    let svg = line_chart(&title, "D/Xc", "<RMSE> (dB)", &series, true);
    write(out_dir, "sweep.svg", svg.as_bytes(), &mut written)?;

    let seed = cfg.mode.ne(&Mode::Analytic).then_some(cfg.master_seed);
    finish(out_dir, "sweep", &cfg, seed, flags.threads(), started, written)
}

pub fn parse_method(name: &str) -> Result<Method, Failure> {
    name.parse::<Method>().map_err(|e| Failure::Config(format!("invalid method: {e}")))
}

pub fn cmd_grid(
    config_path: &Path,
    ratio: f64,
    method: &str,
    out_dir: &Path,
    bins: Option<usize>,
    flags: &RunFlags,
) -> Result<Vec<PathBuf>, Failure> {
    let started = now();
    let method = parse_method(method)?;
    let mut cfg = load_config(config_path, flags)?;
    cfg.methods = vec![method];
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Failure::Config(format!("invalid ratio {ratio}: must be a finite number > 0")));
    }
    ensure_dir(out_dir)?;
    let surface = grid_rmse(&cfg, ratio, method, flags.threads())?;

    let mut written = Vec::new();
    let records: Vec<Vec<String>> = surface
        .points()
        .iter()
        .zip(&surface.values)
        .map(|(p, v)| vec![num(p.x), num(p.y), num(*v)])
        .collect();
    write(out_dir, "grid.csv", &csv_bytes(&["x_m", "y_m", "rmse_db"], &records)?, &mut written)?;

    let dist = rmse_distribution(&surface.values, bins.unwrap_or(DEFAULT_BINS));
    let records: Vec<Vec<String>> = (0..dist.pdf.len())
        .map(|k| vec![num(dist.bin_centers[k]), num(dist.pdf[k]), num(dist.cdf[k])])
        .collect();
    write(out_dir, "dist.csv", &csv_bytes(&["bin_center_db", "pdf", "cdf"], &records)?, &mut written)?;

    let title = format!(
        "{method} RMS error, D/Xc = {ratio}, <RMSE> = {:.3} dB",
        surface.spatial_rmse
    );
    let svg = heatmap(&title, surface.side, surface.resolution, &surface.values, "dB");
    write(out_dir, "grid.svg", svg.as_bytes(), &mut written)?;

    #[derive(Serialize)]
    struct GridEcho<'a> {
        ratio: f64,
        method: Method,
        bins: usize,
        spatial_rmse_db: f64,
        cross_check_failures: Option<usize>,
        experiment: &'a ExperimentConfig,
    }
    let echo = GridEcho {
        ratio,
        method,
        bins: dist.pdf.len(),
        spatial_rmse_db: surface.spatial_rmse,
        cross_check_failures: surface.cross_check_failures.as_ref().map(Vec::len),
        experiment: &cfg,
    };
    let seed = cfg.mode.ne(&Mode::Analytic).then_some(cfg.master_seed);
    finish(out_dir, "grid", echo, seed, flags.threads(), started, written)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    Sigma0Sign,
}

pub fn cmd_validate(out_dir: &Path, fault: Option<FaultArg>) -> Result<Vec<PathBuf>, Failure> {
    let started = now();
    ensure_dir(out_dir)?;
    let checks = validate::run(fault.map(|f| match f {
        FaultArg::Sigma0Sign => Fault::Sigma0Sign,
    }));
    let records: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                if c.passed() { "pass" } else { "fail" }.to_string(),
                num(c.delta),
                num(c.tolerance),
            ]
        })
        .collect();
    let mut written = Vec::new();
    write(
        out_dir,
        "validate.csv",
        &csv_bytes(&["check", "result", "delta", "tolerance"], &records)?,
        &mut written,
    )?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    let paths = finish(
        out_dir,
        "validate",
        serde_json::json!({ "checks": checks.len(), "failed": failed }),
        None,
        None,
        started,
        written,
    )?;
    if failed.is_empty() {
        Ok(paths)
    } else {
        Err(Failure::Validation(format!(
            "{} of {} checks failed: {}",
            failed.len(),
            checks.len(),
            failed.join(", ")
        )))
    }
}
