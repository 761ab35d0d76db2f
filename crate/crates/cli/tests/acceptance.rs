//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Tolerances and runtime limits are fixed.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radiomap::analysis::{fitted_two_part_error, lse_error_coeffs, sm1_error_expansion};
use radiomap::estimators::{nan_predict, sm0_predict, sm0_weights, EstimatorOptions, Method};
use radiomap::field::{median_power, received_powers, sample_shadow, sensor_medians, SeedSpec};
use radiomap::geometry::{build_square_scenario, make_grid, square_sensors, PathLoss, Point};
use radiomap::harness::{
    fraction_within, grid_rmse, grid_rmse_all, point_rmse_analytic, point_rmse_mc_all, EmitterSpec,
    ExperimentConfig, DEFAULT_RATIOS,
};
use radiomap::linalg::dot;
use radiomap::{CorrelationModel, Kernel};
use radiomap_cli::validate::{direct_fit, gauss_solve, lattice_sibson};

const D: f64 = 640.0;
const SIGMA: f64 = 5.0;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn table_ii(emitter: Point, kernel: Kernel, xc: f64) -> radiomap::Scenario {
    build_square_scenario(D, emitter, PathLoss::REFERENCE, CorrelationModel::new(kernel, SIGMA, xc).unwrap())
        .unwrap()
}

fn e1() -> Point {
    Point::new(-100.0, 0.0)
}

fn analytic(res: usize, emitter: &str, kernel: Kernel) -> ExperimentConfig {
    ExperimentConfig {
        resolution: res,
        emitter: EmitterSpec::Preset(emitter.into()),
        kernel,
        ..Default::default()
    }
}

/// ⟨RMSE⟩ per method at one ratio, in `methods` order.
fn spatial(cfg: &ExperimentConfig, ratio: f64, methods: &[Method]) -> Vec<f64> {
    grid_rmse_all(cfg, ratio, methods, None)
        .unwrap()
        .into_iter()
        .map(|s| s.spatial_rmse)
        .collect()
}

fn c1_kriging() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let kernel = match rng.random_range(0..3) {
            0 => Kernel::Exponential,
            1 => Kernel::Gaussian,
            _ => Kernel::elliptical(rng.random_range(1.0..5.0), rng.random_range(0.0..3.14)),
        };
        let model = CorrelationModel::new(kernel, rng.random_range(1.0..10.0), rng.random_range(30.0..5000.0)).unwrap();
        let emitter = Point::new(rng.random_range(-1000.0..-5.0), rng.random_range(-500.0..1100.0));
        let scn = build_square_scenario(D, emitter, PathLoss::REFERENCE, model).unwrap();
        let p0 = Point::new(rng.random_range(1.0..D - 1.0), rng.random_range(1.0..D - 1.0));
        let medians = sensor_medians(&scn);
        let pr: Vec<f64> = medians.iter().map(|m| m + rng.random_range(-20.0..20.0)).collect();

        let s = scn.sensors();
        let c: Vec<Vec<f64>> = s.iter().map(|&a| s.iter().map(|&b| model.covariance(a, b)).collect()).collect();
        let c0: Vec<f64> = s.iter().map(|&a| model.covariance(p0, a)).collect();
        let lambda = gauss_solve(c, c0);
        // Z* = λᵀP_r + (P_m0 − λᵀP_m)
        let kriged = dot(&lambda, &pr) + median_power(&scn, p0).unwrap() - dot(&lambda, &medians);
        let sm0 = sm0_predict(&scn, p0, &pr).unwrap().value;
        worst = worst.max((sm0 - kriged).abs());
    }
    outcome(worst <= 1e-9, format!("max |SM-0 − SK| = {worst:.2e} dB over 100 pairs (tol 1e-9)"))
}

fn c2_lse() -> Outcome {
    let scn = table_ii(e1(), Kernel::Exponential, D);
    let d = scn.sensor_distances();
    let logs: Vec<f64> = d.iter().map(|v| v.log10()).collect();
    let c = lse_error_coeffs(&d).unwrap();
    let pl = scn.path_loss();
    let p0 = Point::new(320.0, 100.0);
    let mut worst: f64 = 0.0;
    for r in 0..100 {
        let s = sample_shadow(&scn, p0, SeedSpec::new(2, 0, r)).unwrap();
        let pw = received_powers(&scn, &s, p0).unwrap();
        let (a_fit, slope) = direct_fit(&logs, &pw.pr);
        let z = s.s.iter().sum::<f64>() / 4.0;
        worst = worst
            .max((c.delta_a(&s.s) - (pl.a + z - a_fit)).abs())
            .max((c.delta_gamma(&s.s) - (pl.gamma - slope / 10.0)).abs())
            .max((dot(&c.da_true_coeffs, &s.s) - (pl.a - a_fit)).abs());
    }
    outcome(worst <= 1e-9, format!("max |closed form − direct fit| = {worst:.2e} (tol 1e-9)"))
}

fn c3_decomposition() -> Outcome {
    let scn = table_ii(e1(), Kernel::Exponential, D);
    let d = scn.sensor_distances();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for r in 0..100 {
        let p0 = Point::new(rng.random_range(5.0..D - 5.0), rng.random_range(5.0..D - 5.0));
        let w = sm0_weights(scn.correlation(), scn.sensors(), p0).unwrap();
        let s = sample_shadow(&scn, p0, SeedSpec::new(3, 0, r)).unwrap();
        let two = fitted_two_part_error(&d, scn.emitter_distance(p0), &w, &s).unwrap();
        let expanded = sm1_error_expansion(&scn, p0).unwrap().eval(&s);
        worst = worst.max((two - expanded).abs());
    }
    outcome(worst <= 1e-9, format!("max |two-part − expanded| = {worst:.2e} dB (tol 1e-9)"))
}

fn c4_mc_oracle() -> Outcome {
    let grid = make_grid(D, 64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let idx: Vec<usize> = (0..10).map(|_| rng.random_range(0..grid.len())).collect();
    let opts = EstimatorOptions::default();
    let (mut total, mut fails, mut worst_z) = (0, Vec::new(), 0.0f64);
    for ratio in [0.3, 1.0, 3.0] {
        let scn = table_ii(e1(), Kernel::Exponential, D / ratio);
        for &i in &idx {
            let p0 = grid.points()[i];
            let mc = point_rmse_mc_all(&scn, p0, &Method::ALL, opts, 100_000, 4, i as u64).unwrap();
            for (m, est) in Method::ALL.iter().zip(mc) {
                let an = point_rmse_analytic(&scn, p0, *m, opts).unwrap();
                let z = (est.rmse - an).abs() / est.stderr;
                worst_z = worst_z.max(z);
                total += 1;
                if z > 3.0 {
                    fails.push(format!("{m}@({:.0},{:.0})/r={ratio}: z={z:.2}", p0.x, p0.y));
                }
            }
        }
    }
    outcome(
        fails.is_empty(),
        format!(
            "{}/{total} comparisons beyond 3 SE, max z = {worst_z:.2}{}",
            fails.len(),
            if fails.is_empty() { String::new() } else { format!(" [{}]", fails.join("; ")) }
        ),
    )
}

fn c5_sm0_limits() -> Outcome {
    let cfg = analytic(16, "E1", Kernel::Exponential);
    let lo = spatial(&cfg, 1e-3, &[Method::Sm0])[0];
    let hi = spatial(&cfg, 50.0, &[Method::Sm0])[0];
    outcome(
        lo < 0.05 * SIGMA && hi > 0.95 * SIGMA,
        format!("⟨RMSE⟩ = {lo:.4} dB at D/Xc=1e-3 (< 0.25), {hi:.4} dB at D/Xc=50 (> 4.75)"),
    )
}

fn sm1_vs_sm2(kernel: Kernel) -> (bool, f64) {
    let cfg = analytic(16, "E1", kernel);
    let worst = DEFAULT_RATIOS
        .iter()
        .map(|&r| {
            let v = spatial(&cfg, r, &[Method::Sm1, Method::Sm2]);
            (v[0] - v[1]).abs()
        })
        .fold(0.0, f64::max);
    (worst <= 0.15, worst)
}

fn c6_sm1_sm2() -> Outcome {
    let (ok, worst) = sm1_vs_sm2(Kernel::Exponential);
    outcome(ok, format!("max |SM-1 − SM-2| = {worst:.4} dB (tol 0.15)"))
}

fn c7_gap() -> Outcome {
    let mut worst = (f64::NEG_INFINITY, String::new());
    for e in ["E1", "E2", "E3"] {
        let cfg = analytic(64, e, Kernel::Exponential);
        for &r in &DEFAULT_RATIOS {
            let v = spatial(&cfg, r, &[Method::Sm0, Method::Sm2]);
            let gap = v[1] - v[0];
            if gap > worst.0 {
                worst = (gap, format!("{e}, D/Xc={r}"));
            }
        }
    }
    outcome(worst.0 <= 1.2, format!("max SM-2 − SM-0 = {:.4} dB at {} (tol 1.2)", worst.0, worst.1))
}

fn c8_uniformity() -> Outcome {
    let cfg = analytic(64, "E1", Kernel::Exponential);
    let mut parts = Vec::new();
    let mut ok = true;
    for m in [Method::Sm0, Method::Sm1, Method::Sm2] {
        let s = grid_rmse(&cfg, 1.0, m, None).unwrap();
        let f = fraction_within(&s.values, s.spatial_rmse, 0.3);
        ok &= f >= 0.75;
        parts.push(format!("{m} {:.1}%", 100.0 * f));
    }
    outcome(ok, format!("within 0.3 dB of ⟨RMSE⟩: {} (need ≥ 75%)", parts.join(", ")))
}

fn ordering(kernel: Kernel) -> (bool, String) {
    let cfg = analytic(64, "E1", kernel);
    let methods = [Method::Sm2, Method::Nn, Method::Idw, Method::Nan];
    let mut worst = (f64::NEG_INFINITY, String::new());
    for &r in &DEFAULT_RATIOS {
        let v = spatial(&cfg, r, &methods);
        for (k, m) in methods.iter().enumerate().skip(1) {
            let excess = v[0] - v[k];
            if excess > worst.0 {
                worst = (excess, format!("{m} at D/Xc={r}"));
            }
        }
    }
    (worst.0 <= 0.05, format!("max SM-2 − baseline = {:.4} dB vs {} (tol 0.05)", worst.0, worst.1))
}

fn c9_ordering() -> Outcome {
    let (ok, detail) = ordering(Kernel::Exponential);
    outcome(ok, detail)
}

fn c10_floor() -> Outcome {
    let cfg = analytic(64, "E1", Kernel::Exponential);
    let v = spatial(&cfg, 1e-3, &[Method::Sm2, Method::Idw, Method::Nan]);
    outcome(
        v[1] > 5.0 * v[0] && v[2] > 5.0 * v[0],
        format!("at D/Xc=1e-3: SM-2 {:.4}, IDW {:.4}, NaN {:.4} dB (need > 5× SM-2)", v[0], v[1], v[2]),
    )
}

fn c11_kernels() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for kernel in [Kernel::Gaussian, Kernel::elliptical(3.3, 0.0)] {
        let (a, worst) = sm1_vs_sm2(kernel);
        let (b, detail) = ordering(kernel);
        ok &= a && b;
        parts.push(format!("{}: |SM-1 − SM-2| ≤ {worst:.4}; {detail}", kernel.name()));
    }
    outcome(ok, parts.join(" | "))
}

fn c12_sibson() -> Outcome {
    let sensors = square_sensors(D);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p0 = Point::new(rng.random_range(0.05..0.95) * D, rng.random_range(0.05..0.95) * D);
        let lib = nan_predict(&sensors, p0, &[0.0; 4]).unwrap().weights;
        let oracle = lattice_sibson(&sensors, p0, -4.5 * D, 5.5 * D, 2000);
        for (a, b) in lib.iter().zip(&oracle) {
            worst = worst.max((a - b).abs());
        }
    }
    outcome(worst <= 2e-3, format!("max |Sibson − lattice| = {worst:.2e} over 20 points (tol 2e-3)"))
}

fn c13_determinism() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let cfg = dir.path().join("desk.json");
    fs::write(&cfg, r#"{"resolution": 16, "realizations": 2000, "mode": "monte_carlo", "master_seed": 13}"#).unwrap();
    let run = |threads: &str| {
        let out = dir.path().join(format!("t{threads}"));
        let status = Command::new(env!("CARGO_BIN_EXE_radiomap"))
            .args(["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", threads])
            .status()
            .unwrap();
        assert!(status.success());
        fs::read(out.join("sweep.csv")).unwrap()
    };
    let (a, b) = (run("1"), run("4"));
    outcome(a == b, format!("MC sweep CSV with 1 vs 4 threads: {} bytes, identical = {}", a.len(), a == b))
}

fn main() {
    type Criterion = (u32, &'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 13] = [
        (1, "Kriging equivalence", Duration::from_secs(1), c1_kriging),
        (2, "closed-form LSE errors", Duration::from_secs(1), c2_lse),
        (3, "error decomposition identity", Duration::from_secs(1), c3_decomposition),
        (4, "analytic vs Monte Carlo", Duration::from_secs(120), c4_mc_oracle),
        (5, "SM-0 limits", Duration::from_secs(10), c5_sm0_limits),
        (6, "SM-1 ≈ SM-2", Duration::from_secs(30), c6_sm1_sm2),
        (7, "gap to ideal", Duration::from_secs(120), c7_gap),
        (8, "spatial uniformity", Duration::from_secs(60), c8_uniformity),
        (9, "ordering vs baselines", Duration::from_secs(60), c9_ordering),
        (10, "baseline floor", Duration::from_secs(10), c10_floor),
        (11, "robustness across kernels", Duration::from_secs(120), c11_kernels),
        (12, "Sibson lattice oracle", Duration::from_secs(60), c12_sibson),
        (13, "determinism across threads", Duration::from_secs(60), c13_determinism),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let passed = out.passed && in_time;
        println!(
            "criterion {id:>2} [{}] {name}: {}; {:.2} s (limit {} s{})",
            if passed { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", exceeded" }
        );
        if !passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 13 criteria pass");
    } else {
        println!("acceptance: {} failing criteria: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
