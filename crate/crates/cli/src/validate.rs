//! Self-check suite: each check compares a library result against an
//! independent oracle and records the measured delta.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radiomap::analysis::{fitted_two_part_error, lse_error_coeffs, sm0_sigma0, sm1_error_expansion};
use radiomap::estimators::{nan_predict, sm0_predict, sm0_weights, EstimatorOptions, Method};
use radiomap::field::{median_power, received_powers, sample_shadow, sensor_medians, SeedSpec};
use radiomap::geometry::{build_square_scenario, square_sensors, PathLoss, Point, Scenario};
use radiomap::harness::{point_rmse_analytic, point_rmse_mc_all};
use radiomap::linalg::dot;
use radiomap::{CorrelationModel, Kernel};

const SIDE: f64 = 640.0;
const SEED: u64 = 0x5eed;
const MC_REALIZATIONS: usize = 20_000;

/// Deliberate defects for exercising the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds the explained variance to σ² instead of subtracting it.
    Sigma0Sign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub delta: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.delta <= self.tolerance
    }
}

fn check(name: impl Into<String>, delta: f64, tolerance: f64) -> Check {
    Check {
        name: name.into(),
        // NaN must fail.
        delta: if delta.is_nan() { f64::INFINITY } else { delta },
        tolerance,
    }
}

/// Solves `m·x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap_or(col);
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    x
}

/// Direct least-squares line `(intercept, slope)` of `y` on `x`.
pub fn direct_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = n * sxx - sx * sx;
    ((sxx * sy - sx * sxy) / det, (n * sxy - sx * sy) / det)
}

/// Sibson weights by counting lattice cells of `[lo, hi]²` that the query
/// point steals from each site.
pub fn lattice_sibson(sites: &[Point], p0: Point, lo: f64, hi: f64, cells: usize) -> Vec<f64> {
    let h = (hi - lo) / cells as f64;
    let mut counts = vec![0usize; sites.len()];
    for j in 0..cells {
        let y = lo + (j as f64 + 0.5) * h;
        for i in 0..cells {
            let x = lo + (i as f64 + 0.5) * h;
            let d2 = |p: Point| (p.x - x).powi(2) + (p.y - y).powi(2);
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (k, &s) in sites.iter().enumerate() {
                let d = d2(s);
                if d < best_d {
                    best_d = d;
                    best = k;
                }
            }
            if d2(p0) < best_d {
                counts[best] += 1;
            }
        }
    }
    let total: usize = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / total.max(1) as f64).collect()
}

fn random_kernel(rng: &mut ChaCha8Rng) -> Kernel {
    match rng.random_range(0..3) {
        0 => Kernel::Exponential,
        1 => Kernel::Gaussian,
        _ => Kernel::elliptical(rng.random_range(1.0..5.0), rng.random_range(0.0..std::f64::consts::PI)),
    }
}

fn table_ii(xc: f64) -> Scenario {
    build_square_scenario(
        SIDE,
        Point::new(-100.0, 0.0),
        PathLoss::REFERENCE,
        CorrelationModel::new(Kernel::Exponential, 5.0, xc).expect("valid model"),
    )
    .expect("valid scenario")
}

fn interior(rng: &mut ChaCha8Rng) -> Point {
    Point::new(rng.random_range(0.05..0.95) * SIDE, rng.random_range(0.05..0.95) * SIDE)
}

fn kriging_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let emitter = Point::new(rng.random_range(-800.0..-10.0), rng.random_range(-400.0..1000.0));
        let model = CorrelationModel::new(random_kernel(&mut rng), rng.random_range(1.0..10.0), rng.random_range(50.0..3000.0))
            .expect("valid model");
        let scn = build_square_scenario(SIDE, emitter, PathLoss::REFERENCE, model).expect("valid scenario");
        let p0 = interior(&mut rng);
        let medians = sensor_medians(&scn);
        let pr: Vec<f64> = medians.iter().map(|m| m + rng.random_range(-15.0..15.0)).collect();

        let s = scn.sensors();
        let c: Vec<Vec<f64>> = s.iter().map(|&a| s.iter().map(|&b| model.covariance(a, b)).collect()).collect();
        let c0: Vec<f64> = s.iter().map(|&a| model.covariance(p0, a)).collect();
        let resid: Vec<f64> = pr.iter().zip(&medians).map(|(p, m)| p - m).collect();
        let kriged = median_power(&scn, p0).unwrap_or(f64::NAN) + dot(&c0, &gauss_solve(c, resid));
        let sm0 = sm0_predict(&scn, p0, &pr).map(|p| p.value).unwrap_or(f64::NAN);
        worst = worst.max((sm0 - kriged).abs());
        if worst.is_nan() {
            break;
        }
    }
    check("kriging_equivalence", worst, 1e-9)
}

fn lse_closed_form() -> Check {
    let scn = table_ii(SIDE);
    let d = scn.sensor_distances();
    let logs: Vec<f64> = d.iter().map(|v| v.log10()).collect();
    let coeffs = lse_error_coeffs(&d).expect("non-degenerate");
    let pl = scn.path_loss();
    let mut worst: f64 = 0.0;
    for r in 0..100 {
        let s = sample_shadow(&scn, Point::new(200.0, 200.0), SeedSpec::new(SEED, 1, r)).expect("sample");
        let pw = received_powers(&scn, &s, Point::new(200.0, 200.0)).expect("powers");
        let (a_fit, slope) = direct_fit(&logs, &pw.pr);
        let z = s.s.iter().sum::<f64>() / s.s.len() as f64;
        worst = worst
            .max((coeffs.delta_a(&s.s) - (pl.a + z - a_fit)).abs())
            .max((coeffs.delta_gamma(&s.s) - (pl.gamma - slope / 10.0)).abs());
    }
    check("lse_closed_form", worst, 1e-9)
}

fn error_decomposition() -> Check {
    let scn = table_ii(SIDE);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let d = scn.sensor_distances();
    let mut worst: f64 = 0.0;
    for r in 0..100 {
        let p0 = interior(&mut rng);
        let w = sm0_weights(scn.correlation(), scn.sensors(), p0).expect("weights");
        let s = sample_shadow(&scn, p0, SeedSpec::new(SEED, 2, r)).expect("sample");
        let two = fitted_two_part_error(&d, scn.emitter_distance(p0), &w, &s).unwrap_or(f64::NAN);
        let expanded = sm1_error_expansion(&scn, p0).map(|f| f.eval(&s)).unwrap_or(f64::NAN);
        worst = worst.max((two - expanded).abs());
    }
    check("error_decomposition", worst, 1e-9)
}

fn sigma0(model: &CorrelationModel, sensors: &[Point], p0: Point, fault: Option<Fault>) -> f64 {
    match fault {
        Some(Fault::Sigma0Sign) => {
            let w = sm0_weights(model, sensors, p0).expect("weights");
            let c0 = model.cross_covariance(p0, sensors);
            (model.variance() + dot(&c0, &w)).sqrt()
        }
        None => sm0_sigma0(model, sensors, p0).unwrap_or(f64::NAN),
    }
}

/// Monte Carlo RMS error against the closed forms, with tolerance
/// `3·analytic/√(2R)`.
fn monte_carlo(fault: Option<Fault>) -> Vec<Check> {
    let opts = EstimatorOptions::default();
    let mut out = Vec::new();
    let points = [Point::new(160.0, 480.0), Point::new(455.0, 95.0)];
    for (k, ratio) in [1.0, 3.0].into_iter().enumerate() {
        let scn = table_ii(SIDE / ratio);
        let p0 = points[k];
        let mc = point_rmse_mc_all(&scn, p0, &Method::ALL, opts, MC_REALIZATIONS, SEED, k as u64)
            .expect("monte carlo");
        let tag = format!("@({},{})/ratio={ratio}", p0.x, p0.y);
        for (m, est) in Method::ALL.iter().zip(&mc) {
            let an = point_rmse_analytic(&scn, p0, *m, opts).unwrap_or(f64::NAN);
            out.push(check(
                format!("analytic_vs_mc/{m}{tag}"),
                (est.rmse - an).abs(),
                3.0 * an / (2.0 * MC_REALIZATIONS as f64).sqrt(),
            ));
        }
        let s0 = sigma0(scn.correlation(), scn.sensors(), p0, fault);
        out.push(check(
            format!("sigma0_vs_mc{tag}"),
            (mc[0].rmse - s0).abs(),
            3.0 * s0 / (2.0 * MC_REALIZATIONS as f64).sqrt(),
        ));
    }
    out
}

fn sibson_lattice() -> Check {
    let sensors = square_sensors(SIDE);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut worst: f64 = 0.0;
    let values = [1.0, 2.0, 3.0, 4.0];
    for _ in 0..5 {
        let p0 = Point::new(rng.random_range(0.1..0.9) * SIDE, rng.random_range(0.1..0.9) * SIDE);
        let lib = nan_predict(&sensors, p0, &values).map(|p| p.weights).unwrap_or_default();
        let oracle = lattice_sibson(&sensors, p0, -4.5 * SIDE, 5.5 * SIDE, 1500);
        for (a, b) in lib.iter().zip(&oracle) {
            worst = worst.max((a - b).abs());
        }
        if lib.len() != oracle.len() {
            worst = f64::INFINITY;
        }
    }
    check("sibson_lattice", worst, 2e-3)
}

pub fn run(fault: Option<Fault>) -> Vec<Check> {
    let mut checks = vec![kriging_equivalence(), lse_closed_form(), error_decomposition()];
    checks.extend(monte_carlo(fault));
    checks.push(sibson_lattice());
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_solve_recovers_solution() {
        let m = vec![vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 0.0], vec![3.0, 0.0, 1.0]];
        let x = gauss_solve(m, vec![5.0, 3.0, 4.0]);
        for (a, b) in x.iter().zip([1.0, 2.0, 1.0]) {
            assert!((a - b).abs() < 1e-12, "{x:?}");
        }
    }

    #[test]
    fn direct_fit_line() {
        let (a, b) = direct_fit(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]);
        assert!((a - 1.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lattice_center_is_uniform() {
        let w = lattice_sibson(&square_sensors(1.0), Point::new(0.5, 0.5), -1.0, 2.0, 600);
        for v in w {
            assert!((v - 0.25).abs() < 1e-3, "{v}");
        }
    }
}
