//! Ground-truth synthesis: median powers and jointly Gaussian shadow fading.
//!
//! Shadow values at a query point `p0` and at the sensors are drawn jointly
//! as `L·z`, where `L` is the Cholesky factor of the covariance over
//! `[p0, sensors...]` and `z` is a vector of independent standard normals.
//!
//! Normals come from a counter-based stream so that a realization depends
//! only on `(master_seed, point_index, realization_index)`:
//!
//! * a ChaCha8 generator keyed by `master_seed`, with `point_index` as the
//!   stream id, is positioned at word `realization_index · stride`;
//! * each realization consumes a fixed number of 64-bit uniforms, two per
//!   pair of normals, so the stride is known up front;
//! * uniforms are mapped to normals with the Box–Muller transform
//!   `r = √(−2 ln u₁)`, `(r cos 2πu₂, r sin 2πu₂)` with `u₁ ∈ (0, 1]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Point, Scenario};
use crate::linalg::{cholesky, Cholesky};

/// `A + 10·γ·log10(d)` at `p`.
pub fn median_power(scn: &Scenario, p: Point) -> Result<f64> {
    let d = scn.emitter_distance(p);
    if !(d > 0.0) {
        return Err(Error::ZeroDistance { x: p.x, y: p.y });
    }
    Ok(scn.path_loss().median_at_distance(d))
}

/// Median powers at every sensor, in sensor order.
pub fn sensor_medians(scn: &Scenario) -> Vec<f64> {
    let pl = scn.path_loss();
    scn.sensor_distances()
        .into_iter()
        .map(|d| pl.median_at_distance(d))
        .collect()
}

/// Identifies one realization of the shadow field at one query point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub point_index: u64,
    pub realization_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, point_index: u64, realization_index: u64) -> Self {
        Self {
            master_seed,
            point_index,
            realization_index,
        }
    }
}

/// Standard normals for one query point, positioned per realization.
#[derive(Debug, Clone)]
pub struct NormalStream {
    rng: ChaCha8Rng,
    per_realization: usize,
}

impl NormalStream {
    /// A stream yielding `per_realization` normals per realization.
    pub fn new(master_seed: u64, point_index: u64, per_realization: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(point_index);
        Self {
            rng,
            per_realization,
        }
    }

    // Two u64 uniforms per normal pair, two 32-bit words per u64.
    fn words_per_realization(&self) -> u128 {
        (self.per_realization.div_ceil(2) * 4) as u128
    }

    pub fn seek(&mut self, realization_index: u64) {
        self.rng
            .set_word_pos(realization_index as u128 * self.words_per_realization());
    }

    /// Fills `out` with the next realization's normals.
    pub fn next_into(&mut self, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.per_realization);
        let mut chunks = out.chunks_mut(2);
        for chunk in &mut chunks {
            let (a, b) = box_muller(&mut self.rng);
            chunk[0] = a;
            if let Some(slot) = chunk.get_mut(1) {
                *slot = b;
            }
        }
    }
}

fn box_muller(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    (r * c, r * s)
}

/// One joint draw of shadow fading: `s0` at the query point, `s` at the
/// sensors.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowSample {
    pub s0: f64,
    pub s: Vec<f64>,
}

impl ShadowSample {
    pub fn zeros(n: usize) -> Self {
        Self {
            s0: 0.0,
            s: vec![0.0; n],
        }
    }

    /// `[s0, s1, .., sn]`.
    pub fn joint(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.s.len() + 1);
        v.push(self.s0);
        v.extend_from_slice(&self.s);
        v
    }

    pub fn from_joint(joint: &[f64]) -> Self {
        Self {
            s0: joint[0],
            s: joint[1..].to_vec(),
        }
    }
}

/// Joint sampler for a fixed query point; the factor is computed once and
/// shared by every realization.
#[derive(Debug, Clone)]
pub struct ShadowSampler {
    factor: Cholesky,
}

impl ShadowSampler {
    pub fn new(scn: &Scenario, p0: Point) -> Result<Self> {
        let cov = scn.correlation().joint_covariance(p0, scn.sensors());
        Ok(Self {
            factor: cholesky(&cov)?,
        })
    }

    /// Length of the joint vector, `n + 1`.
    pub fn dim(&self) -> usize {
        self.factor.dim()
    }

    pub fn stream(&self, master_seed: u64, point_index: u64) -> NormalStream {
        NormalStream::new(master_seed, point_index, self.dim())
    }

    /// Colours `z` into the joint shadow vector `out = L·z`.
    pub fn colour(&self, z: &[f64], out: &mut [f64]) {
        self.factor.lower_mul(z, out);
    }

    pub fn sample(&self, seed: SeedSpec) -> ShadowSample {
        let mut stream = self.stream(seed.master_seed, seed.point_index);
        stream.seek(seed.realization_index);
        let mut z = vec![0.0; self.dim()];
        stream.next_into(&mut z);
        let mut joint = vec![0.0; self.dim()];
        self.colour(&z, &mut joint);
        ShadowSample::from_joint(&joint)
    }
}

pub fn sample_shadow(scn: &Scenario, p0: Point, seed: SeedSpec) -> Result<ShadowSample> {
    Ok(ShadowSampler::new(scn, p0)?.sample(seed))
}

/// True received powers at `p0` and at the sensors for one shadow draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedPowers {
    pub pr0: f64,
    pub pr: Vec<f64>,
}

pub fn received_powers(scn: &Scenario, sample: &ShadowSample, p0: Point) -> Result<ReceivedPowers> {
    if sample.s.len() != scn.n() {
        return Err(Error::DimensionMismatch {
            expected: scn.n(),
            found: sample.s.len(),
        });
    }
    let pr = sensor_medians(scn)
        .into_iter()
        .zip(&sample.s)
        .map(|(m, s)| m + s)
        .collect();
    Ok(ReceivedPowers {
        pr0: median_power(scn, p0)? + sample.s0,
        pr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::{CorrelationModel, Kernel};
    use crate::geometry::{build_square_scenario, PathLoss};

    fn scenario(sigma: f64) -> Scenario {
        build_square_scenario(
            640.0,
            Point::new(-100.0, 0.0),
            PathLoss::REFERENCE,
            CorrelationModel::new(Kernel::Exponential, sigma, 640.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn median_power_examples() {
        let scn = scenario(5.0);
        let e = scn.emitter();
        let at = |d: f64| median_power(&scn, Point::new(e.x + d, e.y)).unwrap();
        assert!((at(1.0) - 15.3).abs() < 1e-12);
        assert!((at(100.0) - 90.5).abs() < 1e-12);

        let pl = PathLoss { a: 0.0, gamma: 2.0 };
        assert!((pl.median_at_distance(10.0) - 20.0).abs() < 1e-12);
        assert!(matches!(median_power(&scn, e), Err(Error::ZeroDistance { .. })));
    }

    #[test]
    fn received_powers_examples() {
        let scn = scenario(5.0);
        let p0 = Point::new(160.0, 160.0);
        let zero = received_powers(&scn, &ShadowSample::zeros(4), p0).unwrap();
        assert_eq!(zero.pr, sensor_medians(&scn));
        assert!((zero.pr[0] - 90.5).abs() < 1e-12);
        assert_eq!(zero.pr0, median_power(&scn, p0).unwrap());

        let mut s = ShadowSample::zeros(4);
        s.s[2] = 5.0;
        let bumped = received_powers(&scn, &s, p0).unwrap();
        assert_eq!(bumped.pr[2], zero.pr[2] + 5.0);
        assert_eq!(bumped.pr[1], zero.pr[1]);
    }

    #[test]
    fn vanishing_sigma_gives_vanishing_shadow() {
        let scn = scenario(1e-9);
        let s = sample_shadow(&scn, Point::new(100.0, 300.0), SeedSpec::new(7, 3, 11)).unwrap();
        assert!(s.joint().iter().all(|v| v.abs() < 1e-7));
    }

    #[test]
    fn sampling_is_deterministic() {
        let scn = scenario(5.0);
        let p0 = Point::new(100.0, 300.0);
        let seed = SeedSpec::new(42, 9, 1234);
        assert_eq!(sample_shadow(&scn, p0, seed).unwrap(), sample_shadow(&scn, p0, seed).unwrap());
        let other = SeedSpec::new(42, 9, 1235);
        assert_ne!(sample_shadow(&scn, p0, seed).unwrap(), sample_shadow(&scn, p0, other).unwrap());
    }

    #[test]
    fn seeking_matches_sequential_reads() {
        for dim in [4usize, 5, 6] {
            let mut seq = NormalStream::new(99, 17, dim);
            let mut buf = vec![0.0; dim];
            let mut sequential = Vec::new();
            for _ in 0..50 {
                seq.next_into(&mut buf);
                sequential.push(buf.clone());
            }
            // Seek in scrambled order.
            for r in (0..50u64).rev().step_by(3).chain([0, 25, 49]) {
                let mut s = NormalStream::new(99, 17, dim);
                s.seek(r);
                s.next_into(&mut buf);
                assert_eq!(buf, sequential[r as usize], "dim {dim} r {r}");
            }
        }
    }

    #[test]
    fn standard_normal_moments() {
        let mut stream = NormalStream::new(2024, 0, 5);
        let mut buf = [0.0; 5];
        let (mut sum, mut sum_sq, mut count) = (0.0, 0.0, 0usize);
        for _ in 0..200_000 {
            stream.next_into(&mut buf);
            for &z in &buf {
                sum += z;
                sum_sq += z * z;
                count += 1;
            }
        }
        let mean = sum / count as f64;
        let var = sum_sq / count as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn sample_covariance_matches_model() {
        let scn = scenario(5.0);
        let p0 = Point::new(160.0, 480.0);
        let sampler = ShadowSampler::new(&scn, p0).unwrap();
        let want = scn.correlation().joint_covariance(p0, scn.sensors());
        let k = sampler.dim();
        let mut stream = sampler.stream(5, 0);
        let (mut z, mut x) = (vec![0.0; k], vec![0.0; k]);
        let mut acc = vec![0.0; k * k];
        let reps = 100_000;
        for _ in 0..reps {
            stream.next_into(&mut z);
            sampler.colour(&z, &mut x);
            for i in 0..k {
                for j in 0..k {
                    acc[i * k + j] += x[i] * x[j];
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                let got = acc[i * k + j] / reps as f64;
                let w = want[(i, j)];
                assert!((got - w).abs() <= 0.05 * w, "({i},{j}): {got} vs {w}");
            }
        }
    }
}
