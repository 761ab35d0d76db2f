//! Shadow-fading covariance kernels.
//!
//! Values returned here are covariances in dB², i.e. they carry the `σ²`
//! prefactor.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{distance, Point};
use crate::linalg::Matrix;

/// Default major-to-minor axis ratio of the elliptical kernel.
pub const DEFAULT_AXIS_RATIO: f64 = 3.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Kernel {
    /// `σ²·exp(−d/Xc)`
    Exponential,
    /// `σ²·exp(−(d/Xc)²)`
    Gaussian,
    /// Exponential in a geometrically anisotropic distance. The major axis
    /// points along `rotation` (radians from +x); distances along it are
    /// shrunk by `axis_ratio`.
    Elliptical {
        #[serde(default = "default_axis_ratio")]
        axis_ratio: f64,
        #[serde(default)]
        rotation: f64,
    },
}

fn default_axis_ratio() -> f64 {
    DEFAULT_AXIS_RATIO
}

impl Kernel {
    pub fn elliptical(axis_ratio: f64, rotation: f64) -> Self {
        Kernel::Elliptical {
            axis_ratio,
            rotation,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kernel::Exponential => "exponential",
            Kernel::Gaussian => "gaussian",
            Kernel::Elliptical { .. } => "elliptical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationModel {
    kernel: Kernel,
    sigma: f64,
    xc: f64,
}

impl CorrelationModel {
    pub fn new(kernel: Kernel, sigma: f64, xc: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(invalid("sigma", format!("must be > 0, got {sigma}")));
        }
        if !(xc > 0.0) {
            return Err(invalid("xc", format!("must be > 0, got {xc}")));
        }
        if let Kernel::Elliptical {
            axis_ratio,
            rotation,
        } = kernel
        {
            if !(axis_ratio >= 1.0) || !axis_ratio.is_finite() {
                return Err(invalid("axis_ratio", format!("must be >= 1, got {axis_ratio}")));
            }
            if !rotation.is_finite() {
                return Err(invalid("rotation", "must be finite"));
            }
        }
        Ok(Self { kernel, sigma, xc })
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn xc(&self) -> f64 {
        self.xc
    }

    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma
    }

    pub fn with_xc(&self, xc: f64) -> Result<Self> {
        Self::new(self.kernel, self.sigma, xc)
    }

    pub fn effective_distance(&self, p: Point, q: Point) -> f64 {
        match self.kernel {
            Kernel::Exponential | Kernel::Gaussian => distance(p, q),
            Kernel::Elliptical {
                axis_ratio,
                rotation,
            } => {
                let (dx, dy) = (q.x - p.x, q.y - p.y);
                let (sin, cos) = rotation.sin_cos();
                let major = dx * cos + dy * sin;
                let minor = -dx * sin + dy * cos;
                (major / axis_ratio).hypot(minor)
            }
        }
    }

    pub fn covariance(&self, p: Point, q: Point) -> f64 {
        let h = self.effective_distance(p, q) / self.xc;
        let rho = match self.kernel {
            Kernel::Gaussian => (-h * h).exp(),
            Kernel::Exponential | Kernel::Elliptical { .. } => (-h).exp(),
        };
        self.variance() * rho
    }

    /// `k×k` covariance over `points`, filled symmetrically.
    pub fn covariance_matrix(&self, points: &[Point]) -> Matrix {
        let k = points.len();
        let mut m = Matrix::zeros(k, k);
        for i in 0..k {
            m[(i, i)] = self.variance();
            for j in 0..i {
                let c = self.covariance(points[i], points[j]);
                m[(i, j)] = c;
                m[(j, i)] = c;
            }
        }
        m
    }

    /// Covariance of the value at `p0` with the values at `points`.
    pub fn cross_covariance(&self, p0: Point, points: &[Point]) -> Vec<f64> {
        points.iter().map(|&p| self.covariance(p0, p)).collect()
    }

    /// Covariance over `[p0, points...]`.
    pub fn joint_covariance(&self, p0: Point, points: &[Point]) -> Matrix {
        let mut all = Vec::with_capacity(points.len() + 1);
        all.push(p0);
        all.extend_from_slice(points);
        self.covariance_matrix(&all)
    }
}
