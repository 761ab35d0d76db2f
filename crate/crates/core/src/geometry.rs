//! Locations, distances and the square sensor layout.

use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationModel;
use crate::error::{invalid, Error, Result};

/// Reference distance of the path-loss model, in meters.
pub const REFERENCE_DISTANCE: f64 = 1.0;

/// Default number of query points per side of the square.
pub const DEFAULT_RESOLUTION: usize = 64;

/// A location in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        distance(self, other)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Euclidean distance between two points.
pub fn distance(p: Point, q: Point) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// Deterministic part of the log-distance model: `A + 10·γ·log10(d / 1 m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLoss {
    /// Intercept at the reference distance, dB.
    pub a: f64,
    /// Path-loss exponent (slope is `10·gamma` dB per decade).
    pub gamma: f64,
}

impl PathLoss {
    /// The model used throughout the evaluation: `15.3 + 37.6·log10(d)`.
    pub const REFERENCE: PathLoss = PathLoss {
        a: 15.3,
        gamma: 3.76,
    };

    pub fn median_at_distance(&self, d: f64) -> f64 {
        self.a + 10.0 * self.gamma * (d / REFERENCE_DISTANCE).log10()
    }
}

/// Named emitter placements used by the experiments.
pub const EMITTER_PRESETS: [(&str, Point); 3] = [
    ("E1", Point::new(-100.0, 0.0)),
    ("E2", Point::new(-100.0, 320.0)),
    ("E3", Point::new(-400.0, -400.0)),
];

pub fn emitter_preset(name: &str) -> Option<Point> {
    EMITTER_PRESETS
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|&(_, p)| p)
}

/// The ground-truth world: one emitter, `n > 2` sensors, the true
/// propagation parameters and the shadow-fading correlation.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    emitter: Point,
    sensors: Vec<Point>,
    path_loss: PathLoss,
    correlation: CorrelationModel,
}

impl Scenario {
    pub fn new(
        emitter: Point,
        sensors: Vec<Point>,
        path_loss: PathLoss,
        correlation: CorrelationModel,
    ) -> Result<Self> {
        if sensors.len() <= 2 {
            return Err(invalid("sensors", format!("need n > 2, got {}", sensors.len())));
        }
        if !emitter.is_finite() || sensors.iter().any(|s| !s.is_finite()) {
            return Err(invalid("sensors", "coordinates must be finite"));
        }
        if !(path_loss.gamma > 0.0) || !path_loss.a.is_finite() {
            return Err(invalid("gamma", format!("must be > 0, got {}", path_loss.gamma)));
        }
        if let Some((i, _)) = sensors
            .iter()
            .enumerate()
            .find(|(_, s)| distance(emitter, **s) <= 0.0)
        {
            return Err(Error::DegenerateScenario(format!(
                "emitter ({}, {}) coincides with sensor {}",
                emitter.x,
                emitter.y,
                i + 1
            )));
        }
        Ok(Self {
            emitter,
            sensors,
            path_loss,
            correlation,
        })
    }

    pub fn emitter(&self) -> Point {
        self.emitter
    }

    pub fn sensors(&self) -> &[Point] {
        &self.sensors
    }

    pub fn n(&self) -> usize {
        self.sensors.len()
    }

    pub fn path_loss(&self) -> PathLoss {
        self.path_loss
    }

    pub fn correlation(&self) -> &CorrelationModel {
        &self.correlation
    }

    pub fn sigma(&self) -> f64 {
        self.correlation.sigma()
    }

    /// Same geometry and propagation, different correlation model.
    pub fn with_correlation(&self, correlation: CorrelationModel) -> Self {
        Self {
            correlation,
            ..self.clone()
        }
    }

    pub fn emitter_distance(&self, p: Point) -> f64 {
        distance(self.emitter, p)
    }

    /// Emitter-to-sensor distances in sensor order.
    pub fn sensor_distances(&self) -> Vec<f64> {
        self.sensors
            .iter()
            .map(|&s| distance(self.emitter, s))
            .collect()
    }

    /// Largest side of the sensors' bounding box; the length scale used by
    /// collocation tolerances.
    pub fn extent(&self) -> f64 {
        extent(&self.sensors)
    }
}

pub(crate) fn extent(points: &[Point]) -> f64 {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    (x1 - x0).max(y1 - y0)
}

/// Four sensors at `(0,0), (0,D), (D,D), (D,0)`, in that order.
pub fn square_sensors(side: f64) -> Vec<Point> {
    vec![
        Point::new(0.0, 0.0),
        Point::new(0.0, side),
        Point::new(side, side),
        Point::new(side, 0.0),
    ]
}

pub fn build_square_scenario(
    side: f64,
    emitter: Point,
    path_loss: PathLoss,
    correlation: CorrelationModel,
) -> Result<Scenario> {
    if !(side > 0.0) || !side.is_finite() {
        return Err(invalid("side", format!("must be > 0, got {side}")));
    }
    Scenario::new(emitter, square_sensors(side), path_loss, correlation)
}

/// Cell-centred lattice of query points inside the square `[0, D]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryGrid {
    side: f64,
    resolution: usize,
    points: Vec<Point>,
}

impl QueryGrid {
    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Points in row-major order, x varying fastest.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn make_grid(side: f64, resolution: usize) -> Result<QueryGrid> {
    if resolution == 0 {
        return Err(invalid("resolution", "must be >= 1"));
    }
    if !(side > 0.0) || !side.is_finite() {
        return Err(invalid("side", format!("must be > 0, got {side}")));
    }
    let step = side / resolution as f64;
    let points = (0..resolution)
        .flat_map(|j| {
            (0..resolution).map(move |i| {
                Point::new((i as f64 + 0.5) * step, (j as f64 + 0.5) * step)
            })
        })
        .collect();
    Ok(QueryGrid {
        side,
        resolution,
        points,
    })
}
