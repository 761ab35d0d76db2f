//! Browser bindings for the interactive demo in `www/`.
//!
//! Every export takes the experiment config as a JSON string (the same
//! schema as the CLI) and returns JSON. The `*_json` functions hold the
//! logic and run natively, so they are tested without a browser.

use radiomap::analysis::sm0_sigma0;
use radiomap::estimators::Interpolator;
use radiomap::harness::{grid_rmse, sweep, ExperimentConfig, Mode};
use radiomap::{Method, Point};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn parse(config: &str) -> Result<ExperimentConfig, String> {
    let mut cfg: ExperimentConfig = if config.trim().is_empty() {
        ExperimentConfig::default()
    } else {
        serde_json::from_str(config).map_err(|e| format!("config: {e}"))?
    };
    // The page only runs the closed-form engine.
    cfg.mode = Mode::Analytic;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Surface {
    method: Method,
    ratio: f64,
    side: f64,
    resolution: usize,
    /// Row-major, x fastest, y upwards.
    values: Vec<f64>,
    spatial_rmse: f64,
    min: f64,
    max: f64,
}

pub fn rmse_surface_json(config: &str, ratio: f64, method: &str) -> Result<String, String> {
    let cfg = parse(config)?;
    let method: Method = method.parse().map_err(|e| format!("{e}"))?;
    let s = grid_rmse(&cfg, ratio, method, None).map_err(|e| e.to_string())?;
    let min = s.values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = s.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    to_json(&Surface {
        method,
        ratio,
        side: s.side,
        resolution: s.resolution,
        spatial_rmse: s.spatial_rmse,
        values: s.values,
        min,
        max,
    })
}

#[derive(Serialize)]
struct Curve {
    method: Method,
    ratios: Vec<f64>,
    spatial_rmse: Vec<f64>,
}

pub fn sweep_curves_json(config: &str) -> Result<String, String> {
    let cfg = parse(config)?;
    let rows = sweep(&cfg, None).map_err(|e| e.to_string())?;
    let curves: Vec<Curve> = cfg
        .methods
        .iter()
        .map(|&m| {
            let (ratios, spatial_rmse) = rows.iter().filter(|r| r.method == m).map(|r| (r.ratio, r.spatial_rmse)).unzip();
            Curve {
                method: m,
                ratios,
                spatial_rmse,
            }
        })
        .collect();
    to_json(&curves)
}

#[derive(Serialize)]
struct MethodWeights {
    method: Method,
    /// Sensor weights, or `null` when the method is undefined at the point.
    weights: Option<Vec<f64>>,
    error: Option<String>,
}

#[derive(Serialize)]
struct PointWeights {
    x: f64,
    y: f64,
    sensors: Vec<Point>,
    sigma0: Option<f64>,
    methods: Vec<MethodWeights>,
}

pub fn weights_at_json(config: &str, ratio: f64, x: f64, y: f64) -> Result<String, String> {
    let cfg = parse(config)?;
    let scn = cfg.scenario(ratio).map_err(|e| e.to_string())?;
    let p0 = Point::new(x, y);
    let methods = cfg
        .methods
        .iter()
        .map(|&m| match Interpolator::new(m, &scn, p0, cfg.estimator_options()) {
            Ok(it) => MethodWeights {
                method: m,
                weights: Some(it.weights().to_vec()),
                error: None,
            },
            Err(e) => MethodWeights {
                method: m,
                weights: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    to_json(&PointWeights {
        x,
        y,
        sensors: scn.sensors().to_vec(),
        sigma0: sm0_sigma0(scn.correlation(), scn.sensors(), p0).ok(),
        methods,
    })
}

/// Per-point RMS error surface of one method at `D/Xc = ratio`.
#[wasm_bindgen]
pub fn rmse_surface(config: &str, ratio: f64, method: &str) -> Result<String, JsValue> {
    rmse_surface_json(config, ratio, method).map_err(|e| JsValue::from_str(&e))
}

/// ⟨RMSE⟩ against `D/Xc` for every configured method.
#[wasm_bindgen]
pub fn sweep_curves(config: &str) -> Result<String, JsValue> {
    sweep_curves_json(config).map_err(|e| JsValue::from_str(&e))
}

/// Sensor weights of every configured method at `(x, y)`, plus `σ0`.
#[wasm_bindgen]
pub fn weights_at(config: &str, ratio: f64, x: f64, y: f64) -> Result<String, JsValue> {
    weights_at_json(config, ratio, x, y).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn surface_shape() {
        let v: Value = serde_json::from_str(&rmse_surface_json(r#"{"resolution": 8}"#, 1.0, "sm2").unwrap()).unwrap();
        assert_eq!(v["values"].as_array().unwrap().len(), 64);
        assert_eq!(v["method"], "sm2");
        assert!(v["min"].as_f64().unwrap() <= v["spatial_rmse"].as_f64().unwrap());
        assert!(rmse_surface_json("{}", 1.0, "nope").unwrap_err().contains("sm0"));
    }

    #[test]
    fn curves_follow_config() {
        let cfg = r#"{"resolution": 4, "ratios": [0.1, 1, 10], "methods": ["sm0", "nn"], "mode": "monte_carlo"}"#;
        let v: Value = serde_json::from_str(&sweep_curves_json(cfg).unwrap()).unwrap();
        let curves = v.as_array().unwrap();
        assert_eq!(curves.len(), 2);
        assert_eq!(curves[0]["spatial_rmse"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn weights_sum_to_one() {
        let v: Value = serde_json::from_str(&weights_at_json("", 1.0, 200.0, 100.0).unwrap()).unwrap();
        for m in v["methods"].as_array().unwrap() {
            let w: f64 = m["weights"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
            assert!((w - 1.0).abs() < 1e-9 || m["method"] == "sm0" || m["method"] == "sm1", "{m}");
        }
        assert!(v["sigma0"].as_f64().unwrap() < 5.0);

        let outside: Value = serde_json::from_str(&weights_at_json("", 1.0, -10.0, 100.0).unwrap()).unwrap();
        let nan = outside["methods"].as_array().unwrap().iter().find(|m| m["method"] == "nan").unwrap();
        assert!(nan["weights"].is_null() && nan["error"].is_string());
    }

    #[test]
    fn bad_config_is_reported() {
        assert!(sweep_curves_json(r#"{"ratios": []}"#).unwrap_err().contains("ratios"));
        assert!(sweep_curves_json("{").is_err());
    }
}
