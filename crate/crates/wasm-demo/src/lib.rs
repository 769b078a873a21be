//! Browser bindings for the demo page in `www/`.
//!
//! The plain functions are ordinary Rust and tested natively; the
//! `#[wasm_bindgen]` wrappers only convert errors for JavaScript.

use aesthia_core::imaging::{coarse_grain, GrayImage};
use aesthia_core::measures::{fractal_aesthetic, measure_all, MeasureConfig};
use aesthia_core::ranking::{glicko_update, MatchOutcome, Rating};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn config(cfg_json: &str) -> Result<MeasureConfig, String> {
    if cfg_json.trim().is_empty() {
        return Ok(MeasureConfig::default());
    }
    serde_json::from_str(cfg_json).map_err(|e| format!("bad config: {e}"))
}

/// All measures of an RGBA canvas buffer as JSON:
/// `{"values": {...}, "failures": {"S_k": "reason", ...}}`.
pub fn measure_rgba(rgba: &[u8], width: usize, height: usize, cfg_json: &str) -> Result<String, String> {
    let cfg = config(cfg_json)?;
    let img = GrayImage::from_rgba8(width, height, rgba).map_err(|e| e.to_string())?;
    let report = measure_all(&img, &cfg);
    let failures: serde_json::Map<String, serde_json::Value> =
        report.failures.iter().map(|f| (f.measure.name().to_string(), json!(f.error.to_string()))).collect();
    Ok(json!({ "values": report.values, "failures": failures }).to_string())
}

/// Coarse-grained ternary raster rendered back to opaque RGBA.
pub fn coarse_grain_rgba(rgba: &[u8], width: usize, height: usize, r_cg: usize, delta: f64) -> Result<Vec<u8>, String> {
    let img = GrayImage::from_rgba8(width, height, rgba).map_err(|e| e.to_string())?;
    let tern = coarse_grain(&img, r_cg, delta).map_err(|e| e.to_string())?;
    Ok(tern.data().iter().flat_map(|t| { let v = t.byte(); [v, v, v, 255] }).collect())
}

/// `samples` evenly spaced values of the fractal aesthetic over D in [0, 2].
pub fn aesthetic_curve(peak: f64, sigma: f64, samples: usize) -> Vec<f64> {
    let cfg = MeasureConfig { peak, sigma, ..MeasureConfig::default() };
    let last = samples.saturating_sub(1).max(1) as f64;
    (0..samples).map(|k| fractal_aesthetic(2.0 * k as f64 / last, &cfg)).collect()
}

/// One Glicko game; `outcome` is `"win"`, `"tie"` or `"loss"` from A's side.
/// Returns `[rating_a, rd_a, rating_b, rd_b]`.
pub fn glicko_pair(a: (f64, f64), b: (f64, f64), outcome: &str) -> Result<[f64; 4], String> {
    let outcome = match outcome {
        "win" => MatchOutcome::Win,
        "tie" => MatchOutcome::Tie,
        "loss" => MatchOutcome::Loss,
        other => return Err(format!("unknown outcome '{other}'")),
    };
    let rate = |(rating, rd)| Rating { rating, rd, matches: 0 };
    let (na, nb) = glicko_update(rate(a), rate(b), outcome).map_err(|e| e.to_string())?;
    Ok([na.rating, na.rd, nb.rating, nb.rd])
}

#[wasm_bindgen(js_name = measure)]
pub fn measure_js(rgba: &[u8], width: usize, height: usize, cfg_json: &str) -> Result<String, JsError> {
    measure_rgba(rgba, width, height, cfg_json).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = coarseGrain)]
pub fn coarse_grain_js(rgba: &[u8], width: usize, height: usize, r_cg: usize, delta: f64) -> Result<Vec<u8>, JsError> {
    coarse_grain_rgba(rgba, width, height, r_cg, delta).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = aestheticCurve)]
pub fn aesthetic_curve_js(peak: f64, sigma: f64, samples: usize) -> Vec<f64> {
    aesthetic_curve(peak, sigma, samples)
}

#[wasm_bindgen(js_name = glickoStep)]
pub fn glicko_step_js(a_rating: f64, a_rd: f64, b_rating: f64, b_rd: f64, outcome: &str) -> Result<Vec<f64>, JsError> {
    glicko_pair((a_rating, a_rd), (b_rating, b_rd), outcome)
        .map(|r| r.to_vec())
        .map_err(|e| JsError::new(&e))
}
