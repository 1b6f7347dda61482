//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; errors come back as a thrown string.
//! The `*_json` functions hold the logic and are plain Rust so they can be
//! tested natively.

use num_complex::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use cjlab::asymptotics::exact_mean_path;
use cjlab::equilibrium::{line_equilibrium, mu_a_measure};
use cjlab::harness::sample_paths;
use cjlab::ldp::{marginal_rate_h, RatePoint};
use cjlab::EnsembleParams;

#[derive(Serialize)]
struct Curve {
    x: Vec<f64>,
    y: Vec<Option<f64>>,
}

#[derive(Serialize)]
struct RateCurve {
    xi: Vec<f64>,
    h: Vec<Option<f64>>,
    branch: Vec<&'static str>,
}

#[derive(Serialize)]
struct Path {
    t: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
    mean_re: Vec<f64>,
    mean_im: Vec<f64>,
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Density table of the circle measure (`kind = "circle"`, parameter `a`) or
/// the line measure (`kind = "line"`, parameter `r`).
pub fn equilibrium_density_json(kind: &str, param: f64, points: usize) -> Result<String, String> {
    let mu = match kind {
        "circle" => mu_a_measure(param),
        "line" => line_equilibrium(param),
        other => return Err(format!("unknown kind {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    let (x, y) = mu.density_table(points.clamp(2, 20_000)).into_iter().map(|(x, d)| (x, Some(d))).unzip();
    to_json(&Curve { x, y })
}

/// `h_d(T, ξ, η)` along `ξ ∈ [xi_min, xi_max]` at fixed `η`.
pub fn marginal_rate_curve_json(
    horizon: f64,
    eta: f64,
    d_re: f64,
    d_im: f64,
    xi_min: f64,
    xi_max: f64,
    points: usize,
) -> Result<String, String> {
    if !(xi_max > xi_min) {
        return Err("need xi_max > xi_min".into());
    }
    let points = points.clamp(2, 20_000);
    let d = Complex64::new(d_re, d_im);
    let mut out = RateCurve {
        xi: Vec::with_capacity(points),
        h: Vec::with_capacity(points),
        branch: Vec::with_capacity(points),
    };
    for k in 0..points {
        let xi = xi_min + (xi_max - xi_min) * k as f64 / (points - 1) as f64;
        let p = RatePoint::new(horizon, xi, eta, d).map_err(|e| e.to_string())?;
        let r = marginal_rate_h(p).map_err(|e| e.to_string())?;
        out.xi.push(xi);
        out.h.push(r.value.finite());
        out.branch.push(r.branch.as_str());
    }
    to_json(&out)
}

/// One path `k/n ↦ log Φ_{k,n}(1)` with its exact mean.
pub fn sample_path_json(n: usize, beta: f64, delta_re: f64, delta_im: f64, seed: u64) -> Result<String, String> {
    if n > 200_000 {
        return Err("n is capped at 200000 in the browser".into());
    }
    let p = EnsembleParams::fixed(n, beta, Complex64::new(delta_re, delta_im)).map_err(|e| e.to_string())?;
    let path = sample_paths(&p, 1, seed, 1).map_err(|e| e.to_string())?.remove(0);
    let mean = exact_mean_path(&p).map_err(|e| e.to_string())?;
    to_json(&Path {
        t: (0..=n).map(|k| k as f64 / n as f64).collect(),
        re: path.values.iter().map(|z| z.re).collect(),
        im: path.values.iter().map(|z| z.im).collect(),
        mean_re: mean.iter().map(|z| z.re).collect(),
        mean_im: mean.iter().map(|z| z.im).collect(),
    })
}

#[wasm_bindgen]
pub fn equilibrium_density(kind: &str, param: f64, points: usize) -> Result<String, JsValue> {
    equilibrium_density_json(kind, param, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn marginal_rate_curve(
    horizon: f64,
    eta: f64,
    d_re: f64,
    d_im: f64,
    xi_min: f64,
    xi_max: f64,
    points: usize,
) -> Result<String, JsValue> {
    marginal_rate_curve_json(horizon, eta, d_re, d_im, xi_min, xi_max, points).map_err(|e| JsValue::from_str(&e))
}

/// `seed` arrives from JavaScript as a double; integers up to 2^53 are exact.
#[wasm_bindgen]
pub fn sample_path(n: usize, beta: f64, delta_re: f64, delta_im: f64, seed: f64) -> Result<String, JsValue> {
    if !(seed >= 0.0 && seed <= 9_007_199_254_740_992.0 && seed.fract() == 0.0) {
        return Err(JsValue::from_str("seed must be a non-negative integer below 2^53"));
    }
    sample_path_json(n, beta, delta_re, delta_im, seed as u64).map_err(|e| JsValue::from_str(&e))
}
