//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export returns a JSON string; errors surface as JavaScript exceptions.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use tractability::complexity::{count_info_complexity_all, ComplexityQuery};
use tractability::reports::density_curve;
use tractability::roots::{analytic_eigenvalues, analytic_eigenvalues_above};
use tractability::spectra::KernelSpec;

/// Largest univariate list a single browser request may build.
const MAX_UNIVARIATE: usize = 200_000;

fn family(name: &str, alpha: f64, beta: f64) -> Result<KernelSpec, String> {
    match name {
        "sobolev-min" => Ok(KernelSpec::SobolevMin),
        "sobolev-cosh" => Ok(KernelSpec::SobolevCosh),
        "korobov" => KernelSpec::korobov(alpha, beta).map_err(|e| e.to_string()),
        other => Err(format!("unknown family {other:?}")),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct DensityView {
    x: Vec<f64>,
    g: Vec<f64>,
    l2_norm_sq: f64,
    end_ratio: f64,
}

pub fn density(samples: usize) -> Result<String, String> {
    let curve = density_curve(&KernelSpec::SobolevMin, samples).map_err(|e| e.to_string())?;
    to_json(&DensityView {
        x: curve.samples.iter().map(|p| p.0).collect(),
        g: curve.samples.iter().map(|p| p.1).collect(),
        l2_norm_sq: curve.l2_norm_sq,
        end_ratio: curve.end_ratio,
    })
}

pub fn spectrum(name: &str, alpha: f64, beta: f64, count: usize) -> Result<String, String> {
    let spec = family(name, alpha, beta)?;
    let eigs = analytic_eigenvalues(&spec, count).map_err(|e| e.to_string())?;
    to_json(&eigs.values())
}

#[derive(Serialize)]
struct ComplexityPoint {
    d: usize,
    count: u64,
    saturated: bool,
}

/// `n(eps, S_d, all)` for `d = 1..=d_max`.
pub fn complexity_curve(name: &str, alpha: f64, beta: f64, eps: f64, d_max: usize) -> Result<String, String> {
    let spec = family(name, alpha, beta)?;
    let lambda1 = analytic_eigenvalues(&spec, 1).map_err(|e| e.to_string())?.lambda1();
    let eigs =
        analytic_eigenvalues_above(&spec, eps * eps * lambda1, MAX_UNIVARIATE).map_err(|e| e.to_string())?;
    let points = (1..=d_max)
        .map(|d| {
            let query = ComplexityQuery::all(eps, d).map_err(|e| e.to_string())?;
            let r = count_info_complexity_all(&eigs, &query).map_err(|e| e.to_string())?;
            Ok(ComplexityPoint { d, count: r.count, saturated: r.saturated })
        })
        .collect::<Result<Vec<_>, String>>()?;
    to_json(&points)
}

#[wasm_bindgen(js_name = densityCurve)]
pub fn density_js(samples: usize) -> Result<String, JsValue> {
    density(samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = familySpectrum)]
pub fn spectrum_js(name: &str, alpha: f64, beta: f64, count: usize) -> Result<String, JsValue> {
    spectrum(name, alpha, beta, count).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = complexityCurve)]
pub fn complexity_js(name: &str, alpha: f64, beta: f64, eps: f64, d_max: usize) -> Result<String, JsValue> {
    complexity_curve(name, alpha, beta, eps, d_max).map_err(|e| JsValue::from_str(&e))
}
