//! Browser bindings: coding-shift entropy, critical exponent and δ of a ball for the bundled examples.

use geolab::lab::emit::to_stable_json;
use geolab::lab::examples::list_examples;
use geolab::lab::experiment::{run_experiment, ExperimentConfig, Quantity};
use wasm_bindgen::prelude::*;

fn run(config: ExperimentConfig) -> Result<String, String> {
    let outcome = run_experiment(&config).map_err(|e| e.to_string())?;
    to_stable_json(&outcome).map_err(|e| e.to_string())
}

fn base(space: &str, quantity: Quantity) -> ExperimentConfig {
    ExperimentConfig { space: space.into(), quantity: Some(quantity), ..ExperimentConfig::default() }
}

/// `[[name, description], …]` as JSON.
#[wasm_bindgen]
pub fn examples() -> String {
    serde_json::to_string(&list_examples()).expect("strings serialize")
}

pub fn shift_entropy_json(space: &str, window: u32, quotient: bool) -> Result<String, String> {
    run(ExperimentConfig {
        window: (window > 0).then_some(window as usize),
        quotient,
        horizon: Some(6),
        ..base(space, Quantity::Sft)
    })
}

pub fn critical_exponent_json(space: &str, horizon: u32) -> Result<String, String> {
    run(ExperimentConfig { horizon: Some(horizon as usize), ..base(space, Quantity::Hcrit) })
}

pub fn delta_json(space: &str, radius: u32) -> Result<String, String> {
    run(ExperimentConfig { anchor_radius: Some(radius as usize), ..base(space, Quantity::Delta) })
}

/// Entropy of the local-geodesic shift (window 0) or of the geodesic shift with window `L`.
#[wasm_bindgen]
pub fn shift_entropy(space: &str, window: u32, quotient: bool) -> Result<String, JsValue> {
    shift_entropy_json(space, window, quotient).map_err(|e| JsValue::from_str(&e))
}

/// Growth rate of orbit counts over horizons `1..=horizon`.
#[wasm_bindgen]
pub fn critical_exponent(space: &str, horizon: u32) -> Result<String, JsValue> {
    critical_exponent_json(space, horizon).map_err(|e| JsValue::from_str(&e))
}

/// Four-point δ over the ball of the given radius.
#[wasm_bindgen]
pub fn delta(space: &str, radius: u32) -> Result<String, JsValue> {
    delta_json(space, radius).map_err(|e| JsValue::from_str(&e))
}
