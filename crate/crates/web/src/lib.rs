//! wasm-bindgen exports for the static page in `www/`. Every export takes
//! plain text and returns a JSON string; errors come back as `{"error": …}`.

use hyperdense::colour::{build_h_phi, decide_condition_b, random_pair_colouring};
use hyperdense::combinatorics::binomial;
use hyperdense::ternary::decide_ternary_embeddable;
use hyperdense::{contains_copy, Hypergraph};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest `n` for the colouring demo; keeps the page responsive.
pub const H_PHI_LIMIT: usize = 40;

fn render(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn parse(hyg: &str) -> Result<Hypergraph, String> {
    Hypergraph::parse_hyg(hyg).map_err(|e| e.to_string())
}

pub fn decide_pi1_value(hyg: &str) -> Result<Value, String> {
    let f = parse(hyg)?;
    let w = decide_condition_b(&f).map_err(|e| e.to_string())?;
    Ok(match w {
        Some(w) => json!({ "outcome": "witness", "witness": w.to_json(f.uniformity()) }),
        None => json!({ "outcome": "none" }),
    })
}

pub fn frequent_value(hyg: &str) -> Result<Value, String> {
    let f = parse(hyg)?;
    let w = decide_ternary_embeddable(&f).map_err(|e| e.to_string())?;
    Ok(match w {
        Some(w) => json!({ "outcome": "witness", "witness": w.to_json() }),
        None => json!({ "outcome": "none" }),
    })
}

/// Builds the hypergraph of a seeded random colouring on `[n]` and looks
/// for a copy of the pattern in it.
pub fn h_phi_value(n: usize, seed: u32, hyg: &str) -> Result<Value, String> {
    if n > H_PHI_LIMIT {
        return Err(format!("n = {n} exceeds the demo limit {H_PHI_LIMIT}"));
    }
    let f = parse(hyg)?;
    if f.uniformity() != 3 {
        return Err("the demo colours pairs, so the pattern must be 3-uniform".into());
    }
    let h = build_h_phi(&random_pair_colouring(n, 3, seed.into()).map_err(|e| e.to_string())?);
    let copy = contains_copy(&f, &h).map_err(|e| e.to_string())?;
    Ok(json!({
        "n": n,
        "seed": seed,
        "edges": h.edge_count(),
        "density": h.edge_count() as f64 / binomial(n as u64, 3).max(1) as f64,
        "copy": copy.map(|m| m.images),
    }))
}

#[wasm_bindgen]
pub fn decide_pi1(hyg: &str) -> String {
    render(decide_pi1_value(hyg))
}

#[wasm_bindgen]
pub fn frequent(hyg: &str) -> String {
    render(frequent_value(hyg))
}

#[wasm_bindgen]
pub fn h_phi(n: usize, seed: u32, hyg: &str) -> String {
    render(h_phi_value(n, seed, hyg))
}
