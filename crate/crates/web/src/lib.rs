//! Browser demo: three operations exposed to JavaScript through
//! wasm-bindgen. Each returns a JSON string; the plain functions in this
//! crate are what the bindings call, so they can be tested natively.

use rootloci::hook_solver::solve_hook;
use rootloci::partitions::degree_report;
use rootloci::realrank::generic_real_rank_test;
use rootloci::{Basis, BinaryForm, Error, Partition};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn basis(name: &str) -> Result<Basis, String> {
    match name {
        "monomial" => Ok(Basis::Monomial),
        "scaled" => Ok(Basis::Scaled),
        other => Err(format!("unknown basis `{other}`")),
    }
}

fn form(coeffs: &str, basis_name: &str) -> Result<BinaryForm, String> {
    BinaryForm::parse(coeffs, basis(basis_name)?).map_err(|e| e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Degree report of a partition such as `3,2`.
pub fn degrees_json(partition: &str) -> Result<String, String> {
    let lambda: Partition = partition.parse().map_err(|e: Error| e.to_string())?;
    to_json(&degree_report(&lambda))
}

/// All real critical points for the hook with an `a`-fold root, sorted by
/// distance to the locus.
pub fn solve_hook_json(coeffs: &str, basis_name: &str, a: usize) -> Result<String, String> {
    let h = form(coeffs, basis_name)?;
    let points = solve_hook(&h, a).map_err(|e| e.to_string())?;
    to_json(&json!({ "norm_sq": h.norm_sq(), "critical_points": points }))
}

/// `{"verdict": ..., "report": ...}`; a rank below the generic one is a
/// verdict (`SUBGENERIC_RANK`), not an error.
pub fn real_rank_json(coeffs: &str, basis_name: &str) -> Result<String, String> {
    let h = form(coeffs, basis_name)?;
    let v = match generic_real_rank_test(&h) {
        Ok(r) => json!({ "verdict": r.verdict, "report": r }),
        Err(Error::SubgenericRank { rank, generic }) => {
            json!({ "verdict": "SUBGENERIC_RANK", "catalecticant_rank": rank, "generic_rank": generic })
        }
        Err(e) => return Err(e.to_string()),
    };
    to_json(&v)
}

#[wasm_bindgen]
pub fn degrees(partition: &str) -> Result<String, JsValue> {
    degrees_json(partition).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn hook_solve(coeffs: &str, basis: &str, a: usize) -> Result<String, JsValue> {
    solve_hook_json(coeffs, basis, a).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn real_rank(coeffs: &str, basis: &str) -> Result<String, JsValue> {
    real_rank_json(coeffs, basis).map_err(|e| JsValue::from_str(&e))
}
