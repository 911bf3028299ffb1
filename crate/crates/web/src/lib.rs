//! Browser bindings. Each export takes literal expressions and returns a
//! JSON string; failures come back as `{"error", "detail"}`.
//!
//! Build with `wasm-pack build crates/web --target web --out-dir www/pkg`
//! and serve `crates/web/www`.

use serde_json::{json, Value};
use toepkern::boundary::outer_from_modulus;
use toepkern::expr;
use toepkern::json::{kmin_to_json, verdict_to_json};
use toepkern::maximal::maximality_status;
use toepkern::minimal::kmin_vector;
use toepkern::toeplitz::{build_truncated, kernel_basis, DEFAULT_KERNEL_TOL};
use toepkern::{BoundaryGrid, Error, MatrixSymbol, RationalFn, Result};
use wasm_bindgen::prelude::wasm_bindgen;

/// Grid used by the demo; small enough to stay interactive.
pub const DEMO_GRID: usize = 1024;
const MAX_TRUNC: usize = 128;

fn check_trunc(k: usize) -> Result<usize> {
    if k > MAX_TRUNC {
        return Err(Error::TruncationTooSmall(format!("the demo caps the truncation at {MAX_TRUNC}")));
    }
    Ok(k)
}

fn finish(r: Result<Value>) -> String {
    let v = r.unwrap_or_else(|e| json!({ "error": e.code(), "detail": e.to_string() }));
    serde_json::to_string(&v).expect("values serialize")
}

fn rational_vector(s: &str) -> Result<Vec<RationalFn>> {
    expr::parse_vector(s)?
        .into_iter()
        .map(|e| e.as_rational().cloned().ok_or_else(|| Error::NeedsRational("entries must be rational".into())))
        .collect()
}

/// Minimal kernel of `vector` with its truncated singular-value spectrum.
pub fn minimal_kernel_value(vector: &str, trunc: usize) -> Result<Value> {
    let phis = rational_vector(vector)?;
    let pivot = phis.iter().rposition(|f| !f.is_zero()).ok_or(Error::ZeroInput)?;
    let r = kmin_vector(&phis, pivot, DEMO_GRID)?;
    let mut v = kmin_to_json(&r);
    // Grid entries are large and unused by the page.
    v["symbol"] = Value::Null;
    if let Some(g) = &r.symbol {
        let b = kernel_basis(&build_truncated(g, check_trunc(trunc)?)?, DEFAULT_KERNEL_TOL)?;
        v["dim"] = json!(b.dim());
        v["singular_values"] = json!(b.singular_values());
    }
    Ok(v)
}

/// Outer function with modulus `|f|`: target and reconstructed modulus
/// on the demo grid.
pub fn outer_modulus_value(function: &str) -> Result<Value> {
    let f = expr::parse_function(function)?;
    let m = BoundaryGrid::sample_rational(&f, DEMO_GRID)?.abs();
    let u = outer_from_modulus(&m)?;
    Ok(json!({
        "target": m.samples().iter().map(|s| s.re).collect::<Vec<_>>(),
        "modulus": u.boundary().samples().iter().map(|s| s.norm()).collect::<Vec<_>>(),
        "modulus_error": u.modulus_error(),
        "winding_number": u.winding_number(),
        "value_at_zero": [u.value_at_zero().re, u.value_at_zero().im],
        "warning": u.has_warning(),
    }))
}

/// Maximality verdict for a matrix symbol, without the witness samples.
pub fn maximality_value(symbol: &str, trunc: usize) -> Result<Value> {
    let g = MatrixSymbol::from_rational_rows(expr::parse_matrix(symbol)?, DEMO_GRID)?;
    let verdict = maximality_status(&g, check_trunc(trunc)?, DEFAULT_KERNEL_TOL)?;
    let mut v = verdict_to_json(&verdict);
    v["witness"] = json!(verdict.witness.is_some());
    Ok(v)
}

#[wasm_bindgen]
pub fn minimal_kernel(vector: &str, trunc: usize) -> String {
    finish(minimal_kernel_value(vector, trunc))
}

#[wasm_bindgen]
pub fn outer_modulus(function: &str) -> String {
    finish(outer_modulus_value(function))
}

#[wasm_bindgen]
pub fn maximality(symbol: &str, trunc: usize) -> String {
    finish(maximality_value(symbol, trunc))
}
