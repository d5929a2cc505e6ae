//! WebAssembly bindings: the closed-form table, a full census of a map
//! typed as text, and the local cusp index at a point. Every function
//! returns JSON; errors come back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use polymap_census::atinfinity::infinity_profile;
use polymap_census::census::{full_census, generalized_cusp_index, Formulas, TChoice};
use polymap_census::ideals::GroebnerConfig;
use polymap_census::jets::PlaneMap;
use polymap_census::localint::RatPoint;
use polymap_census::polyring::parse_poly;

fn error(message: impl ToString) -> String {
    json!({ "error": message.to_string() }).to_string()
}

fn parse_map(f: &str, g: &str) -> Result<PlaneMap, String> {
    let f = parse_poly(f).map_err(|e| format!("f: {e}"))?;
    let g = parse_poly(g).map_err(|e| format!("g: {e}"))?;
    PlaneMap::with_natural_caps(f, g).map_err(|e| e.to_string())
}

/// Predicted invariants for every `1 <= d2 <= d1 <= max_degree`.
#[wasm_bindgen]
pub fn formula_table(max_degree: u32) -> String {
    let rows: Vec<Value> = (1..=max_degree.min(30))
        .flat_map(|d1| (1..=d1).map(move |d2| (d1, d2)))
        .map(|(d1, d2)| {
            let f = Formulas::of(d1, d2);
            let branch = infinity_profile(d1, d2).map(|p| p.branch_delta.to_string()).unwrap_or_default();
            json!({ "d1": d1, "d2": d2, "formulas": f, "branchDelta": branch })
        })
        .collect();
    Value::Array(rows).to_string()
}

/// Census of `(f, g)` with degree caps taken from the polynomials.
#[wasm_bindgen]
pub fn analyze(f: &str, g: &str, seed: u64) -> String {
    match parse_map(f, g) {
        Ok(map) => serde_json::to_string(&full_census(&map, seed, &GroebnerConfig::default())).expect("serializes"),
        Err(e) => error(e),
    }
}

/// Generalized cusp index of `(f, g)` at the point `"x,y"`.
#[wasm_bindgen]
pub fn cusp_index(f: &str, g: &str, point: &str, seed: u64) -> String {
    let map = match parse_map(f, g) {
        Ok(m) => m,
        Err(e) => return error(e),
    };
    let a: RatPoint = match point.parse() {
        Ok(a) => a,
        Err(e) => return error(e),
    };
    match generalized_cusp_index(&map, &a, &TChoice::Auto, seed) {
        Ok(i) => json!({ "point": a.to_string(), "index": i.index, "localJJ11": i.jj11, "localGrad": i.grad }).to_string(),
        Err(e) => error(e),
    }
}
