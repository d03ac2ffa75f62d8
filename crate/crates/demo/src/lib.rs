//! Browser bindings: analyze a polynomial, draw a side matching, test a basketball.

use ncpoly::complexes::is_basketball;
use ncpoly::noncrossing::{perm_of, NoncrossingPartition, Side};
use ncpoly::poly::{ComplexPoly, Rectangle, C64};
use ncpoly::render::{render_chords, render_report, What};
use ncpoly::report::analyze;
use wasm_bindgen::prelude::*;

/// Parses whitespace or comma separated complex coefficients such as
/// `1, 0, -3, 0` or `1, -4.25+1.5i, 2i`, highest degree first.
pub fn parse_coeffs(text: &str) -> Result<ComplexPoly, String> {
    let coeffs: Vec<C64> = text
        .split(|c: char| c == ',' || c == ';' || c == '\n')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.replace(' ', "").parse::<C64>().map_err(|_| format!("cannot read coefficient {s:?}")))
        .collect::<Result<_, _>>()?;
    ComplexPoly::new(coeffs).map_err(|e| e.to_string())
}

/// Report JSON and the chosen drawing for a polynomial.
pub fn analyze_text(coeffs: &str, rect: &str, what: &str) -> Result<(String, String), String> {
    let p = parse_coeffs(coeffs)?;
    let rect = if rect.trim().is_empty() { None } else { Some(Rectangle::parse(rect).map_err(|e| e.to_string())?) };
    let report = analyze(&p, rect, 0.0, 0).map_err(|e| e.to_string())?;
    let what: What = what.parse().map_err(|e: ncpoly::Error| e.to_string())?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    Ok((json, render_report(&report, what)))
}

pub fn chords_text(partition: &str, side: &str) -> Result<String, String> {
    let p = NoncrossingPartition::parse(partition).map_err(|e| e.to_string())?;
    let side: Side = side.parse().map_err(|e: ncpoly::Error| e.to_string())?;
    Ok(render_chords(&p, side))
}

pub fn basketball_text(left: &str, bottom: &str) -> Result<bool, String> {
    let l = NoncrossingPartition::parse(left).map_err(|e| e.to_string())?;
    let b = NoncrossingPartition::parse(bottom).map_err(|e| e.to_string())?;
    if l.degree() != b.degree() {
        return Err("partitions of different degrees".into());
    }
    is_basketball(&perm_of(&l), &perm_of(&b)).map_err(|e| e.to_string())
}

/// Returns `[report_json, svg]`.
#[wasm_bindgen]
pub fn analyze_poly(coeffs: &str, rect: &str, what: &str) -> Result<Vec<String>, JsValue> {
    analyze_text(coeffs, rect, what).map(|(j, s)| vec![j, s]).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn chord_diagram(partition: &str, side: &str) -> Result<String, JsValue> {
    chords_text(partition, side).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn basketball(left: &str, bottom: &str) -> Result<bool, JsValue> {
    basketball_text(left, bottom).map_err(|e| JsValue::from_str(&e))
}
