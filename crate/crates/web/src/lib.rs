//! Browser bindings. Every export takes and returns strings so the page
//! needs no generated types; errors come back as the message text.

use okounkov::fujita::{sweep, FiberVolumes};
use okounkov::models::parse_model;
use okounkov::okounkov::{normalized_volume, okounkov_body};
use okounkov::rational::{decimal_string, format_qvector};
use okounkov::semigroup::RationalDirection;
use okounkov::{Error, Rat};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Most sample points a profile request may ask for.
pub const MAX_SAMPLES: u32 = 200;

fn err(e: Error) -> String {
    e.to_string()
}

fn number(x: &Rat) -> Value {
    json!({ "exact": x.to_string(), "approx": decimal_string(x, 6) })
}

fn parse_directions(text: &str) -> Result<Vec<RationalDirection>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| RationalDirection::parse(t).map_err(err))
        .collect()
}

fn parse_p_list(text: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok.split_once("..") {
            Some((lo, hi)) => {
                let lo: u32 = lo.trim().parse().map_err(|_| format!("bad degree `{tok}`"))?;
                let hi: u32 = hi.trim().parse().map_err(|_| format!("bad degree `{tok}`"))?;
                out.extend(lo..=hi);
            }
            None => out.push(tok.parse().map_err(|_| format!("bad degree `{tok}`"))?),
        }
    }
    if out.is_empty() {
        return Err("no degrees given".into());
    }
    Ok(out)
}

/// Vertices and volume of the body over `direction` (like `1/2:1/2`).
#[wasm_bindgen]
pub fn fiber_body(model_json: &str, direction: &str) -> Result<String, String> {
    let s = parse_model(model_json).map_err(err)?;
    let a = RationalDirection::parse(direction).map_err(err)?;
    let body = okounkov_body(&s, &a).map_err(err)?;
    let vertices: Vec<Value> = body
        .vertices()
        .iter()
        .map(|v| {
            json!({
                "exact": format_qvector(v),
                "approx": v.iter().map(okounkov::rational::to_f64).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "d": s.d(),
        "direction": a.to_string(),
        "vertices": vertices,
        "volume": number(&normalized_volume(&body)),
    })
    .to_string())
}

/// Full and degree-`p` truncated volumes along the segment from `(1, 0)`
/// to `(0, 1)`, at `samples + 1` evenly spaced points. Two-degree models only.
#[wasm_bindgen]
pub fn volume_profile(model_json: &str, p: u32, samples: u32) -> Result<String, String> {
    let s = parse_model(model_json).map_err(err)?;
    if s.r() != 2 {
        return Err(format!("profiles need r = 2, model has r = {}", s.r()));
    }
    if samples == 0 || samples > MAX_SAMPLES {
        return Err(format!("samples must be in 1..={MAX_SAMPLES}"));
    }
    let fv = FiberVolumes::new(&s, &[p]).map_err(err)?;
    let mut points = Vec::new();
    for k in 0..=samples {
        let t = Rat::new(k.into(), samples.into());
        let a = RationalDirection::new(vec![Rat::from_integer(1.into()) - &t, t.clone()]).map_err(err)?;
        let full = fv.full_volume(&a).map_err(err)?;
        let trunc = fv.trunc_volume(p, &a).map_err(err)?;
        points.push(json!({
            "t": okounkov::rational::to_f64(&t),
            "direction": a.to_string(),
            "full": number(&full),
            "trunc": number(&trunc),
        }));
    }
    Ok(json!({ "p": p, "points": points }).to_string())
}

/// The sweep table as CSV, for degrees like `1..4,8` and directions like
/// `1:0 0:1 1/2:1/2`.
#[wasm_bindgen]
pub fn fujita_sweep_table(model_json: &str, p_list: &str, directions: &str) -> Result<String, String> {
    let s = parse_model(model_json).map_err(err)?;
    let ps = parse_p_list(p_list)?;
    let dirs = parse_directions(directions)?;
    if dirs.is_empty() {
        return Err("no directions given".into());
    }
    sweep(&s, &ps, &dirs).map_err(err)?.to_csv().map_err(err)
}
