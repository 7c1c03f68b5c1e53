//! JSON model files.
//!
//! ```json
//! {"bound":40,"d":1,"generators":[{"m":[1,0],"v":[0]}],"mode":"generators","r":2}
//! {"bound":12,"d":2,"mode":"toric","polytopes":[[[0,0],[0,1],[1,0],[1,1]]],"r":1}
//! ```
//!
//! Keys are written in sorted order on one line followed by a newline;
//! there is no floating point anywhere in the format.

use serde::Deserialize;
use serde_json::{json, Value};

use super::toric::{toric_model, LatticePolytope};
use crate::error::{Error, Result};
use crate::semigroup::{GradedPoint, GradedSemigroup, Source};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    mode: String,
    d: u64,
    r: u64,
    bound: u64,
    #[serde(default)]
    generators: Option<Vec<RawGenerator>>,
    #[serde(default)]
    polytopes: Option<Vec<Vec<Vec<i64>>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    v: Vec<i64>,
    m: Vec<i64>,
}

fn to_u32(xs: &[i64], what: &str) -> Result<Vec<u32>> {
    xs.iter()
        .map(|&x| {
            if x < 0 {
                Err(Error::NegativeEntry(what.to_string()))
            } else {
                u32::try_from(x).map_err(|_| Error::Parse(format!("{what}: entry {x} too large")))
            }
        })
        .collect()
}

/// Parses a model document.
pub fn parse_model(text: &str) -> Result<GradedSemigroup> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawModel = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        Error::Parse(format!(
            "line {} column {} at `{}`: {}",
            inner.line(),
            inner.column(),
            e.path(),
            inner
        ))
    })?;
    let d = usize::try_from(raw.d).map_err(|_| Error::Parse("d too large".into()))?;
    let r = usize::try_from(raw.r).map_err(|_| Error::Parse("r too large".into()))?;
    let bound = u32::try_from(raw.bound).map_err(|_| Error::Parse("bound too large".into()))?;
    match raw.mode.as_str() {
        "generators" => {
            if raw.polytopes.is_some() {
                return Err(Error::Parse("`polytopes` is not allowed in generators mode".into()));
            }
            let gens = raw
                .generators
                .ok_or_else(|| Error::Parse("missing field `generators`".into()))?;
            let mut points = Vec::with_capacity(gens.len());
            for (i, g) in gens.iter().enumerate() {
                let v = to_u32(&g.v, &format!("generators[{i}].v"))?;
                let m = to_u32(&g.m, &format!("generators[{i}].m"))?;
                points.push(GradedPoint::new(v, m));
            }
            GradedSemigroup::from_generators(d, r, points, bound)
        }
        "toric" => {
            if raw.generators.is_some() {
                return Err(Error::Parse("`generators` is not allowed in toric mode".into()));
            }
            let polys = raw
                .polytopes
                .ok_or_else(|| Error::Parse("missing field `polytopes`".into()))?;
            if polys.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: polys.len() });
            }
            let mut lattice = Vec::with_capacity(polys.len());
            for (i, p) in polys.iter().enumerate() {
                for v in p {
                    if v.len() != d {
                        return Err(Error::DimensionMismatch { expected: d, found: v.len() });
                    }
                    to_u32(v, &format!("polytopes[{i}]"))?;
                }
                lattice.push(LatticePolytope::new(p)?);
            }
            toric_model(lattice, bound)
        }
        other => Err(Error::Parse(format!(
            "unknown mode {other:?}, expected \"generators\" or \"toric\""
        ))),
    }
}

/// Serializes a semigroup to its canonical one-line document.
pub fn serialize_model(s: &GradedSemigroup) -> String {
    let value = match s.source() {
        Source::Generators(gens) => {
            let gens: Vec<Value> = gens
                .iter()
                .map(|g| json!({ "m": g.m.entries(), "v": g.v }))
                .collect();
            json!({
                "bound": s.bound(),
                "d": s.d(),
                "generators": gens,
                "mode": "generators",
                "r": s.r(),
            })
        }
        Source::Toric(polys) => {
            let polys: Vec<Vec<Vec<i64>>> = polys.iter().map(|p| p.integer_vertices()).collect();
            json!({
                "bound": s.bound(),
                "d": s.d(),
                "mode": "toric",
                "polytopes": polys,
                "r": s.r(),
            })
        }
    };
    let mut out = serde_json::to_string(&value).expect("json values serialize");
    out.push('\n');
    out
}
