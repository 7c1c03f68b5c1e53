use num_traits::Signed;
use serde_json::{json, Value};

use super::engine::MinkowskiCheck;
use super::partition::CellRecord;
use crate::error::{Error, Result};
use crate::rational::{decimal_string, Rat};
use crate::semigroup::RationalDirection;

pub const CSV_HEADER: [&str; 6] = ["p", "a", "vol_full", "vol_trunc", "ratio", "ratio_decimal"];
const DECIMAL_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOutcome {
    Ratio { vol_full: Rat, vol_trunc: Rat, ratio: Rat },
    ZeroVolume { vol_trunc: Rat },
    BeyondBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FujitaRow {
    pub p: u32,
    pub direction: RationalDirection,
    pub outcome: RowOutcome,
}

impl FujitaRow {
    pub fn ratio(&self) -> Option<&Rat> {
        match &self.outcome {
            RowOutcome::Ratio { ratio, .. } => Some(ratio),
            _ => None,
        }
    }

    /// `|1 − ratio| < ε`; marker rows never satisfy it.
    pub fn satisfies(&self, eps: &Rat) -> bool {
        self.ratio().is_some_and(|q| (Rat::from_integer(1.into()) - q).abs() < *eps)
    }

    fn csv_fields(&self) -> [String; 6] {
        let (full, trunc, ratio, dec) = match &self.outcome {
            RowOutcome::Ratio { vol_full, vol_trunc, ratio } => (
                vol_full.to_string(),
                vol_trunc.to_string(),
                ratio.to_string(),
                decimal_string(ratio, DECIMAL_DIGITS),
            ),
            RowOutcome::ZeroVolume { vol_trunc } => {
                ("0".into(), vol_trunc.to_string(), "zero-volume".into(), String::new())
            }
            RowOutcome::BeyondBound => (String::new(), String::new(), "beyond-bound".into(), String::new()),
        };
        [self.p.to_string(), self.direction.to_string(), full, trunc, ratio, dec]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// Cone fiber against the singly graded ray body on `∂T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryCheck {
    pub direction: RationalDirection,
    pub equal: bool,
    pub asserted: bool,
}

/// Rows sorted by `(p, a)`. Everything is exact at the semigroup's degree
/// bound and only for the sampled `p`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FujitaReport {
    pub bound: u32,
    pub rows: Vec<FujitaRow>,
    /// Smallest sampled `p` from which every row has `|1 − ratio| < ε`.
    pub p0: Option<u32>,
    /// Result of the vertex search at tolerance `ε'`.
    pub vertex_p0: Option<u32>,
    pub epsilon: Option<Rat>,
    pub epsilon_prime: Option<Rat>,
    pub resolution: Option<u32>,
    pub records: Vec<CellRecord>,
    pub minkowski: Vec<MinkowskiCheck>,
    pub boundary: Vec<BoundaryCheck>,
    /// `None` for plain sweeps.
    pub verdict: Option<Verdict>,
    pub failures: Vec<String>,
}

impl FujitaReport {
    pub fn passed(&self) -> bool {
        self.verdict == Some(Verdict::Pass)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(CSV_HEADER).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.csv_fields()).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json_value(&self) -> Value {
        let opt = |x: &Option<Rat>| x.as_ref().map(|v| v.to_string());
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let [p, a, full, trunc, ratio, _] = r.csv_fields();
                json!({ "p": p.parse::<u32>().expect("p"), "a": a, "vol_full": full, "vol_trunc": trunc, "ratio": ratio })
            })
            .collect();
        let cells: Vec<Value> = self
            .records
            .iter()
            .map(|c| json!({ "min": c.min.to_string(), "spread": c.spread.to_string() }))
            .collect();
        let mink: Vec<Value> = self
            .minkowski
            .iter()
            .map(|m| {
                json!({
                    "p": m.p,
                    "a": m.direction.to_string(),
                    "weights": m.weights.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "containment": m.containment,
                    "volume": m.volume.to_string(),
                    "vertex_volumes": m.vertex_volumes.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "volume_bound": m.volume_bound,
                })
            })
            .collect();
        let boundary: Vec<Value> = self
            .boundary
            .iter()
            .map(|b| json!({ "a": b.direction.to_string(), "equal": b.equal, "asserted": b.asserted }))
            .collect();
        json!({
            "bound": self.bound,
            "rows": rows,
            "p0": self.p0,
            "vertex_p0": self.vertex_p0,
            "epsilon": opt(&self.epsilon),
            "epsilon_prime": opt(&self.epsilon_prime),
            "resolution": self.resolution,
            "spread_kind": "sampled",
            "cells": cells,
            "minkowski": mink,
            "boundary": boundary,
            "verdict": self.verdict.map(|v| if v == Verdict::Pass { "pass" } else { "fail" }),
            "failures": self.failures,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("json values serialize");
        s.push('\n');
        s
    }
}
