//! Curve file writers and the structured coeffs/verdict documents.
//!
//! CSV columns are fixed (`a,b,I1,I2,dI2_dI1,d2I2_dI12`) and decimals are
//! rendered with 17 significant digits, so identical runs produce
//! byte-identical files.

use serde::Serialize;
use serde_json::json;

use stark_toric::{CoefficientTable, DkPositivity, MomentMapCurve, Verdict};

use crate::spec::SystemSpec;

pub const CSV_HEADER: &str = "a,b,I1,I2,dI2_dI1,d2I2_dI12";

fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn curve_to_csv(curve: &MomentMapCurve) -> String {
    let mut out = String::with_capacity(64 * (curve.samples.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in &curve.samples {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            sig17(s.a),
            sig17(s.b),
            sig17(s.i1),
            sig17(s.i2),
            sig17(s.slope),
            sig17(s.curvature),
        ));
    }
    out
}

#[derive(Serialize)]
struct CurveRow {
    a: f64,
    b: f64,
    #[serde(rename = "I1")]
    i1: f64,
    #[serde(rename = "I2")]
    i2: f64,
    #[serde(rename = "dI2_dI1")]
    slope: f64,
    #[serde(rename = "d2I2_dI12")]
    curvature: f64,
}

pub fn curve_to_json(spec: &SystemSpec, curve: &MomentMapCurve, verdict: &Verdict) -> String {
    let rows: Vec<CurveRow> = curve
        .samples
        .iter()
        .map(|s| CurveRow {
            a: s.a,
            b: s.b,
            i1: s.i1,
            i2: s.i2,
            slope: s.slope,
            curvature: s.curvature,
        })
        .collect();
    let doc = json!({
        "system": spec,
        "m_level": curve.m_level,
        "endpoint_margin": curve.endpoint_margin,
        "barrier_margin": curve.barrier_margin,
        "verdict": {
            "kind": verdict.kind.to_string(),
            "method": verdict.method.to_string(),
        },
        "samples": rows,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
    text.push('\n');
    text
}

/// Index-range note for the `D_k` report: the axis-critical-point argument
/// sums over exponents that stop at `k = n-1`, and `k = n` would need
/// `C_{n+1}`, which the recurrence at this `n` does not define.
pub const DK_RANGE_NOTE: &str =
    "D_k checked for k = 0..=n-1; the k = n value would require C_{n+1}, \
     which the recurrence does not define for this n";

pub fn coeffs_to_json(table: &CoefficientTable, pos: &DkPositivity) -> String {
    let n = table.n as usize;
    let doc = json!({
        "n": table.n,
        "c": table.c.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "d": table.d_small.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "big_d": table.big_d.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "c0_is_one": table.c[0].to_string() == "1",
        "cn_is_one": table.c[n].to_string() == "1",
        "all_positive": pos.all_positive,
        "first_violation": pos.first_violation,
        "dk_index_range": "0..=n-1",
        "dk_range_note": DK_RANGE_NOTE,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
    text.push('\n');
    text
}

pub fn coeffs_to_text(table: &CoefficientTable, pos: &DkPositivity) -> String {
    let join = |v: &[num_bigint::BigInt]| {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut out = format!(
        "C: {} | D: {} | all-positive: {}\n",
        join(&table.c),
        join(&table.big_d),
        pos.all_positive
    );
    out.push_str(&format!("d: {}\n", join(&table.d_small)));
    if let Some(k) = pos.first_violation {
        out.push_str(&format!("first violation at k = {k}\n"));
    }
    out.push_str(&format!("note: {DK_RANGE_NOTE}\n"));
    out
}
