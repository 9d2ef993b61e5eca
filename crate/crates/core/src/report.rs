//! JSON and CSV serialization of analysis reports.
//!
//! Floating-point fields are rounded to 12 significant digits before they are
//! written, so reports are stable against last-bit noise and byte-identical
//! across runs.

use std::fmt::Write as _;

use serde::Serializer;

use crate::pipeline::AnalysisReport;

/// Rounds to 12 significant digits.
pub fn round_sig12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return if v == 0.0 { 0.0 } else { v };
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

pub fn sig12<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig12(*v))
}

pub fn sig12_opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&round_sig12(*x)),
        None => s.serialize_none(),
    }
}

pub fn sig12_pair<S: Serializer>(v: &(f64, f64), s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&round_sig12(v.0))?;
    t.serialize_element(&round_sig12(v.1))?;
    t.end()
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types always serialize");
    out.push('\n');
    out
}

pub const CSV_HEADER: &str = "variable,j,lp,se,ci_lo,ci_hi,i2_pre,i2_post,tau2";

fn csv_field(name: &str) -> String {
    if name.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", name.replace('"', "\"\""))
    } else {
        name.to_string()
    }
}

/// One row per (variable, order), in report order.
pub fn to_csv(report: &AnalysisReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for v in &report.variables {
        for o in &v.orders {
            let i2_post = o.i2_post.map(|x| round_sig12(x).to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                csv_field(&v.variable),
                o.j,
                round_sig12(o.lp),
                round_sig12(o.se),
                round_sig12(o.ci_low),
                round_sig12(o.ci_high),
                round_sig12(o.i2_pre),
                i2_post,
                round_sig12(o.tau2),
            )
            .expect("writing to a String cannot fail");
        }
    }
    out
}
