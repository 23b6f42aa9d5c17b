//! CSV and JSON records. Every number is a decimal string.

use hilbert_kernel::kernelsum::{EvalPoint, TermBreakdown};
use hilbert_kernel::report::decimal;
use rug::{Complex, Float};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_VERSION: u32 = 1;

pub const COLUMNS: [&str; 22] = [
    "field", "k", "ell", "delta", "t0", "prec_bits", "amax", "cmax", "munits", "branch", "re_T", "im_T", "abs_T",
    "re_I1n", "im_I1n", "re_I2n", "im_I2n", "re_I3n", "im_I3n", "re_A", "im_A", "tail_bound",
];

/// The JSON envelope shared by all commands.
pub fn envelope(command: &str, config: &RunConfig, result: impl Serialize) -> Value {
    json!({
        "tool": "hkernel",
        "version": env!("CARGO_PKG_VERSION"),
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "result": result,
    })
}

/// Versioned comment line heading every CSV file.
pub fn csv_preamble(command: &str, config: &RunConfig) -> String {
    let cfg = serde_json::to_string(config).expect("config serializes");
    format!("# hkernel {command} csv v{CSV_VERSION}; config={cfg}\n{}\n", COLUMNS.join(","))
}

/// One grid point as given on the command line.
#[derive(Debug, Clone)]
pub struct GridPoint {
    pub k: u32,
    pub ell: usize,
    pub delta: String,
    pub t0: String,
}

fn parts(z: &Complex, d: usize) -> [String; 2] {
    [decimal(z.real(), d), decimal(z.imag(), d)]
}

/// Column values in [`COLUMNS`] order; failed points keep their identifying
/// columns and report `NaN`.
pub fn csv_values(config: &RunConfig, g: &GridPoint, b: Option<&TermBreakdown>) -> Vec<String> {
    let t = &config.truncation;
    let mut v = vec![
        config.field.name().to_string(),
        g.k.to_string(),
        g.ell.to_string(),
        g.delta.clone(),
        g.t0.clone(),
        config.prec_bits.to_string(),
        t.a_max.to_string(),
        t.c_max.to_string(),
        t.m_units.to_string(),
        t.branch.tag().to_string(),
    ];
    let d = config.digits;
    match b {
        Some(b) => {
            v.extend(parts(&b.t, d));
            v.push(decimal(&Float::with_val(b.t.prec().0, b.t.abs_ref()), d));
            for z in [&b.i1n, &b.i2n, &b.i3n, &b.a] {
                v.extend(parts(z, d));
            }
            v.push(decimal(&b.tail_bound, d));
        }
        None => v.extend(std::iter::repeat("NaN".to_string()).take(COLUMNS.len() - v.len())),
    }
    v
}

/// Full record of one evaluation: the CSV columns plus diagnostics.
pub fn record(config: &RunConfig, g: &GridPoint, p: &EvalPoint, b: &TermBreakdown) -> Value {
    let mut m = Map::new();
    for (name, val) in COLUMNS.iter().zip(csv_values(config, g, Some(b))) {
        m.insert(name.to_string(), Value::String(val));
    }
    let d = config.digits;
    let [re_s, im_s] = parts(p.s(), d);
    let extra = [
        ("re_s", re_s),
        ("im_s", im_s),
        ("re_E1", decimal(b.e1.real(), d)),
        ("im_E1", decimal(b.e1.imag(), d)),
        ("re_E2", decimal(b.e2.real(), d)),
        ("im_E2", decimal(b.e2.imag(), d)),
        ("re_P_model", decimal(b.p_model.real(), d)),
        ("im_P_model", decimal(b.p_model.imag(), d)),
        ("tail_bound_T", decimal(&b.tail_bound_t, d)),
        ("terms_evaluated", b.terms_evaluated.to_string()),
        ("terms_skipped", b.terms_skipped.to_string()),
    ];
    for (k, v) in extra {
        m.insert(k.into(), Value::String(v));
    }
    Value::Object(m)
}

pub fn csv_line(values: &[String]) -> String {
    let mut s = values.join(",");
    s.push('\n');
    s
}
