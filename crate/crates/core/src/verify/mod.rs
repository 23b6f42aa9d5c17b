//! Executable checks of the estimates behind the non-vanishing argument:
//! the `₁f₁` derivative bound, growth of the `E`-sums, the unit-reduction
//! window, the unit sum, the Gamma-ratio model, decay of `Î₂`, `Î₃` against
//! `Î₁`, and the functional equation.

mod estimates;
mod units;

use std::collections::BTreeMap;

use rug::{Complex, Float};
use serde::Serialize;
use serde_json::Value;

pub use estimates::{
    check_decay_and_nonvanishing, check_gamma_ratio, check_lemma41, check_lemma42, check_symmetry, DecayGrid,
    Lemma41Grid, SymmetryGrid,
};
pub use units::{check_luo, check_trotabas, luo_sum, LuoSum, TrotabasResult};

/// Machine-readable outcome of one suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub pass: bool,
    /// the thresholds applied
    pub criteria: String,
    pub summary: BTreeMap<String, Value>,
    pub rows: Vec<Value>,
}

impl Report {
    fn new(suite: &str, criteria: &str) -> Self {
        Report { suite: suite.into(), pass: true, criteria: criteria.into(), summary: BTreeMap::new(), rows: Vec::new() }
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.summary.insert(key.into(), v.into());
    }
}

/// Several suites with an aggregate verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub pass: bool,
    pub reports: Vec<Report>,
}

impl Aggregate {
    pub fn new(reports: Vec<Report>) -> Self {
        Aggregate { pass: reports.iter().all(|r| r.pass), reports }
    }
}

/// Decimal text of an `f64` measurement.
fn num(x: f64) -> Value {
    Value::String(crate::report::short(x))
}

fn abs_f(z: &Complex) -> f64 {
    Float::with_val(64, z.abs_ref()).to_f64()
}

#[cfg(test)]
mod tests;
