use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specialfn::MAX_DERIV;

/// A point `s = k/2 − δ + i·t₀` together with the weight, derivative order and
/// working precision.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint {
    pub k: u32,
    pub ell: usize,
    pub delta: Float,
    pub t0: Float,
    pub prec: u32,
    s: Complex,
}

impl EvalPoint {
    /// Validated constructor: `k` even, `k ≥ 4`, `0 < δ < ½`.
    pub fn new(k: u32, ell: usize, delta: Float, t0: Float, prec: u32) -> Result<Self> {
        if !(delta.is_finite() && delta > 0 && delta < 0.5) {
            return Err(Error::InvalidEvalPoint(format!("δ = {} must lie in (0, ½)", delta.to_f64())));
        }
        Self::build(k, ell, delta, t0, prec)
    }

    /// Parses decimal strings for `δ` and `t₀` at the working precision.
    pub fn from_decimal(k: u32, ell: usize, delta: &str, t0: &str, prec: u32) -> Result<Self> {
        let parse = |v: &str, what: &str| {
            Float::parse(v)
                .map(|p| Float::with_val(prec, p))
                .map_err(|_| Error::InvalidEvalPoint(format!("cannot parse {what} = `{v}`")))
        };
        Self::new(k, ell, parse(delta, "δ")?, parse(t0, "t₀")?, prec)
    }

    /// Any `s` with `1 < Re s < k − 1` (the kernel's convergence range); `δ`
    /// may then be negative or exceed ½.
    pub fn at_s(k: u32, ell: usize, s: &Complex, prec: u32) -> Result<Self> {
        let delta = Float::with_val(prec, Float::with_val(prec, k) / 2u32 - s.real());
        let t0 = Float::with_val(prec, s.imag());
        Self::build(k, ell, delta, t0, prec)
    }

    /// The mirrored point `k − s` (`δ ↦ −δ`, `t₀ ↦ −t₀`).
    pub fn reflect(&self) -> Result<Self> {
        let ks = Complex::with_val(self.prec, Complex::with_val(self.prec, self.k) - &self.s);
        Self::at_s(self.k, self.ell, &ks, self.prec)
    }

    fn build(k: u32, ell: usize, delta: Float, t0: Float, prec: u32) -> Result<Self> {
        if k < 4 || k % 2 != 0 {
            return Err(Error::InvalidEvalPoint(format!("weight k = {k} must be even and ≥ 4")));
        }
        if ell > MAX_DERIV {
            return Err(Error::InvalidEvalPoint(format!("ℓ = {ell} exceeds {MAX_DERIV}")));
        }
        if !(64..=1 << 16).contains(&prec) {
            return Err(Error::InvalidEvalPoint(format!("precision {prec} bits outside [64, 65536]")));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidEvalPoint("t₀ must be finite".into()));
        }
        let re = Float::with_val(prec, Float::with_val(prec, k) / 2u32 - &delta);
        if !(re > 1 && re < k - 1) {
            return Err(Error::InvalidEvalPoint(format!("Re s = {} outside (1, k−1)", re.to_f64())));
        }
        let s = Complex::with_val(prec, (re, &t0));
        Ok(EvalPoint { k, ell, delta: Float::with_val(prec, delta), t0: Float::with_val(prec, t0), prec, s })
    }

    pub fn s(&self) -> &Complex {
        &self.s
    }

    pub fn sigma(&self) -> f64 {
        self.s.real().to_f64()
    }
}

/// Branch used for `N(c)^{s−k} N(a)^{−s}` when norms or embeddings are negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Branch {
    /// Principal branch of the power of the (possibly negative) norm.
    #[serde(rename = "PB")]
    Principal,
    /// `|N|`-powers with one factor `e^{−iπs}` for every embedding where `a_t c_t < 0`.
    #[serde(rename = "AV")]
    #[default]
    AbsSign,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::Principal => "PB",
            Branch::AbsSign => "AV",
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(v: &str) -> Result<Self> {
        match v.to_ascii_uppercase().as_str() {
            "PB" => Ok(Branch::Principal),
            "AV" => Ok(Branch::AbsSign),
            _ => Err(Error::InvalidArgument(format!("unknown branch convention `{v}` (PB or AV)"))),
        }
    }
}

/// Truncation of the `(a, c, η)` sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruncationParams {
    /// `|N(a)| ≤ a_max`
    pub a_max: u64,
    /// `|N(c)| ≤ c_max`
    pub c_max: u64,
    /// `η = ε_t^m`, `|m| ≤ m_units`
    pub m_units: u32,
    /// Relative accuracy target: terms whose a-priori bound is below this
    /// fraction of the leading term are skipped (and counted in the tail).
    pub quad_target: f64,
    /// Optional hyperbolic cut `|N(a)N(c)| ≤ p_max`.
    pub p_max: Option<u64>,
    /// Fail with `TruncationTooSmall` if the normalized tail exceeds this.
    pub max_tail: Option<f64>,
    pub branch: Branch,
}

impl Default for TruncationParams {
    fn default() -> Self {
        TruncationParams {
            a_max: 40,
            c_max: 40,
            m_units: 8,
            quad_target: 1e-40,
            p_max: None,
            max_tail: None,
            branch: Branch::AbsSign,
        }
    }
}

impl TruncationParams {
    pub fn validate(&self) -> Result<()> {
        if self.a_max < 1 || self.c_max < 1 || self.m_units < 1 {
            return Err(Error::InvalidArgument("truncation bounds must be ≥ 1".into()));
        }
        if !(self.quad_target > 0.0 && self.quad_target < 1.0) {
            return Err(Error::InvalidArgument("quadrature target must lie in (0, 1)".into()));
        }
        if self.a_max > 1 << 40 || self.c_max > 1 << 40 {
            return Err(Error::InvalidArgument("truncation bound too large".into()));
        }
        if matches!(self.p_max, Some(0)) {
            return Err(Error::InvalidArgument("p_max must be ≥ 1".into()));
        }
        Ok(())
    }
}
