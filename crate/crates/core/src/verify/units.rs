use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;
use serde_json::json;

use super::{num, Report};
use crate::error::{Error, Result};
use crate::numberfield::{AlgebraicInt, FieldDescriptor};

const NORM_LIMIT: i128 = 1_000_000;
const WINDOW_SLACK: f64 = 1.0001;

/// Empirical constants of the unit-reduction window.
#[derive(Debug, Clone, PartialEq)]
pub struct TrotabasResult {
    pub c1: f64,
    pub c2: f64,
    pub report: Report,
}

impl TrotabasResult {
    /// The field with the measured constants recorded.
    pub fn apply(&self, field: &FieldDescriptor) -> FieldDescriptor {
        FieldDescriptor { trotabas: Some((self.c1, self.c2)), ..field.clone() }
    }
}

fn random_element(field: &FieldDescriptor, rng: &mut ChaCha8Rng) -> AlgebraicInt {
    loop {
        let xi = if field.degree == 1 {
            AlgebraicInt::rational(rng.gen_range(-NORM_LIMIT..=NORM_LIMIT))
        } else {
            AlgebraicInt::new(rng.gen_range(-1000..=1000), rng.gen_range(-1000..=1000))
        };
        let n = field.norm(xi).abs();
        if n != 0 && n <= NORM_LIMIT {
            return xi;
        }
    }
}

/// Reduces `samples` seeded random `ξ` with `0 < |N(ξ)| ≤ 10⁶` and measures
/// `|σ_j(ξ')|/|N(ξ)|^{1/n}`; passes iff every ratio lies in
/// `[ε_t^{−1/2}/1.0001, ε_t^{1/2}·1.0001]`.
pub fn check_trotabas(field: &FieldDescriptor, samples: usize, seed: u64) -> Result<TrotabasResult> {
    let prec = 128;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = field.unit_embedding(prec).to_f64().max(1.0);
    let (lo, hi) = (eps.powf(-0.5) / WINDOW_SLACK, eps.powf(0.5) * WINDOW_SLACK);
    let mut report = Report::new(
        "trotabas",
        "every |σ_j(ξ')|/|N(ξ)|^{1/n} after unit reduction in [ε_t^{-1/2}/1.0001, ε_t^{1/2}·1.0001]",
    );
    let (mut c1, mut c2) = (f64::INFINITY, 0.0f64);
    let mut outside = 0usize;
    for _ in 0..samples {
        let xi = random_element(field, &mut rng);
        let (m, red) = field.reduce_by_units(xi)?;
        let root = field.norm_root(xi, prec);
        let ratios: Vec<f64> = field
            .embeddings(red, prec)
            .into_iter()
            .map(|e| Float::with_val(prec, e.abs() / &root).to_f64())
            .collect();
        let bad = ratios.iter().any(|&r| !(lo..=hi).contains(&r));
        for &r in &ratios {
            c1 = c1.min(r);
            c2 = c2.max(r);
        }
        if bad {
            outside += 1;
            report.rows.push(json!({ "xi": xi.to_string(), "shift": m, "ratios": ratios.iter().map(|&r| num(r)).collect::<Vec<_>>() }));
        }
    }
    report.pass = outside == 0;
    report.set("field", field.selector.name());
    report.set("samples", samples);
    report.set("seed", seed);
    report.set("C1", num(c1));
    report.set("C2", num(c2));
    report.set("window_lo", num(lo));
    report.set("window_hi", num(hi));
    report.set("outside", outside);
    Ok(TrotabasResult { c1, c2, report })
}

/// Partial and closed forms of `Σ_{η ∈ O^{×+}} ∏_{|η_j|<1} |η_j|^λ`.
#[derive(Debug, Clone)]
pub struct LuoSum {
    pub partial: Float,
    pub closed: Float,
    /// `2ε_t^{−(M+1)λ}/(1 − ε_t^{−λ})`
    pub tail: Float,
    pub pass: bool,
}

/// `partial = Σ_{|m| ≤ M} ∏_{|σ_j(ε_t^m)| < 1} |σ_j(ε_t^m)|^λ` from the two
/// embeddings of `ε_t`, against `(ε_t^λ + 1)/(ε_t^λ − 1)`.
pub fn luo_sum(field: &FieldDescriptor, lambda: &Float, m_units: u32) -> Result<LuoSum> {
    if field.degree != 2 {
        return Err(Error::InvalidArgument("the unit sum needs a quadratic field".into()));
    }
    if !(lambda.is_finite() && *lambda > 0) {
        return Err(Error::InvalidArgument("λ must be positive".into()));
    }
    // resolve the tail `≈ ε_t^{−(M+1)λ}` below the leading term
    let log2_eps = field.unit_embedding(64).log2().to_f64();
    let depth = f64::from(m_units + 1) * lambda.to_f64() * log2_eps;
    let prec = lambda.prec().max(128) + depth.ceil().min(1e6) as u32 + 64;
    let base = field.embeddings(field.totally_positive_unit, prec);
    let mut partial = Float::with_val(prec, 1);
    for dir in [1i32, -1] {
        let step: Vec<Float> = base.iter().map(|e| if dir > 0 { e.clone() } else { Float::with_val(prec, e.recip_ref()) }).collect();
        let mut cur = step.clone();
        for _ in 1..=m_units {
            let mut term = Float::with_val(prec, 1);
            for e in &cur {
                let a = Float::with_val(prec, e.abs_ref());
                if a < 1 {
                    term *= a.pow(lambda);
                }
            }
            partial += term;
            for (c, s) in cur.iter_mut().zip(&step) {
                *c *= s;
            }
        }
    }
    let e_lambda = field.unit_embedding(prec).pow(lambda);
    let closed = Float::with_val(prec, &e_lambda + 1u32) / Float::with_val(prec, &e_lambda - 1u32);
    let inv = Float::with_val(prec, e_lambda.recip_ref());
    let decay = Float::with_val(prec, inv.clone().pow(m_units + 1));
    let tail = decay * 2u32 / Float::with_val(prec, 1u32 - inv);
    // the omitted terms sum to exactly `tail`: require that up to the rounding
    // of the partial sum
    let diff = Float::with_val(prec, &partial - &closed).abs();
    let slack = Float::with_val(prec, &closed * Float::with_val(prec, Float::i_exp(1, -((prec - 32) as i32))));
    let pass = Float::with_val(prec, &diff - &tail).abs() <= slack;
    Ok(LuoSum { partial, closed, tail, pass })
}

/// [`luo_sum`] over a list of exponents.
pub fn check_luo(field: &FieldDescriptor, lambdas: &[Float], m_units: u32) -> Result<Report> {
    let mut report = Report::new("luo", "|partial − closed| equals the geometric tail 2ε_t^{-(M+1)λ}/(1 − ε_t^{-λ}) up to rounding, for every λ");
    for lambda in lambdas {
        let r = luo_sum(field, lambda, m_units)?;
        report.pass &= r.pass;
        let diff = Float::with_val(64, &r.partial - &r.closed).abs();
        report.rows.push(json!({
            "lambda": crate::report::decimal(lambda, 17),
            "partial": crate::report::decimal(&r.partial, 30),
            "closed": crate::report::decimal(&r.closed, 30),
            "difference": num(diff.to_f64()),
            "tail_bound": num(r.tail.to_f64()),
            "difference_over_tail": num(Float::with_val(64, &diff / &r.tail).to_f64()),
            "pass": r.pass,
        }));
    }
    report.set("field", field.selector.name());
    report.set("munits", m_units);
    Ok(report)
}
