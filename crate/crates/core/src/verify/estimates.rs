use rayon::prelude::*;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{abs_f, num, Report};
use crate::error::Result;
use crate::kernelsum::{e_sums, total, EvalPoint, TruncationParams};
use crate::numberfield::FieldDescriptor;
use crate::specialfn::{gamma_ratio_abs_estimate, log_gamma, KummerEngine};

fn text(x: f64) -> String {
    format!("{x}")
}

fn point(k: u32, ell: usize, delta: f64, t0: f64, prec: u32) -> Result<EvalPoint> {
    EvalPoint::from_decimal(k, ell, &text(delta), &text(t0), prec)
}

/// Grid for the `₁f₁` derivative bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Lemma41Grid {
    pub max_ell: usize,
    pub xs: Vec<f64>,
    pub ks: Vec<u32>,
    pub deltas: Vec<f64>,
    pub t0s: Vec<f64>,
}

impl Default for Lemma41Grid {
    fn default() -> Self {
        Lemma41Grid {
            max_ell: 3,
            xs: vec![-100.0, -10.0, -1.0, -0.1, 0.1, 1.0, 10.0, 100.0],
            ks: vec![16, 40, 100],
            deltas: vec![0.1, 0.4],
            t0s: vec![0.0, 1.0],
        }
    }
}

/// `|d^ℓ/ds^ℓ ₁f₁(s, k, x)| / min{1, |x|^{−1}(|s−1| + |k−s−1|)}` over the grid;
/// passes iff the maximum is below 10 and no ratio grows by more than 1.5×
/// from one weight to the next.
pub fn check_lemma41(grid: &Lemma41Grid, prec: u32) -> Result<Report> {
    let mut ks = grid.ks.clone();
    ks.sort_unstable();
    let combos: Vec<(u32, f64, f64)> = ks
        .iter()
        .flat_map(|&k| grid.deltas.iter().flat_map(move |&d| grid.t0s.iter().map(move |&t| (k, d, t))))
        .collect();
    let blocks: Vec<Result<Vec<(u32, f64, f64, f64, usize, f64, f64)>>> = combos
        .par_iter()
        .map(|&(k, d, t)| {
            let p = point(k, 0, d, t, prec)?;
            let s = p.s();
            let engine = KummerEngine::new(s, k, grid.max_ell, prec)?;
            let spread = abs_f(&Complex::with_val(prec, s - 1u32))
                + abs_f(&Complex::with_val(prec, Complex::with_val(prec, k - 1) - s));
            let mut out = Vec::new();
            for &x in &grid.xs {
                let vals = engine.eval(&Float::with_val(prec, x))?;
                let bound = (spread / x.abs()).min(1.0);
                for (ell, v) in vals.iter().enumerate() {
                    let a = abs_f(v);
                    out.push((k, d, t, x, ell, a, bound));
                }
            }
            Ok(out)
        })
        .collect();
    let mut report = Report::new(
        "lemma41",
        "max ratio |d^ℓ ₁f₁|/min{1,|x|^{-1}(|s-1|+|k-s-1|)} < 10; ratio at the next weight ≤ 1.5× the previous",
    );
    let mut rows = Vec::new();
    for b in blocks {
        rows.extend(b?);
    }
    let ratio = |r: &(u32, f64, f64, f64, usize, f64, f64)| r.5 / r.6;
    let max_ratio = rows.iter().map(ratio).fold(0.0f64, f64::max);
    let mut growth_ok = true;
    let mut worst_growth = 0.0f64;
    for (i, r) in rows.iter().enumerate() {
        // the same (δ, t₀, x, ℓ) at the next weight
        if let Some(next) = rows[i + 1..]
            .iter()
            .find(|q| q.0 > r.0 && q.1 == r.1 && q.2 == r.2 && q.3 == r.3 && q.4 == r.4)
        {
            if ratio(r) > 0.0 {
                worst_growth = worst_growth.max(ratio(next) / ratio(r));
            }
            growth_ok &= ratio(next) <= 1.5 * ratio(r);
        }
        report.rows.push(json!({
            "k": r.0, "delta": text(r.1), "t0": text(r.2), "x": text(r.3), "ell": r.4,
            "abs_value": num(r.5), "bound": num(r.6), "ratio": num(ratio(r)),
        }));
    }
    for &k in &ks {
        let m = rows.iter().filter(|r| r.0 == k).map(ratio).fold(0.0f64, f64::max);
        report.set(&format!("max_ratio_k{k}"), num(m));
    }
    report.set("max_ratio", num(max_ratio));
    report.set("worst_growth", num(worst_growth));
    report.pass = max_ratio < 10.0 && growth_ok;
    Ok(report)
}

fn halves_stable(seq: &[f64]) -> (bool, f64, f64) {
    let mid = seq.len() / 2;
    let first = seq[..mid.max(1)].iter().copied().fold(0.0f64, f64::max);
    let second = seq[mid.max(1)..].iter().copied().fold(0.0f64, f64::max);
    (second <= 1.2 * first, first, second)
}

/// `|E₁,ℓ|/kⁿ` and `|E₂,ℓ|/kⁿ` along `ks`; passes iff for both sequences the
/// maximum over the second half is at most 1.2× the maximum over the first.
pub fn check_lemma42(
    field: &FieldDescriptor,
    ell: usize,
    ks: &[u32],
    delta: f64,
    t0: f64,
    tr: &TruncationParams,
    prec: u32,
) -> Result<Report> {
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    let n = field.degree as i32;
    let vals: Vec<Result<(f64, f64)>> = ks
        .par_iter()
        .map(|&k| {
            let e = e_sums(field, &point(k, ell, delta, t0, prec)?, tr)?;
            let kn = f64::from(k).powi(n);
            Ok((abs_f(&e.e1) / kn, abs_f(&e.e2) / kn))
        })
        .collect();
    let mut report = Report::new("lemma42", "for |E1|/k^n and |E2|/k^n: max over the second half of k ≤ 1.2 × max over the first half");
    let mut e1 = Vec::new();
    let mut e2 = Vec::new();
    for (k, v) in ks.iter().zip(vals) {
        let (a, b) = v?;
        e1.push(a);
        e2.push(b);
        report.rows.push(json!({ "k": k, "e1_over_kn": num(a), "e2_over_kn": num(b) }));
    }
    let (ok1, f1, s1) = halves_stable(&e1);
    let (ok2, f2, s2) = halves_stable(&e2);
    report.set("field", field.selector.name());
    report.set("ell", ell);
    report.set("delta", text(delta));
    report.set("t0", text(t0));
    report.set("e1_max_first_half", num(f1));
    report.set("e1_max_second_half", num(s1));
    report.set("e2_max_first_half", num(f2));
    report.set("e2_max_second_half", num(s2));
    report.pass = ok1 && ok2;
    Ok(report)
}

/// Direct `|Γⁿ(s)/Γⁿ(k−s)|` against `|k/2 + it₀|^{−2nδ}`; passes iff
/// `|ratio − 1|` at the largest weight is below the value at the smallest
/// and below 0.05.
pub fn check_gamma_ratio(ks: &[u32], delta: f64, t0: f64, n: u32, prec: u32) -> Result<Report> {
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    let mut report = Report::new("gamma-ratio", "|direct/model − 1| at the largest k < value at the smallest k, and < 0.05");
    let mut devs = Vec::new();
    for &k in &ks {
        let p = point(k, 0, delta, t0, prec)?;
        let s = p.s();
        let ks_ = Complex::with_val(prec, Complex::with_val(prec, k) - s);
        let lr = Complex::with_val(prec, log_gamma(s, prec)? - log_gamma(&ks_, prec)?);
        let direct = Float::with_val(prec, lr.real() * n).exp();
        let model = gamma_ratio_abs_estimate(k, &p.delta, &p.t0, n, prec);
        let dev = (Float::with_val(prec, &direct / &model) - 1u32).abs().to_f64();
        devs.push(dev);
        report.rows.push(json!({
            "k": k,
            "direct": crate::report::decimal(&direct, 20),
            "model": crate::report::decimal(&model, 20),
            "deviation": num(dev),
        }));
    }
    let (first, last) = (devs[0], devs[devs.len() - 1]);
    report.set("n", n);
    report.set("delta", text(delta));
    report.set("t0", text(t0));
    report.set("deviation_first", num(first));
    report.set("deviation_last", num(last));
    report.pass = (devs.len() == 1 || last < first) && last < 0.05;
    Ok(report)
}

/// Grid for the decay and non-vanishing check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecayGrid {
    pub ks: Vec<u32>,
    pub deltas: Vec<f64>,
    pub t0s: Vec<f64>,
    /// largest acceptable threshold weight
    pub k0_max: u32,
}

impl Default for DecayGrid {
    fn default() -> Self {
        DecayGrid { ks: (2..=10).map(|i| 20 * i).collect(), deltas: vec![0.1, 0.3, 0.45], t0s: vec![0.0, 1.0], k0_max: 200 }
    }
}

/// For each `(δ, t₀)`: the smallest tested `K₀` with `|Î₂|, |Î₃| < ¼|Î₁|` and
/// `|T| > ½|Î₁|` at every tested `k ≥ K₀`, and `|Î₁|/|P̃| ∈ [½, 2]` at the
/// largest `k`; passes iff every `(δ, t₀)` has `K₀ ≤ k0_max` and the model
/// ratio in range.
pub fn check_decay_and_nonvanishing(
    field: &FieldDescriptor,
    ell: usize,
    grid: &DecayGrid,
    tr: &TruncationParams,
    prec: u32,
) -> Result<Report> {
    let mut ks = grid.ks.clone();
    ks.sort_unstable();
    let mut combos = Vec::new();
    for &d in &grid.deltas {
        for &t in &grid.t0s {
            combos.extend(ks.iter().map(|&k| (d, t, k)));
        }
    }
    let vals: Vec<Result<[f64; 5]>> = combos
        .par_iter()
        .map(|&(d, t, k)| {
            let b = total(field, &point(k, ell, d, t, prec)?, tr)?;
            Ok([abs_f(&b.i1n), abs_f(&b.i2n), abs_f(&b.i3n), abs_f(&b.t), abs_f(&b.p_model)])
        })
        .collect();
    let mut report = Report::new(
        "decay",
        "per (δ,t0): K0 ≤ k0_max with |Î2|,|Î3| < ¼|Î1| and |T| > ½|Î1| for all tested k ≥ K0; |Î1|/|P̃| ∈ [0.5, 2] at the largest k",
    );
    let mut vals = vals.into_iter();
    let mut verdicts = Vec::new();
    for &d in &grid.deltas {
        for &t in &grid.t0s {
            let mut ok = Vec::new();
            let mut last_model = f64::NAN;
            for &k in &ks {
                let [i1, i2, i3, tt, pm] = vals.next().expect("one value per grid point")?;
                let good = i2 < 0.25 * i1 && i3 < 0.25 * i1 && tt > 0.5 * i1;
                ok.push(good);
                last_model = i1 / pm;
                report.rows.push(json!({
                    "delta": text(d), "t0": text(t), "k": k,
                    "abs_I1n": num(i1), "abs_I2n": num(i2), "abs_I3n": num(i3), "abs_T": num(tt),
                    "I2_over_I1": num(i2 / i1), "I3_over_I1": num(i3 / i1), "T_over_I1": num(tt / i1),
                    "I1_over_model": num(i1 / pm), "ok": good,
                }));
            }
            let start = ok.iter().rposition(|g| !g).map_or(0, |i| i + 1);
            let k0 = ks.get(start).copied();
            let model_ok = (0.5..=2.0).contains(&last_model);
            let pass = k0.is_some_and(|k0| k0 <= grid.k0_max) && model_ok;
            report.pass &= pass;
            verdicts.push(json!({
                "delta": text(d), "t0": text(t), "K0": k0, "I1_over_model_at_kmax": num(last_model), "pass": pass,
            }));
        }
    }
    report.set("field", field.selector.name());
    report.set("ell", ell);
    report.set("k0_max", grid.k0_max);
    report.set("per_point", verdicts);
    Ok(report)
}

/// Grid for the functional-equation check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SymmetryGrid {
    pub ks: Vec<u32>,
    pub ells: Vec<usize>,
    /// `(δ, t₀)` pairs
    pub points: Vec<(f64, f64)>,
}

impl Default for SymmetryGrid {
    fn default() -> Self {
        SymmetryGrid { ks: vec![12, 16, 20], ells: vec![0, 1], points: vec![(0.25, 0.0), (0.25, 0.7)] }
    }
}

/// `A(ℓ, k−s) = (−1)^{nk/2+ℓ} A(ℓ, s)` within 100× the combined tail bounds.
pub fn check_symmetry(field: &FieldDescriptor, grid: &SymmetryGrid, tr: &TruncationParams, prec: u32) -> Result<Report> {
    let n = field.degree as u32;
    let combos: Vec<(u32, usize, f64, f64)> = grid
        .ks
        .iter()
        .flat_map(|&k| grid.ells.iter().flat_map(move |&l| grid.points.iter().map(move |&(d, t)| (k, l, d, t))))
        .collect();
    let vals: Vec<Result<(f64, f64, f64, f64)>> = combos
        .par_iter()
        .map(|&(k, ell, d, t)| {
            let p = point(k, ell, d, t, prec)?;
            let a = total(field, &p, tr)?;
            let b = total(field, &p.reflect()?, tr)?;
            let sign = if (n * k / 2 + ell as u32) % 2 == 0 { 1 } else { -1 };
            let diff = abs_f(&(b.a.clone() - Complex::with_val(prec, &a.a * sign)));
            let tol = 100.0 * (a.tail_bound.to_f64() + b.tail_bound.to_f64());
            Ok((abs_f(&a.a), abs_f(&b.a), diff, tol))
        })
        .collect();
    let mut report = Report::new("symmetry", "|A(ℓ,k−s) − (−1)^{nk/2+ℓ}A(ℓ,s)| < 100 × (tail(s) + tail(k−s))");
    for (&(k, ell, d, t), v) in combos.iter().zip(vals) {
        let (a, b, diff, tol) = v?;
        let pass = diff < tol;
        report.pass &= pass;
        report.rows.push(json!({
            "k": k, "ell": ell, "delta": text(d), "t0": text(t),
            "abs_A": num(a), "abs_A_reflected": num(b), "difference": num(diff), "tolerance": num(tol), "pass": pass,
        }));
    }
    report.set("field", field.selector.name());
    Ok(report)
}
