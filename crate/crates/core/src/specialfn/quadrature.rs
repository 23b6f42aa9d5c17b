//! Double-exponential quadrature: tanh-sinh on `[0, 1]` and exp-sinh on
//! `[0, ∞)`, with node tables cached per precision and level.

use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use super::complex::log2_abs;
use crate::error::{Error, Result};

/// Tanh-sinh quadrature settings: successive levels (step halvings) must
/// differ by less than `target` (absolute) before a value is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub target: f64,
    pub min_level: u32,
    pub max_level: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { target: 1e-40, min_level: 3, max_level: 12 }
    }
}

impl QuadratureSpec {
    pub fn with_target(target: f64) -> Self {
        QuadratureSpec { target, ..Self::default() }
    }
}

/// One abscissa of the `[0, 1]` rule with its mirror image: `u` near 1,
/// `v = 1 − u` near 0, both logarithms accurate, and the weight `dt`-density
/// `π cosh t · u v` (the same for both mirror points).
#[derive(Debug)]
pub struct Node01 {
    pub u: Float,
    pub v: Float,
    pub ln_u: Float,
    pub ln_v: Float,
    pub weight: Float,
    /// `q = (π/2) sinh t`, so that `v ≈ e^{−2q}`.
    pub q: f64,
}

/// Abscissa `t = c·e^{q}` of the `[0, ∞)` rule with `q = (π/2) sinh τ`; the
/// stored values are `e^{q}` and `(π/2) cosh τ · e^{q}`.
#[derive(Debug)]
pub struct NodeInf {
    pub eq: Float,
    pub weight: Float,
    pub q: f64,
}

type Key = (u32, u32);

fn table_q_max(prec: u32) -> f64 {
    4.0 * f64::from(prec + 64) * LN_2
}

fn nodes01(prec: u32, level: u32) -> Arc<Vec<Node01>> {
    static TABLES: OnceLock<Mutex<HashMap<Key, Arc<Vec<Node01>>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().expect("node table poisoned").get(&(prec, level)) {
        return Arc::clone(t);
    }
    let h = (0.5f64).powi(level as i32);
    let (start, step) = if level == 0 { (0u64, 1u64) } else { (1, 2) };
    let qmax = table_q_max(prec);
    let pi = Float::with_val(prec, Constant::Pi);
    let mut out = Vec::new();
    let mut j = start;
    loop {
        let t = Float::with_val(prec, j) * Float::with_val(prec, h);
        let sinh = Float::with_val(prec, t.sinh_ref());
        let q = Float::with_val(prec, &sinh * &pi) / 2u32;
        let qf = q.to_f64();
        if qf > qmax {
            break;
        }
        // e = e^{−2q}; u = 1/(1+e), v = e/(1+e)
        let e = Float::with_val(prec, Float::with_val(prec, &q * -2i32).exp_ref());
        let l1p = Float::with_val(prec, e.ln_1p_ref());
        let onepe = Float::with_val(prec, &e + 1u32);
        let u = Float::with_val(prec, onepe.recip_ref());
        let v = Float::with_val(prec, &e / &onepe);
        let ln_u = Float::with_val(prec, -&l1p);
        let ln_v = Float::with_val(prec, &q * -2i32) - &l1p;
        let cosh = Float::with_val(prec, t.cosh_ref());
        let weight = Float::with_val(prec, &pi * &cosh) * &u * &v;
        out.push(Node01 { u, v, ln_u, ln_v, weight, q: qf });
        j += step;
    }
    let out = Arc::new(out);
    tables
        .lock()
        .expect("node table poisoned")
        .entry((prec, level))
        .or_insert(out)
        .clone()
}

fn nodes_inf(prec: u32, level: u32) -> Arc<Vec<NodeInf>> {
    static TABLES: OnceLock<Mutex<HashMap<Key, Arc<Vec<NodeInf>>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().expect("node table poisoned").get(&(prec, level)) {
        return Arc::clone(t);
    }
    let h = (0.5f64).powi(level as i32);
    let qmax = f64::from(prec + 64) * LN_2;
    let pi = Float::with_val(prec, Constant::Pi);
    let mut out = Vec::new();
    let mut push = |tau: Float| -> bool {
        let q = Float::with_val(prec, Float::with_val(prec, tau.sinh_ref()) * &pi) / 2u32;
        let qf = q.to_f64();
        if qf.abs() > qmax {
            return false;
        }
        let eq = Float::with_val(prec, q.exp_ref());
        let cosh = Float::with_val(prec, tau.cosh_ref());
        let weight = Float::with_val(prec, &pi * &cosh) / 2u32 * &eq;
        out.push(NodeInf { eq, weight, q: qf });
        true
    };
    if level == 0 {
        push(Float::with_val(prec, 0));
    }
    let (start, step) = if level == 0 { (1u64, 1u64) } else { (1, 2) };
    let mut j = start;
    loop {
        let tau = Float::with_val(prec, j) * Float::with_val(prec, h);
        let a = push(tau.clone());
        let b = push(-tau);
        if !a && !b {
            break;
        }
        j += step;
    }
    let out = Arc::new(out);
    tables
        .lock()
        .expect("node table poisoned")
        .entry((prec, level))
        .or_insert(out)
        .clone()
}

/// Level-doubling driver shared by both rules. `level_sum(L, acc)` adds the
/// weighted integrand values at the nodes new at level `L` into `acc`; the
/// estimate at level `L` is `2^{−L}·Σ_{L' ≤ L}`. Every component must move by
/// less than `2^{log2_target}` between the last two levels.
fn drive<F>(prec: u32, dim: usize, spec: &QuadratureSpec, log2_target: f64, mut level_sum: F) -> Result<Vec<Complex>>
where
    F: FnMut(u32, &mut [Complex]),
{
    let mut total = vec![Complex::with_val(prec, 0); dim];
    let mut prev: Option<Vec<Complex>> = None;
    let mut last_diff = f64::INFINITY;
    for level in 0..=spec.max_level {
        level_sum(level, &mut total);
        let est: Vec<Complex> = total.iter().map(|t| Complex::with_val(prec, t >> level as i32)).collect();
        if level >= spec.min_level {
            if let Some(p) = &prev {
                let d = est
                    .iter()
                    .zip(p)
                    .map(|(a, b)| log2_abs(&Complex::with_val(prec, a - b)))
                    .fold(f64::NEG_INFINITY, f64::max);
                last_diff = d.exp2();
                if d < log2_target {
                    return Ok(est);
                }
            }
        }
        prev = Some(est);
    }
    Err(Error::QuadratureNonConvergence { levels: spec.max_level, last_diff })
}

/// `∫₀¹ f` by tanh-sinh for a vector of `dim` integrands. The closure gets
/// `(u, 1−u, ln u, ln(1−u), out)` and writes the unweighted integrand values
/// into `out`. Nodes with `(π/2) sinh t > q_cut` are skipped (the caller
/// guarantees their contribution is negligible).
pub fn tanh_sinh_vec<F>(
    prec: u32,
    dim: usize,
    spec: &QuadratureSpec,
    log2_target: f64,
    q_cut: f64,
    mut f: F,
) -> Result<Vec<Complex>>
where
    F: FnMut(&Float, &Float, &Float, &Float, &mut [Complex]),
{
    let mut buf = vec![Complex::with_val(prec, 0); dim];
    drive(prec, dim, spec, log2_target, |level, acc| {
        let nodes = nodes01(prec, level);
        for (i, n) in nodes.iter().enumerate() {
            if n.q > q_cut {
                break;
            }
            f(&n.u, &n.v, &n.ln_u, &n.ln_v, &mut buf);
            for (a, b) in acc.iter_mut().zip(&buf) {
                *a += Complex::with_val(prec, b * &n.weight);
            }
            if level == 0 && i == 0 {
                continue;
            }
            f(&n.v, &n.u, &n.ln_v, &n.ln_u, &mut buf);
            for (a, b) in acc.iter_mut().zip(&buf) {
                *a += Complex::with_val(prec, b * &n.weight);
            }
        }
    })
}

/// Scalar form of [`tanh_sinh_vec`] with an absolute target from `spec`.
pub fn tanh_sinh<F>(prec: u32, spec: &QuadratureSpec, q_cut: f64, mut f: F) -> Result<Complex>
where
    F: FnMut(&Float, &Float, &Float, &Float) -> Complex,
{
    let v = tanh_sinh_vec(prec, 1, spec, spec.target.log2(), q_cut, |u, v, lu, lv, out| {
        out[0] = f(u, v, lu, lv);
    })?;
    Ok(v.into_iter().next().expect("one component"))
}

/// `q_cut` for integrands behaving like `u^{a}` and `(1−u)^{b}` (after
/// multiplication by `u(1−u)`) at the endpoints, aiming for `2^{−bits}`.
pub fn tanh_sinh_cut(a: f64, b: f64, bits: u32) -> f64 {
    let e = a.min(b).max(1e-3);
    (f64::from(bits) * LN_2 / (2.0 * e)).min(1e9)
}

/// `∫₀^∞ f(t) dt` by exp-sinh for a vector of integrands, with abscissae
/// `t = scale·e^{q}`; nodes with `t > t_max` are skipped.
pub fn exp_sinh_vec<F>(
    prec: u32,
    dim: usize,
    spec: &QuadratureSpec,
    log2_target: f64,
    scale: f64,
    t_max: f64,
    mut f: F,
) -> Result<Vec<Complex>>
where
    F: FnMut(&Float, &mut [Complex]),
{
    let c = Float::with_val(prec, scale);
    let q_hi = (t_max / scale).ln();
    let mut buf = vec![Complex::with_val(prec, 0); dim];
    drive(prec, dim, spec, log2_target, |level, acc| {
        let nodes = nodes_inf(prec, level);
        for n in nodes.iter() {
            if n.q > q_hi {
                continue;
            }
            let t = Float::with_val(prec, &n.eq * &c);
            let w = Float::with_val(prec, &n.weight * &c);
            f(&t, &mut buf);
            for (a, b) in acc.iter_mut().zip(&buf) {
                *a += Complex::with_val(prec, b * &w);
            }
        }
    })
}

/// Scalar exp-sinh with an absolute target.
pub fn exp_sinh<F>(prec: u32, scale: f64, target: f64, mut f: F) -> Result<Complex>
where
    F: FnMut(&Float) -> Complex,
{
    let t_max = scale + 4.0 * f64::from(prec + 64) * LN_2;
    let spec = QuadratureSpec::with_target(target);
    let v = exp_sinh_vec(prec, 1, &spec, target.log2(), scale, t_max, |t, out| out[0] = f(t))?;
    Ok(v.into_iter().next().expect("one component"))
}

/// Natural log of `∫₀¹ e^{φ(u)} du` for a log-integrand `φ(ln u, ln(1−u), u, 1−u)`
/// given in `f64`; fixed-step tanh-sinh in the log domain so that values far
/// outside the `f64` range are handled. Accuracy is a few parts in 10⁶,
/// enough for the magnitude bounds it is used for.
pub fn ln_integral01<F>(mut phi: F) -> f64
where
    F: FnMut(f64, f64, f64, f64) -> f64,
{
    let h = 1.0 / 64.0;
    let mut terms = Vec::with_capacity(1024);
    for j in -480i32..=480 {
        let t = f64::from(j) * h;
        let q = 0.5 * PI * t.sinh();
        let (ln_u, ln_v) = if q >= 0.0 {
            let e = (-2.0 * q).exp();
            (-e.ln_1p(), -2.0 * q - e.ln_1p())
        } else {
            let e = (2.0 * q).exp();
            (2.0 * q - e.ln_1p(), -e.ln_1p())
        };
        let ln_w = (PI * t.cosh()).ln() + ln_u + ln_v;
        let val = phi(ln_u, ln_v, ln_u.exp(), ln_v.exp());
        if val.is_finite() {
            terms.push(val + ln_w);
        }
    }
    log_sum_exp(&terms) + h.ln()
}

/// Natural log of `∫₀^∞ e^{φ(τ)} dτ` via the substitution `τ = e^{y}`.
pub fn ln_integral_half_line<F>(mut phi: F, y_lo: f64, y_hi: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let h = 1.0 / 128.0;
    let n = ((y_hi - y_lo) / h).ceil() as usize;
    let mut terms = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let y = y_lo + j as f64 * h;
        let v = phi(y.exp()) + y;
        if v.is_finite() {
            terms.push(v);
        }
    }
    log_sum_exp(&terms) + h.ln()
}

pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    #[test]
    fn beta_integral() {
        // ∫ u^{2.5}(1−u)^{0.5} du = B(3.5, 1.5)
        let spec = QuadratureSpec::with_target(1e-60);
        let q = tanh_sinh(P, &spec, 1e9, |_, _, lu, lv| {
            let e = Float::with_val(P, lu * 2.5) + Float::with_val(P, lv * 0.5);
            Complex::with_val(P, (e.exp(), 0))
        })
        .unwrap();
        // B(3.5, 1.5) = Γ(3.5)Γ(1.5)/Γ(5) = (15√π/8)(√π/2)/24 = 15π/384
        let exact = Float::with_val(P, Constant::Pi) * 15u32 / 384u32;
        assert!(Float::with_val(P, q.real() - &exact).abs() < 1e-60);
    }

    #[test]
    fn log_singularity() {
        // ∫ ln u · ln(1−u) du = 2 − π²/6
        let spec = QuadratureSpec::with_target(1e-60);
        let q = tanh_sinh(P, &spec, 1e9, |_, _, lu, lv| Complex::with_val(P, (Float::with_val(P, lu * lv), 0))).unwrap();
        let exact = Float::with_val(P, 2) - Float::with_val(P, Constant::Pi).square() / 6u32;
        assert!(Float::with_val(P, q.real() - &exact).abs() < 1e-60);
    }

    #[test]
    fn log_domain_helpers() {
        // ln B(3.5, 1.5) and ln Γ(5)
        let b = ln_integral01(|lu, lv, _, _| 2.5 * lu + 0.5 * lv);
        assert!((b - (15.0 * PI / 384.0).ln()).abs() < 1e-8);
        let g = ln_integral_half_line(|t| 4.0 * t.ln() - t, -40.0, 6.0);
        assert!((g - 24f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn half_line() {
        // ∫ t^{4} e^{−t} dt = 24
        let q = exp_sinh(P, 4.0, 1e-60, |t| {
            let v = Float::with_val(P, rug::ops::Pow::pow(t, 4i32)) * Float::with_val(P, (-t.clone()).exp());
            Complex::with_val(P, (v, 0))
        })
        .unwrap();
        assert!(Float::with_val(P, q.real() - 24u32).abs() < 1e-55);
    }
}
