//! Independent ground truth over ℚ: Ramanujan's τ, the completed L-function
//! `Λ(Δ, s)` and its derivatives, and level-one cusp form dimensions.

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernelsum::{total, EvalPoint, TruncationParams};
use crate::numberfield::{make_field, FieldSelector};
use crate::specialfn::{gamma, upper_incomplete_gamma, GUARD_BITS};
use crate::specialfn::complex::log2_abs;

const DELTA_WEIGHT: u32 = 12;
const MAX_TERMS: usize = 1_000_000;
const CIRCLE_RADIUS: f64 = 0.2;
const CIRCLE_NODES: usize = 64;

/// `Σ_{n ≥ 1} a(n) qⁿ`; `coeffs[i]` holds `a(i + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QExpansion {
    pub weight: u32,
    pub coeffs: Vec<Integer>,
}

impl QExpansion {
    /// `a(n)` for `1 ≤ n ≤ N`.
    pub fn get(&self, n: usize) -> &Integer {
        &self.coeffs[n - 1]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// `τ(1..=N)` from `Δ = q·(η³/q^{1/8})⁸`, with Jacobi's
/// `∏(1−qⁿ)³ = Σ_{m ≥ 0} (−1)^m (2m+1) q^{m(m+1)/2}` applied eight times as a
/// sparse exact convolution.
pub fn delta_coefficients(n: usize) -> Result<QExpansion> {
    if n > MAX_TERMS {
        return Err(Error::InvalidArgument(format!("N = {n} exceeds {MAX_TERMS}")));
    }
    if n == 0 {
        return Ok(QExpansion { weight: DELTA_WEIGHT, coeffs: Vec::new() });
    }
    // series in q of length n: coefficient of q^j is τ(j+1)
    let mut jacobi = Vec::new();
    for m in 0u64.. {
        let e = (m * (m + 1) / 2) as usize;
        if e >= n {
            break;
        }
        let c = 2 * m as i64 + 1;
        jacobi.push((e, if m % 2 == 0 { c } else { -c }));
    }
    let mut series = vec![Integer::new(); n];
    series[0] = Integer::from(1);
    for _ in 0..8 {
        let mut next = vec![Integer::new(); n];
        for (i, out) in next.iter_mut().enumerate() {
            for &(e, c) in jacobi.iter().take_while(|(e, _)| *e <= i) {
                *out += Integer::from(&series[i - e] * c);
            }
        }
        series = next;
    }
    Ok(QExpansion { weight: DELTA_WEIGHT, coeffs: series })
}

/// Value of the truncated series together with the magnitude of the first
/// omitted term.
#[derive(Debug, Clone)]
pub struct LambdaValue {
    pub value: Complex,
    pub truncation: Float,
}

fn check_strip(s: &Complex, lo: f64, hi: f64) -> Result<()> {
    let re = s.real().to_f64();
    if !(re > lo && re < hi) || !s.imag().is_finite() {
        return Err(Error::InvalidArgument(format!("Re s = {re} outside ({lo}, {hi})")));
    }
    Ok(())
}

/// Below this argument `Γ(s, x) = Γ(s) − γ(s, x)` with the power series for
/// `γ` beats the continued fraction.
const SERIES_MAX_X: f64 = 40.0;

/// `γ(s, x) = x^s e^{−x} Σ_{j ≥ 0} x^j/(s(s+1)⋯(s+j))`.
fn lower_gamma_series(s: &Complex, x: &Float, pw: u32) -> Complex {
    let eps = -f64::from(pw) - 4.0;
    let mut term = Complex::with_val(pw, s.recip_ref());
    let mut acc = term.clone();
    let mut den = s.clone();
    for _ in 0..100_000 {
        den += 1u32;
        term = Complex::with_val(pw, &term * x) / &den;
        acc += &term;
        if den.real().to_f64() > x.to_f64() && log2_abs(&term) - log2_abs(&acc) < eps {
            break;
        }
    }
    let ln_x = Float::with_val(pw, x.ln_ref());
    let expo = Complex::with_val(pw, s * &ln_x) - x;
    acc * expo.exp()
}

/// `Γ(s, x)`; `gamma_s` is `Γ(s)` at working precision.
fn upper_gamma(s: &Complex, gamma_s: &Complex, x: &Float, pw: u32) -> Result<Complex> {
    let xf = x.to_f64();
    if xf >= SERIES_MAX_X {
        return upper_incomplete_gamma(s, x, pw);
    }
    // bits lost to cancellation ≈ log2 Γ(σ) − log2(x^{σ−1} e^{−x})
    let sigma = s.real().to_f64();
    let lost = log2_abs(gamma_s) - ((sigma - 1.0) * xf.log2() - xf * std::f64::consts::LOG2_E);
    let wp = pw + lost.max(0.0).ceil() as u32 + 16;
    let lower = lower_gamma_series(&Complex::with_val(wp, s), &Float::with_val(wp, x), wp);
    Ok(Complex::with_val(pw, Complex::with_val(wp, gamma_s) - lower))
}

/// One term `τ(n)[(2πn)^{−s}Γ(s,2πn) + (2πn)^{s−12}Γ(12−s,2πn)]`.
fn lambda_term(s: &Complex, ks: &Complex, gammas: &(Complex, Complex), tau: &Integer, m: usize, pw: u32) -> Result<Complex> {
    let x = Float::with_val(pw, Constant::Pi) * 2u32 * m as u32;
    let ln_x = Float::with_val(pw, x.ln_ref());
    let left = Complex::with_val(pw, -(s.clone() * &ln_x)).exp() * upper_gamma(s, &gammas.0, &x, pw)?;
    let right = Complex::with_val(pw, -(ks.clone() * &ln_x)).exp() * upper_gamma(ks, &gammas.1, &x, pw)?;
    // (−1)^{k/2} = +1 for k = 12
    Ok((left + right) * tau)
}

fn lambda_with(s: &Complex, tau: &QExpansion, n: usize, prec: u32) -> Result<LambdaValue> {
    let pw = prec + GUARD_BITS;
    let s = Complex::with_val(pw, s);
    let ks = Complex::with_val(pw, Complex::with_val(pw, DELTA_WEIGHT) - &s);
    // Γ at extra precision: the series route subtracts from it
    let gp = pw + 96;
    let gammas = (gamma(&s, gp)?, gamma(&ks, gp)?);
    let mut acc = Complex::with_val(pw, 0);
    let ln_round = -f64::from(pw + 8) * std::f64::consts::LN_2;
    let reach = 2.0 * s.real().to_f64().max(ks.real().to_f64());
    for m in 1..=n {
        // for x > 2·max(σ, 12−σ): |Γ(σ', x)| ≤ 2x^{σ'−1}e^{−x}, so the term is
        // at most 4|τ(m)|e^{−x}/x, and the remaining terms fall geometrically
        let x = 2.0 * std::f64::consts::PI * m as f64;
        if x > reach && !acc.is_zero() {
            let ln_bound = (4.0 * tau.get(m).to_f64().abs()).ln() - x - x.ln();
            if ln_bound < log2_abs(&acc) * std::f64::consts::LN_2 + ln_round {
                let tail = Float::with_val(64, ln_bound).exp() * 2u32;
                return Ok(LambdaValue { value: Complex::with_val(prec, acc), truncation: tail });
            }
        }
        acc += lambda_term(&s, &ks, &gammas, tau.get(m), m, pw)?;
    }
    let next = lambda_term(&s, &ks, &gammas, tau.get(n + 1), n + 1, 64)?;
    Ok(LambdaValue { value: Complex::with_val(prec, acc), truncation: Float::with_val(64, next.abs_ref()) })
}

/// `Λ(Δ, s) = Σ_{n ≤ N} τ(n)[(2πn)^{−s}Γ(s,2πn) + (2πn)^{s−12}Γ(12−s,2πn)]`.
pub fn lambda_delta(s: &Complex, n: usize, prec: u32) -> Result<LambdaValue> {
    check_strip(s, 1.0, 11.0)?;
    if n < 50 {
        return Err(Error::InvalidArgument(format!("N = {n} must be at least 50")));
    }
    let tau = delta_coefficients(n + 1)?;
    lambda_with(s, &tau, n, prec)
}

/// `Λ^{(ℓ)}(Δ, s)` by the trapezoid rule on the circle `|z − s| = 0.2` with
/// 64 nodes, checked against 128 nodes.
pub fn lambda_delta_deriv(ell: usize, s: &Complex, n: usize, prec: u32) -> Result<LambdaValue> {
    check_strip(s, 1.0 + CIRCLE_RADIUS, 11.0 - CIRCLE_RADIUS)?;
    if n < 50 {
        return Err(Error::InvalidArgument(format!("N = {n} must be at least 50")));
    }
    let pw = prec + GUARD_BITS;
    let tau = delta_coefficients(n + 1)?;
    let nodes = 2 * CIRCLE_NODES;
    let r = Float::with_val(pw, CIRCLE_RADIUS);
    let two_pi = Float::with_val(pw, Constant::Pi) * 2u32;
    let omega = |j: usize| {
        let th = Float::with_val(pw, &two_pi * j as u32) / nodes as u32;
        let (sin, cos) = th.sin_cos(Float::new(pw));
        Complex::with_val(pw, (cos, sin))
    };
    let values: Vec<Result<(Complex, Float)>> = (0..nodes)
        .into_par_iter()
        .map(|j| {
            let w = omega(j);
            let z = Complex::with_val(pw, &w * &r) + s;
            let v = lambda_with(&z, &tau, n, prec)?;
            // f(z_j)·ω_j^{−ℓ}
            let mut wl = Complex::with_val(pw, 1);
            let wc = Complex::with_val(pw, w.conj_ref());
            for _ in 0..ell {
                wl *= &wc;
            }
            Ok((Complex::with_val(pw, &v.value * &wl), v.truncation))
        })
        .collect();
    let mut full = Complex::with_val(pw, 0);
    let mut half = Complex::with_val(pw, 0);
    let mut max_abs = Float::with_val(64, 0);
    let mut trunc = Float::with_val(64, 0);
    for (j, v) in values.into_iter().enumerate() {
        let (v, t) = v?;
        max_abs = max_abs.max(&Float::with_val(64, v.abs_ref()));
        trunc = trunc.max(&t);
        if j % 2 == 0 {
            half += &v;
        }
        full += v;
    }
    // ℓ!/(M r^ℓ)
    let mut fact = Float::with_val(pw, 1);
    for i in 1..=ell {
        fact *= i as u32;
    }
    let scale = Float::with_val(pw, &fact / Pow::pow(r.clone(), ell as u32));
    let full = full * Float::with_val(pw, &scale / nodes as u32);
    let half = half * Float::with_val(pw, &scale / CIRCLE_NODES as u32);
    let diff = Float::with_val(64, Complex::with_val(pw, &full - &half).abs_ref());
    let mag = Float::with_val(64, &max_abs * &scale);
    let tol = Float::with_val(64, &mag * Float::with_val(64, Float::i_exp(1, -((prec * 3 / 4) as i32))));
    if diff > tol {
        return Err(Error::NonConvergence(format!(
            "Cauchy circle: doubling the nodes changed the value by {:e}",
            diff.to_f64()
        )));
    }
    // an error ε in Λ on the circle moves the derivative by at most ε·ℓ!/r^ℓ
    let truncation = Float::with_val(64, &trunc * &scale) + diff;
    Ok(LambdaValue { value: Complex::with_val(prec, full), truncation })
}

/// `dim S_k(SL₂(ℤ))` for even `k`.
pub fn dim_cuspforms_level1(k: u32) -> Result<u32> {
    if k % 2 != 0 || !(4..=40).contains(&k) {
        return Err(Error::InvalidArgument(format!("weight k = {k} must be even in [4, 40]")));
    }
    Ok(if k % 12 == 2 { k / 12 - 1 } else { k / 12 })
}

/// Kernel ratio against the direct ratio at two points of weight 12.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub ell: usize,
    pub r_kernel: Complex,
    pub r_direct: Complex,
    pub residual: Float,
    /// first-order propagation of both tail bounds into `R_kernel`
    pub kernel_error: Float,
    pub a1: Complex,
    pub a2: Complex,
    pub tail1: Float,
    pub tail2: Float,
}

/// `A(ℓ, s₁)/A(ℓ, s₂)` against `Λ^{(ℓ)}(Δ, s₁)/Λ^{(ℓ)}(Δ, s₂)` over ℚ.
pub fn compare_average(p1: &EvalPoint, p2: &EvalPoint, tr: &TruncationParams, n_terms: usize) -> Result<CompareReport> {
    if p1.k != DELTA_WEIGHT || p2.k != DELTA_WEIGHT {
        return Err(Error::InvalidArgument("the Δ comparison needs weight 12".into()));
    }
    if p1.ell != p2.ell {
        return Err(Error::InvalidArgument("both points need the same derivative order".into()));
    }
    let prec = p1.prec.max(p2.prec);
    let field = make_field(FieldSelector::Q)?;
    let b1 = total(&field, p1, tr)?;
    let b2 = if p1 == p2 { b1.clone() } else { total(&field, p2, tr)? };
    let a2_abs = Float::with_val(64, b2.a.abs_ref());
    if a2_abs < Float::with_val(64, &b2.tail_bound * 10u32) {
        return Err(Error::DegenerateDenominator(b2.tail_bound.to_f64()));
    }
    let r_kernel = Complex::with_val(prec, &b1.a / &b2.a);
    let r_direct = if p1 == p2 {
        Complex::with_val(prec, 1)
    } else {
        let direct = |p: &EvalPoint| {
            if p.ell == 0 {
                lambda_delta(p.s(), n_terms, prec)
            } else {
                lambda_delta_deriv(p.ell, p.s(), n_terms, prec)
            }
        };
        let (l1, l2) = (direct(p1)?, direct(p2)?);
        Complex::with_val(prec, &l1.value / &l2.value)
    };
    let residual = Float::with_val(64, Complex::with_val(prec, &r_kernel - &r_direct).abs_ref());
    let a1_abs = Float::with_val(64, b1.a.abs_ref());
    let rel = if a1_abs.is_zero() {
        Float::with_val(64, f64::INFINITY)
    } else {
        Float::with_val(64, &b1.tail_bound / &a1_abs) + Float::with_val(64, &b2.tail_bound / &a2_abs)
    };
    let kernel_error = Float::with_val(64, r_kernel.abs_ref()) * rel;
    Ok(CompareReport {
        ell: p1.ell,
        r_kernel,
        r_direct,
        residual,
        kernel_error,
        a1: b1.a,
        a2: b2.a,
        tail1: b1.tail_bound,
        tail2: b2.tail_bound,
    })
}

/// One point of the dimension-zero check.
#[derive(Debug, Clone, Serialize)]
pub struct DimZeroCase {
    pub k: u32,
    pub ell: usize,
    pub delta: String,
    pub t0: String,
    pub abs_a: f64,
    pub tail_bound: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// `|A(ℓ, s)| < max(10·tail, 10⁻²⁰)` over ℚ at a weight with no cusp forms.
pub fn dim_zero_case(p: &EvalPoint, tr: &TruncationParams) -> Result<DimZeroCase> {
    let dim = dim_cuspforms_level1(p.k)?;
    if dim != 0 {
        return Err(Error::InvalidArgument(format!("dim S_{} = {dim}; the average need not vanish", p.k)));
    }
    let b = total(&make_field(FieldSelector::Q)?, p, tr)?;
    let abs_a = Float::with_val(64, b.a.abs_ref()).to_f64();
    let tail = b.tail_bound.to_f64();
    let threshold = (10.0 * tail).max(1e-20);
    Ok(DimZeroCase {
        k: p.k,
        ell: p.ell,
        delta: crate::report::decimal(&p.delta, 6),
        t0: crate::report::decimal(&p.t0, 6),
        abs_a,
        tail_bound: tail,
        threshold,
        pass: abs_a < threshold,
    })
}

#[cfg(test)]
mod tests;
