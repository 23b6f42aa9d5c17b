//! The first-coefficient identity: normalized terms `Î₁`, `Î₂`, `Î₃`, the
//! `E`-sums, the implied spectral average `A(ℓ, s)`, tails, and the general
//! Fourier coefficient `r_{s,k}(ν)`.

mod coeff;
mod esum;
mod point;
mod tail;

use rug::float::Constant;
use rug::{Complex, Float};

pub use coeff::{r_coeff, InvDiffElement, RCoeff};
pub use esum::{e_sums, ESums};
pub use point::{Branch, EvalPoint, TruncationParams};

use crate::error::{Error, Result};
use crate::numberfield::{FieldDescriptor, UnitWindow};
use crate::specialfn::quadrature::log_sum_exp;
use crate::specialfn::{digamma, gamma_deriv_ratios, log_gamma, GUARD_BITS};
use esum::{box_pairs, e_sums_ctx, ln_tail_outside, Context};

/// All terms of the normalized identity at one point.
#[derive(Debug, Clone)]
pub struct TermBreakdown {
    pub i1n: Complex,
    pub i2n: Complex,
    pub i3n: Complex,
    pub e1: Complex,
    pub e2: Complex,
    /// `T = Î₁ + Î₂ + Î₃`
    pub t: Complex,
    /// the spectral average `Σ_f Λ^{(ℓ)}(f, s)/⟨f, f⟩`
    pub a: Complex,
    /// `(n log 2π − n ψ(k−s))^ℓ`
    pub p_model: Complex,
    /// bound on the truncation error of `A`
    pub tail_bound: Float,
    /// the same bound in the units of `T`
    pub tail_bound_t: Float,
    pub terms_evaluated: usize,
    pub terms_skipped: usize,
}

fn binom(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// `Σ_{|ν|=r} multinomial ∏_t g_{ν_t}` for `n` identical factors.
fn composition_sum(g: &[Complex], r: usize, n: usize, pw: u32) -> Complex {
    match n {
        1 => g[r].clone(),
        2 => {
            let mut acc = Complex::with_val(pw, 0);
            for v in 0..=r {
                acc += Complex::with_val(pw, &g[v] * &g[r - v]) * binom(r, v);
            }
            acc
        }
        _ => unreachable!("degree ≤ 2"),
    }
}

fn ln_2pi(pw: u32) -> Float {
    (Float::with_val(pw, Constant::Pi) * 2u32).ln()
}

fn sign_nk2(n: usize, k: u32) -> i32 {
    if (n as u32 * k / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Σ_j (−1)^{ℓ−j} C(ℓ,j)(n log 2π)^j Σ_{|ν|=ℓ−j} multinomial ∏_t Γ^{(ν_t)}(k−s)/Γ(k−s)`.
pub fn i1_normalized(field: &FieldDescriptor, p: &EvalPoint) -> Result<Complex> {
    let pw = p.prec + GUARD_BITS;
    let n = field.degree;
    let ks = Complex::with_val(pw, Complex::with_val(pw, p.k) - p.s());
    let g = gamma_deriv_ratios(p.ell, &ks, pw)?;
    let l = Float::with_val(pw, ln_2pi(pw) * n as u32);
    let mut acc = Complex::with_val(pw, 0);
    let mut lp = Float::with_val(pw, 1);
    for j in 0..=p.ell {
        let mut t = composition_sum(&g, p.ell - j, n, pw) * &lp * binom(p.ell, j);
        if (p.ell - j) % 2 == 1 {
            t = -t;
        }
        acc += t;
        lp *= &l;
    }
    Ok(Complex::with_val(p.prec, acc))
}

/// `(−1)^{nk/2}(2π)^{n(k−2s)}(Γ(s)/Γ(k−s))ⁿ Σ_j (−1)^j C(ℓ,j)(n log 2π)^j Σ_{|ν|=ℓ−j} multinomial ∏_t Γ^{(ν_t)}(s)/Γ(s)`.
pub fn i2_normalized(field: &FieldDescriptor, p: &EvalPoint) -> Result<Complex> {
    let pw = p.prec + GUARD_BITS;
    let n = field.degree;
    let s = Complex::with_val(pw, p.s());
    let ks = Complex::with_val(pw, Complex::with_val(pw, p.k) - &s);
    let g = gamma_deriv_ratios(p.ell, &s, pw)?;
    let l2 = ln_2pi(pw);
    let l = Float::with_val(pw, &l2 * n as u32);
    let mut acc = Complex::with_val(pw, 0);
    let mut lp = Float::with_val(pw, 1);
    for j in 0..=p.ell {
        let mut t = composition_sum(&g, p.ell - j, n, pw) * &lp * binom(p.ell, j);
        if j % 2 == 1 {
            t = -t;
        }
        acc += t;
        lp *= &l;
    }
    // log of (2π)^{n(k−2s)} (Γ(s)/Γ(k−s))ⁿ
    let k2s = Complex::with_val(pw, Complex::with_val(pw, p.k) - Complex::with_val(pw, &s * 2u32));
    let lg = log_gamma(&s, pw)? - log_gamma(&ks, pw)?;
    let lf = (Complex::with_val(pw, &k2s * &l2) + lg) * n as u32;
    let v = acc * lf.exp() * sign_nk2(n, p.k);
    Ok(Complex::with_val(p.prec, v))
}

/// Normalizers relating `E`, `T` and `A`.
struct Normalizers {
    /// `Î₃ = pref3·(E₁ + E₂)`
    pref3: Complex,
    /// `A = conv·T`
    conv: Complex,
}

fn normalizers(field: &FieldDescriptor, p: &EvalPoint) -> Result<Normalizers> {
    let pw = p.prec + GUARD_BITS;
    let n = field.degree as u32;
    let s = Complex::with_val(pw, p.s());
    let ks = Complex::with_val(pw, Complex::with_val(pw, p.k) - &s);
    let l2 = ln_2pi(pw);
    let lg_ks = log_gamma(&ks, pw)?;
    let sign = sign_nk2(field.degree, p.k);
    // (−1)^{nk/2}(2π)^{n(k−s)} / (Γⁿ(k−s)·[O^×:O^{×+}])
    let pref3 = (Complex::with_val(pw, &ks * &l2) * n - Complex::with_val(pw, &lg_ks * n)).exp() * sign / field.unit_index;
    // (2π)^{ns}Γⁿ(k−s) / (√|d_F| · (−1)^{nk/2}πⁿ2^{n(2−k)}Γⁿ(k−1))
    let pi = Float::with_val(pw, Constant::Pi);
    let ln2 = Float::with_val(pw, Constant::Log2);
    let lg_k1 = log_gamma(&Complex::with_val(pw, p.k - 1), pw)?;
    let ln_ck = Complex::with_val(pw, &lg_k1 * n) + Float::with_val(pw, pi.ln_ref()) * n + Float::with_val(pw, &ln2 * (n as i32 * (2 - p.k as i32)));
    let ln_sqrt_d = Float::with_val(pw, field.discriminant.abs()).ln() / 2u32;
    let conv = (Complex::with_val(pw, &s * &l2) * n + Complex::with_val(pw, &lg_ks * n) - ln_ck - ln_sqrt_d).exp() * sign;
    Ok(Normalizers { pref3, conv })
}

/// `Î₃ = (−1)^{nk/2}(2π)^{n(k−s)}/(Γⁿ(k−s)[O^×:O^{×+}])·(E₁ + E₂)`.
pub fn i3_normalized(field: &FieldDescriptor, p: &EvalPoint, tr: &TruncationParams) -> Result<Complex> {
    let e = e_sums(field, p, tr)?;
    let nz = normalizers(field, p)?;
    Ok(Complex::with_val(p.prec, nz.pref3 * (e.e1 + e.e2)))
}

fn abs_float(z: &Complex) -> Float {
    Float::with_val(53, z.abs_ref())
}

/// Bound on the truncation error of `A` from the discarded region alone
/// (outside the box and units `|m| > M`); no terms are evaluated.
pub fn tail_estimate(field: &FieldDescriptor, p: &EvalPoint, tr: &TruncationParams) -> Result<Float> {
    let ctx = Context::new(field, p, tr)?;
    let model = ctx.tail_model(1.0);
    let groups = box_pairs(field, tr, UnitWindow::default())?;
    let ln_e = ln_tail_outside(&ctx, &model, &groups);
    let nz = normalizers(field, p)?;
    let scale = abs_float(&nz.pref3) * abs_float(&nz.conv);
    Ok(Float::with_val(53, ln_e).exp() * scale)
}

/// Every term, the average `A`, and the combined tail bound.
pub fn total(field: &FieldDescriptor, p: &EvalPoint, tr: &TruncationParams) -> Result<TermBreakdown> {
    let pw = p.prec + GUARD_BITS;
    let i1n = i1_normalized(field, p)?;
    let i2n = i2_normalized(field, p)?;
    let ctx = Context::new(field, p, tr)?;
    let e = e_sums_ctx(&ctx)?;
    let nz = normalizers(field, p)?;
    let i3n = Complex::with_val(pw, &nz.pref3 * Complex::with_val(pw, &e.e1 + &e.e2));
    let t = Complex::with_val(pw, &i1n + &i2n) + &i3n;
    let a = Complex::with_val(pw, &t * &nz.conv);

    // truncation in T units plus a rounding allowance
    let pref_abs = abs_float(&nz.pref3);
    let ln_pref = pref_abs.to_f64().ln();
    let scale_ln = log_sum_exp(&[0.0, abs_float(&i1n).to_f64().ln(), abs_float(&i2n).to_f64().ln(), ln_pref + e.ln_leading]);
    let ln_round = scale_ln - f64::from(p.prec - 8) * std::f64::consts::LN_2;
    let ln_tail_t = log_sum_exp(&[ln_pref + e.ln_tail, ln_round]);
    let tail_t = Float::with_val(53, ln_tail_t).exp();
    if let Some(max) = tr.max_tail {
        if tail_t > max {
            return Err(Error::TruncationTooSmall { tail: tail_t.to_f64(), target: max });
        }
    }
    let tail_a = Float::with_val(53, &tail_t * abs_float(&nz.conv));

    let n = field.degree as u32;
    let ks = Complex::with_val(pw, Complex::with_val(pw, p.k) - p.s());
    let base = (Complex::with_val(pw, ln_2pi(pw)) - digamma(&ks, pw)?) * n;
    let mut p_model = Complex::with_val(pw, 1);
    for _ in 0..p.ell {
        p_model *= &base;
    }
    let out = |z: Complex| Complex::with_val(p.prec, z);
    Ok(TermBreakdown {
        i1n,
        i2n: out(i2n),
        i3n: out(i3n),
        e1: e.e1,
        e2: e.e2,
        t: out(t),
        a: out(a),
        p_model: out(p_model),
        tail_bound: tail_a,
        tail_bound_t: tail_t,
        terms_evaluated: e.evaluated,
        terms_skipped: e.skipped,
    })
}

#[cfg(test)]
mod tests;
