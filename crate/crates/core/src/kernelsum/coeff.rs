//! The general Fourier coefficient `r_{s,k}(ν)` of the kernel, assembled
//! directly from complex powers (independently of the `E`-sum path).

use rug::float::Constant;
use rug::{Complex, Float};

use super::esum::{box_pairs, ln_tail_outside, Context};
use super::point::{Branch, EvalPoint, TruncationParams};
use crate::error::{Error, Result};
use crate::numberfield::{AlgebraicInt, FieldDescriptor, UnitWindow};
use crate::specialfn::gamma;

/// `ν = num/den`, an element of `F` that should lie in the inverse different.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvDiffElement {
    pub num: AlgebraicInt,
    pub den: AlgebraicInt,
}

impl InvDiffElement {
    pub fn integral(num: AlgebraicInt) -> Self {
        InvDiffElement { num, den: AlgebraicInt::ONE }
    }
}

#[derive(Debug, Clone)]
pub struct RCoeff {
    pub value: Complex,
    /// bound on the truncation error of `value`
    pub tail: Float,
}

/// `r_{s,k}(ν)` for `ℓ = 0`: the two Gamma terms plus the `(a, c, η)` sum
/// with `₁F₁` written through `₁f₁`.
pub fn r_coeff(field: &FieldDescriptor, nu: &InvDiffElement, p: &EvalPoint, tr: &TruncationParams) -> Result<RCoeff> {
    if p.ell != 0 {
        return Err(Error::InvalidArgument("r_coeff is defined for ℓ = 0 only".into()));
    }
    if nu.num.is_zero() || nu.den.is_zero() {
        return Err(Error::ZeroElement);
    }
    let n = field.degree;
    if field.exact_div(field.mul(nu.num, field.different), nu.den).is_none() {
        return Err(Error::NotInInverseDifferent);
    }
    if (0..n).any(|t| field.sign_at(nu.num, t) != field.sign_at(nu.den, t)) {
        return Err(Error::NotTotallyPositive);
    }
    let ctx = Context::new(field, p, tr)?;
    let pw = ctx.pw;
    let ip = ctx.engine.input_prec() + 16;
    let s = Complex::with_val(pw, p.s());
    let k = p.k;
    let nu_emb: Vec<Float> = field
        .embeddings(nu.num, ip)
        .into_iter()
        .zip(field.embeddings(nu.den, ip))
        .map(|(a, b)| a / b)
        .collect();
    let norm_nu = Float::with_val(pw, field.norm(nu.num)) / field.norm(nu.den);
    let two_pi = Float::with_val(pw, Constant::Pi) * 2u32;
    let sqrt_d = Float::with_val(pw, field.discriminant.abs()).sqrt();
    let sign = if (n as u32 * k / 2) % 2 == 0 { 1 } else { -1 };
    let cpow = |base: &Float, e: &Complex| Complex::with_val(pw, base.ln_ref()).mul_ref_exp(e, pw);
    let ks = Complex::with_val(pw, Complex::with_val(pw, k) - &s);
    let g_ks = gamma(&ks, pw)?;
    let g_s = gamma(&s, pw)?;
    let mut g_ks_n = Complex::with_val(pw, 1);
    let mut g_s_n = Complex::with_val(pw, 1);
    for _ in 0..n {
        g_ks_n *= &g_ks;
        g_s_n *= &g_s;
    }
    let nf = n as u32;
    let s_n = Complex::with_val(pw, &s * nf);
    let ks_n = Complex::with_val(pw, &ks * nf);
    let term1 = cpow(&two_pi, &s_n) * &g_ks_n * cpow(&norm_nu, &Complex::with_val(pw, &s - 1u32)) / &sqrt_d;
    let term2 = cpow(&two_pi, &ks_n) * &g_s_n * cpow(&norm_nu, &Complex::with_val(pw, &ks - 1u32)) / &sqrt_d * sign;

    let groups = box_pairs(field, tr, UnitWindow::default())?;
    let units: Vec<AlgebraicInt> = if n == 1 {
        vec![AlgebraicInt::ONE]
    } else {
        (-(tr.m_units as i64)..=tr.m_units as i64).map(|m| field.unit_power(m)).collect()
    };
    let sk = Complex::with_val(pw, &s - k);
    let neg_s = Complex::with_val(pw, -&s);
    let e_neg = Complex::with_val(pw, (0, Float::with_val(pw, -Float::with_val(pw, Constant::Pi)))).mul_ref_exp(&s, pw);
    let mut sum = Complex::with_val(pw, 0);
    for pr in groups.iter().flatten() {
        let pow = match tr.branch {
            Branch::Principal => {
                let nc = Complex::with_val(pw, pr.norm_c);
                let na = Complex::with_val(pw, pr.norm_a);
                Complex::with_val(pw, rug::ops::Pow::pow(&nc, &sk)) * Complex::with_val(pw, rug::ops::Pow::pow(&na, &neg_s))
            }
            Branch::AbsSign => {
                let ea = field.embeddings(pr.a, pw);
                let ec = field.embeddings(pr.c, pw);
                let mut acc = Complex::with_val(pw, 1);
                for t in 0..n {
                    acc *= cpow(&Float::with_val(pw, ec[t].abs_ref()), &sk) * cpow(&Float::with_val(pw, ea[t].abs_ref()), &neg_s);
                    if ea[t].is_sign_negative() != ec[t].is_sign_negative() {
                        acc *= &e_neg;
                    }
                }
                acc
            }
        };
        for eta in &units {
            let ec = field.mul(*eta, pr.c);
            let (num, den) = field.trace_fraction(field.mul(nu.num, pr.d0), field.mul(nu.den, ec))?;
            let angle = Float::with_val(pw, &two_pi * num) / den;
            let chr = Complex::with_val(pw, (0, angle)).exp();
            let xi = field.mul(pr.a, ec);
            let mut prod = Complex::with_val(pw, 1);
            for x in ctx.kummer_args(xi, &nu_emb) {
                prod *= &ctx.engine.eval(&x)?[0];
            }
            sum += Complex::with_val(pw, &pow * &chr) * prod;
        }
    }
    // (−1)^{nk/2}(2π)^{nk} i^{ns} N(ν)^{k−1} / ([O^×:O^{×+}]√|d_F|)
    let i_ns = Complex::with_val(pw, (0, Float::with_val(pw, Constant::Pi) / 2u32)).mul_ref_exp(&s_n, pw);
    let pre_abs = Float::with_val(pw, Float::with_val(pw, two_pi.ln_ref()) * (n as u32 * k)).exp()
        * Float::with_val(pw, Float::with_val(pw, norm_nu.ln_ref()) * (k - 1)).exp()
        / field.unit_index
        / &sqrt_d;
    let term3 = sum * i_ns * &pre_abs * sign;
    let value = Complex::with_val(p.prec, term1 + term2 + term3);

    let nu_min = nu_emb.iter().map(|v| v.to_f64().abs()).fold(f64::INFINITY, f64::min);
    let model = ctx.tail_model(nu_min);
    let ln_e = ln_tail_outside(&ctx, &model, &groups);
    let tail = Float::with_val(53, ln_e).exp() * Float::with_val(53, &pre_abs);
    Ok(RCoeff { value, tail })
}

trait MulRefExp {
    fn mul_ref_exp(&self, e: &Complex, pw: u32) -> Complex;
}

impl MulRefExp for Complex {
    /// `exp(self·e)`
    fn mul_ref_exp(&self, e: &Complex, pw: u32) -> Complex {
        Complex::with_val(pw, self * e).exp()
    }
}
