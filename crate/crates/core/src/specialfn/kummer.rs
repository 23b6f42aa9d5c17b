//! The Beta-regularized Kummer function
//! `₁f₁(s, k, ix) = ∫₀¹ e^{ixu} u^{s−1}(1−u)^{k−s−1} du` and its s-derivatives
//! `∫₀¹ e^{ixu} L(u)^ν u^{s−1}(1−u)^{k−s−1} du`, `L(u) = log(u/(1−u))`.
//!
//! Three independent evaluation routes are provided:
//! * [`kummer_reg_deriv`] — direct tanh-sinh quadrature on `[0, 1]`;
//! * [`KummerEngine`] moment series — `Σ_j (ix)^j/j! · ∂_s^ν B(s+j, k−s)`, with
//!   the Beta derivatives in closed form through polygamma values;
//! * [`KummerEngine`] contour route for large `|x|` — the segment is deformed
//!   to two vertical rays where `e^{ixu}` decays, evaluated by exp-sinh.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use rug::float::Constant;
use rug::{Complex, Float, Integer, Rational};

use super::bell::bell_complete;
use super::complex::{abs_f64, log2_abs};
use super::gamma::log_gamma;
use super::polygamma::polygamma_all;
use super::quadrature::{
    exp_sinh_vec, ln_integral01, ln_integral_half_line, tanh_sinh_cut, tanh_sinh_vec, QuadratureSpec,
};
use super::GUARD_BITS;
use crate::error::{Error, Result};

pub const MAX_DERIV: usize = 8;

fn check_args(ell: usize, s: &Complex, k: u32) -> Result<(f64, f64)> {
    if ell > MAX_DERIV {
        return Err(Error::InvalidArgument(format!("derivative order {ell} exceeds {MAX_DERIV}")));
    }
    let sigma = s.real().to_f64();
    let kf = f64::from(k);
    if !(sigma > 0.0 && kf - sigma > 0.0) {
        return Err(Error::InvalidArgument("₁f₁ integral needs 0 < Re s < k".into()));
    }
    Ok((sigma, s.imag().to_f64()))
}

/// `ln B(σ, k−σ)` for real σ, used to scale absolute quadrature targets.
fn ln_beta_real(sigma: f64, k: u32) -> f64 {
    let lg = |x: f64| {
        log_gamma(&Complex::with_val(64, (x, 0)), 64)
            .map(|v| v.real().to_f64())
            .unwrap_or(f64::NAN)
    };
    lg(sigma) + lg(f64::from(k) - sigma) - lg(f64::from(k))
}

/// `[d^ν/ds^ν ₁f₁(s, k, ix)]_{ν=0..=ell}` by direct tanh-sinh quadrature.
/// `spec.target` is relative to `B(Re s, k − Re s)`.
pub fn kummer_reg_derivs(
    ell: usize,
    s: &Complex,
    k: u32,
    x: &Float,
    spec: &QuadratureSpec,
    prec: u32,
) -> Result<Vec<Complex>> {
    let (sigma, _) = check_args(ell, s, k)?;
    let pw = prec + GUARD_BITS;
    let sm1 = Complex::with_val(pw, s - 1u32);
    let ksm1 = Complex::with_val(pw, Complex::with_val(pw, k - 1) - s);
    let x = Float::with_val(pw, x);
    let log2_target = spec.target.log2() + ln_beta_real(sigma, k) / LN_2;
    let q_cut = tanh_sinh_cut(sigma, f64::from(k) - sigma, pw);
    let vals = tanh_sinh_vec(pw, ell + 1, spec, log2_target, q_cut, |u, _v, lu, lv, out| {
        let mut e = Complex::with_val(pw, &sm1 * lu) + Complex::with_val(pw, &ksm1 * lv);
        *e.mut_imag() += Float::with_val(pw, &x * u);
        let base = e.exp();
        let l = Float::with_val(pw, lu - lv);
        out[0] = base;
        for nu in 1..=ell {
            out[nu] = Complex::with_val(pw, &out[nu - 1] * &l);
        }
    })?;
    Ok(vals.into_iter().map(|v| Complex::with_val(prec, v)).collect())
}

/// `d^ℓ/ds^ℓ ₁f₁(s, k, ix)` by direct tanh-sinh quadrature (see [`kummer_reg_derivs`]).
pub fn kummer_reg_deriv(
    ell: usize,
    s: &Complex,
    k: u32,
    x: &Float,
    spec: &QuadratureSpec,
    prec: u32,
) -> Result<Complex> {
    Ok(kummer_reg_derivs(ell, s, k, x, spec, prec)?.swap_remove(ell))
}

/// `₁F₁(a; b; z)` for integers `a`, `b > 0` by its power series, with the
/// coefficients `(a)_n/((b)_n n!)` kept as exact rationals.
pub fn kummer_series_exact(a: i64, b: i64, z: &Complex, prec: u32) -> Complex {
    let pw = prec + GUARD_BITS + (2.0 * abs_f64(z)) as u32;
    let z = Complex::with_val(pw, z);
    let mut coef = Rational::from(1);
    let mut zp = Complex::with_val(pw, 1);
    let mut acc = Complex::with_val(pw, 0);
    let zabs = abs_f64(&z);
    for n in 0..100_000i64 {
        let term = Complex::with_val(pw, &zp * Float::with_val(pw, &coef));
        acc += &term;
        if coef == 0 {
            break;
        }
        if n as f64 > 2.0 * zabs && log2_abs(&term) < log2_abs(&acc) - f64::from(pw) {
            break;
        }
        coef *= Rational::from((Integer::from(a + n), Integer::from((b + n) * (n + 1))));
        zp *= &z;
    }
    Complex::with_val(prec, acc)
}

/// Magnitude bounds for `|d^ν/ds^ν ₁f₁(s, k, ix)|`, all stored as natural logs:
/// * `ln_m[ν]  = ln ∫|L|^ν |g|` (bound for every x),
/// * `ln_tv[ν] = ln ∫|d/du (L^ν g)|` (bound `TV/|x|` after one integration by parts),
/// * large-|x| bound valid for `|x| ≥ x0` from the contour representation.
#[derive(Debug, Clone)]
pub struct KummerBounds {
    pub sigma: f64,
    pub k: u32,
    pub t0: f64,
    pub ln_m: Vec<f64>,
    pub ln_tv: Vec<f64>,
    pub x0: f64,
    ln_ja: Vec<f64>,
    ln_jb: Vec<f64>,
}

fn ln_binom(n: usize, j: usize) -> f64 {
    let mut r = 0.0;
    for i in 0..j {
        r += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
    }
    r
}

impl KummerBounds {
    pub fn new(s: &Complex, k: u32, ell: usize) -> Self {
        let sigma = s.real().to_f64();
        let t0 = s.imag().to_f64();
        let kf = f64::from(k);
        let a = sigma - 1.0;
        let b = kf - sigma - 1.0;
        let s_m1 = (a * a + t0 * t0).sqrt();
        let ks_m1 = (b * b + t0 * t0).sqrt();
        let mut ln_m = Vec::with_capacity(ell + 1);
        let mut ln_tv = Vec::with_capacity(ell + 1);
        for nu in 0..=ell {
            let nuf = nu as f64;
            ln_m.push(ln_integral01(|lu, lv, _, _| {
                let l = (lu - lv).abs();
                a * lu + b * lv + if nu > 0 { nuf * l.ln() } else { 0.0 }
            }));
            // boundary terms of the integration by parts vanish only for σ > 1, k − σ > 1
            if a <= 0.0 || b <= 0.0 {
                ln_tv.push(f64::INFINITY);
                continue;
            }
            // |g_ν'| ≤ |g|·[(|s−1|/u + |k−s−1|/(1−u))|L|^ν + ν|L|^{ν−1}/(u(1−u))]
            ln_tv.push(ln_integral01(|lu, lv, u, v| {
                let l = (lu - lv).abs();
                let base = a * lu + b * lv;
                let first = (s_m1 / u + ks_m1 / v).ln() + if nu > 0 { nuf * l.ln() } else { 0.0 };
                let total = if nu > 0 {
                    let second = nuf.ln() + (nuf - 1.0) * l.ln() - lu - lv;
                    let m = first.max(second);
                    m + ((first - m).exp() + (second - m).exp()).ln()
                } else {
                    first
                };
                base + total
            }));
        }
        let x0 = kf.max(8.0);
        let y_hi = (4.0 * (kf + 10.0)).ln() + 2.0;
        let mut ln_ja = Vec::with_capacity(ell + 1);
        let mut ln_jb = Vec::with_capacity(ell + 1);
        for i in 0..=ell {
            let fi = i as f64;
            let j = |p: f64, alpha: f64| {
                ln_integral_half_line(
                    |tau| {
                        let lq = (tau * tau / (x0 * x0)).ln_1p();
                        let w = tau.ln().abs() + PI + 0.5 * lq;
                        -tau + (p - 1.0) * tau.ln() + alpha * lq + if i > 0 { fi * w.ln() } else { 0.0 }
                    },
                    -60.0,
                    y_hi,
                )
            };
            ln_ja.push(j(sigma, (b / 2.0).max(0.0)));
            ln_jb.push(j(kf - sigma, (a / 2.0).max(0.0)));
        }
        // 1% safety margin on the numerically integrated constants
        let margin = 0.01f64.ln_1p();
        for v in ln_m.iter_mut().chain(ln_tv.iter_mut()).chain(ln_ja.iter_mut()).chain(ln_jb.iter_mut()) {
            *v += margin;
        }
        KummerBounds { sigma, k, t0, ln_m, ln_tv, x0, ln_ja, ln_jb }
    }

    /// Large-|x| bound from the contour representation (valid for `|x| ≥ x0`).
    fn ln_large(&self, nu: usize, x_abs: f64) -> f64 {
        let lx = x_abs.ln();
        let ln_lx = lx.max(1e-300).ln();
        let kf = f64::from(self.k);
        let mut terms = Vec::with_capacity(2 * nu + 2);
        for j in 0..=nu {
            let c = ln_binom(nu, j) + if j > 0 { j as f64 * ln_lx } else { 0.0 };
            terms.push(c - self.sigma * lx + self.ln_ja[nu - j]);
            terms.push(c - (kf - self.sigma) * lx + self.ln_jb[nu - j]);
        }
        PI * self.t0.abs() + super::quadrature::log_sum_exp(&terms)
    }

    /// `ln` of an upper bound for `|d^ν/ds^ν ₁f₁(s, k, ix)|`.
    pub fn ln_bound(&self, nu: usize, x_abs: f64) -> f64 {
        let mut b = self.ln_m[nu];
        if x_abs > 0.0 {
            b = b.min(self.ln_tv[nu] - x_abs.ln());
        }
        if x_abs >= self.x0 {
            b = b.min(self.ln_large(nu, x_abs));
        }
        b
    }

    /// `ln` of a bound valid uniformly for all `|x'| ≥ x_abs`: the large-|x|
    /// bound is used only where each of its terms `X^{−p}(log X)^j` is already
    /// decreasing.
    pub fn ln_bound_beyond(&self, nu: usize, x_abs: f64) -> f64 {
        let mut b = self.ln_m[nu];
        if x_abs > 0.0 {
            b = b.min(self.ln_tv[nu] - x_abs.ln());
        }
        let p = self.sigma.min(f64::from(self.k) - self.sigma);
        if x_abs >= self.x0 && p * x_abs.ln() >= nu as f64 {
            b = b.min(self.ln_large(nu, x_abs));
        }
        b
    }
}

/// Precomputed evaluator of `[d^ν/ds^ν ₁f₁(s, k, ix)]_{ν ≤ ell}` for fixed
/// `(s, k)` and many real `x`.
#[derive(Debug)]
pub struct KummerEngine {
    s: Complex,
    k: u32,
    ell: usize,
    prec: u32,
    /// `|x|` up to which the moment series is used.
    x_series: f64,
    series_prec: u32,
    /// `coef[ν][j] = ∂_s^ν B(s+j, k−s) / j!`
    coef: Vec<Vec<Complex>>,
    bounds: KummerBounds,
    spec: QuadratureSpec,
}

/// Number of Taylor terms so that `X^J/J! < 2^{−bits}`.
fn series_len(x_abs: f64, bits: u32) -> usize {
    let target = -f64::from(bits) * LN_2;
    let mut ln_term = 0.0;
    let mut j = 0usize;
    let lx = x_abs.max(1e-300).ln();
    loop {
        j += 1;
        ln_term += lx - (j as f64).ln();
        if j as f64 > x_abs && ln_term < target {
            return j + 1;
        }
    }
}

impl KummerEngine {
    /// Builds the evaluator. `prec` is the output precision; callers should
    /// supply `x` with at least [`KummerEngine::input_prec`] bits.
    pub fn new(s: &Complex, k: u32, ell: usize, prec: u32) -> Result<Self> {
        let (sigma, _) = check_args(ell, s, k)?;
        let bounds = KummerBounds::new(s, k, ell);
        let x_series = Self::choose_x_series(&bounds, k, sigma, s.imag().to_f64(), prec);
        Self::build(s, k, ell, prec, x_series, bounds)
    }

    /// As [`KummerEngine::new`] with an explicit series/contour switch point.
    pub fn with_series_threshold(s: &Complex, k: u32, ell: usize, prec: u32, x_series: f64) -> Result<Self> {
        check_args(ell, s, k)?;
        let bounds = KummerBounds::new(s, k, ell);
        Self::build(s, k, ell, prec, x_series, bounds)
    }

    fn build(s: &Complex, k: u32, ell: usize, prec: u32, x_series: f64, bounds: KummerBounds) -> Result<Self> {
        let series_prec = prec + GUARD_BITS + (x_series / LN_2).ceil() as u32 + 8;
        let jmax = series_len(x_series, prec + GUARD_BITS + 8);
        let coef = Self::moments(s, k, ell, jmax, series_prec)?;
        Ok(KummerEngine {
            s: Complex::with_val(prec + GUARD_BITS, s),
            k,
            ell,
            prec,
            x_series,
            series_prec,
            coef,
            bounds,
            spec: QuadratureSpec { target: 0.0, min_level: 2, max_level: 12 },
        })
    }

    pub fn bounds(&self) -> &KummerBounds {
        &self.bounds
    }

    pub fn input_prec(&self) -> u32 {
        self.prec + GUARD_BITS
    }

    pub fn series_threshold(&self) -> f64 {
        self.x_series
    }

    /// Switch point between the two routes: the series needs about
    /// `|x|/ln 2` extra bits, the contour needs the excess of the ray integrals
    /// over the result scale. Prefer the (much cheaper per bit) series unless the
    /// contour is well conditioned.
    fn choose_x_series(b: &KummerBounds, k: u32, sigma: f64, t0: f64, prec: u32) -> f64 {
        let lo = 16.0f64;
        let hi = (2.0 * f64::from(k)).max(lo);
        let mut x = lo;
        while x < hi {
            let extra = contour_extra_bits(k, sigma, t0, x, b.ln_m[0]);
            if extra < 24.0 && x > f64::from(prec) / 8.0 {
                return x;
            }
            x *= 1.25;
        }
        hi
    }

    fn moments(s: &Complex, k: u32, ell: usize, jmax: usize, pw: u32) -> Result<Vec<Vec<Complex>>> {
        let s = Complex::with_val(pw, s);
        let ks = Complex::with_val(pw, Complex::with_val(pw, k) - &s);
        let lb = log_gamma(&s, pw)? + log_gamma(&ks, pw)? - log_gamma(&Complex::with_val(pw, k), pw)?;
        let mut beta = Complex::with_val(pw, lb.exp());
        let mmax = ell.max(1) - 1;
        let psi_ks = if ell > 0 { polygamma_all(mmax, &ks, pw)? } else { Vec::new() };
        let mut psi_s = if ell > 0 { polygamma_all(mmax, &s, pw)? } else { Vec::new() };
        let mut coef = vec![Vec::with_capacity(jmax + 1); ell + 1];
        let mut inv_fact = Float::with_val(pw, 1);
        let mut sj = s.clone();
        let mut y = vec![Complex::with_val(pw, 0); ell];
        for j in 0..=jmax {
            // y_i = ψ^{(i−1)}(s+j) + (−1)^i ψ^{(i−1)}(k−s)
            for i in 1..=ell {
                let (a, b) = (&psi_s[i - 1], &psi_ks[i - 1]);
                y[i - 1] = if i % 2 == 0 {
                    Complex::with_val(pw, a + b)
                } else {
                    Complex::with_val(pw, a - b)
                };
            }
            let bell = bell_complete(&y, ell, pw);
            let scaled = Complex::with_val(pw, &beta * &inv_fact);
            for (nu, b) in bell.iter().enumerate() {
                coef[nu].push(Complex::with_val(pw, &scaled * b));
            }
            // advance: B(s+j+1, k−s) = B(s+j, k−s)(s+j)/(k+j)
            beta *= &sj;
            beta /= k + j as u32;
            inv_fact /= j as u32 + 1;
            if ell > 0 {
                // ψ^{(i)}(z+1) = ψ^{(i)}(z) + (−1)^i i!/z^{i+1}
                let w = Complex::with_val(pw, sj.recip_ref());
                let mut p = w.clone();
                let mut fact = Integer::from(1);
                for (i, ps) in psi_s.iter_mut().enumerate() {
                    if i > 0 {
                        fact *= i as u32;
                    }
                    let t = Complex::with_val(pw, &p * &fact);
                    if i % 2 == 0 {
                        *ps += t;
                    } else {
                        *ps -= t;
                    }
                    p *= &w;
                }
            }
            sj += 1u32;
        }
        Ok(coef)
    }

    /// `[d^ν/ds^ν ₁f₁(s, k, ix)]_{ν=0..=ell}`.
    pub fn eval(&self, x: &Float) -> Result<Vec<Complex>> {
        let xa = x.to_f64().abs();
        if xa <= self.x_series {
            Ok(self.eval_series(x))
        } else {
            self.eval_contour(x)
        }
    }

    /// Moment series only; accurate for `|x|` up to the series threshold.
    pub fn eval_series(&self, x: &Float) -> Vec<Complex> {
        let pw = self.series_prec;
        let xa = x.to_f64().abs();
        let bits = self.prec + GUARD_BITS + 8;
        let jn = series_len(xa, bits).min(self.coef[0].len() - 1);
        let xw = Float::with_val(pw, x);
        let mut out = Vec::with_capacity(self.ell + 1);
        for c in &self.coef {
            // Horner in z = ix: (re + i·im)·ix = −im·x + i·re·x
            let mut re = Float::with_val(pw, c[jn].real());
            let mut im = Float::with_val(pw, c[jn].imag());
            for cj in c[..jn].iter().rev() {
                let nre = Float::with_val(pw, cj.real() - Float::with_val(pw, &im * &xw));
                let nim = Float::with_val(pw, &re * &xw) + cj.imag();
                re = nre;
                im = nim;
            }
            out.push(Complex::with_val(self.prec, (re, im)));
        }
        out
    }

    /// Contour route: for `x > 0`
    /// `F = (i/X)[∫₀^∞ e^{−τ} G(iτ/X) dτ − e^{ix} ∫₀^∞ e^{−τ} G(1 + iτ/X) dτ]`,
    /// with the mirror image through the lower half-plane for `x < 0`.
    pub fn eval_contour(&self, x: &Float) -> Result<Vec<Complex>> {
        let xf = x.to_f64();
        let xa = xf.abs();
        let sigma = self.bounds.sigma;
        let kf = f64::from(self.k);
        let extra = contour_extra_bits(self.k, sigma, self.bounds.t0, xa, self.bounds.ln_m[0]);
        let pw = self.prec + GUARD_BITS + extra.max(0.0).ceil() as u32 + 8;
        let ell = self.ell;
        let s = Complex::with_val(pw, &self.s);
        let sm1 = Complex::with_val(pw, &s - 1u32);
        let ksm1 = Complex::with_val(pw, Complex::with_val(pw, self.k - 1) - &s);
        let xw = Float::with_val(pw, x);
        let big_x = Float::with_val(pw, xw.abs_ref());
        let inv_x = Float::with_val(pw, big_x.recip_ref());
        let half_pi = Float::with_val(pw, Constant::Pi) / 2u32;
        let sign = if xf > 0.0 { 1i32 } else { -1i32 };
        let log2_target = self.bounds.ln_bound(0, xa) / LN_2 - f64::from(self.prec + GUARD_BITS) + xa.log2();
        let spec = QuadratureSpec { target: 0.0, ..self.spec };

        // ray A: u = ±iτ/X, ln u = ln(τ/X) ± iπ/2, 1−u = 1 ∓ iτ/X
        // ray B: u = 1 ± iτ/X, 1−u = ∓iτ/X
        let ray = |near_zero: bool, peak: f64| -> Result<Vec<Complex>> {
            let t_max = 4.0 * (kf + 10.0) + 2.0 * f64::from(pw) * LN_2 + peak;
            exp_sinh_vec(pw, ell + 1, &spec, log2_target, peak.max(1.0), t_max, |tau, out| {
                let r = Float::with_val(pw, tau * &inv_x);
                let ln_r = Float::with_val(pw, r.ln_ref());
                // the logarithm on the imaginary axis: ln(r) + sign·iπ/2 (near 0) or −sign·iπ/2 (near 1)
                let axis = if near_zero { sign } else { -sign };
                let ln_axis = Complex::with_val(pw, (&ln_r, Float::with_val(pw, &half_pi * axis)));
                // the other factor: 1 ∓ i r (near 0) or 1 ± i r (near 1)
                let other_im = if near_zero { -sign } else { sign };
                let w = Complex::with_val(pw, (1, Float::with_val(pw, &r * other_im)));
                let ln_other = Complex::with_val(pw, w.ln_ref());
                let (ln_u, ln_v) = if near_zero { (&ln_axis, &ln_other) } else { (&ln_other, &ln_axis) };
                let mut e = Complex::with_val(pw, &sm1 * ln_u) + Complex::with_val(pw, &ksm1 * ln_v);
                *e.mut_real() -= tau;
                out[0] = e.exp();
                if ell > 0 {
                    let l = Complex::with_val(pw, ln_u - ln_v);
                    for nu in 1..=ell {
                        out[nu] = Complex::with_val(pw, &out[nu - 1] * &l);
                    }
                }
            })
        };
        let a = ray(true, sigma - 1.0)?;
        let b = ray(false, kf - sigma - 1.0)?;
        // e^{ix}
        let mut sin = xw.clone();
        let mut cos = Float::new(pw);
        sin.sin_cos_mut(&mut cos);
        let eix = Complex::with_val(pw, (cos, sin));
        // prefactor sign·i/X
        let pref = Complex::with_val(pw, (0, Float::with_val(pw, &inv_x * sign)));
        Ok(a
            .into_iter()
            .zip(b)
            .map(|(av, bv)| {
                let diff = av - Complex::with_val(pw, &eix * &bv);
                Complex::with_val(self.prec, &pref * &diff)
            })
            .collect())
    }
}

/// Estimated bits by which the contour ray integrals exceed the result scale
/// `e^{ln_scale}` at `|x| = x_abs` (max of the log-integrand over a grid).
fn contour_extra_bits(k: u32, sigma: f64, t0: f64, x_abs: f64, ln_scale: f64) -> f64 {
    let kf = f64::from(k);
    let a = sigma - 1.0;
    let b = kf - sigma - 1.0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..400 {
        let tau = (-6.0 + i as f64 * 0.05).exp() * (kf + 1.0);
        let r = tau / x_abs;
        let lq = 0.5 * (r * r).ln_1p();
        let fa = -tau + a * r.ln() + b * lq;
        let fb = -tau + b * r.ln() + a * lq;
        best = best.max(fa.max(fb) + tau.ln());
    }
    let ln_piece = best - x_abs.ln() + FRAC_PI_2 * t0.abs() * 2.0;
    ((ln_piece - ln_scale) / LN_2).max(0.0)
}

#[cfg(test)]
mod tests;
