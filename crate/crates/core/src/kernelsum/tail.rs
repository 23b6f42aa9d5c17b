//! A-priori magnitude bounds for the `(a, c, η)` sum: per-term bounds (used
//! to skip negligible terms) and bounds for everything outside the box.

use std::f64::consts::PI;

use crate::specialfn::quadrature::log_sum_exp;
use crate::specialfn::KummerBounds;

pub(crate) fn ln_binom(n: usize, j: usize) -> f64 {
    (0..j).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

fn ln_multinom3(j: usize, i1: usize, i2: usize) -> f64 {
    ln_binom(j, i1) + ln_binom(j - i1, i2)
}

/// `ln ∫_{e^{u0}}^∞ (C(y) − count0)⁺·(−d/dy)[y^{−α}(log y)^i]⁺ dy` with the
/// counting majorant `C(y) = κ·y·(log y + 1)^d`; by Abel summation this bounds
/// `Σ_{N > e^{u0}} N^{−α}(log N)^i` over any family of norms counted by `C`
/// with exactly `count0` members of norm `≤ e^{u0}`.
pub(crate) fn ln_count_integral(u0: f64, alpha: f64, i: usize, kappa: f64, d: usize, count0: f64) -> f64 {
    if alpha <= 1.0 {
        return f64::INFINITY;
    }
    let a1 = alpha - 1.0;
    // −d/dy [y^{−α}(log y)^i] = y^{−α−1}(α u^i − i u^{i−1}), u = log y; only the
    // positive part is kept
    let phi = |u: f64| {
        let w = if i == 0 { alpha } else { alpha * u.powi(i as i32) - i as f64 * u.powi(i as i32 - 1) };
        if w <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let c = kappa.ln() + u + d as f64 * (u + 1.0).ln();
        let rel = count0 * (-c).exp();
        if rel >= 1.0 {
            return f64::NEG_INFINITY;
        }
        c + (-rel).ln_1p() + w.ln() - alpha * u
    };
    let peak = ((i + d) as f64 / a1).max(u0) + 1.0;
    let u_end = peak + 120.0 / a1 + 10.0;
    let steps = 8000;
    let h = (u_end - u0) / steps as f64;
    let mut terms = Vec::with_capacity(steps + 1);
    for j in 0..=steps {
        let w: f64 = if j == 0 || j == steps { 0.5 } else { 1.0 };
        let v = phi(u0 + j as f64 * h);
        if v.is_finite() {
            terms.push(v + w.ln());
        }
    }
    // remainder beyond u_end and discretization slack
    log_sum_exp(&terms) + h.ln() + 0.02f64.ln_1p()
}

pub(crate) struct TailModel<'a> {
    pub n: usize,
    pub sigma: f64,
    pub k: f64,
    pub ell: usize,
    /// `ln` of `max |e^{iπns/2}·phase|`
    pub ln_g: f64,
    pub bounds: &'a KummerBounds,
    /// elements per ideal in the representative sets
    pub kappa: f64,
    /// `log ε_t` (larger embedding); unused for ℚ
    pub ln_eps: f64,
    /// `min_t |ν_t|` scaling the `₁f₁` arguments
    pub nu_scale: f64,
}

impl TailModel<'_> {
    pub fn new(n: usize, sigma: f64, t0: f64, k: u32, ell: usize, bounds: &KummerBounds, kappa: f64, ln_eps: f64, nu_scale: f64) -> TailModel<'_> {
        let nf = n as f64;
        TailModel {
            n,
            sigma,
            k: f64::from(k),
            ell,
            ln_g: -nf * PI * t0 / 2.0 + nf * PI * t0.abs(),
            bounds,
            kappa,
            ln_eps,
            nu_scale,
        }
    }

    /// `ln Σ_{|ν| = r} multinomial · ∏_t bound(ν_t, |x_t|)`.
    pub fn ln_h(&self, r: usize, xs: &[f64]) -> f64 {
        match xs {
            [x] => self.bounds.ln_bound_beyond(r, *x),
            [x1, x2] => {
                let t: Vec<f64> = (0..=r)
                    .map(|v| ln_binom(r, v) + self.bounds.ln_bound_beyond(v, *x1) + self.bounds.ln_bound_beyond(r - v, *x2))
                    .collect();
                log_sum_exp(&t)
            }
            _ => unreachable!("degree ≤ 2"),
        }
    }

    pub fn ln_hs(&self, xs: &[f64]) -> Vec<f64> {
        (0..=self.ell).map(|r| self.ln_h(r, xs)).collect()
    }

    /// Bound for one term given `ln|N(c)|`, `ln|N(a)|`, `|Λ|` and `ln H_r`.
    pub fn ln_term(&self, ln_c: f64, ln_a: f64, lam_abs: f64, hs: &[f64]) -> f64 {
        let shift = lam_abs + PI * self.n as f64 / 2.0;
        let t: Vec<f64> = (0..=self.ell)
            .map(|j| ln_binom(self.ell, j) + if j > 0 { j as f64 * shift.ln() } else { 0.0 } + hs[self.ell - j])
            .collect();
        self.ln_g + (self.sigma - self.k) * ln_c - self.sigma * ln_a + log_sum_exp(&t)
    }

    /// `ln Σ_{|m| ≥ m_from} H_r` over unit multiples for a pair with `|N(ac)| = e^{ln_p}`,
    /// using `|σ_t(ac)| ≤ ε_t·√P` for reduced `a`, `c`.
    pub fn ln_unit_sum(&self, r: usize, ln_p: f64, m_from: u32) -> f64 {
        let half = 0.5 * ln_p;
        let c0 = (2.0 * PI * self.nu_scale).ln();
        let p_min = self.sigma.min(self.k - self.sigma);
        let q = (-0.5 * p_min * self.ln_eps).exp();
        let mut terms = Vec::new();
        let mut acc = f64::NEG_INFINITY;
        for m in m_from..m_from + 100_000 {
            let mf = f64::from(m);
            let x1 = (c0 - (1.0 + mf) * self.ln_eps - half).exp();
            let x2 = (c0 + (mf - 1.0) * self.ln_eps - half).exp();
            let mult = if m == 0 { 0.0 } else { 2f64.ln() };
            let t = mult + self.ln_h(r, &[x1, x2]);
            terms.push(t);
            acc = log_sum_exp(&[acc, t]);
            if x2 > self.bounds.x0 * 4.0 && t < acc - 50.0 {
                // geometric remainder
                terms.push(t - (1.0 - q).ln());
                break;
            }
        }
        log_sum_exp(&terms)
    }

    /// `ln` of `u_r` with `Σ_{m∈ℤ} H_r(P) ≤ u_r·P^{eps_u}` for all `P ≥ 1`
    /// (for ℚ: the `x`-independent bound, `eps_u = 0`).
    fn ln_unit_majorant(&self, r: usize, eps_u: f64) -> f64 {
        if self.n == 1 {
            return self.bounds.ln_m[r];
        }
        let mut best = f64::NEG_INFINITY;
        for j in 0..=1200 {
            let lp = f64::from(j) * 0.5;
            best = best.max(self.ln_unit_sum(r, lp, 0) - eps_u * lp);
        }
        best + 0.05f64.ln_1p()
    }

    pub fn eps_u(&self) -> f64 {
        if self.n == 1 {
            0.0
        } else {
            (0.25 * (self.sigma.min(self.k - self.sigma) - 1.0)).clamp(0.0, 0.1)
        }
    }

    /// Bound for the part of the sum outside `|N(c)| ≤ C`, `|N(a)| ≤ A` and, if
    /// given, outside `|N(a)N(c)| ≤ P`. `ln_norms_c/a` list `ln|N|` of the box
    /// representatives.
    pub fn ln_outside_box(&self, c_max: f64, a_max: f64, p_max: Option<f64>, ln_norms_c: &[f64], ln_norms_a: &[f64]) -> f64 {
        let eps_u = self.eps_u();
        let d = self.n - 1;
        let alpha_c = self.k - self.sigma - eps_u;
        let alpha_a = self.sigma - eps_u;
        let kappa0 = 1.5 * PI * self.n as f64;
        let u: Vec<f64> = (0..=self.ell).map(|r| self.ln_unit_majorant(r, eps_u)).collect();
        let finite = |norms: &[f64], alpha: f64, i: usize| {
            let t: Vec<f64> = norms
                .iter()
                .filter(|&&l| i == 0 || l > 0.0)
                .map(|&l| -alpha * l + if i > 0 { i as f64 * l.ln() } else { 0.0 })
                .collect();
            log_sum_exp(&t)
        };
        let gt_c: Vec<f64> = (0..=self.ell).map(|i| ln_count_integral(c_max.ln(), alpha_c, i, self.kappa, d, ln_norms_c.len() as f64)).collect();
        let gt_a: Vec<f64> = (0..=self.ell).map(|i| ln_count_integral(a_max.ln(), alpha_a, i, self.kappa, d, ln_norms_a.len() as f64)).collect();
        let all_c: Vec<f64> = (0..=self.ell).map(|i| log_sum_exp(&[finite(ln_norms_c, alpha_c, i), gt_c[i]])).collect();
        let all_a: Vec<f64> = (0..=self.ell).map(|i| log_sum_exp(&[finite(ln_norms_a, alpha_a, i), gt_a[i]])).collect();
        let mut terms = Vec::new();
        for j in 0..=self.ell {
            for i1 in 0..=j {
                for i2 in 0..=j - i1 {
                    let i3 = j - i1 - i2;
                    let coef = ln_binom(self.ell, j) + ln_multinom3(j, i1, i2) + if i3 > 0 { i3 as f64 * kappa0.ln() } else { 0.0 } + u[self.ell - j];
                    terms.push(coef + gt_c[i1] + all_a[i2]);
                    terms.push(coef + all_c[i1] + gt_a[i2]);
                }
            }
        }
        if let Some(p) = p_max {
            let alpha = self.sigma.min(self.k - self.sigma) - eps_u;
            for j in 0..=self.ell {
                for i in 0..=j {
                    let coef = ln_binom(self.ell, j) + ln_binom(j, i) + if j > i { (j - i) as f64 * kappa0.ln() } else { 0.0 } + u[self.ell - j];
                    terms.push(coef + ln_count_integral(p.ln(), alpha, i, self.kappa * self.kappa, 2 * self.n - 1, 0.0));
                }
            }
        }
        self.ln_g + log_sum_exp(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_integral_matches_closed_form() {
        // κ=1, d=0, i=0: ∫_X^∞ α y^{−α} dy = α X^{1−α}/(α−1)
        let (x, alpha) = (40f64, 3.5);
        let want = (alpha * x.powf(1.0 - alpha) / (alpha - 1.0)).ln();
        let got = ln_count_integral(x.ln(), alpha, 0, 1.0, 0, 0.0);
        assert!(got >= want && got - want < 0.03, "{got} {want}");
        assert_eq!(ln_count_integral(0.0, 1.0, 0, 1.0, 0, 0.0), f64::INFINITY);
    }

    #[test]
    fn count_integral_dominates_direct_sum() {
        // Σ_{|a| > 40} |a|^{−5}(log|a|)^2 over ℤ∖{0}, counting C(y) = 2y
        let direct: f64 = (41..200_000).map(|a: i64| 2.0 * (a as f64).powi(-5) * (a as f64).ln().powi(2)).sum();
        let bound = ln_count_integral(40f64.ln(), 5.0, 2, 2.0, 0, 80.0).exp();
        assert!(direct <= bound && bound < 1.2 * direct, "{direct} {bound}");
    }
}
