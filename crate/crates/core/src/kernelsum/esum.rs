//! The truncated `(a, c, η)` sums `E₁,ℓ` and `E₂,ℓ`.

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Complex, Float};

use super::point::{Branch, EvalPoint, TruncationParams};
use super::tail::TailModel;
use crate::error::Result;
use crate::numberfield::{AlgebraicInt, FieldDescriptor, UnitWindow};
use crate::specialfn::quadrature::log_sum_exp;
use crate::specialfn::{KummerEngine, GUARD_BITS};

/// One coprime pair `(a, c)` of canonical representatives inside the box.
#[derive(Debug, Clone)]
pub(crate) struct Pair {
    pub a: AlgebraicInt,
    pub c: AlgebraicInt,
    pub norm_a: i128,
    pub norm_c: i128,
    /// `Λ = log|N(c)| − log|N(a)| + iπ·q`
    pub q: i32,
    pub d0: AlgebraicInt,
}

pub(crate) fn branch_q(field: &FieldDescriptor, a: AlgebraicInt, c: AlgebraicInt, branch: Branch) -> i32 {
    match branch {
        Branch::Principal => i32::from(field.norm(c) < 0) - i32::from(field.norm(a) < 0),
        Branch::AbsSign => -((0..field.degree).filter(|&t| field.sign_at(a, t) != field.sign_at(c, t)).count() as i32),
    }
}

/// Coprime pairs grouped by `c`, in ascending `(|N(c)|, c)` then `(|N(a)|, a)` order.
pub(crate) fn box_pairs(field: &FieldDescriptor, tr: &TruncationParams, w: UnitWindow) -> Result<Vec<Vec<Pair>>> {
    let reps_c = field.enumerate_reps_in(tr.c_max, w);
    let reps_a = field.enumerate_reps_in(tr.a_max, w);
    let mut out = Vec::with_capacity(reps_c.len());
    for &c in &reps_c {
        let norm_c = field.norm(c);
        let mut group = Vec::new();
        for &a in &reps_a {
            let norm_a = field.norm(a);
            if let Some(p) = tr.p_max {
                if (norm_a * norm_c).unsigned_abs() > u128::from(p) {
                    break;
                }
            }
            if !field.is_coprime(a, c)? {
                continue;
            }
            let d0 = field.inverse_mod(a, c)?;
            group.push(Pair { a, c, norm_a, norm_c, q: branch_q(field, a, c, tr.branch), d0 });
        }
        out.push(group);
    }
    Ok(out)
}

/// Largest `|x|` for which the moment series replaces the contour route.
const SERIES_CAP: f64 = 4000.0;

/// Result of [`e_sums`].
#[derive(Debug, Clone)]
pub struct ESums {
    pub e1: Complex,
    pub e2: Complex,
    /// `ln` of the bound for everything not summed (outside the box, unit
    /// tail, skipped terms), in the units of `E`.
    pub ln_tail: f64,
    /// `ln` of the bound for the `(a, c, η) = (1, 1, 1)` term.
    pub ln_leading: f64,
    pub evaluated: usize,
    pub skipped: usize,
}

fn ln_abs_f(x: &Float) -> f64 {
    x.to_f64().abs().ln()
}

/// Shared per-evaluation data.
pub(crate) struct Context<'a> {
    pub field: &'a FieldDescriptor,
    pub p: &'a EvalPoint,
    pub tr: &'a TruncationParams,
    pub pw: u32,
    pub engine: KummerEngine,
    /// convention for the orbit representatives of `a` and `c`
    pub window: UnitWindow,
}

impl<'a> Context<'a> {
    pub fn new(field: &'a FieldDescriptor, p: &'a EvalPoint, tr: &'a TruncationParams) -> Result<Self> {
        tr.validate()?;
        let pw = p.prec + GUARD_BITS;
        let engine = KummerEngine::new(p.s(), p.k, p.ell, pw)?;
        Ok(Context { field, p, tr, pw, engine, window: UnitWindow::default() })
    }

    pub fn tail_model(&self, nu_scale: f64) -> TailModel<'_> {
        let ln_eps = if self.field.degree == 1 { 0.0 } else { self.field.embeddings_f64(self.field.totally_positive_unit)[0].ln() };
        TailModel::new(
            self.field.degree,
            self.p.sigma(),
            self.p.t0.to_f64(),
            self.p.k,
            self.p.ell,
            self.engine.bounds(),
            f64::from(self.field.unit_index),
            ln_eps,
            nu_scale,
        )
    }

    /// `x_t = −2π·ν_t/σ_t(ξ)` at the engine's input precision.
    pub fn kummer_args(&self, xi: AlgebraicInt, nu: &[Float]) -> Vec<Float> {
        let ip = self.engine.input_prec() + 16;
        let two_pi = Float::with_val(ip, Constant::Pi) * 2u32;
        self.field
            .embeddings(xi, ip)
            .iter()
            .zip(nu)
            .map(|(e, v)| -Float::with_val(ip, &two_pi * v) / e)
            .collect()
    }
}

/// `ln` bound for everything outside the summed region (box, hyperbolic cut,
/// and units `|m| > M`), in the units of `E`.
pub(crate) fn ln_tail_outside(ctx: &Context, model: &TailModel, groups: &[Vec<Pair>]) -> f64 {
    let field = ctx.field;
    let tr = ctx.tr;
    let norms = |bound: u64| -> Vec<f64> {
        field.enumerate_reps(bound).iter().map(|r| (field.norm(*r).abs() as f64).ln()).collect()
    };
    let mut parts = vec![model.ln_outside_box(tr.c_max as f64, tr.a_max as f64, tr.p_max.map(|p| p as f64), &norms(tr.c_max), &norms(tr.a_max))];
    if field.degree > 1 {
        let mut cache: HashMap<u128, Vec<f64>> = HashMap::new();
        for pr in groups.iter().flatten() {
            let p = (pr.norm_a * pr.norm_c).unsigned_abs();
            let v = cache
                .entry(p)
                .or_insert_with(|| (0..=model.ell).map(|r| model.ln_unit_sum(r, (p as f64).ln(), tr.m_units + 1)).collect());
            let (lc, la) = ((pr.norm_c.abs() as f64).ln(), (pr.norm_a.abs() as f64).ln());
            let lam = ((lc - la).powi(2) + (PI * f64::from(pr.q)).powi(2)).sqrt();
            parts.push(model.ln_term(lc, la, lam, v));
        }
    }
    log_sum_exp(&parts)
}

/// Binomial coefficient as a float multiplier.
fn binom(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// `P^{(r)} = Σ_{|ν|=r} multinomial ∏_t F_t^{(ν_t)}` for `r = 0..=ℓ`.
pub(crate) fn product_derivs(f: &[Vec<Complex>], ell: usize, pw: u32) -> Vec<Complex> {
    (0..=ell)
        .map(|r| match f {
            [f1] => f1[r].clone(),
            [f1, f2] => {
                let mut acc = Complex::with_val(pw, 0);
                for v in 0..=r {
                    let t = Complex::with_val(pw, &f1[v] * &f2[r - v]);
                    acc += t * binom(r, v);
                }
                acc
            }
            _ => unreachable!("degree ≤ 2"),
        })
        .collect()
}

/// The truncated sums `E₁,ℓ`, `E₂,ℓ` and the bound on what was left out.
pub fn e_sums(field: &FieldDescriptor, p: &EvalPoint, tr: &TruncationParams) -> Result<ESums> {
    let ctx = Context::new(field, p, tr)?;
    e_sums_ctx(&ctx)
}

pub(crate) fn e_sums_ctx(ctx: &Context) -> Result<ESums> {
    let (field, p, tr, pw) = (ctx.field, ctx.p, ctx.tr, ctx.pw);
    let n = field.degree;
    let ell = p.ell;
    let s = Complex::with_val(pw, p.s());
    let model = ctx.tail_model(1.0);
    let groups = box_pairs(field, tr, ctx.window)?;

    // leading term (a, c, η) = (1, 1, 1): |x_t| = 2π, Λ = 0
    let ln_leading = model.ln_term(0.0, 0.0, 0.0, &model.ln_hs(&vec![2.0 * PI; n]));
    let ln_cut = ln_leading + tr.quad_target.ln();

    let pi = Float::with_val(pw, Constant::Pi);
    let i_pi = Complex::with_val(pw, (0, &pi));
    let e_ins = (Complex::with_val(pw, &i_pi * &s) * n as u32 / 2u32).exp();
    let phases: HashMap<i32, Complex> = (-(n as i32)..=n as i32)
        .map(|q| (q, (Complex::with_val(pw, &i_pi * &s) * q).exp()))
        .collect();
    let sk = Complex::with_val(pw, &s - p.k);
    let mut ln_norm: HashMap<i128, Float> = HashMap::new();
    for pr in groups.iter().flatten() {
        for v in [pr.norm_a.abs(), pr.norm_c.abs()] {
            ln_norm.entry(v).or_insert_with(|| Float::with_val(pw, v).ln());
        }
    }
    let pow_c: HashMap<i128, Complex> = ln_norm.iter().map(|(&v, l)| (v, Complex::with_val(pw, &sk * l).exp())).collect();
    let pow_a: HashMap<i128, Complex> = ln_norm.iter().map(|(&v, l)| (v, Complex::with_val(pw, -Complex::with_val(pw, &s * l)).exp())).collect();
    let shift = Complex::with_val(pw, (0, Float::with_val(pw, &pi * n as u32) / 2u32));

    // unit exponents per field
    let m_range: Vec<i64> = if n == 1 { vec![0] } else { (-(tr.m_units as i64)..=tr.m_units as i64).collect() };
    let units: Vec<AlgebraicInt> = m_range.iter().map(|&m| field.unit_power(m)).collect();

    // decide which terms to evaluate from their a-priori bounds
    struct Job<'g> {
        pr: &'g Pair,
        eta: AlgebraicInt,
        xi: AlgebraicInt,
        lam: Complex,
    }
    let mut jobs: Vec<Vec<Job>> = Vec::with_capacity(groups.len());
    let mut skipped_ln = Vec::new();
    for g in &groups {
        let mut js = Vec::new();
        for pr in g {
            let lc = &ln_norm[&pr.norm_c.abs()];
            let la = &ln_norm[&pr.norm_a.abs()];
            let lam = Complex::with_val(pw, (Float::with_val(pw, lc - la), Float::with_val(pw, &pi * pr.q)));
            let lam_abs = crate::specialfn::to_c64(&lam);
            let lam_abs = lam_abs.0.hypot(lam_abs.1);
            let ac = field.mul(pr.a, pr.c);
            for eta in &units {
                let xi = field.mul(ac, *eta);
                let xs: Vec<f64> = field.embeddings_f64(xi).iter().map(|e| 2.0 * PI / e.abs()).collect();
                let b = model.ln_term(ln_abs_f(lc), ln_abs_f(la), lam_abs, &model.ln_hs(&xs));
                if b < ln_cut {
                    skipped_ln.push(b);
                } else {
                    js.push(Job { pr, eta: *eta, xi, lam: lam.clone() });
                }
            }
        }
        jobs.push(js);
    }

    // the moment series is far cheaper than the contour: widen it to cover
    // every argument that will be evaluated, up to a cap
    let x_needed = jobs
        .iter()
        .flatten()
        .flat_map(|j| field.embeddings_f64(j.xi).into_iter().map(|e| 2.0 * PI / e.abs()))
        .fold(0.0f64, f64::max);
    let wide;
    let engine = if x_needed > ctx.engine.series_threshold() && ctx.engine.series_threshold() < SERIES_CAP {
        wide = KummerEngine::with_series_threshold(p.s(), p.k, ell, p.prec + GUARD_BITS, (x_needed * 1.001).min(SERIES_CAP))?;
        &wide
    } else {
        &ctx.engine
    };
    let ones = vec![Float::with_val(ctx.engine.input_prec() + 16, 1); n];
    let args = |xi: AlgebraicInt| ctx.kummer_args(xi, &ones);

    // ₁f₁ values: for ℚ cache by the product ac
    let cache: HashMap<i128, Vec<Complex>> = if n == 1 {
        let mut keys: Vec<i128> = jobs.iter().flatten().map(|j| j.xi.x).collect();
        keys.sort_unstable();
        keys.dedup();
        let vals: Vec<Result<Vec<Complex>>> = keys
            .par_iter()
            .map(|&key| engine.eval(&args(AlgebraicInt::rational(key))[0]))
            .collect();
        keys.into_iter().zip(vals).map(|(k, v)| v.map(|v| (k, v))).collect::<Result<_>>()?
    } else {
        HashMap::new()
    };

    let binoms: Vec<u64> = (0..=ell).map(|j| binom(ell, j)).collect();
    let partial: Vec<Result<(Complex, Complex)>> = jobs
        .par_iter()
        .map(|js| {
            let mut e1 = Complex::with_val(pw, 0);
            let mut tot = Complex::with_val(pw, 0);
            for j in js {
                let pr = j.pr;
                let f: Vec<Vec<Complex>> = if n == 1 {
                    vec![cache[&j.xi.x].clone()]
                } else {
                    args(j.xi).iter().map(|x| engine.eval(x)).collect::<Result<_>>()?
                };
                let pd = product_derivs(&f, ell, pw);
                let lam_s = Complex::with_val(pw, &j.lam + &shift);
                let mut d = Complex::with_val(pw, 0);
                let mut pow = Complex::with_val(pw, 1);
                for jj in 0..=ell {
                    d += Complex::with_val(pw, &pow * &pd[ell - jj]) * binoms[jj];
                    pow *= &lam_s;
                }
                let mut lam_l = Complex::with_val(pw, 1);
                for _ in 0..ell {
                    lam_l *= &j.lam;
                }
                let (num, den) = field.trace_fraction(pr.d0, field.mul(j.eta, pr.c))?;
                let angle = Float::with_val(pw, &pi * 2u32) * num / den;
                let mut sin = angle;
                let mut cos = Float::new(pw);
                sin.sin_cos_mut(&mut cos);
                let chr = Complex::with_val(pw, (cos, sin));
                let common = Complex::with_val(pw, &pow_c[&pr.norm_c.abs()] * &pow_a[&pr.norm_a.abs()]) * &phases[&pr.q] * &e_ins * chr;
                e1 += Complex::with_val(pw, &common * &lam_l) * &pd[0];
                tot += common * d;
            }
            Ok((e1, tot))
        })
        .collect();
    let mut e1 = Complex::with_val(pw, 0);
    let mut tot = Complex::with_val(pw, 0);
    for r in partial {
        let (a, b) = r?;
        e1 += a;
        tot += b;
    }
    let e2 = Complex::with_val(pw, &tot - &e1);

    let mut tails = skipped_ln.clone();
    tails.push(ln_tail_outside(ctx, &model, &groups));
    Ok(ESums {
        e1: Complex::with_val(p.prec, e1),
        e2: Complex::with_val(p.prec, e2),
        ln_tail: log_sum_exp(&tails),
        ln_leading,
        evaluated: jobs.iter().map(Vec::len).sum(),
        skipped: skipped_ln.len(),
    })
}
