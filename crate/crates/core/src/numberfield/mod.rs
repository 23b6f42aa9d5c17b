//! Exact arithmetic in the ring of integers of ℚ and of the real quadratic
//! fields ℚ(√2), ℚ(√5), ℚ(√13), ℚ(√17).
//!
//! Elements are stored in the integral basis `(1, ω)` where `ω = (1+√d)/2`
//! for `d ≡ 1 (mod 4)` and `ω = √d` otherwise. Every supported quadratic field
//! has class number one and a fundamental unit of norm −1, so its narrow class
//! number is one as well.

mod lattice;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use lattice::{hnf2, Hnf2};

/// Which end of the unit-reduction window `log|σ₁/σ₂| ∈ ±log ε_t` is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitWindow {
    /// `[−log ε_t, log ε_t)`, the canonical choice
    #[default]
    LowerClosed,
    /// `(−log ε_t, log ε_t]`
    UpperClosed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSelector {
    Q,
    Sqrt2,
    Sqrt5,
    Sqrt13,
    Sqrt17,
}

impl FieldSelector {
    pub const ALL: [FieldSelector; 5] = [
        FieldSelector::Q,
        FieldSelector::Sqrt2,
        FieldSelector::Sqrt5,
        FieldSelector::Sqrt13,
        FieldSelector::Sqrt17,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FieldSelector::Q => "q",
            FieldSelector::Sqrt2 => "sqrt2",
            FieldSelector::Sqrt5 => "sqrt5",
            FieldSelector::Sqrt13 => "sqrt13",
            FieldSelector::Sqrt17 => "sqrt17",
        }
    }

    fn radicand(self) -> Option<i64> {
        match self {
            FieldSelector::Q => None,
            FieldSelector::Sqrt2 => Some(2),
            FieldSelector::Sqrt5 => Some(5),
            FieldSelector::Sqrt13 => Some(13),
            FieldSelector::Sqrt17 => Some(17),
        }
    }
}

impl fmt::Display for FieldSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FieldSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "q" | "rationals" => Ok(FieldSelector::Q),
            "sqrt2" => Ok(FieldSelector::Sqrt2),
            "sqrt5" => Ok(FieldSelector::Sqrt5),
            "sqrt13" => Ok(FieldSelector::Sqrt13),
            "sqrt17" => Ok(FieldSelector::Sqrt17),
            _ => Err(Error::UnsupportedField(s.to_string())),
        }
    }
}

/// An element `x + y·ω` of the ring of integers (`y = 0` over ℚ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlgebraicInt {
    pub x: i128,
    pub y: i128,
}

impl AlgebraicInt {
    pub const ZERO: AlgebraicInt = AlgebraicInt { x: 0, y: 0 };
    pub const ONE: AlgebraicInt = AlgebraicInt { x: 1, y: 0 };

    pub const fn new(x: i128, y: i128) -> Self {
        AlgebraicInt { x, y }
    }

    pub const fn rational(x: i128) -> Self {
        AlgebraicInt { x, y: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn neg(self) -> Self {
        AlgebraicInt::new(-self.x, -self.y)
    }

    pub fn add(self, o: Self) -> Self {
        AlgebraicInt::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(self, o: Self) -> Self {
        AlgebraicInt::new(self.x - o.x, self.y - o.y)
    }

    pub fn scale(self, k: i128) -> Self {
        AlgebraicInt::new(self.x * k, self.y * k)
    }

    fn coords(self) -> [i128; 2] {
        [self.x, self.y]
    }
}

impl fmt::Display for AlgebraicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y == 0 {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{}{:+}ω", self.x, self.y)
        }
    }
}

/// A supported totally real field with its standing data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub selector: FieldSelector,
    pub degree: usize,
    pub radicand: Option<i64>,
    pub discriminant: i64,
    /// `ω² = omega_trace·ω + omega_norm_coef`.
    pub omega_trace: i128,
    pub omega_norm_coef: i128,
    /// Totally positive generator of the different ideal.
    pub different: AlgebraicInt,
    pub fundamental_unit: AlgebraicInt,
    pub fundamental_unit_norm: i64,
    /// Generator of the totally positive units.
    pub totally_positive_unit: AlgebraicInt,
    pub unit_index: u32,
    /// Empirical constants of the unit-reduction window, when measured.
    pub trotabas: Option<(f64, f64)>,
}

/// Builds the descriptor for one of the supported fields.
pub fn make_field(selector: FieldSelector) -> Result<FieldDescriptor> {
    let Some(d) = selector.radicand() else {
        return Ok(FieldDescriptor {
            selector,
            degree: 1,
            radicand: None,
            discriminant: 1,
            omega_trace: 0,
            omega_norm_coef: 0,
            different: AlgebraicInt::ONE,
            fundamental_unit: AlgebraicInt::rational(-1),
            fundamental_unit_norm: -1,
            totally_positive_unit: AlgebraicInt::ONE,
            unit_index: 2,
            trotabas: None,
        });
    };
    let (t, n0, disc) = if d % 4 == 1 {
        (1i128, i128::from((d - 1) / 4), d)
    } else {
        (0i128, i128::from(d), 4 * d)
    };
    let mut field = FieldDescriptor {
        selector,
        degree: 2,
        radicand: Some(d),
        discriminant: disc,
        omega_trace: t,
        omega_norm_coef: n0,
        different: AlgebraicInt::ONE,
        fundamental_unit: AlgebraicInt::ONE,
        fundamental_unit_norm: 1,
        totally_positive_unit: AlgebraicInt::ONE,
        unit_index: 4,
        trotabas: None,
    };
    let eps = fundamental_unit_cf(&field)?;
    let eps_norm = field.norm(eps);
    if eps_norm != -1 {
        return Err(Error::NarrowClassNumber(d));
    }
    field.fundamental_unit = eps;
    field.fundamental_unit_norm = -1;
    field.totally_positive_unit = field.mul(eps, eps);

    // √D_F = 2ω − t generates the different; multiply by ε₀ to make it totally positive.
    let sqrt_disc = AlgebraicInt::new(-t, 2);
    let mut delta = field.mul(sqrt_disc, eps);
    if field.sign_at(delta, 0) == Ordering::Less {
        delta = delta.neg();
    }
    field.different = delta;
    debug_assert!(field.is_totally_positive(delta));
    debug_assert_eq!(field.norm(delta).abs(), i128::from(disc));
    Ok(field)
}

/// Fundamental unit from the continued fraction of ω: the first convergent
/// `p/q` with `N(p − qω) = ±1` yields `ε₀ = conj(p − qω)` up to sign.
fn fundamental_unit_cf(field: &FieldDescriptor) -> Result<AlgebraicInt> {
    let d = i128::from(field.radicand.expect("quadratic field"));
    let isqrt = integer_sqrt(d);
    // (P + √d)/Q with Q | d − P².
    let (mut p_cf, mut q_cf) = if field.omega_trace == 1 { (1i128, 2i128) } else { (0, 1) };
    let (mut p_prev, mut p_cur) = (0i128, 1i128);
    let (mut q_prev, mut q_cur) = (1i128, 0i128);
    for _ in 0..200 {
        let a = (p_cf + isqrt).div_euclid(q_cf);
        (p_prev, p_cur) = (p_cur, a * p_cur + p_prev);
        (q_prev, q_cur) = (q_cur, a * q_cur + q_prev);
        let alpha = AlgebraicInt::new(p_cur, -q_cur);
        if field.norm(alpha).abs() == 1 {
            let mut eps = field.conj(alpha);
            if field.sign_at(eps, 0) == Ordering::Less {
                eps = eps.neg();
            }
            return Ok(eps);
        }
        let p_next = a * q_cf - p_cf;
        let q_next = (d - p_next * p_next) / q_cf;
        p_cf = p_next;
        q_cf = q_next;
    }
    Err(Error::NonConvergence("continued fraction of ω".into()))
}

fn integer_sqrt(n: i128) -> i128 {
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Sign of `p + q·√D` for non-square `D > 0`, decided exactly.
fn sign_surd(p: i128, q: i128, disc: i128) -> Ordering {
    match (p.cmp(&0), q.cmp(&0)) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (a, b) if a == b => a,
        (a, _) => {
            // opposite signs: compare p² with q²·D
            let lhs = p * p;
            let rhs = q * q * disc;
            match lhs.cmp(&rhs) {
                Ordering::Greater => a,
                Ordering::Less => a.reverse(),
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

impl FieldDescriptor {
    pub fn omega(&self) -> AlgebraicInt {
        AlgebraicInt::new(0, 1)
    }

    /// `D` with `ω₁,₂ = (t ± √D)/2`.
    fn omega_disc(&self) -> i128 {
        self.omega_trace * self.omega_trace + 4 * self.omega_norm_coef
    }

    pub fn mul(&self, a: AlgebraicInt, b: AlgebraicInt) -> AlgebraicInt {
        if self.degree == 1 {
            return AlgebraicInt::rational(a.x * b.x);
        }
        let yy = a.y * b.y;
        AlgebraicInt::new(
            a.x * b.x + yy * self.omega_norm_coef,
            a.x * b.y + a.y * b.x + yy * self.omega_trace,
        )
    }

    /// `adj(c)` with `c·adj(c) = N(c)`.
    fn adjugate(&self, c: AlgebraicInt) -> AlgebraicInt {
        if self.degree == 1 {
            AlgebraicInt::ONE
        } else {
            self.conj(c)
        }
    }

    pub fn conj(&self, a: AlgebraicInt) -> AlgebraicInt {
        if self.degree == 1 {
            return a;
        }
        AlgebraicInt::new(a.x + a.y * self.omega_trace, -a.y)
    }

    /// Exact norm `x² + t·xy − n₀·y²`.
    pub fn norm(&self, a: AlgebraicInt) -> i128 {
        if self.degree == 1 {
            return a.x;
        }
        a.x * a.x + self.omega_trace * a.x * a.y - self.omega_norm_coef * a.y * a.y
    }

    pub fn trace(&self, a: AlgebraicInt) -> i128 {
        if self.degree == 1 {
            return a.x;
        }
        2 * a.x + self.omega_trace * a.y
    }

    /// Exact sign of the `j`-th real embedding.
    pub fn sign_at(&self, a: AlgebraicInt, j: usize) -> Ordering {
        if self.degree == 1 {
            return a.x.cmp(&0);
        }
        let p = 2 * a.x + a.y * self.omega_trace;
        let q = if j == 0 { a.y } else { -a.y };
        sign_surd(p, q, self.omega_disc())
    }

    pub fn is_totally_positive(&self, a: AlgebraicInt) -> bool {
        (0..self.degree).all(|j| self.sign_at(a, j) == Ordering::Greater)
    }

    pub fn embeddings(&self, a: AlgebraicInt, prec: u32) -> Vec<Float> {
        if self.degree == 1 {
            return vec![Float::with_val(prec, a.x)];
        }
        let root = Float::with_val(prec + 16, self.omega_disc()).sqrt();
        let t = Float::with_val(prec + 16, self.omega_trace);
        let w1 = Float::with_val(prec + 16, &t + &root) / 2u32;
        let w2 = Float::with_val(prec + 16, &t - &root) / 2u32;
        let mut e: Vec<Float> = [w1, w2]
            .into_iter()
            .map(|w| Float::with_val(prec + 16, w * a.y + a.x))
            .collect();
        // the smaller embedding from the exact norm, free of cancellation
        let small = usize::from(e[0].clone().abs() >= e[1].clone().abs());
        if !e[1 - small].is_zero() {
            e[small] = Float::with_val(prec + 16, self.norm(a)) / &e[1 - small];
        }
        e.into_iter().map(|v| Float::with_val(prec, v)).collect()
    }

    pub fn embeddings_f64(&self, a: AlgebraicInt) -> Vec<f64> {
        if self.degree == 1 {
            return vec![a.x as f64];
        }
        let root = (self.omega_disc() as f64).sqrt();
        let t = self.omega_trace as f64;
        let big = [(t + root) / 2.0, (t - root) / 2.0].map(|w| a.x as f64 + a.y as f64 * w);
        // recover the small embedding from the exact norm to avoid cancellation
        let n = self.norm(a) as f64;
        if big[0].abs() >= big[1].abs() {
            vec![big[0], if big[0] == 0.0 { 0.0 } else { n / big[0] }]
        } else {
            vec![if big[1] == 0.0 { 0.0 } else { n / big[1] }, big[1]]
        }
    }

    pub fn unit_power(&self, m: i64) -> AlgebraicInt {
        let base = if m >= 0 {
            self.totally_positive_unit
        } else {
            self.conj(self.totally_positive_unit)
        };
        (0..m.unsigned_abs()).fold(AlgebraicInt::ONE, |acc, _| self.mul(acc, base))
    }

    /// Larger real embedding of the totally positive fundamental unit.
    pub fn unit_embedding(&self, prec: u32) -> Float {
        self.embeddings(self.totally_positive_unit, prec)
            .into_iter()
            .fold(Float::with_val(prec, 0), |m, v| if v > m { v } else { m })
    }

    /// Whether `σ₁(ξ)²/|N(ξ)|` lies in the window `[ε_t⁻¹, ε_t)` (or
    /// `(ε_t⁻¹, ε_t]`).
    fn in_unit_window(&self, xi: AlgebraicInt, w: UnitWindow) -> Ordering {
        let n = self.norm(xi).abs();
        let sq = self.mul(xi, xi);
        let eps = self.totally_positive_unit;
        let below = self.sign_at(sq.sub(self.conj(eps).scale(n)), 0);
        let above = self.sign_at(eps.scale(n).sub(sq), 0);
        let closed_low = w == UnitWindow::LowerClosed;
        if below == Ordering::Less || (!closed_low && below == Ordering::Equal) {
            Ordering::Less
        } else if above == Ordering::Less || (closed_low && above == Ordering::Equal) {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }

    /// Canonical associate of `ξ` under the totally positive units: returns
    /// `(m, ε_t^m·ξ)` with `log|σ₁| − log|σ₂| ∈ [−log ε_t, log ε_t)`.
    pub fn reduce_by_units(&self, xi: AlgebraicInt) -> Result<(i64, AlgebraicInt)> {
        self.reduce_by_units_in(xi, UnitWindow::LowerClosed)
    }

    /// [`reduce_by_units`](Self::reduce_by_units) with either end of the
    /// window closed.
    pub fn reduce_by_units_in(&self, xi: AlgebraicInt, w: UnitWindow) -> Result<(i64, AlgebraicInt)> {
        if xi.is_zero() {
            return Err(Error::ZeroElement);
        }
        if self.degree == 1 {
            return Ok((0, xi));
        }
        let emb = self.embeddings_f64(xi);
        let log_eps = self.embeddings_f64(self.totally_positive_unit)[0].ln();
        let diff = emb[0].abs().ln() - emb[1].abs().ln();
        let mut m = -((diff + log_eps) / (2.0 * log_eps)).floor() as i64;
        let mut cur = self.mul(self.unit_power(m), xi);
        let up = self.totally_positive_unit;
        let down = self.conj(up);
        for _ in 0..64 {
            match self.in_unit_window(cur, w) {
                Ordering::Equal => return Ok((m, cur)),
                // σ₁/σ₂ too small: multiply by ε_t (raises the ratio by ε_t²)
                Ordering::Less => {
                    cur = self.mul(cur, up);
                    m += 1;
                }
                Ordering::Greater => {
                    cur = self.mul(cur, down);
                    m -= 1;
                }
            }
        }
        Err(Error::NonConvergence("unit reduction".into()))
    }

    pub fn is_reduced(&self, xi: AlgebraicInt) -> bool {
        self.is_reduced_in(xi, UnitWindow::LowerClosed)
    }

    pub fn is_reduced_in(&self, xi: AlgebraicInt, w: UnitWindow) -> bool {
        !xi.is_zero() && (self.degree == 1 || self.in_unit_window(xi, w) == Ordering::Equal)
    }

    /// One canonical representative of each nonzero orbit under the totally
    /// positive units with `0 < |N| <= bound`, ordered by `(|N|, x, y)`.
    pub fn enumerate_reps(&self, bound: u64) -> Vec<AlgebraicInt> {
        self.enumerate_reps_in(bound, UnitWindow::LowerClosed)
    }

    /// [`enumerate_reps`](Self::enumerate_reps) under either window convention.
    pub fn enumerate_reps_in(&self, bound: u64, w: UnitWindow) -> Vec<AlgebraicInt> {
        let b = i128::from(bound);
        let mut out = Vec::new();
        if self.degree == 1 {
            for a in 1..=b {
                out.push(AlgebraicInt::rational(-a));
                out.push(AlgebraicInt::rational(a));
            }
        } else {
            // reduced elements satisfy |σ_j| <= ε_t^{1/2}·√B
            let eps = self.embeddings_f64(self.totally_positive_unit)[0];
            let radius = (eps * bound as f64).sqrt() * (1.0 + 1e-9) + 1.0;
            let root = (self.omega_disc() as f64).sqrt();
            let t = self.omega_trace as f64;
            let w1 = (t + root) / 2.0;
            let y_max = (2.0 * radius / root).ceil() as i128;
            for y in -y_max..=y_max {
                let centre = -(y as f64) * w1;
                let x_lo = (centre - radius).floor() as i128;
                let x_hi = (centre + radius).ceil() as i128;
                for x in x_lo..=x_hi {
                    let a = AlgebraicInt::new(x, y);
                    let n = self.norm(a).abs();
                    if n == 0 || n > b {
                        continue;
                    }
                    if self.is_reduced_in(a, w) {
                        out.push(a);
                    }
                }
            }
        }
        out.sort_by_key(|a| (self.norm(*a).abs(), a.x, a.y));
        out
    }

    /// Hermite normal form of the principal ideal `(c)` as a lattice in the
    /// integral basis.
    pub fn ideal_hnf(&self, c: AlgebraicInt) -> Result<Hnf2> {
        if c.is_zero() {
            return Err(Error::ZeroElement);
        }
        let gens = [c.coords(), self.mul(self.omega(), c).coords()];
        hnf2(&gens).ok_or(Error::ZeroElement)
    }

    /// `(a) + (c) = O_F`, decided by the index of the lattice spanned by
    /// `a, ωa, c, ωc`.
    pub fn is_coprime(&self, a: AlgebraicInt, c: AlgebraicInt) -> Result<bool> {
        if a.is_zero() || c.is_zero() {
            return Err(Error::ZeroElement);
        }
        if self.degree == 1 {
            return Ok(lattice::gcd(a.x, c.x) == 1);
        }
        let w = self.omega();
        let gens = [a.coords(), self.mul(w, a).coords(), c.coords(), self.mul(w, c).coords()];
        let h = hnf2(&gens).ok_or(Error::ZeroElement)?;
        Ok(h.index() == 1)
    }

    /// `d₀` with `a·d₀ ≡ 1 (mod c)`, reduced into the canonical box of `O_F/(c)`.
    pub fn inverse_mod(&self, a: AlgebraicInt, c: AlgebraicInt) -> Result<AlgebraicInt> {
        if a.is_zero() || c.is_zero() {
            return Err(Error::ZeroElement);
        }
        if self.degree == 1 {
            let m = c.x.abs();
            if m == 1 {
                return Ok(AlgebraicInt::ZERO);
            }
            return lattice::mod_inverse(a.x, m)
                .map(AlgebraicInt::rational)
                .ok_or(Error::NotCoprime);
        }
        let w = self.omega();
        let gens = [a.coords(), self.mul(w, a).coords(), c.coords(), self.mul(w, c).coords()];
        let h = hnf2(&gens).ok_or(Error::ZeroElement)?;
        if h.index() != 1 {
            return Err(Error::NotCoprime);
        }
        // basis row 0 is (1, 0) = u0·a + u1·ωa + (multiples of c)
        let u = &h.transform[0];
        let d0 = AlgebraicInt::new(u[0], u[1]);
        let reduced = self.ideal_hnf(c)?.reduce(d0.coords());
        let d0 = AlgebraicInt::new(reduced[0], reduced[1]);
        debug_assert!(self.divides(c, self.mul(a, d0).sub(AlgebraicInt::ONE)));
        Ok(d0)
    }

    /// Whether `x/c` lies in `O_F`.
    pub fn divides(&self, c: AlgebraicInt, x: AlgebraicInt) -> bool {
        let n = self.norm(c);
        if n == 0 {
            return x.is_zero();
        }
        let num = self.mul(x, self.adjugate(c));
        num.x % n == 0 && num.y % n == 0
    }

    /// `x/c` when it lies in `O_F`.
    pub fn exact_div(&self, x: AlgebraicInt, c: AlgebraicInt) -> Option<AlgebraicInt> {
        let n = self.norm(c);
        if n == 0 {
            return None;
        }
        let num = self.mul(x, self.adjugate(c));
        (num.x % n == 0 && num.y % n == 0).then(|| AlgebraicInt::new(num.x / n, num.y / n))
    }

    /// `tr(num/den) mod 1` as a reduced fraction `p/q` with `0 <= p < q`.
    pub fn trace_fraction(&self, num: AlgebraicInt, den: AlgebraicInt) -> Result<(i128, i128)> {
        let n = self.norm(den);
        if n == 0 {
            return Err(Error::ZeroElement);
        }
        let t = self.trace(self.mul(num, self.adjugate(den)));
        let (mut p, mut q) = (t, n);
        if q < 0 {
            p = -p;
            q = -q;
        }
        let p = p.rem_euclid(q);
        let g = lattice::gcd(p, q).max(1);
        Ok((p / g, q / g))
    }

    /// `|N(ξ)|^{1/n}` as a big float.
    pub fn norm_root(&self, xi: AlgebraicInt, prec: u32) -> Float {
        let n = Float::with_val(prec, self.norm(xi).abs());
        if self.degree == 1 {
            n
        } else {
            n.sqrt()
        }
    }

    /// `ε_t^{λ}` using the larger embedding.
    pub fn unit_embedding_pow(&self, lambda: &Float) -> Float {
        let e = self.unit_embedding(lambda.prec());
        e.pow(lambda)
    }
}
