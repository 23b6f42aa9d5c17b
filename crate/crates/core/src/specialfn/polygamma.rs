//! Digamma and polygamma functions: upward recurrence to the asymptotic zone
//! followed by the Bernoulli asymptotic series.

use rug::{Complex, Float, Integer};

use super::bernoulli::{bernoulli_table, TABLE_LEN};
use super::complex::{is_nonpositive_integer, log2_abs};
use super::gamma::{shift_count, stirling_radius};
use super::GUARD_BITS;
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 16;

fn factorial(n: usize, prec: u32) -> Float {
    Float::with_val(prec, Integer::from(Integer::factorial(n as u32)))
}

/// Asymptotic series for `ψ^{(m)}(z)`, `m = 0..=mmax`, at large `|z|`.
fn asymptotic(mmax: usize, z: &Complex, pw: u32) -> Result<Vec<Complex>> {
    let bern = bernoulli_table(pw);
    let zinv = Complex::with_val(pw, z.recip_ref());
    let zinv2 = Complex::with_val(pw, zinv.square_ref());
    // zinv_pow[p] = z^{-p}
    let mut zinv_pow = vec![Complex::with_val(pw, 1), zinv.clone()];
    for p in 2..=mmax + 1 {
        let next = Complex::with_val(pw, &zinv_pow[p - 1] * &zinv);
        zinv_pow.push(next);
    }
    let mut out = Vec::with_capacity(mmax + 1);
    for m in 0..=mmax {
        let mut acc = if m == 0 {
            Complex::with_val(pw, z.ln_ref()) - Complex::with_val(pw, &zinv / 2u32)
        } else {
            let a = Complex::with_val(pw, &zinv_pow[m] * factorial(m - 1, pw));
            a + Complex::with_val(pw, &zinv_pow[m + 1] * factorial(m, pw)) / 2u32
        };
        // Σ_j B_{2j}·c_{m,j}·z^{−2j−m}, c_{0,j} = −1/(2j), c_{m,j} = (2j+m−1)!/(2j)!
        let mut pow = Complex::with_val(pw, &zinv_pow[m] * &zinv2);
        let target = log2_abs(&acc) - f64::from(pw);
        let mut last = f64::INFINITY;
        let mut done = false;
        for j in 1..TABLE_LEN {
            let coef = if m == 0 {
                -Float::with_val(pw, &bern[j] / (2 * j as u32))
            } else {
                let num = Integer::factorial((2 * j + m - 1) as u32);
                let den = Integer::factorial((2 * j) as u32);
                Float::with_val(pw, &bern[j] * Float::with_val(pw, rug::Rational::from((num, den))))
            };
            let term = Complex::with_val(pw, &pow * &coef);
            let size = log2_abs(&term);
            acc += &term;
            if size < target {
                done = true;
                break;
            }
            if size > last {
                break;
            }
            last = size;
            pow *= &zinv2;
        }
        if !done {
            return Err(Error::NonConvergence(format!("asymptotic series for ψ^({m})")));
        }
        if m > 0 && m % 2 == 0 {
            acc = -acc;
        }
        out.push(acc);
    }
    Ok(out)
}

/// `[ψ(z), ψ'(z), …, ψ^{(mmax)}(z)]`.
pub fn polygamma_all(mmax: usize, z: &Complex, prec: u32) -> Result<Vec<Complex>> {
    if mmax > MAX_ORDER {
        return Err(Error::InvalidArgument(format!("polygamma order {mmax} exceeds {MAX_ORDER}")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::PoleAtNonPositiveInteger);
    }
    let pw = prec + GUARD_BITS + 2 * mmax as u32;
    let radius = stirling_radius(pw) + mmax as f64;
    let n = shift_count(z, radius);
    let z = Complex::with_val(pw, z);
    let shifted = Complex::with_val(pw, &z + n);
    let mut out = asymptotic(mmax, &shifted, pw)?;
    // ψ^{(m)}(z) = ψ^{(m)}(z+N) − (−1)^m m! Σ_{j<N} (z+j)^{−m−1}
    let mut sums = vec![Complex::with_val(pw, 0); mmax + 1];
    let mut zz = z;
    for _ in 0..n {
        let w = Complex::with_val(pw, zz.recip_ref());
        let mut p = w.clone();
        for s in sums.iter_mut() {
            *s += &p;
            p *= &w;
        }
        zz += 1u32;
    }
    for (m, (o, s)) in out.iter_mut().zip(sums).enumerate() {
        let s = s * factorial(m, pw);
        if m % 2 == 0 {
            *o -= s;
        } else {
            *o += s;
        }
    }
    Ok(out.into_iter().map(|v| Complex::with_val(prec, v)).collect())
}

pub fn digamma(z: &Complex, prec: u32) -> Result<Complex> {
    Ok(polygamma_all(0, z, prec)?.swap_remove(0))
}

pub fn polygamma(m: usize, z: &Complex, prec: u32) -> Result<Complex> {
    Ok(polygamma_all(m, z, prec)?.swap_remove(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::complex::cx_f64;
    use proptest::prelude::*;
    use rug::float::Constant;

    const P: u32 = 256;

    fn close(a: &Complex, b: &Complex, bits: i32) -> bool {
        let d = Complex::with_val(P, a - b);
        log2_abs(&d) <= log2_abs(b).max(0.0) - f64::from(bits)
    }

    #[test]
    fn special_values() {
        let one = cx_f64(P, 1.0, 0.0);
        let gamma_e = Float::with_val(P, Constant::Euler);
        assert!(close(&digamma(&one, P).unwrap(), &Complex::with_val(P, (-gamma_e, 0)), 240));
        let pi2_6 = Float::with_val(P, Constant::Pi).square() / 6u32;
        assert!(close(&polygamma(1, &one, P).unwrap(), &Complex::with_val(P, (pi2_6, 0)), 240));
        // ψ''(1) = −2ζ(3)
        let z3 = Float::with_val(P, 3).zeta() * -2i32;
        assert!(close(&polygamma(2, &one, P).unwrap(), &Complex::with_val(P, (z3, 0)), 240));
    }

    #[test]
    fn asymptotic_agrees_with_deeper_shift() {
        let z = cx_f64(P, 3.7, -2.2);
        let direct = polygamma_all(6, &z, P).unwrap();
        // evaluate from z+40 and recur down by hand
        let far = polygamma_all(6, &Complex::with_val(P, &z + 40u32), P).unwrap();
        for m in 0..=6 {
            let mut acc = far[m].clone();
            for j in 0..40u32 {
                let w = Complex::with_val(P, Complex::with_val(P, &z + j).recip_ref());
                let p = Complex::with_val(P, rug::ops::Pow::pow(&w, m as i32 + 1)) * factorial(m, P);
                if m % 2 == 0 {
                    acc -= p;
                } else {
                    acc += p;
                }
            }
            assert!(close(&direct[m], &acc, P as i32 - 16), "m = {m}");
        }
    }

    proptest! {
        #[test]
        fn digamma_recurrence(re in -20.0f64..40.0, im in -30.0f64..30.0) {
            prop_assume!(im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3);
            let z = cx_f64(P, re, im);
            let lhs = Complex::with_val(P, digamma(&Complex::with_val(P, &z + 1u32), P).unwrap() - digamma(&z, P).unwrap());
            let rhs = Complex::with_val(P, z.recip_ref());
            prop_assert!(close(&lhs, &rhs, P as i32 - 24));
        }
    }
}
