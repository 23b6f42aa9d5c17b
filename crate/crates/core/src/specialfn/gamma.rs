//! Complex Gamma and log-Gamma: upward shift into the Stirling zone followed
//! by the Bernoulli-series Stirling expansion.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use super::bernoulli::{bernoulli_table, TABLE_LEN};
use super::complex::{is_nonpositive_integer, log2_abs};
use super::GUARD_BITS;
use crate::error::{Error, Result};

/// Radius beyond which the asymptotic series is used at working precision `pw`;
/// large enough that the `J`-th term `≈ (2J/(2πe|z|))^{2J}` of the Bernoulli
/// table is below `2^{−pw}`.
pub(crate) fn stirling_radius(pw: u32) -> f64 {
    let j = (TABLE_LEN - 1) as f64;
    let table = 1.1 * 2.0 * j / (2.0 * std::f64::consts::PI * std::f64::consts::E) * 2f64.powf(f64::from(pw) / (2.0 * j));
    (0.25 * f64::from(pw)).max(10.0).max(table)
}

/// Smallest `N >= 0` with `|z + N| >= radius` and `Re(z + N) >= 1`.
pub(crate) fn shift_count(z: &Complex, radius: f64) -> u32 {
    let re = z.real().to_f64();
    let im = z.imag().to_f64();
    let need = (radius * radius - im * im).max(0.0).sqrt().max(1.0);
    if re >= need {
        0
    } else {
        (need - re).ceil() as u32
    }
}

/// Stirling series for `ln Γ(z)`, valid for `|z|` beyond [`stirling_radius`].
fn ln_gamma_stirling(z: &Complex, pw: u32) -> Result<Complex> {
    let bern = bernoulli_table(pw);
    let ln_z = Complex::with_val(pw, z.ln_ref());
    let half = Float::with_val(pw, 0.5);
    let mut out = Complex::with_val(pw, z - &half) * &ln_z - z;
    let ln2pi = Float::with_val(pw, Float::with_val(pw, Constant::Pi) * 2u32).ln();
    out += ln2pi / 2u32;

    let zinv = Complex::with_val(pw, z.recip_ref());
    let zinv2 = Complex::with_val(pw, zinv.square_ref());
    let mut pow = zinv;
    let target = log2_abs(&out).max(0.0) - f64::from(pw);
    let mut last = f64::INFINITY;
    for j in 1..TABLE_LEN {
        let coef = Float::with_val(pw, &bern[j] / (2 * j as u32 * (2 * j as u32 - 1)));
        let term = Complex::with_val(pw, &pow * &coef);
        let size = log2_abs(&term);
        out += &term;
        if size < target {
            return Ok(out);
        }
        if size > last {
            break;
        }
        last = size;
        pow *= &zinv2;
    }
    Err(Error::NonConvergence("Stirling series for ln Γ".into()))
}

/// `ln Γ(z)` on the branch that is continuous off the negative real axis and
/// real for real `z > 0` (sum of principal logarithms along the shift).
pub fn log_gamma(z: &Complex, prec: u32) -> Result<Complex> {
    if is_nonpositive_integer(z) {
        return Err(Error::PoleAtNonPositiveInteger);
    }
    let pw = prec + GUARD_BITS;
    let n = shift_count(z, stirling_radius(pw));
    let z = Complex::with_val(pw, z);
    let mut zz = z.clone();
    let mut prod = Complex::with_val(pw, 1);
    let mut arg_sum = 0.0f64;
    for _ in 0..n {
        arg_sum += zz.imag().to_f64().atan2(zz.real().to_f64());
        prod *= &zz;
        zz += 1u32;
    }
    let mut out = ln_gamma_stirling(&zz, pw)?;
    if n > 0 {
        let ln_prod = Complex::with_val(pw, prod.ln_ref());
        let theta = ln_prod.imag().to_f64();
        let turns = ((arg_sum - theta) / std::f64::consts::TAU).round();
        out -= ln_prod;
        if turns != 0.0 {
            let tau = Float::with_val(pw, Constant::Pi) * 2u32;
            *out.mut_imag() -= tau * turns;
        }
    }
    Ok(Complex::with_val(prec, out))
}

pub fn gamma(z: &Complex, prec: u32) -> Result<Complex> {
    let lg = log_gamma(z, prec + 16)?;
    Ok(Complex::with_val(prec, lg.exp()))
}

/// Model value `|k/2 + i t₀|^{−2nδ}` for `|Γⁿ(s)/Γⁿ(k−s)|` at `s = k/2 − δ + i t₀`.
pub fn gamma_ratio_abs_estimate(k: u32, delta: &Float, t0: &Float, n: u32, prec: u32) -> Float {
    let half_k = Float::with_val(prec, k) / 2u32;
    let modulus = Float::with_val(prec, half_k.hypot(t0));
    let expo = Float::with_val(prec, delta * (-2i64 * i64::from(n)));
    modulus.pow(expo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::complex::cx_f64;
    use proptest::prelude::*;

    const P: u32 = 256;

    fn close(a: &Complex, b: &Complex, rel_bits: i32) -> bool {
        let d = Complex::with_val(P, a - b);
        let scale = log2_abs(b).max(log2_abs(a));
        log2_abs(&d) <= scale - f64::from(rel_bits)
    }

    #[test]
    fn integer_and_half_integer_values() {
        let g5 = gamma(&cx_f64(P, 5.0, 0.0), P).unwrap();
        assert!(close(&g5, &cx_f64(P, 24.0, 0.0), 240));
        let sqrt_pi = Float::with_val(P, Constant::Pi).sqrt();
        let gh = gamma(&cx_f64(P, 0.5, 0.0), P).unwrap();
        assert!(close(&gh, &Complex::with_val(P, (sqrt_pi, 0)), 240));
        let g30 = gamma(&cx_f64(P, 30.0, 0.0), P).unwrap();
        let fact29 = Float::with_val(P, rug::Integer::from(rug::Integer::factorial(29)));
        assert!(close(&g30, &Complex::with_val(P, (fact29, 0)), 240));
    }

    #[test]
    fn poles_rejected() {
        assert_eq!(gamma(&cx_f64(P, -3.0, 0.0), P), Err(Error::PoleAtNonPositiveInteger));
        assert_eq!(log_gamma(&cx_f64(P, 0.0, 0.0), P), Err(Error::PoleAtNonPositiveInteger));
    }

    #[test]
    fn log_gamma_branch_is_continuous() {
        // ln Γ(1 + iy) for large y has imaginary part far outside (−π, π]
        let lg = log_gamma(&cx_f64(P, 1.0, 40.0), P).unwrap();
        // Stirling leading order: Im ≈ y·ln y − y + π/4 … for z = 1 + iy
        let y: f64 = 40.0;
        let approx = (0.5f64) * (y.atan2(1.0)) + y * (1.0f64 + y * y).sqrt().ln() - y;
        assert!((lg.imag().to_f64() - approx).abs() < 0.1, "{} vs {}", lg.imag().to_f64(), approx);
    }

    #[test]
    fn ratio_estimate_examples() {
        let d0 = Float::with_val(P, 0);
        let t0 = Float::with_val(P, 0);
        assert_eq!(gamma_ratio_abs_estimate(40, &d0, &t0, 1, P), 1);
        let d = Float::with_val(P, 0.3);
        let v = gamma_ratio_abs_estimate(100, &d, &t0, 1, P).to_f64();
        assert!((v - 50f64.powf(-0.6)).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn reflection(re in -30.0f64..30.0, im in -30.0f64..30.0) {
            prop_assume!(im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3);
            let z = cx_f64(P, re, im);
            let one_minus = Complex::with_val(P, 1 - &z);
            let lhs = Complex::with_val(P, gamma(&z, P).unwrap() * gamma(&one_minus, P).unwrap());
            let pi = Float::with_val(P, Constant::Pi);
            let rhs = Complex::with_val(P, &pi / Complex::with_val(P, &z * &pi).sin());
            prop_assert!(close(&lhs, &rhs, P as i32 - 16));
        }

        #[test]
        fn recurrence(re in -20.0f64..40.0, im in -40.0f64..40.0) {
            prop_assume!(im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3);
            let z = cx_f64(P, re, im);
            let lhs = gamma(&Complex::with_val(P, &z + 1u32), P).unwrap();
            let rhs = Complex::with_val(P, gamma(&z, P).unwrap() * &z);
            prop_assert!(close(&lhs, &rhs, P as i32 - 16));
        }
    }
}
