use super::*;
use proptest::prelude::*;
use rug::ops::Pow;

const P: u32 = 256;

fn c(re: f64, im: f64) -> Complex {
    Complex::with_val(P, (re, im))
}

fn abs(z: &Complex) -> f64 {
    Float::with_val(64, z.abs_ref()).to_f64()
}

#[test]
fn tau_values() {
    let t = delta_coefficients(30).unwrap();
    let known = [1i64, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920];
    for (i, v) in known.iter().enumerate() {
        assert_eq!(*t.get(i + 1), *v);
    }
    assert_eq!(*t.get(6), Integer::from(t.get(2) * t.get(3)));
    assert_eq!(t.weight, 12);
}

#[test]
fn tau_agrees_with_euler_product_expansion() {
    // independent route: expand q∏(1−qⁿ)²⁴ by 24 dense multiplications
    let n = 120;
    let mut s = vec![Integer::new(); n];
    s[0] = Integer::from(1);
    for m in 1..n {
        for _ in 0..24 {
            for i in (m..n).rev() {
                let t = s[i - m].clone();
                s[i] -= t;
            }
        }
    }
    assert_eq!(delta_coefficients(n).unwrap().coeffs, s);
}

#[test]
fn tau_multiplicative_and_deligne() {
    let t = delta_coefficients(1000).unwrap();
    let is_prime = |p: usize| p > 1 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
    for p in (2..=1000).filter(|&p| is_prime(p)) {
        let bound = 2.0 * (p as f64).powf(5.5);
        assert!(t.get(p).to_f64().abs() <= bound, "p = {p}");
    }
    for m in 2..=31usize {
        for n in 2..=31usize {
            let g = (1..=m.min(n)).rev().find(|d| m % d == 0 && n % d == 0).unwrap();
            if g == 1 {
                assert_eq!(*t.get(m * n), Integer::from(t.get(m) * t.get(n)));
            }
        }
    }
    // Hecke relation at a prime power
    assert_eq!(*t.get(4), Integer::from(t.get(2).pow(2u32)) - Integer::from(2).pow(11u32));
}

#[test]
fn lambda_symmetry_and_reality() {
    let s = c(6.3, 0.4);
    let ks = c(5.7, -0.4);
    let a = lambda_delta(&s, 60, P).unwrap();
    let b = lambda_delta(&ks, 60, P).unwrap();
    assert!(abs(&Complex::with_val(P, &a.value - &b.value)) < 1e-60 * abs(&a.value));
    let r = lambda_delta(&c(6.0, 0.0), 60, P).unwrap();
    assert!(r.value.imag().is_zero() || abs(&Complex::with_val(P, r.value.imag())) < 1e-70);
    assert!(r.truncation < 1e-80 * abs(&r.value));
}

#[test]
fn lambda_stable_in_truncation() {
    let s = c(6.0, 0.0);
    let a = lambda_delta(&s, 200, P).unwrap();
    let b = lambda_delta(&s, 400, P).unwrap();
    assert!(abs(&Complex::with_val(P, &a.value - &b.value)) < 1e-25 * abs(&a.value));
    // truncation estimates fall geometrically while the series is not yet at
    // rounding level
    let t50 = lambda_delta(&s, 50, 1024).unwrap().truncation.to_f64();
    let t60 = lambda_delta(&s, 60, 1024).unwrap().truncation.to_f64();
    assert!(t60 < t50 * 1e-20, "{t50:e} {t60:e}");
    assert!(a.truncation < 1e-80);
}

#[test]
fn lambda_matches_dirichlet_series_right_of_the_strip() {
    // independent route: Λ(s) = (2π)^{−s}Γ(s)Σ τ(n)n^{−s}; at Re s = 10.5 the
    // Dirichlet series converges absolutely, with tail ≲ Σ_{n>N} n^{5.5−10.5+ε}
    let s = c(10.5, 0.0);
    let n = 4000;
    let t = delta_coefficients(n).unwrap();
    let mut l = Float::with_val(P, 0);
    for m in 1..=n {
        let term = Float::with_val(P, t.get(m)) / Pow::pow(Float::with_val(P, m), 10.5f64);
        l += term;
    }
    let two_pi = Float::with_val(P, Constant::Pi) * 2u32;
    let g = crate::specialfn::gamma(&s, P).unwrap();
    let want = Complex::with_val(P, g * l) / Pow::pow(two_pi, 10.5f64);
    let got = lambda_delta(&s, 60, P).unwrap().value;
    assert!(abs(&(Complex::with_val(P, &got / &want) - 1u32)) < 1e-6);
}

#[test]
fn derivative_by_circle() {
    let s = c(6.0, 0.0);
    let v0 = lambda_delta_deriv(0, &s, 60, P).unwrap();
    let direct = lambda_delta(&s, 60, P).unwrap();
    assert!(abs(&Complex::with_val(P, &v0.value - &direct.value)) < 1e-20 * abs(&direct.value));
    // Λ(s) = Λ(12 − s) forces Λ'(6) = 0
    let d1 = lambda_delta_deriv(1, &s, 60, P).unwrap();
    assert!(abs(&d1.value) < 1e-40 * abs(&direct.value));
    // central difference away from the centre
    let s = c(6.3, 0.2);
    let d = lambda_delta_deriv(1, &s, 60, P).unwrap();
    let h = Float::with_val(P, 1e-6);
    let up = lambda_delta(&Complex::with_val(P, &s + &h), 60, P).unwrap().value;
    let dn = lambda_delta(&Complex::with_val(P, &s - &h), 60, P).unwrap().value;
    let fd = Complex::with_val(P, &up - &dn) / Float::with_val(P, &h * 2u32);
    assert!(abs(&Complex::with_val(P, &fd - &d.value)) < 1e-9 * abs(&d.value));
}

#[test]
fn derivative_rejects_circle_outside_strip() {
    assert!(lambda_delta_deriv(1, &c(1.1, 0.0), 60, P).is_err());
    assert!(lambda_delta(&c(6.0, 0.0), 10, P).is_err());
}

#[test]
fn dimensions() {
    assert_eq!(dim_cuspforms_level1(12).unwrap(), 1);
    assert_eq!(dim_cuspforms_level1(14).unwrap(), 0);
    assert_eq!(dim_cuspforms_level1(24).unwrap(), 2);
    for k in [4, 6, 8, 10] {
        assert_eq!(dim_cuspforms_level1(k).unwrap(), 0);
    }
    assert_eq!(dim_cuspforms_level1(26).unwrap(), 1);
    assert!(dim_cuspforms_level1(13).is_err());
}

#[test]
fn dim_zero_rejects_weight_12() {
    let p = EvalPoint::from_decimal(12, 0, "0.3", "0", 128).unwrap();
    assert!(dim_zero_case(&p, &TruncationParams::default()).is_err());
}

#[test]
fn compare_identical_points() {
    let p = EvalPoint::from_decimal(12, 0, "0.2", "0", 128).unwrap();
    let r = compare_average(&p, &p, &TruncationParams::default(), 60).unwrap();
    assert_eq!(r.r_kernel, Complex::with_val(128, 1));
    assert!(r.residual.is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]
    #[test]
    fn lambda_reflection(re in 5.0f64..7.0, im in -2.0f64..2.0) {
        let a = lambda_delta(&c(re, im), 50, 128).unwrap().value;
        let b = lambda_delta(&c(12.0 - re, -im), 50, 128).unwrap().value;
        prop_assert!(abs(&Complex::with_val(128, &a - &b)) <= 1e-30 * abs(&a));
        let conj = lambda_delta(&c(re, -im), 50, 128).unwrap().value;
        prop_assert!(abs(&(Complex::with_val(128, a.conj_ref()) - &conj)) <= 1e-30 * abs(&a));
    }
}
