use super::*;
use crate::specialfn::{digamma, gamma};
use proptest::prelude::*;

const P: u32 = 128;

fn c(re: f64, im: f64) -> Complex {
    Complex::with_val(P, (re, im))
}

fn x(v: f64) -> Float {
    Float::with_val(P + GUARD_BITS, v)
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::with_target(1e-36)
}

fn rel_err(a: &Complex, b: &Complex) -> f64 {
    let d = Complex::with_val(P, a - b);
    abs_f64(&d) / abs_f64(b).max(1e-300)
}

fn beta(s: &Complex, k: u32) -> Complex {
    let ks = Complex::with_val(P, Complex::with_val(P, k) - s);
    let num = gamma(s, P).unwrap() * gamma(&ks, P).unwrap();
    num / gamma(&Complex::with_val(P, k), P).unwrap()
}

#[test]
fn zero_argument_is_beta() {
    let s = c(6.1, 2.5);
    let b = beta(&s, 12);
    let direct = kummer_reg_deriv(0, &s, 12, &x(0.0), &spec(), P).unwrap();
    let eng = KummerEngine::new(&s, 12, 0, P).unwrap().eval(&x(0.0)).unwrap();
    assert!(rel_err(&direct, &b) < 1e-33);
    assert!(rel_err(&eng[0], &b) < 1e-33);
}

#[test]
fn first_derivative_at_zero_is_digamma_difference() {
    let s = c(6.1, 2.5);
    let ks = Complex::with_val(P, 12 - s.clone());
    let want = beta(&s, 12) * (digamma(&s, P).unwrap() - digamma(&ks, P).unwrap());
    let eng = KummerEngine::new(&s, 12, 1, P).unwrap().eval(&x(0.0)).unwrap();
    let direct = kummer_reg_deriv(1, &s, 12, &x(0.0), &spec(), P).unwrap();
    assert!(rel_err(&eng[1], &want) < 1e-32);
    assert!(rel_err(&direct, &want) < 1e-32);
}

#[test]
fn integer_parameters_match_exact_series() {
    let two_pi = Float::with_val(P, Constant::Pi) * 2u32;
    let z = Complex::with_val(P, (0, &two_pi));
    let f = kummer_series_exact(6, 12, &z, P);
    let g6 = gamma(&c(6.0, 0.0), P).unwrap();
    let want = Complex::with_val(P, &g6 * &g6) / gamma(&c(12.0, 0.0), P).unwrap() * f;
    let xv = Float::with_val(P + GUARD_BITS, &two_pi);
    let direct = kummer_reg_deriv(0, &c(6.0, 0.0), 12, &xv, &spec(), P).unwrap();
    let eng = KummerEngine::new(&c(6.0, 0.0), 12, 0, P).unwrap().eval(&xv).unwrap();
    assert!(rel_err(&direct, &want) < 1e-33, "{direct} vs {want}");
    assert!(rel_err(&eng[0], &want) < 1e-33);
}

#[test]
fn derivatives_match_finite_differences() {
    let s = c(3.3, -1.2);
    let h = 1e-12;
    let k = 10;
    let xv = x(-4.5);
    let at = |dh: f64| {
        let sh = Complex::with_val(P, &s + Float::with_val(P, dh));
        KummerEngine::new(&sh, k, 0, P).unwrap().eval(&xv).unwrap().remove(0)
    };
    let f = KummerEngine::new(&s, k, 2, P).unwrap().eval(&xv).unwrap();
    let (fp, f0, fm) = (at(h), at(0.0), at(-h));
    let d1 = Complex::with_val(P, &fp - &fm) / (2.0 * h);
    let d2 = (Complex::with_val(P, &fp + &fm) - Complex::with_val(P, &f0 * 2u32)) / (h * h);
    assert!(rel_err(&d1, &f[1]) < 1e-18);
    assert!(rel_err(&d2, &f[2]) < 1e-8);
}

#[test]
fn series_matches_direct_quadrature() {
    for &(sr, si, k, xv) in &[(2.0, 0.0, 4u32, 6.28), (6.05, 3.0, 12, -6.0), (20.5, -7.0, 40, 1.5), (1.2, 0.4, 6, 3.0)] {
        let s = c(sr, si);
        let eng = KummerEngine::new(&s, k, 3, P).unwrap();
        let a = eng.eval_series(&x(xv));
        let b = kummer_reg_derivs(3, &s, k, &x(xv), &spec(), P).unwrap();
        let scale = abs_f64(&beta(&c(sr, 0.0), k));
        for nu in 0..=3 {
            let d = abs_f64(&Complex::with_val(P, &a[nu] - &b[nu]));
            assert!(d < 1e-32 * scale, "s={sr}+{si}i k={k} x={xv} ν={nu}: {d:e}");
        }
    }
}

#[test]
fn contour_matches_series_and_direct() {
    let k = 40;
    let s = c(20.1, 2.0);
    let eng = KummerEngine::new(&s, k, 2, P).unwrap();
    let wide = KummerEngine::with_series_threshold(&s, k, 2, P, 100.0).unwrap();
    let scale = abs_f64(&beta(&c(20.1, 0.0), k));
    for &xv in &[30.0, -45.0, 80.0] {
        let a = eng.eval_contour(&x(xv)).unwrap();
        let b = wide.eval_series(&x(xv));
        let d = kummer_reg_derivs(2, &s, k, &x(xv), &spec(), P).unwrap();
        for nu in 0..=2 {
            let e1 = abs_f64(&Complex::with_val(P, &a[nu] - &b[nu]));
            let e2 = abs_f64(&Complex::with_val(P, &a[nu] - &d[nu]));
            assert!(e1 < 1e-30 * scale, "x={xv} ν={nu} contour/series {e1:e}");
            assert!(e2 < 1e-30 * scale, "x={xv} ν={nu} contour/direct {e2:e}");
        }
    }
}

#[test]
fn bounds_dominate_values() {
    let k = 24;
    let s = c(12.0, 5.0);
    let eng = KummerEngine::new(&s, k, 3, P).unwrap();
    for &xv in &[0.0, 0.5, 3.0, -10.0, 25.0, -60.0, 200.0] {
        let v = eng.eval(&x(xv)).unwrap();
        for (nu, f) in v.iter().enumerate() {
            let lb = eng.bounds().ln_bound(nu, f64::abs(xv));
            assert!(abs_f64(f).ln() <= lb, "x={xv} ν={nu}: {} > {lb}", abs_f64(f).ln());
        }
    }
}

#[test]
fn rejects_bad_arguments() {
    assert!(KummerEngine::new(&c(-1.0, 0.0), 12, 0, P).is_err());
    assert!(KummerEngine::new(&c(6.0, 0.0), 12, MAX_DERIV + 1, P).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn conjugate_symmetry(sr in 1.5f64..10.0, si in -4.0f64..4.0, xv in -8.0f64..8.0) {
        let k = 12;
        let f = KummerEngine::new(&c(sr, si), k, 2, P).unwrap().eval(&x(xv)).unwrap();
        let g = KummerEngine::new(&c(sr, -si), k, 2, P).unwrap().eval(&x(-xv)).unwrap();
        let scale = abs_f64(&beta(&c(sr, 0.0), k));
        for nu in 0..=2 {
            let d = abs_f64(&Complex::with_val(P, &f[nu] - g[nu].clone().conj()));
            prop_assert!(d < 1e-33 * scale);
        }
    }
}
