use super::*;
use crate::numberfield::{make_field, AlgebraicInt, FieldSelector};

const P: u32 = 128;

fn q() -> FieldDescriptor {
    make_field(FieldSelector::Q).unwrap()
}

fn pt(k: u32, ell: usize, delta: &str, t0: &str) -> EvalPoint {
    EvalPoint::from_decimal(k, ell, delta, t0, P).unwrap()
}

fn abs(z: &Complex) -> f64 {
    let (re, im) = crate::specialfn::to_c64(z);
    re.hypot(im)
}

#[test]
fn eval_point_validation() {
    assert!(EvalPoint::from_decimal(12, 0, "0", "0", P).is_err());
    assert!(EvalPoint::from_decimal(12, 0, "0.5", "0", P).is_err());
    assert!(EvalPoint::from_decimal(13, 0, "0.2", "0", P).is_err());
    let p = pt(12, 1, "0.25", "0.7");
    let r = p.reflect().unwrap();
    assert_eq!(r.delta.to_f64(), -0.25);
    assert_eq!(r.t0.to_f64(), -0.7);
}

#[test]
fn i1_low_orders() {
    let f = q();
    let p0 = pt(20, 0, "0.3", "1");
    assert!(abs(&(i1_normalized(&f, &p0).unwrap() - 1u32)) < 1e-35);
    let p1 = pt(20, 1, "0.3", "1");
    let ks = Complex::with_val(P, Complex::with_val(P, 20) - p1.s());
    let want = Complex::with_val(P, ln_2pi(P)) - digamma(&ks, P).unwrap();
    assert!(abs(&(i1_normalized(&f, &p1).unwrap() - want)) < 1e-35);
}

#[test]
fn i2_is_schwarz_symmetric() {
    let f = make_field(FieldSelector::Sqrt5).unwrap();
    let a = i2_normalized(&f, &pt(24, 2, "0.3", "0.8")).unwrap();
    let b = i2_normalized(&f, &pt(24, 2, "0.3", "-0.8")).unwrap();
    assert!(abs(&(a - b.conj())) < 1e-30);
}

#[test]
fn e2_vanishes_for_ell_zero() {
    let e = e_sums(&q(), &pt(16, 0, "0.2", "0.5"), &TruncationParams { a_max: 10, c_max: 10, ..Default::default() }).unwrap();
    assert!(e.e2.is_zero());
}

#[test]
fn dimension_zero_weight_14() {
    for ell in [0, 1] {
        let b = total(&q(), &pt(14, ell, "0.3", "0"), &TruncationParams::default()).unwrap();
        let tail = b.tail_bound.to_f64();
        assert!(abs(&b.a) < 10.0 * tail && tail < 1e-6, "ℓ={ell}: |A| = {:e}, tail = {tail:e}", abs(&b.a));
    }
}

#[test]
fn total_matches_r_coeff_at_one() {
    let f = q();
    let p = pt(16, 0, "0.35", "0.4");
    let tr = TruncationParams { a_max: 12, c_max: 12, quad_target: 1e-300, ..Default::default() };
    let b = total(&f, &p, &tr).unwrap();
    let r = r_coeff(&f, &InvDiffElement::integral(AlgebraicInt::ONE), &p, &tr).unwrap();
    // r(1) = T·(2π)^{s}Γ(k−s) for ℚ
    let ratio = Complex::with_val(P, &r.value / &b.t);
    let s = p.s().clone();
    let ks = Complex::with_val(P, Complex::with_val(P, 16) - &s);
    let want = (Complex::with_val(P, &s * ln_2pi(P))).exp() * crate::specialfn::gamma(&ks, P).unwrap();
    assert!(abs(&(Complex::with_val(P, &ratio / &want) - 1u32)) < 1e-30);
}

#[test]
fn coefficient_ratio_weight_12_is_tau2() {
    let f = q();
    let tr = TruncationParams::default();
    for (d, t) in [("0.2", "0"), ("0.4", "0.5")] {
        let p = pt(12, 0, d, t);
        let r1 = r_coeff(&f, &InvDiffElement::integral(AlgebraicInt::ONE), &p, &tr).unwrap();
        let r2 = r_coeff(&f, &InvDiffElement::integral(AlgebraicInt::rational(2)), &p, &tr).unwrap();
        let ratio = Complex::with_val(P, &r2.value / &r1.value);
        assert!(abs(&Complex::with_val(P, &ratio + 24u32)) < 1e-5, "{ratio}");
    }
}

#[test]
fn r_coeff_rejects_bad_nu() {
    let f = make_field(FieldSelector::Sqrt5).unwrap();
    let p = pt(12, 0, "0.2", "0");
    let tr = TruncationParams { a_max: 2, c_max: 2, m_units: 1, ..Default::default() };
    let bad = InvDiffElement { num: AlgebraicInt::ONE, den: AlgebraicInt::rational(2) };
    assert!(matches!(r_coeff(&f, &bad, &p, &tr), Err(Error::NotInInverseDifferent)));
    let neg = InvDiffElement::integral(AlgebraicInt::rational(-1));
    assert!(matches!(r_coeff(&f, &neg, &p, &tr), Err(Error::NotTotallyPositive)));
}

#[test]
fn functional_equation_weight_12() {
    let f = q();
    let tr = TruncationParams::default();
    for ell in [0usize, 1] {
        let p = pt(12, ell, "0.25", "0.7");
        let a = total(&f, &p, &tr).unwrap();
        let b = total(&f, &p.reflect().unwrap(), &tr).unwrap();
        let sign = if ell % 2 == 0 { 1 } else { -1 };
        let diff = abs(&(b.a.clone() - Complex::with_val(P, &a.a * sign)));
        let tol = 100.0 * (a.tail_bound.to_f64() + b.tail_bound.to_f64());
        assert!(diff < tol, "ℓ={ell}: {diff:e} vs {tol:e}");
    }
}

#[test]
fn tail_shrinks_with_box() {
    let f = q();
    let p = pt(40, 1, "0.3", "0");
    let small = tail_estimate(&f, &p, &TruncationParams { a_max: 20, c_max: 20, ..Default::default() }).unwrap();
    let big = tail_estimate(&f, &p, &TruncationParams { a_max: 40, c_max: 40, ..Default::default() }).unwrap();
    assert!(big < small);
    assert!(big < 1e-25, "{big}");
}

#[test]
fn representatives_window_independence() {
    let f = make_field(FieldSelector::Sqrt5).unwrap();
    // ±ε₀ sit on the window boundary: each convention picks a different unit multiple
    let lo = f.enumerate_reps_in(1, UnitWindow::LowerClosed);
    let hi = f.enumerate_reps_in(1, UnitWindow::UpperClosed);
    assert_eq!(lo.len(), hi.len());
    assert_ne!(lo, hi);
    let p = pt(30, 1, "0.3", "0.5");
    let tr = TruncationParams { a_max: 6, c_max: 6, m_units: 4, ..Default::default() };
    let run = |w| {
        let mut ctx = Context::new(&f, &p, &tr).unwrap();
        ctx.window = w;
        e_sums_ctx(&ctx).unwrap()
    };
    let (a, b) = (run(UnitWindow::LowerClosed), run(UnitWindow::UpperClosed));
    let ta = Complex::with_val(P, &a.e1 + &a.e2);
    let tb = Complex::with_val(P, &b.e1 + &b.e2);
    let tail = a.ln_tail.exp().max(b.ln_tail.exp());
    assert!(abs(&(ta - &tb)) <= 10.0 * tail, "{} vs tail {tail}", abs(&(Complex::with_val(P, &a.e1 + &a.e2) - tb)));
}
