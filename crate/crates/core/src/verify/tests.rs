use super::*;
use crate::kernelsum::TruncationParams;
use crate::numberfield::{make_field, FieldSelector};
use proptest::prelude::*;

const P: u32 = 128;

fn field(sel: FieldSelector) -> crate::numberfield::FieldDescriptor {
    make_field(sel).unwrap()
}

fn f(x: f64) -> Float {
    Float::with_val(P, x)
}

#[test]
fn luo_closed_form_sqrt5() {
    let r = luo_sum(&field(FieldSelector::Sqrt5), &f(2.0), 20).unwrap();
    assert!(r.pass);
    // ε_t = (3+√5)/2: (ε_t² + 1)/(ε_t² − 1) = 3/√5
    let want = Float::with_val(P, 3u32) / Float::with_val(P, 5u32).sqrt();
    assert!(Float::with_val(P, &r.closed - &want).abs() < 1e-35);
    assert!((r.closed.to_f64() - 1.34164).abs() < 1e-5);
}

#[test]
fn luo_rejects_rationals_and_bad_lambda() {
    assert!(luo_sum(&field(FieldSelector::Q), &f(2.0), 5).is_err());
    assert!(luo_sum(&field(FieldSelector::Sqrt2), &f(0.0), 5).is_err());
}

#[test]
fn luo_large_lambda_tends_to_one() {
    let r = luo_sum(&field(FieldSelector::Sqrt13), &f(40.0), 3).unwrap();
    assert!(r.pass);
    assert!((r.closed.to_f64() - 1.0).abs() < 1e-30);
}

#[test]
fn trotabas_rationals_are_trivial() {
    let r = check_trotabas(&field(FieldSelector::Q), 50, 7).unwrap();
    assert!(r.report.pass);
    assert_eq!((r.c1, r.c2), (1.0, 1.0));
    assert_eq!(r.apply(&field(FieldSelector::Q)).trotabas, Some((1.0, 1.0)));
}

#[test]
fn trotabas_window_and_determinism() {
    let f5 = field(FieldSelector::Sqrt5);
    let a = check_trotabas(&f5, 200, 11).unwrap();
    let b = check_trotabas(&f5, 200, 11).unwrap();
    assert!(a.report.pass);
    assert_eq!(a, b);
    let eps = f5.unit_embedding(64).to_f64();
    assert!(a.c2 / a.c1 <= eps * 1.0001 * 1.0001);
}

#[test]
fn gamma_ratio_trend() {
    let r = check_gamma_ratio(&[50, 200], 0.3, 0.0, 1, P).unwrap();
    assert!(r.pass, "{r:?}");
    let r2 = check_gamma_ratio(&[50, 200], 0.3, 1.0, 2, P).unwrap();
    assert!(r2.pass, "{r2:?}");
}

#[test]
fn lemma41_small_grid() {
    let grid = Lemma41Grid { ks: vec![16, 32], xs: vec![-100.0, -0.1, 1.0, 10.0], ..Default::default() };
    let r = check_lemma41(&grid, P).unwrap();
    assert!(r.pass, "{:?}", r.summary);
    // near x = 0 the value is B(s, k−s) ≤ 1 against a bound of 1
    for row in &r.rows {
        if row["x"] == "-0.1" && row["ell"] == 0 {
            let ratio: f64 = row["ratio"].as_str().unwrap().parse().unwrap();
            assert!(ratio <= 1.0);
        }
    }
}

#[test]
fn lemma42_rationals() {
    let tr = TruncationParams { a_max: 10, c_max: 10, ..Default::default() };
    let r = check_lemma42(&field(FieldSelector::Q), 1, &[40, 80, 120], 0.3, 0.0, &tr, P).unwrap();
    assert!(r.pass, "{:?}", r.summary);
    let r0 = check_lemma42(&field(FieldSelector::Q), 0, &[40, 80], 0.3, 0.0, &tr, P).unwrap();
    assert!(r0.rows.iter().all(|row| row["e2_over_kn"] == "0e0"));
}

#[test]
fn decay_ell_zero_has_unit_first_term() {
    let tr = TruncationParams { a_max: 10, c_max: 10, ..Default::default() };
    // |Î₂| ≈ (4π/k)^{2δ} drops below ¼ beyond k ≈ 127 at δ = 0.3
    let grid = DecayGrid { ks: vec![100, 140, 180], deltas: vec![0.3], t0s: vec![0.0], k0_max: 200 };
    let r = check_decay_and_nonvanishing(&field(FieldSelector::Q), 0, &grid, &tr, P).unwrap();
    assert!(r.pass, "{:?}", r.summary);
    assert_eq!(r.summary["per_point"][0]["K0"], 140);
    for row in &r.rows {
        assert_eq!(row["abs_I1n"], "1e0");
    }
}

#[test]
fn symmetry_weight_12() {
    let grid = SymmetryGrid { ks: vec![12], ells: vec![0, 1], points: vec![(0.2, 0.5)] };
    let r = check_symmetry(&field(FieldSelector::Q), &grid, &TruncationParams::default(), P).unwrap();
    assert!(r.pass, "{:?}", r.rows);
}

#[test]
fn reports_serialize_stably() {
    let a = check_luo(&field(FieldSelector::Sqrt2), &[f(0.5), f(2.0)], 10).unwrap();
    let b = check_luo(&field(FieldSelector::Sqrt2), &[f(0.5), f(2.0)], 10).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(Aggregate::new(vec![a]).pass);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn luo_partials_increase(lambda in 0.2f64..6.0, m in 1u32..12) {
        let fd = field(FieldSelector::Sqrt2);
        let a = luo_sum(&fd, &f(lambda), m).unwrap();
        let b = luo_sum(&fd, &f(lambda), m + 1).unwrap();
        prop_assert!(b.partial > a.partial);
        prop_assert!(a.partial < a.closed);
        prop_assert!(a.pass && b.pass);
    }
}
