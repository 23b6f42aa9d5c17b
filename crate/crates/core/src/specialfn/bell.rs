//! Complete Bell polynomials and `Γ^{(m)}/Γ`.

use rug::{Complex, Integer};

use super::polygamma::polygamma_all;
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 12;

/// Complete Bell polynomials `B_0..=B_m` at `(x_1, x_2, …)` via
/// `B_{n+1} = Σ_{i=0}^{n} C(n, i) B_{n−i} x_{i+1}`.
pub fn bell_complete(x: &[Complex], m: usize, prec: u32) -> Vec<Complex> {
    assert!(x.len() >= m, "need {m} arguments");
    let mut b = vec![Complex::with_val(prec, 1)];
    for n in 0..m {
        let mut acc = Complex::with_val(prec, 0);
        let mut binom = Integer::from(1);
        for i in 0..=n {
            let t = Complex::with_val(prec, &b[n - i] * &x[i]);
            acc += t * &binom;
            binom = binom * (n - i) as u32 / (i as u32 + 1);
        }
        b.push(acc);
    }
    b
}

/// `Γ^{(m)}(z)/Γ(z) = B_m(ψ(z), ψ'(z), …, ψ^{(m−1)}(z))`.
pub fn gamma_deriv_ratio(m: usize, z: &Complex, prec: u32) -> Result<Complex> {
    if m > MAX_ORDER {
        return Err(Error::InvalidArgument(format!("derivative order {m} exceeds {MAX_ORDER}")));
    }
    if m == 0 {
        return Ok(Complex::with_val(prec, 1));
    }
    let psi = polygamma_all(m - 1, z, prec + 16)?;
    let b = bell_complete(&psi, m, prec + 16);
    Ok(Complex::with_val(prec, &b[m]))
}

/// `Γ^{(j)}(z)/Γ(z)` for `j = 0..=m`.
pub(crate) fn gamma_deriv_ratios(m: usize, z: &Complex, prec: u32) -> Result<Vec<Complex>> {
    if m == 0 {
        return Ok(vec![Complex::with_val(prec, 1)]);
    }
    let psi = polygamma_all(m - 1, z, prec + 16)?;
    Ok(bell_complete(&psi, m, prec + 16)
        .into_iter()
        .map(|v| Complex::with_val(prec, v))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::complex::{cx_f64, log2_abs};
    use crate::specialfn::gamma::gamma;
    use rug::float::Constant;
    use rug::Float;

    const P: u32 = 256;

    #[test]
    fn low_orders() {
        let z = cx_f64(P, 2.5, 0.75);
        assert_eq!(gamma_deriv_ratio(0, &z, P).unwrap(), Complex::with_val(P, 1));
        let psi = polygamma_all(1, &z, P).unwrap();
        let m1 = gamma_deriv_ratio(1, &z, P).unwrap();
        assert!(log2_abs(&Complex::with_val(P, &m1 - &psi[0])) < -240.0);
        let m2 = gamma_deriv_ratio(2, &z, P).unwrap();
        let expect = Complex::with_val(P, psi[0].square_ref()) + &psi[1];
        assert!(log2_abs(&Complex::with_val(P, &m2 - &expect)) < -240.0);
    }

    #[test]
    fn second_derivative_at_one_by_finite_differences() {
        // independent route: central second difference of Γ at z = 1
        let h = Float::with_val(P, 1e-20);
        let one = cx_f64(P, 1.0, 0.0);
        let g = |dz: &Float| gamma(&Complex::with_val(P, &one + dz), P).unwrap();
        let fd = (g(&h) + g(&Float::with_val(P, -&h)) - g(&Float::with_val(P, 0)) * 2u32)
            / Float::with_val(P, h.square_ref());
        let m2 = gamma_deriv_ratio(2, &one, P).unwrap();
        let eg = Float::with_val(P, Constant::Euler);
        let closed = eg.square() + Float::with_val(P, Constant::Pi).square() / 6u32;
        assert!((Float::with_val(P, m2.real() - &closed)).abs() < 1e-60);
        assert!((Float::with_val(P, fd.real() - &closed)).abs() < 1e-30);
    }
}
