use rug::{Complex, Float};

/// Arbitrary-precision complex number; both parts carry the same precision.
pub type BigComplex = Complex;

pub fn cx(prec: u32, re: &Float, im: &Float) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn cx_f64(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn to_c64(z: &Complex) -> (f64, f64) {
    (z.real().to_f64(), z.imag().to_f64())
}

/// `|z|` as an `f64`, safe against overflow of the squared parts.
pub(crate) fn abs_f64(z: &Complex) -> f64 {
    let (re, im) = (z.real().to_f64(), z.imag().to_f64());
    if re.is_finite() && im.is_finite() {
        re.hypot(im)
    } else {
        Float::with_val(64, z.abs_ref()).to_f64()
    }
}

/// `log2 |z|`, finite for values outside the `f64` range; `-inf` for zero.
pub(crate) fn log2_abs(z: &Complex) -> f64 {
    if z.real().is_zero() && z.imag().is_zero() {
        return f64::NEG_INFINITY;
    }
    let a = Float::with_val(64, z.abs_ref());
    Float::with_val(64, a.log2_ref()).to_f64()
}

pub(crate) fn is_nonpositive_integer(z: &Complex) -> bool {
    z.imag().is_zero() && z.real().is_integer() && *z.real() <= 0
}
