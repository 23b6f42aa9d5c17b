//! Decimal serialization shared by reports and the command line.

use rug::float::Round;
use rug::Float;

/// `x` with `digits` significant decimal digits, rounded to nearest with ties
/// to even.
pub fn decimal(x: &Float, digits: usize) -> String {
    x.to_string_radix_round(10, Some(digits.max(1)), Round::Nearest)
}

/// Shortest round-trip text of an `f64` measurement.
pub fn short(x: f64) -> String {
    format!("{x:e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_round_to_even() {
        let p = |s: &str| Float::with_val(256, Float::parse(s).unwrap());
        assert_eq!(decimal(&p("1.25"), 2), "1.2");
        assert_eq!(decimal(&p("2.5"), 1), "2");
        assert_eq!(decimal(&p("3.5"), 1), "4");
        assert_eq!(decimal(&p("-0.000123456789"), 3), "-1.23e-4");
        assert_eq!(decimal(&Float::new(64), 5), "0");
    }
}
