//! Arbitrary-precision complex special functions.
//!
//! All functions take the requested output precision in bits and work
//! internally with [`GUARD_BITS`] extra bits.

mod bell;
mod bernoulli;
pub(crate) mod complex;
mod gamma;
mod incgamma;
mod kummer;
mod polygamma;
pub mod quadrature;

pub(crate) use bell::gamma_deriv_ratios;
pub use bell::{bell_complete, gamma_deriv_ratio};
pub use bernoulli::{bernoulli_even, bernoulli_even_float};
pub use complex::{cx, cx_f64, to_c64, BigComplex};
pub use gamma::{gamma, gamma_ratio_abs_estimate, log_gamma};
pub use incgamma::upper_incomplete_gamma;
pub use kummer::{kummer_reg_deriv, kummer_reg_derivs, kummer_series_exact, KummerBounds, KummerEngine, MAX_DERIV};
pub use polygamma::{digamma, polygamma, polygamma_all};
pub use quadrature::QuadratureSpec;

/// Extra working bits used internally by every routine in this module.
pub const GUARD_BITS: u32 = 32;
