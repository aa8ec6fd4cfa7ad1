//! Evaluation configuration: requested precision and convergence limits.

use rug::Float;

use crate::real;

/// Extra decimal digits carried beyond the requested count. Truncation
/// tolerances sit at the bottom of the guard band, so the digits the caller
/// asked for are unaffected by tail cutoff.
pub const GUARD_DIGITS: u32 = 10;

/// Ceiling on internally escalated working precision, in decimal digits.
/// Requests that would need more report `PrecisionExhausted` instead of
/// silently degrading.
pub(crate) const DIGIT_CAP: u32 = 1_000_000;

/// Knobs shared by every evaluator in the crate.
#[derive(Clone, Debug)]
pub struct EvalConfig {
    /// Decimal digits the caller wants to trust in returned values.
    pub digits: u32,
    /// Largest |q| admitted for direct series or product evaluation. Beyond
    /// this the alternative is a reciprocity flip to the conjugate exponent.
    pub q_max: f64,
    /// Cap on product terms and continued-fraction depth.
    pub max_terms: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            digits: 50,
            q_max: 0.995,
            max_terms: 1_000_000,
        }
    }
}

impl EvalConfig {
    pub fn with_digits(digits: u32) -> Self {
        Self {
            digits,
            ..Self::default()
        }
    }

    /// Working mantissa precision in bits: requested digits plus the guard
    /// band, converted to bits with headroom for rounding noise.
    pub fn prec(&self) -> u32 {
        bits_for_digits(self.digits + GUARD_DIGITS)
    }

    /// Absolute truncation tolerance, 10^-(digits + guard).
    pub fn tail_tol(&self) -> Float {
        real::pow10(self.prec(), -((self.digits + GUARD_DIGITS) as i32))
    }

    /// A copy of `self` with the digit count raised to at least `digits`.
    pub fn escalated(&self, digits: u32) -> Self {
        Self {
            digits: digits.max(self.digits),
            ..self.clone()
        }
    }
}

/// Mantissa bits needed for `digits` decimal digits, with fixed headroom.
pub fn bits_for_digits(digits: u32) -> u32 {
    const LOG2_10: f64 = 3.321928094887362;
    (digits as f64 * LOG2_10).ceil() as u32 + 32
}
