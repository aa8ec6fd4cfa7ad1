//! Arbitrary-precision scalar helpers.
//!
//! Everything in this crate computes with `rug::Float` (MPFR). The helpers
//! here centralize constant construction and decimal formatting so the rest
//! of the code stays close to the mathematics. Algebraic constants are built
//! from their defining radicals, never from decimal literals, so they remain
//! correct at any precision.

use rug::{float::Constant, ops::Pow, Float};

/// pi at `prec` bits.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Square root of a small nonnegative integer at `prec` bits.
pub fn sqrt_u(prec: u32, n: u32) -> Float {
    Float::with_val(prec, n).sqrt()
}

/// The golden ratio (1 + sqrt 5)/2.
pub fn phi(prec: u32) -> Float {
    Float::with_val(prec, (sqrt_u(prec, 5) + 1u32) / 2u32)
}

/// The silver ratio sqrt 2 + 1, the k = 2 analogue of the golden ratio.
pub fn silver(prec: u32) -> Float {
    Float::with_val(prec, sqrt_u(prec, 2) + 1u32)
}

/// (sqrt 13 + 3)/2, the k = 3 analogue of the golden ratio.
pub fn rho13(prec: u32) -> Float {
    Float::with_val(prec, (sqrt_u(prec, 13) + 3u32) / 2u32)
}

/// 10^e at `prec` bits.
pub fn pow10(prec: u32, e: i32) -> Float {
    Float::with_val(prec, Float::with_val(prec, 10u32).pow(e))
}

/// Parse a decimal literal at `prec` bits.
pub fn parse_dec(prec: u32, s: &str) -> Option<Float> {
    Float::parse(s).ok().map(|p| Float::with_val(prec, p))
}

/// e^{-x} at the precision of `x`.
pub fn exp_neg(x: Float) -> Float {
    (-x).exp()
}

/// Format `x` with exactly `digits` significant decimal digits, rounded to
/// nearest with ties to even. Magnitudes within a readable window print in
/// plain positional notation; anything else falls back to `d.ddde<exp>`
/// scientific form. Output is deterministic for a given value and digit
/// count.
pub fn format_dec(x: &Float, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_nan() {
        return "nan".to_owned();
    }
    if x.is_infinite() {
        return if *x < 0 { "-inf".to_owned() } else { "inf".to_owned() };
    }
    if x.is_zero() {
        return "0".to_owned();
    }
    let (neg, raw, exp) = x.to_sign_string_exp(10, Some(digits));
    let exp = exp.expect("finite nonzero float has a decimal exponent");
    let mut ds: String = raw;
    while ds.len() < digits {
        ds.push('0');
    }
    let sign = if neg { "-" } else { "" };
    // Value is sign * 0.ds * 10^exp.
    let body = if exp >= 1 && (exp as usize) <= digits + 4 {
        let point = exp as usize;
        if point >= ds.len() {
            let mut int_part = ds;
            int_part.extend(std::iter::repeat('0').take(point - int_part.len()));
            int_part
        } else {
            format!("{}.{}", &ds[..point], &ds[point..])
        }
    } else if exp <= 0 && exp >= -5 {
        format!("0.{}{}", "0".repeat((-exp) as usize), ds)
    } else {
        let mantissa = if ds.len() > 1 {
            format!("{}.{}", &ds[..1], &ds[1..])
        } else {
            ds
        };
        return format!("{}{}e{}", sign, mantissa, exp - 1);
    };
    format!("{}{}", sign, body)
}
