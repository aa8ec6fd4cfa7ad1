//! Infinite products and theta series in the nome q, with certified error
//! bounds.
//!
//! Everything here returns a [`Certified`] value: the computed number plus an
//! absolute bound covering both series truncation and accumulated rounding.
//! Callers combine bounds instead of guessing tolerances.

use rug::ops::Pow;
use rug::Float;

use crate::config::EvalConfig;
use crate::error::{Error, Result};

/// A computed value together with an absolute error bound.
#[derive(Clone, Debug)]
pub struct Certified {
    pub value: Float,
    pub bound: Float,
}

impl Certified {
    /// Wraps a value whose error is negligible at its own precision.
    pub fn exact(value: Float) -> Self {
        let prec = value.prec();
        Self {
            value,
            bound: Float::new(prec),
        }
    }
}

/// Exponent pattern of a product over (1 - q^j), indexed by j mod m.
///
/// An exponent of +1 multiplies by the factor, -1 divides, -2 divides by its
/// square, 0 skips it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// Every exponent +1: Euler's product (q; q)_inf.
    Euler,
    /// +1 at j = +-1 mod 5, -1 at j = +-2 mod 5.
    Mod5,
    /// +1 at j = +-1 mod 8, -1 at j = +-3 mod 8.
    Mod8,
    /// +1 at j = +-1 mod 6, -2 at j = 3 mod 6.
    Mod6Cubic,
    /// +1 at quadratic residues mod 13, -1 at non-residues, 0 at multiples.
    Mod13,
}

impl Pattern {
    /// Exponent applied to the factor (1 - q^j).
    pub fn exponent(self, j: u64) -> i32 {
        match self {
            Pattern::Euler => 1,
            Pattern::Mod5 => match j % 5 {
                1 | 4 => 1,
                2 | 3 => -1,
                _ => 0,
            },
            Pattern::Mod8 => match j % 8 {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            },
            Pattern::Mod6Cubic => match j % 6 {
                1 | 5 => 1,
                3 => -2,
                _ => 0,
            },
            Pattern::Mod13 => match j % 13 {
                0 => 0,
                1 | 3 | 4 | 9 | 10 | 12 => 1,
                _ => -1,
            },
        }
    }
}

/// One unit of relative rounding error at `prec` bits, with headroom.
fn rounding_eps(prec: u32) -> Float {
    Float::with_val(prec, Float::i_exp(1, 2 - prec as i32))
}

fn domain_err(q: &Float, what: &'static str) -> Error {
    Error::Domain {
        value: q.to_string(),
        what,
    }
}

/// Evaluates prod_{j >= 1} (1 - q^j)^{e(j)} for the given exponent pattern.
///
/// The product is truncated once the remaining factors can move the result by
/// less than the configured tail tolerance; the certified bound covers that
/// tail plus rounding. Requires |q| <= q_max.
pub fn pattern_product(pattern: Pattern, q: &Float, cfg: &EvalConfig) -> Result<Certified> {
    let prec = cfg.prec();
    let absq = Float::with_val(prec, q.clone().abs());
    if !absq.is_finite() || absq > cfg.q_max {
        return Err(domain_err(q, "nome magnitude exceeds q_max"));
    }
    if q.is_zero() {
        return Ok(Certified::exact(Float::with_val(prec, 1)));
    }
    let tol = cfg.tail_tol();
    // Truncating after j leaves factors whose logarithms sum to at most
    // 2 |q|^{j+1} / (1 - |q|)^2 in magnitude; doubling covers exponentiation.
    let one_minus = Float::with_val(prec, 1 - &absq);
    let tail_scale = Float::with_val(prec, 4 / one_minus.square());

    let mut acc = Float::with_val(prec, 1);
    let mut qj = Float::with_val(prec, 1);
    let mut j: u64 = 0;
    loop {
        j += 1;
        if j > cfg.max_terms {
            return Err(Error::NonConvergence {
                q: q.to_string(),
                terms: cfg.max_terms,
            });
        }
        qj *= q;
        match pattern.exponent(j) {
            0 => {}
            1 => {
                let f = Float::with_val(prec, 1 - &qj);
                acc *= f;
            }
            -1 => {
                let f = Float::with_val(prec, 1 - &qj);
                acc /= f;
            }
            -2 => {
                let f = Float::with_val(prec, 1 - &qj);
                acc /= f.square();
            }
            _ => unreachable!("pattern exponents are in {{-2, -1, 0, 1}}"),
        }
        let next_abs = Float::with_val(prec, Float::with_val(prec, &qj * q).abs());
        let tail_rel = Float::with_val(prec, &tail_scale * &next_abs);
        if tail_rel <= tol {
            let abs_acc = Float::with_val(prec, acc.clone().abs());
            let mut bound = Float::with_val(prec, &abs_acc * &tail_rel);
            let rounding = Float::with_val(prec, &abs_acc * j) * rounding_eps(prec);
            bound += Float::with_val(prec, rounding);
            return Ok(Certified { value: acc, bound });
        }
    }
}

/// Euler's product f(-q) = prod_{j >= 1} (1 - q^j).
pub fn euler_f(q: &Float, cfg: &EvalConfig) -> Result<Certified> {
    pattern_product(Pattern::Euler, q, cfg)
}

/// Full theta series phi(q) = 1 + 2 sum_{k >= 1} q^{k^2}.
pub fn theta_phi(q: &Float, cfg: &EvalConfig) -> Result<Certified> {
    let prec = cfg.prec();
    let absq = Float::with_val(prec, q.clone().abs());
    if !absq.is_finite() || absq > cfg.q_max {
        return Err(domain_err(q, "nome magnitude exceeds q_max"));
    }
    let mut acc = Float::with_val(prec, 1);
    if q.is_zero() {
        return Ok(Certified::exact(acc));
    }
    let tol = cfg.tail_tol();
    let one_minus = Float::with_val(prec, 1 - &absq);
    let q2 = Float::with_val(prec, q.clone().square());
    // cur = q^{k^2}, odd = q^{2k+1}; stepping k multiplies cur by odd.
    let mut cur = Float::with_val(prec, q);
    let mut odd = Float::with_val(prec, &q2 * q);
    let mut k: u64 = 1;
    loop {
        acc += Float::with_val(prec, 2 * &cur);
        let next_abs = Float::with_val(prec, Float::with_val(prec, &cur * &odd).abs());
        let tail = Float::with_val(prec, 2 * next_abs / &one_minus);
        let abs_acc = Float::with_val(prec, acc.clone().abs());
        let scale = abs_acc.clone().max(&Float::with_val(prec, 1));
        if tail <= Float::with_val(prec, &tol * &scale) {
            let mut bound = tail;
            let rounding = Float::with_val(prec, &abs_acc * k) * rounding_eps(prec);
            bound += Float::with_val(prec, rounding);
            return Ok(Certified { value: acc, bound });
        }
        cur *= &odd;
        odd *= &q2;
        k += 1;
        if k > cfg.max_terms {
            return Err(Error::NonConvergence {
                q: q.to_string(),
                terms: cfg.max_terms,
            });
        }
    }
}

/// Triangular theta series psi(q) = sum_{k >= 0} q^{k(k+1)/2}.
pub fn theta_psi(q: &Float, cfg: &EvalConfig) -> Result<Certified> {
    let prec = cfg.prec();
    let absq = Float::with_val(prec, q.clone().abs());
    if !absq.is_finite() || absq > cfg.q_max {
        return Err(domain_err(q, "nome magnitude exceeds q_max"));
    }
    let mut acc = Float::with_val(prec, 1);
    if q.is_zero() {
        return Ok(Certified::exact(acc));
    }
    let tol = cfg.tail_tol();
    let one_minus = Float::with_val(prec, 1 - &absq);
    // term = q^{k(k+1)/2}, step = q^{k+1}; stepping k multiplies term by step.
    let mut term = Float::with_val(prec, q);
    let mut step = Float::with_val(prec, q.clone().square());
    let mut k: u64 = 1;
    loop {
        acc += &term;
        let next_abs = Float::with_val(prec, Float::with_val(prec, &term * &step).abs());
        let tail = Float::with_val(prec, next_abs / &one_minus);
        let abs_acc = Float::with_val(prec, acc.clone().abs());
        let scale = abs_acc.clone().max(&Float::with_val(prec, 1));
        if tail <= Float::with_val(prec, &tol * &scale) {
            let mut bound = tail;
            let rounding = Float::with_val(prec, &abs_acc * k) * rounding_eps(prec);
            bound += Float::with_val(prec, rounding);
            return Ok(Certified { value: acc, bound });
        }
        term *= &step;
        step *= q;
        k += 1;
        if k > cfg.max_terms {
            return Err(Error::NonConvergence {
                q: q.to_string(),
                terms: cfg.max_terms,
            });
        }
    }
}

/// Named series quotients that reduce to polynomial expressions in a
/// continued fraction value evaluated at the matching nome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quotient {
    /// f(-q^{1/5}) / (q^{1/5} f(-q^5)), which equals 1/R - 1 - R.
    EtaRoot5,
    /// f^6(-q) / (q f^6(-q^5)), which equals 1/R^5 - 11 - R^5.
    Eta6Level5,
    /// f^2(-q) / (q f^2(-q^13)), which equals 1/R' - 3 - R'.
    Eta2Level13,
    /// phi(q^2) / (q^{1/2} psi(q^4)), which equals 1/V - V.
    ThetaEven,
    /// phi(q) / (q^{1/2} psi(q^4)), which equals 1/V + V.
    ThetaOdd,
}

fn c_div(prec: u32, num: &Certified, den: &Certified) -> Certified {
    let value = Float::with_val(prec, &num.value / &den.value);
    let abs_den = Float::with_val(prec, den.value.clone().abs());
    let abs_val = Float::with_val(prec, value.clone().abs());
    let mut bound = Float::with_val(prec, &abs_val * &den.bound);
    bound += &num.bound;
    bound /= &abs_den;
    bound *= 2u32;
    Certified { value, bound }
}

fn c_pow(prec: u32, base: &Certified, n: u32) -> Certified {
    let value = Float::with_val(prec, base.value.clone().pow(n));
    let deriv = Float::with_val(prec, base.value.clone().abs().pow(n - 1)) * n;
    let bound = Float::with_val(prec, deriv * &base.bound) * 2u32;
    Certified {
        value,
        bound: Float::with_val(prec, bound),
    }
}

fn c_scale(prec: u32, x: &Certified, s: &Float) -> Certified {
    let value = Float::with_val(prec, &x.value * s);
    let abs_s = Float::with_val(prec, s.clone().abs());
    let bound = Float::with_val(prec, &abs_s * &x.bound) * 2u32;
    Certified {
        value,
        bound: Float::with_val(prec, bound),
    }
}

/// Evaluates a named quotient at nome q in (0, q_max].
///
/// Arguments of the inner series (fifth roots, fifth and thirteenth powers,
/// squares) must themselves stay below q_max, which the series enforce.
pub fn quotient(id: Quotient, q: &Float, cfg: &EvalConfig) -> Result<Certified> {
    let prec = cfg.prec();
    if !q.is_finite() || *q <= 0 {
        return Err(domain_err(q, "quotient needs a nome in (0, q_max]"));
    }
    match id {
        Quotient::EtaRoot5 => {
            let root = Float::with_val(prec, q.clone().root(5));
            let num = euler_f(&root, cfg)?;
            let q5 = Float::with_val(prec, q.clone().pow(5));
            let den = c_scale(prec, &euler_f(&q5, cfg)?, &root);
            Ok(c_div(prec, &num, &den))
        }
        Quotient::Eta6Level5 => {
            let num = c_pow(prec, &euler_f(q, cfg)?, 6);
            let q5 = Float::with_val(prec, q.clone().pow(5));
            let den = c_scale(prec, &c_pow(prec, &euler_f(&q5, cfg)?, 6), q);
            Ok(c_div(prec, &num, &den))
        }
        Quotient::Eta2Level13 => {
            let num = c_pow(prec, &euler_f(q, cfg)?, 2);
            let q13 = Float::with_val(prec, q.clone().pow(13));
            let den = c_scale(prec, &c_pow(prec, &euler_f(&q13, cfg)?, 2), q);
            Ok(c_div(prec, &num, &den))
        }
        Quotient::ThetaEven | Quotient::ThetaOdd => {
            let q2 = Float::with_val(prec, q.clone().square());
            let q4 = Float::with_val(prec, q2.clone().square());
            let num = if id == Quotient::ThetaEven {
                theta_phi(&q2, cfg)?
            } else {
                theta_phi(q, cfg)?
            };
            let sqrt_q = Float::with_val(prec, q.clone().sqrt());
            let den = c_scale(prec, &theta_psi(&q4, cfg)?, &sqrt_q);
            Ok(c_div(prec, &num, &den))
        }
    }
}
