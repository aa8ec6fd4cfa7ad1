//! Root pairs of the quadratic law, exact power coefficients over the
//! integers, and the periodic continued fraction attached to each k.

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::qseries::Certified;
use crate::reciprocity::{c_from_k, Residual};

/// The two slot values recovered from their half-sum r and the family
/// constant c: roots of t^2 - 2rt + (1 - 2rc) = 0, ordered x1 >= x2.
#[derive(Clone, Debug)]
pub struct RootPair {
    pub r: Float,
    pub c: Float,
    pub x1: Float,
    pub x2: Float,
    /// Set when 2rc > 1, in which case the root product 1 - 2rc is negative
    /// and x2 lies below zero. Legitimate for some analytic continuations,
    /// so it is a flag rather than an error.
    pub negative_root: bool,
}

/// Solves for the slot pair with half-sum r under the quadratic law with
/// constant c > 0.
///
/// The law (c + x1)(c + x2) = 1 + c^2 fixes the product x1 x2 = 1 - 2rc once
/// the sum is known, so the pair solves an explicit quadratic. A negative
/// discriminant r^2 + 2rc - 1 means no real pair exists.
pub fn solve_pair(r: &Float, c: &Float) -> Result<RootPair> {
    let prec = r.prec().max(c.prec());
    if !(c.is_finite() && *c > 0) {
        return Err(Error::Domain {
            value: c.to_string(),
            what: "quadratic constant c must be positive",
        });
    }
    let two_rc = Float::with_val(prec, r * c) * 2u32;
    let mut disc = Float::with_val(prec, r.clone().square() + &two_rc) - 1u32;
    if disc.is_sign_negative() && !disc.is_zero() {
        // A double root computes as a discriminant of rounding-noise size
        // with arbitrary sign; only a negative value above the noise floor
        // of the three summands is evidence of complex roots.
        let mut scale = Float::with_val(prec, r.clone().square().abs());
        scale += Float::with_val(prec, two_rc.clone().abs());
        scale += 1u32;
        scale *= Float::with_val(prec, Float::i_exp(1, 8 - prec as i32));
        if Float::with_val(prec, disc.abs_ref()) > scale {
            return Err(Error::ComplexRoots {
                discriminant: disc.to_string(),
            });
        }
        disc = Float::new(prec);
    }
    let sq = Float::with_val(prec, disc.sqrt());
    let x1 = Float::with_val(prec, r + &sq);
    let x2 = Float::with_val(prec, r - &sq);
    let negative_root = two_rc > 1u32;
    Ok(RootPair {
        r: Float::with_val(prec, r),
        c: Float::with_val(prec, c),
        x1,
        x2,
        negative_root,
    })
}

/// Rewrites a monic quadratic t^2 + Bt + C = 0 in pair form, returning
/// (r, c) = (-B/2, (C - 1)/B) so that `solve_pair` finds its roots.
pub fn embed_quadratic(b: &Float, c_coeff: &Float) -> Result<(Float, Float)> {
    if b.is_zero() {
        return Err(Error::DivisionByZero {
            what: "embedding a quadratic with zero linear coefficient",
        });
    }
    let prec = b.prec().max(c_coeff.prec());
    let r = Float::with_val(prec, b / -2i32);
    let c = Float::with_val(prec, Float::with_val(prec, c_coeff - 1u32) / b);
    Ok((r, c))
}

/// Integer coefficients of t^n = a_n + b_n t and t^{-n} = A_n + B_n t for
/// the root t of t^2 - kt - 1 = 0. Index 0 holds the n = 0 row (1, 0).
#[derive(Clone, Debug)]
pub struct PowerCoeffs {
    pub k: i32,
    pub a: Vec<Integer>,
    pub b: Vec<Integer>,
    pub a_inv: Vec<Integer>,
    pub b_inv: Vec<Integer>,
}

/// Runs the coefficient recurrences up to n_max:
/// a_n = b_{n-1}, b_n = a_{n-1} + k b_{n-1}, and on the inverse side
/// A_n = B_{n-1} - k A_{n-1}, B_n = A_{n-1}. For k = 1 the b_n are the
/// Fibonacci numbers.
pub fn power_coeffs(k: i32, n_max: u32) -> PowerCoeffs {
    let len = n_max as usize + 1;
    let mut a = Vec::with_capacity(len);
    let mut b = Vec::with_capacity(len);
    let mut a_inv = Vec::with_capacity(len);
    let mut b_inv = Vec::with_capacity(len);
    a.push(Integer::from(1));
    b.push(Integer::from(0));
    a_inv.push(Integer::from(1));
    b_inv.push(Integer::from(0));
    for n in 1..len {
        let an = b[n - 1].clone();
        let mut bn = b[n - 1].clone();
        bn *= k;
        bn += &a[n - 1];
        a.push(an);
        b.push(bn);

        let mut ain = a_inv[n - 1].clone();
        ain *= -k;
        ain += &b_inv[n - 1];
        let bin_next = a_inv[n - 1].clone();
        a_inv.push(ain);
        b_inv.push(bin_next);
    }
    PowerCoeffs {
        k,
        a,
        b,
        a_inv,
        b_inv,
    }
}

/// Defects of t^n = a_n + b_n t and t^{-n} = A_n + B_n t, with t recovered
/// from a certified slot pair as t = (1 - x1 x2)/(x1 + x2).
///
/// Returns (forward, inverse) residuals. The bounds propagate the pair's
/// certified errors through t and the power maps to first order.
pub fn power_residual(
    k: i32,
    n: u32,
    x1: &Certified,
    x2: &Certified,
    cfg: &EvalConfig,
) -> Result<(Residual, Residual)> {
    let prec = cfg.prec();
    let sum = Float::with_val(prec, &x1.value + &x2.value);
    if sum.is_zero() {
        return Err(Error::DivisionByZero {
            what: "slot pair sums to zero",
        });
    }
    let prod = Float::with_val(prec, &x1.value * &x2.value);
    let t = Float::with_val(prec, Float::with_val(prec, 1 - prod) / &sum);
    if t.is_zero() {
        return Err(Error::DivisionByZero {
            what: "central value vanished, inverse powers undefined",
        });
    }
    let coeffs = power_coeffs(k, n);
    let nn = n as usize;
    let an = Float::with_val(prec, &coeffs.a[nn]);
    let bn = Float::with_val(prec, &coeffs.b[nn]);
    let ain = Float::with_val(prec, &coeffs.a_inv[nn]);
    let bin_ = Float::with_val(prec, &coeffs.b_inv[nn]);

    let tn = Float::with_val(prec, t.clone().pow(n));
    let fwd_rhs = Float::with_val(prec, an + Float::with_val(prec, &bn * &t));
    let forward_value = Float::with_val(prec, tn - fwd_rhs);
    let tmn = Float::with_val(prec, t.clone().pow(-(n as i32)));
    let inv_rhs = Float::with_val(prec, ain + Float::with_val(prec, &bin_ * &t));
    let inverse_value = Float::with_val(prec, tmn - inv_rhs);

    // dt from the pair errors: |dt/dx1| = (x2^2 + 1)/(x1 + x2)^2 and
    // symmetrically for x2.
    let sum_sq = Float::with_val(prec, sum.square());
    let w1 = Float::with_val(prec, x2.value.clone().square() + 1u32);
    let w2 = Float::with_val(prec, x1.value.clone().square() + 1u32);
    let mut dt = Float::with_val(prec, w1 * &x1.bound);
    dt += Float::with_val(prec, w2 * &x2.bound);
    dt /= &sum_sq;

    let abs_t = Float::with_val(prec, t.clone().abs());
    let mut fwd_deriv = Float::with_val(prec, abs_t.clone().pow(n.max(1) - 1));
    fwd_deriv *= n;
    fwd_deriv += Float::with_val(prec, bn.abs());
    let mut fwd_bound = Float::with_val(prec, fwd_deriv * &dt);
    fwd_bound *= 10u32;

    let mut inv_deriv = Float::with_val(prec, abs_t.pow(-(n as i32) - 1));
    inv_deriv *= n;
    inv_deriv += Float::with_val(prec, bin_.abs());
    let mut inv_bound = Float::with_val(prec, inv_deriv * &dt);
    inv_bound *= 10u32;

    Ok((
        Residual {
            value: forward_value,
            bound: fwd_bound,
        },
        Residual {
            value: inverse_value,
            bound: inv_bound,
        },
    ))
}

/// Iterates the periodic continued fraction t = 2k + 4/t from its positive
/// fixed point 2c and returns the value after `depth` steps.
///
/// For k > 0 the fixed point attracts and plain precision suffices. For
/// k < 0 it repels: each step amplifies rounding by about 1/c^2, so the
/// working precision is raised by 2 log10(1/c) digits per step to keep the
/// returned value meaningful at the configured accuracy.
pub fn periodic_cf(k: i32, depth: u32, cfg: &EvalConfig) -> Result<Float> {
    let digits = if k < 0 {
        let c_rough = c_from_k(64, k).to_f64();
        let per_step = 2.0 * (1.0 / c_rough).log10();
        let extra = (f64::from(depth) * per_step).ceil() as u32;
        cfg.digits + crate::config::GUARD_DIGITS + extra
    } else {
        cfg.digits
    };
    if digits > crate::config::DIGIT_CAP {
        return Err(Error::PrecisionExhausted {
            needed: digits,
            cap: crate::config::DIGIT_CAP,
        });
    }
    let work = EvalConfig {
        digits,
        ..cfg.clone()
    };
    let prec = work.prec();
    let two_k = 2 * k;
    let mut t = Float::with_val(prec, c_from_k(prec, k) * 2u32);
    for _ in 0..depth {
        if t.is_zero() {
            return Err(Error::DivisionByZero {
                what: "periodic recurrence hit zero",
            });
        }
        let step = Float::with_val(prec, 4 / &t);
        t = Float::with_val(prec, step + two_k);
    }
    Ok(Float::with_val(cfg.prec(), t))
}
