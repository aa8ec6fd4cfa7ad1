//! The continued fractions themselves: evaluation by modular product and by
//! backward recurrence, under one kind registry.

use rug::ops::Pow;
use rug::Float;

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::qseries::{pattern_product, Certified, Pattern};
use crate::real;

/// The continued fractions handled by this crate.
///
/// `R` is the fifth-root fraction, `V` the eighth-root fraction, `Rp13` the
/// level-13 quotient, `G` the cubic fraction and `Selberg` the octic one.
/// The remaining kinds are derived: `S(q) = -R(-q)`, `R5 = R^5`,
/// `S5 = S^5`, `Vneg(q) = -V(-q)`, `Sp13(q) = -Rp13(-q)`, `G3 = G^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CfKind {
    R,
    S,
    R5,
    S5,
    V,
    Vneg,
    Rp13,
    Sp13,
    G,
    G3,
    Selberg,
}

impl CfKind {
    pub const ALL: [CfKind; 11] = [
        CfKind::R,
        CfKind::S,
        CfKind::R5,
        CfKind::S5,
        CfKind::V,
        CfKind::Vneg,
        CfKind::Rp13,
        CfKind::Sp13,
        CfKind::G,
        CfKind::G3,
        CfKind::Selberg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CfKind::R => "R",
            CfKind::S => "S",
            CfKind::R5 => "R5",
            CfKind::S5 => "S5",
            CfKind::V => "V",
            CfKind::Vneg => "Vneg",
            CfKind::Rp13 => "Rp13",
            CfKind::Sp13 => "Sp13",
            CfKind::G => "G",
            CfKind::G3 => "G3",
            CfKind::Selberg => "selberg",
        }
    }

    pub fn parse(s: &str) -> Option<CfKind> {
        CfKind::ALL.iter().copied().find(|k| k.name() == s)
    }

    /// Scale s in the conventional nome map alpha -> e^{-s alpha}.
    pub fn alpha_scale(self) -> u32 {
        match self {
            CfKind::R | CfKind::R5 | CfKind::Rp13 => 2,
            _ => 1,
        }
    }

    /// Whether a modular product expansion is implemented.
    pub fn has_product(self) -> bool {
        self != CfKind::Selberg
    }

    /// Whether a continued-fraction recurrence is implemented. Powers and the
    /// level-13 quotient are product-only.
    pub fn has_cf(self) -> bool {
        matches!(
            self,
            CfKind::R | CfKind::S | CfKind::V | CfKind::Vneg | CfKind::G | CfKind::Selberg
        )
    }

    /// Limit value as the nome approaches 1 from below.
    pub fn endpoint(self, prec: u32) -> Float {
        match self {
            CfKind::R => Float::with_val(prec, real::phi(prec).recip()),
            CfKind::S => real::phi(prec),
            CfKind::R5 => Float::with_val(prec, real::phi(prec).pow(-5)),
            CfKind::S5 => Float::with_val(prec, real::phi(prec).pow(5)),
            CfKind::V => Float::with_val(prec, real::silver(prec).recip()),
            // -V(-q) tends to 1, not to the reciprocal silver ratio: the
            // factors (1 - (-q)^j) pair off and cancel in the limit.
            CfKind::Vneg => Float::with_val(prec, 1),
            CfKind::Rp13 => Float::with_val(prec, real::rho13(prec).recip()),
            CfKind::Sp13 => real::rho13(prec),
            CfKind::G => Float::with_val(prec, 0.5),
            CfKind::G3 => Float::with_val(prec, 0.125),
            CfKind::Selberg => Float::with_val(prec, real::sqrt_u(prec, 2).recip()),
        }
    }

    /// Splits a kind into (base fraction, negate nome and value, power).
    pub(crate) fn decompose(self) -> (CfKind, bool, u32) {
        match self {
            CfKind::R => (CfKind::R, false, 1),
            CfKind::S => (CfKind::R, true, 1),
            CfKind::R5 => (CfKind::R, false, 5),
            CfKind::S5 => (CfKind::R, true, 5),
            CfKind::V => (CfKind::V, false, 1),
            CfKind::Vneg => (CfKind::V, true, 1),
            CfKind::Rp13 => (CfKind::Rp13, false, 1),
            CfKind::Sp13 => (CfKind::Rp13, true, 1),
            CfKind::G => (CfKind::G, false, 1),
            CfKind::G3 => (CfKind::G, false, 3),
            CfKind::Selberg => (CfKind::Selberg, false, 1),
        }
    }

    /// Root degree d of the base prefactor q^{1/d}.
    fn root_degree(self) -> u32 {
        match self {
            CfKind::R => 5,
            CfKind::V => 2,
            CfKind::G => 3,
            CfKind::Selberg => 8,
            CfKind::Rp13 => 1,
            _ => unreachable!("root degree is defined for base kinds only"),
        }
    }

    fn product_pattern(self) -> Pattern {
        match self {
            CfKind::R => Pattern::Mod5,
            CfKind::V => Pattern::Mod8,
            CfKind::G => Pattern::Mod6Cubic,
            CfKind::Rp13 => Pattern::Mod13,
            _ => unreachable!("product pattern is defined for base kinds only"),
        }
    }
}

impl std::fmt::Display for CfKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Real d-th root following the series convention: for x < 0 the root is
/// -( |x|^{1/d} ) regardless of the parity of d, matching the formal
/// substitution q -> -q in a q^{1/d}-prefixed expansion.
pub(crate) fn signed_root(x: &Float, d: u32) -> Float {
    let prec = x.prec();
    if d == 1 {
        return x.clone();
    }
    let mag = Float::with_val(prec, x.clone().abs().root(d));
    if x.is_sign_negative() && !x.is_zero() {
        -mag
    } else {
        mag
    }
}

fn check_nome(q: &Float, cfg: &EvalConfig) -> Result<()> {
    let abs = q.clone().abs();
    if !abs.is_finite() || abs > cfg.q_max {
        return Err(Error::Domain {
            value: q.to_string(),
            what: "nome magnitude exceeds q_max",
        });
    }
    Ok(())
}

/// Evaluates a kind through its modular product expansion.
pub fn eval_product(kind: CfKind, q: &Float, cfg: &EvalConfig) -> Result<Certified> {
    let prec = cfg.prec();
    check_nome(q, cfg)?;
    if q.is_zero() {
        return Ok(Certified::exact(Float::new(prec)));
    }
    let (base, negate, power) = kind.decompose();
    if !base.has_product() {
        return Err(Error::UnsupportedForm {
            kind: kind.name(),
            form: "product",
        });
    }
    let q_eff = if negate {
        Float::with_val(prec, -q)
    } else {
        Float::with_val(prec, q)
    };
    let series = pattern_product(base.product_pattern(), &q_eff, cfg)?;
    let pre = signed_root(&q_eff, base.root_degree());
    let mut value = Float::with_val(prec, &series.value * &pre);
    let mut bound = Float::with_val(prec, &series.bound * &pre);
    bound.abs_mut();
    bound *= 2u32;
    if negate {
        value = -value;
    }
    if power > 1 {
        let mut deriv = Float::with_val(prec, value.clone().abs().pow(power - 1));
        deriv *= power;
        bound *= deriv;
        bound *= 2u32;
        value = Float::with_val(prec, value.pow(power));
    }
    Ok(Certified { value, bound })
}

/// Truncated denominator 1 + q/(1 + q^2/(1 + ... + q^n)) of the fifth-root
/// fraction, by backward recurrence.
fn cf_den_r(prec: u32, q: &Float, n: u32) -> Float {
    let mut t = Float::with_val(prec, 1);
    let mut p = Float::with_val(prec, q.clone().pow(n));
    for _ in 0..n {
        let ratio = Float::with_val(prec, &p / &t);
        t = Float::with_val(prec, 1 + ratio);
        p /= q;
    }
    t
}

/// Truncated denominator (1 + q) + q^2/((1 + q^3) + q^4/(...)) of the
/// eighth-root fraction.
fn cf_den_v(prec: u32, q: &Float, n: u32) -> Float {
    let q2 = Float::with_val(prec, q.clone().square());
    let mut t = Float::with_val(prec, 1 + Float::with_val(prec, q.clone().pow(2 * n + 1)));
    let mut even = Float::with_val(prec, q.clone().pow(2 * n));
    let mut odd = Float::with_val(prec, q.clone().pow(2 * n - 1));
    for _ in 0..n {
        let ratio = Float::with_val(prec, &even / &t);
        t = Float::with_val(prec, Float::with_val(prec, 1 + &odd) + ratio);
        even /= &q2;
        odd /= &q2;
    }
    t
}

/// Truncated denominator 1 + (q + q^2)/(1 + (q^2 + q^4)/(...)) of the cubic
/// fraction.
fn cf_den_g(prec: u32, q: &Float, n: u32) -> Float {
    let q2 = Float::with_val(prec, q.clone().square());
    let mut t = Float::with_val(prec, 1);
    let mut lin = Float::with_val(prec, q.clone().pow(n));
    let mut sqr = Float::with_val(prec, q.clone().pow(2 * n));
    for _ in 0..n {
        let num = Float::with_val(prec, &lin + &sqr);
        let ratio = Float::with_val(prec, num / &t);
        t = Float::with_val(prec, 1 + ratio);
        lin /= q;
        sqr /= &q2;
    }
    t
}

/// Truncated denominator 1 + q/((1 + q) + q^2/((1 + q^2) + ...)) of the octic
/// fraction.
fn cf_den_selberg(prec: u32, q: &Float, n: u32) -> Float {
    let mut t = Float::with_val(prec, 1 + Float::with_val(prec, q.clone().pow(n)));
    let mut p = Float::with_val(prec, q.clone().pow(n));
    for j in (1..=n).rev() {
        let ratio = Float::with_val(prec, &p / &t);
        p /= q;
        t = if j > 1 {
            Float::with_val(prec, Float::with_val(prec, 1 + &p) + ratio)
        } else {
            Float::with_val(prec, 1 + ratio)
        };
    }
    t
}

fn cf_den(base: CfKind, prec: u32, q: &Float, n: u32) -> Float {
    match base {
        CfKind::R => cf_den_r(prec, q, n),
        CfKind::V => cf_den_v(prec, q, n),
        CfKind::G => cf_den_g(prec, q, n),
        CfKind::Selberg => cf_den_selberg(prec, q, n),
        _ => unreachable!("no recurrence for this kind"),
    }
}

/// Evaluates a kind through its continued-fraction recurrence, doubling the
/// truncation depth until two successive depths agree within tolerance.
pub fn eval_cf(kind: CfKind, q: &Float, cfg: &EvalConfig) -> Result<Certified> {
    let prec = cfg.prec();
    check_nome(q, cfg)?;
    if !kind.has_cf() {
        return Err(Error::UnsupportedForm {
            kind: kind.name(),
            form: "continued fraction",
        });
    }
    if q.is_zero() {
        return Ok(Certified::exact(Float::new(prec)));
    }
    let (base, negate, _power) = kind.decompose();
    let q_eff = if negate {
        Float::with_val(prec, -q)
    } else {
        Float::with_val(prec, q)
    };
    let pre = signed_root(&q_eff, base.root_degree());
    let tol = cfg.tail_tol();
    let depth_cap = (1u64 << 20).min(cfg.max_terms) as u32;

    let mut n: u32 = 32;
    let mut prev = Float::with_val(prec, &pre / cf_den(base, prec, &q_eff, n));
    loop {
        let next_n = n.saturating_mul(2);
        if next_n > depth_cap {
            return Err(Error::NonConvergence {
                q: q.to_string(),
                terms: n as u64,
            });
        }
        let cur = Float::with_val(prec, &pre / cf_den(base, prec, &q_eff, next_n));
        let diff = Float::with_val(prec, &cur - &prev).abs();
        let scale = Float::with_val(prec, cur.clone().abs()).max(&Float::with_val(prec, 1));
        if diff <= Float::with_val(prec, &tol * &scale) {
            let mut value = cur;
            let rounding = Float::with_val(prec, value.clone().abs())
                * Float::with_val(prec, Float::i_exp(1, 8 - prec as i32));
            let bound = Float::with_val(prec, diff + Float::with_val(prec, rounding));
            if negate {
                value = -value;
            }
            return Ok(Certified { value, bound });
        }
        prev = cur;
        n = next_n;
    }
}
