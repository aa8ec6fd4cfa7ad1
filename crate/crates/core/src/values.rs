//! Closed-form catalog values, chain iteration over exact exponents, the
//! piecewise approximation with its error scan, figure data, and inversion
//! of the octic fraction.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use rug::ops::Pow;
use rug::Float;

use crate::cfengine::{eval_cf, eval_product, CfKind};
use crate::config::{EvalConfig, DIGIT_CAP, GUARD_DIGITS};
use crate::error::{Error, Result};
use crate::qseries::Certified;
use crate::real;
use crate::reciprocity::{c_from_nome, eval, family, k_from_c, FamilyId, Route};

/// Catalog of special values with closed radical or chained forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValueId {
    R2pi,
    R5TwoPiOverSqrt5,
    RPi,
    R2piSqrt5,
    R4pi,
    R5FourPiOver5,
    R5PiOver5,
    R10pi,
    R5TwoPiOver5Sqrt5,
    R10Sqrt5Pi,
    HardyLetter,
    VPi,
    Rp13TwoPiOverSqrt13,
    GSqrt2Pi,
    SelbergPi,
}

impl ValueId {
    pub const ALL: [ValueId; 15] = [
        ValueId::R2pi,
        ValueId::R5TwoPiOverSqrt5,
        ValueId::RPi,
        ValueId::R2piSqrt5,
        ValueId::R4pi,
        ValueId::R5FourPiOver5,
        ValueId::R5PiOver5,
        ValueId::R10pi,
        ValueId::R5TwoPiOver5Sqrt5,
        ValueId::R10Sqrt5Pi,
        ValueId::HardyLetter,
        ValueId::VPi,
        ValueId::Rp13TwoPiOverSqrt13,
        ValueId::GSqrt2Pi,
        ValueId::SelbergPi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ValueId::R2pi => "R_2pi",
            ValueId::R5TwoPiOverSqrt5 => "R5_2pi_over_sqrt5",
            ValueId::RPi => "R_pi",
            ValueId::R2piSqrt5 => "R_2pi_sqrt5",
            ValueId::R4pi => "R_4pi",
            ValueId::R5FourPiOver5 => "R5_4pi_over_5",
            ValueId::R5PiOver5 => "R5_pi_over_5",
            ValueId::R10pi => "R_10pi",
            ValueId::R5TwoPiOver5Sqrt5 => "R5_2pi_over_5sqrt5",
            ValueId::R10Sqrt5Pi => "R_10sqrt5_pi",
            ValueId::HardyLetter => "HardyLetter",
            ValueId::VPi => "V_pi",
            ValueId::Rp13TwoPiOverSqrt13 => "Rp13_2pi_over_sqrt13",
            ValueId::GSqrt2Pi => "G_sqrt2pi",
            ValueId::SelbergPi => "Selberg_pi",
        }
    }

    pub fn parse(s: &str) -> Option<ValueId> {
        ValueId::ALL.iter().copied().find(|v| v.name() == s)
    }

    /// Fraction the catalog entry evaluates (the letter value is a scaled
    /// fifth-root fraction).
    pub fn kind(self) -> CfKind {
        match self {
            ValueId::R2pi
            | ValueId::RPi
            | ValueId::R2piSqrt5
            | ValueId::R4pi
            | ValueId::R10pi
            | ValueId::R10Sqrt5Pi
            | ValueId::HardyLetter => CfKind::R,
            ValueId::R5TwoPiOverSqrt5
            | ValueId::R5FourPiOver5
            | ValueId::R5PiOver5
            | ValueId::R5TwoPiOver5Sqrt5 => CfKind::R5,
            ValueId::VPi => CfKind::V,
            ValueId::Rp13TwoPiOverSqrt13 => CfKind::Rp13,
            ValueId::GSqrt2Pi => CfKind::G,
            ValueId::SelbergPi => CfKind::Selberg,
        }
    }

    /// Exponent alpha under the kind's conventional nome map.
    pub fn alpha_float(self, prec: u32) -> Float {
        let pi = real::pi(prec);
        match self {
            ValueId::R2pi | ValueId::VPi | ValueId::SelbergPi => pi,
            ValueId::R5TwoPiOverSqrt5 => Float::with_val(prec, &pi / real::sqrt_u(prec, 5)),
            ValueId::RPi => Float::with_val(prec, &pi / 2u32),
            ValueId::R2piSqrt5 | ValueId::HardyLetter => {
                Float::with_val(prec, &pi * real::sqrt_u(prec, 5))
            }
            ValueId::R4pi => Float::with_val(prec, 2 * &pi),
            ValueId::R5FourPiOver5 => Float::with_val(prec, 2 * &pi) / 5u32,
            ValueId::R5PiOver5 => Float::with_val(prec, &pi / 10u32),
            ValueId::R10pi => Float::with_val(prec, 5 * &pi),
            ValueId::R5TwoPiOver5Sqrt5 => {
                Float::with_val(prec, &pi * real::sqrt_u(prec, 5)) / 25u32
            }
            ValueId::R10Sqrt5Pi => {
                Float::with_val(prec, Float::with_val(prec, 5 * &pi) * real::sqrt_u(prec, 5))
            }
            ValueId::Rp13TwoPiOverSqrt13 => Float::with_val(prec, &pi / real::sqrt_u(prec, 13)),
            ValueId::GSqrt2Pi => Float::with_val(prec, &pi * real::sqrt_u(prec, 2)),
        }
    }

    /// Exact exponent for chain iteration, with a flag marking ids that
    /// start as fifth powers. None for entries outside the quintic system.
    pub fn chain_alpha(self) -> Option<(ExactAlpha, bool)> {
        let some = |n, d, s, fifth| Some((ExactAlpha::new(n, d, s), fifth));
        match self {
            ValueId::R2pi => some(1, 1, false, false),
            ValueId::R5TwoPiOverSqrt5 => some(1, 5, true, true),
            ValueId::RPi => some(1, 2, false, false),
            ValueId::R2piSqrt5 => some(1, 1, true, false),
            ValueId::R4pi => some(2, 1, false, false),
            ValueId::R5FourPiOver5 => some(2, 5, false, true),
            ValueId::R5PiOver5 => some(1, 10, false, true),
            ValueId::R10pi => some(5, 1, false, false),
            ValueId::R5TwoPiOver5Sqrt5 => some(1, 25, true, true),
            ValueId::R10Sqrt5Pi => some(5, 1, true, false),
            ValueId::HardyLetter => some(1, 1, true, false),
            _ => None,
        }
    }

    /// Nome of the direct evaluation.
    fn nome(self, prec: u32) -> Float {
        let alpha = self.alpha_float(prec);
        let scale = self.kind().alpha_scale();
        real::exp_neg(Float::with_val(prec, alpha * scale))
    }

    /// Evaluates the entry from its series, independently of the closed
    /// forms in `known_value`.
    pub fn direct_value(self, cfg: &EvalConfig) -> Result<Certified> {
        let prec = cfg.prec();
        match self {
            ValueId::SelbergPi => eval_cf(CfKind::Selberg, &self.nome(prec), cfg),
            ValueId::HardyLetter => {
                let r = ValueId::R2piSqrt5.direct_value(cfg)?;
                let two_pi = Float::with_val(prec, 2 * real::pi(prec));
                let scale = Float::with_val(prec, two_pi / real::sqrt_u(prec, 5)).exp();
                let value = Float::with_val(prec, &r.value * &scale);
                let mut bound = Float::with_val(prec, &r.bound * &scale);
                bound *= 2u32;
                Ok(Certified { value, bound })
            }
            _ => eval_product(self.kind(), &self.nome(prec), cfg),
        }
    }
}

impl fmt::Display for ValueId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fractional linear map x -> (1 - cx)/(c + x), the quadratic-law step.
fn mobius(c: &Float, x: &Float) -> Float {
    let prec = x.prec();
    let den = Float::with_val(prec, c + x);
    let cx = Float::with_val(prec, c * x);
    Float::with_val(prec, Float::with_val(prec, 1 - cx) / den)
}

/// Closed-form value of a catalog entry, evaluated as a radical (or chained
/// radical) procedure at the given precision.
pub fn known_value(id: ValueId, prec: u32) -> Float {
    let phi = real::phi(prec);
    match id {
        ValueId::R2pi => {
            let rad = Float::with_val(prec, phi.clone().square() + 1u32).sqrt();
            Float::with_val(prec, rad - &phi)
        }
        ValueId::R5TwoPiOverSqrt5 => {
            let p5 = Float::with_val(prec, phi.pow(5));
            let rad = Float::with_val(prec, p5.clone().square() + 1u32).sqrt();
            Float::with_val(prec, rad - &p5)
        }
        ValueId::RPi => {
            // (sqrt 5 - phi^{3/2}) / (sqrt phi - 5^{1/4}/phi)
            let sqrt5 = real::sqrt_u(prec, 5);
            let sqrt_phi = Float::with_val(prec, phi.clone().sqrt());
            let num = Float::with_val(prec, &sqrt5 - Float::with_val(prec, &phi * &sqrt_phi));
            let quartic5 = Float::with_val(prec, sqrt5.clone().sqrt());
            let den = Float::with_val(prec, &sqrt_phi - Float::with_val(prec, quartic5 / &phi));
            Float::with_val(prec, num / den)
        }
        ValueId::R2piSqrt5 => {
            let fifth = Float::with_val(prec, known_value(ValueId::R5TwoPiOverSqrt5, prec).root(5));
            mobius(&phi, &fifth)
        }
        ValueId::R4pi => mobius(&phi, &known_value(ValueId::RPi, prec)),
        ValueId::R5FourPiOver5 => {
            let p5 = Float::with_val(prec, phi.pow(5));
            let x5 = Float::with_val(prec, known_value(ValueId::RPi, prec).pow(5));
            mobius(&p5, &x5)
        }
        ValueId::R5PiOver5 => {
            let p5 = Float::with_val(prec, phi.pow(5));
            let x5 = Float::with_val(prec, known_value(ValueId::R4pi, prec).pow(5));
            mobius(&p5, &x5)
        }
        ValueId::R10pi => {
            let p5 = Float::with_val(prec, phi.clone().pow(5));
            let x5 = Float::with_val(prec, known_value(ValueId::R2pi, prec).pow(5));
            let fifth = Float::with_val(prec, mobius(&p5, &x5).root(5));
            mobius(&phi, &fifth)
        }
        ValueId::R5TwoPiOver5Sqrt5 => {
            let p5 = Float::with_val(prec, phi.pow(5));
            let x5 = Float::with_val(prec, known_value(ValueId::R2piSqrt5, prec).pow(5));
            mobius(&p5, &x5)
        }
        ValueId::R10Sqrt5Pi => {
            let fifth =
                Float::with_val(prec, known_value(ValueId::R5TwoPiOver5Sqrt5, prec).root(5));
            mobius(&phi, &fifth)
        }
        ValueId::HardyLetter => {
            let r = known_value(ValueId::R2piSqrt5, prec);
            let two_pi = Float::with_val(prec, 2 * real::pi(prec));
            let scale = Float::with_val(prec, two_pi / real::sqrt_u(prec, 5)).exp();
            Float::with_val(prec, r * scale)
        }
        ValueId::VPi => {
            let nu = real::silver(prec);
            let rad = Float::with_val(prec, nu.clone().square() + 1u32).sqrt();
            Float::with_val(prec, rad - &nu)
        }
        ValueId::Rp13TwoPiOverSqrt13 => {
            let rho = real::rho13(prec);
            let rad = Float::with_val(prec, rho.clone().square() + 1u32).sqrt();
            Float::with_val(prec, rad - &rho)
        }
        ValueId::GSqrt2Pi => {
            let three_halves = Float::with_val(prec, 1.5f64);
            Float::with_val(prec, three_halves.sqrt() - 1u32)
        }
        ValueId::SelbergPi => Float::with_val(prec, -0.625f64).exp2(),
    }
}

/// Exact exponent alpha = (num/den) * pi * sqrt(5)^{sqrt5} in the fifth-root
/// fraction's conventional map q = exp(-2 alpha).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExactAlpha {
    pub num: u64,
    pub den: u64,
    pub sqrt5: bool,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl ExactAlpha {
    pub fn new(num: u64, den: u64, sqrt5: bool) -> Self {
        let g = gcd(num, den);
        Self {
            num: num / g,
            den: den / g,
            sqrt5,
        }
    }

    /// Conjugate exponent beta with alpha * beta = pi^2.
    pub fn conjugate(self) -> Self {
        if self.sqrt5 {
            ExactAlpha::new(self.den, self.num.saturating_mul(5), true)
        } else {
            ExactAlpha::new(self.den, self.num, false)
        }
    }

    /// Descendant exponent delta with alpha * delta = pi^2 / 5, the pairing
    /// of fifth powers.
    pub fn descend(self) -> Self {
        if self.sqrt5 {
            ExactAlpha::new(self.den, self.num.saturating_mul(25), true)
        } else {
            ExactAlpha::new(self.den, self.num.saturating_mul(5), false)
        }
    }

    pub fn to_float(self, prec: u32) -> Float {
        let mut a = real::pi(prec);
        a *= self.num;
        a /= self.den;
        if self.sqrt5 {
            a *= real::sqrt_u(prec, 5);
        }
        a
    }

    fn approx(self) -> f64 {
        let base = self.num as f64 / self.den as f64 * std::f64::consts::PI;
        if self.sqrt5 {
            base * 5f64.sqrt()
        } else {
            base
        }
    }
}

impl fmt::Display for ExactAlpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num > 1 {
            write!(f, "{}", self.num)?;
        }
        if self.sqrt5 {
            f.write_str("sqrt5*")?;
        }
        f.write_str("pi")?;
        if self.den > 1 {
            write!(f, "/{}", self.den)?;
        }
        Ok(())
    }
}

/// One emitted value in a chain walk: the fraction (power 1) or its fifth
/// power (power 5) at the exact exponent.
#[derive(Clone, Debug)]
pub struct ChainStep {
    pub power: u32,
    pub alpha: ExactAlpha,
    pub value: Float,
}

struct Emission {
    power: u32,
    alpha: ExactAlpha,
    parent: ExactAlpha,
}

/// Breadth-first walk of the quintic chain graph, recorded symbolically.
///
/// Each processed node first offers its conjugate (an equal-power step),
/// then its fifth-power descendant; the descendant's fifth root joins the
/// worklist. Exponents already seen are not emitted again.
fn symbolic_walk(alpha0: ExactAlpha, fifth_start: bool, steps: u32) -> Vec<Emission> {
    let mut seen_r: HashSet<ExactAlpha> = HashSet::new();
    let mut seen_r5: HashSet<ExactAlpha> = HashSet::new();
    let mut queue: VecDeque<ExactAlpha> = VecDeque::new();
    let mut out = Vec::new();
    seen_r.insert(alpha0);
    if fifth_start {
        seen_r5.insert(alpha0);
    }
    queue.push_back(alpha0);
    while let Some(node) = queue.pop_front() {
        if out.len() as u32 >= steps {
            break;
        }
        let conj = node.conjugate();
        if seen_r.insert(conj) {
            out.push(Emission {
                power: 1,
                alpha: conj,
                parent: node,
            });
            queue.push_back(conj);
            if out.len() as u32 >= steps {
                break;
            }
        }
        let desc = node.descend();
        if seen_r5.insert(desc) {
            seen_r.insert(desc);
            out.push(Emission {
                power: 5,
                alpha: desc,
                parent: node,
            });
            queue.push_back(desc);
        }
    }
    out
}

/// Walks the chain of conjugation and fifth-power descent from a catalog
/// entry, emitting `steps` new values with exact exponents.
///
/// The working precision is raised in advance to cover the smallest nome
/// visited, so late steps keep their certified digits; an unreachable
/// precision is reported rather than silently truncated.
pub fn iterate_chain(start: ValueId, steps: u32, cfg: &EvalConfig) -> Result<Vec<ChainStep>> {
    let Some((alpha0, fifth_start)) = start.chain_alpha() else {
        return Err(Error::UnsupportedForm {
            kind: start.name(),
            form: "quintic chain",
        });
    };
    let emissions = symbolic_walk(alpha0, fifth_start, steps);

    // Precision needed to survive the cancellation at the largest exponent:
    // producing a value of size exp(-2 alpha) costs 2 alpha / ln 10 digits.
    let mut max_two_alpha = 2.0 * alpha0.approx();
    for e in &emissions {
        max_two_alpha = max_two_alpha.max(2.0 * e.alpha.approx());
    }
    let needed_f = f64::from(cfg.digits)
        + (max_two_alpha / std::f64::consts::LN_10).ceil()
        + f64::from(GUARD_DIGITS);
    if !(needed_f <= f64::from(DIGIT_CAP)) {
        return Err(Error::PrecisionExhausted {
            needed: needed_f.min(f64::from(u32::MAX)) as u32,
            cap: DIGIT_CAP,
        });
    }
    let work = EvalConfig {
        digits: needed_f as u32,
        ..cfg.clone()
    };
    let wprec = work.prec();
    let out_prec = cfg.prec();
    let phi = real::phi(wprec);
    let phi5 = Float::with_val(wprec, phi.clone().pow(5));

    // Seed value of the fifth-root fraction at alpha0.
    let q0 = real::exp_neg(Float::with_val(wprec, alpha0.to_float(wprec) * 2u32));
    let seed = if fifth_start {
        let u = eval_product(CfKind::R5, &q0, &work)?;
        Float::with_val(wprec, u.value.root(5))
    } else {
        eval_product(CfKind::R, &q0, &work)?.value
    };

    let mut r_values: std::collections::HashMap<ExactAlpha, Float> =
        std::collections::HashMap::new();
    r_values.insert(alpha0, seed);
    let mut chain = Vec::with_capacity(emissions.len());
    for e in emissions {
        let parent = r_values
            .get(&e.parent)
            .expect("parents precede children in the walk")
            .clone();
        if e.power == 1 {
            let v = mobius(&phi, &parent);
            r_values.insert(e.alpha, v.clone());
            chain.push(ChainStep {
                power: 1,
                alpha: e.alpha,
                value: Float::with_val(out_prec, v),
            });
        } else {
            let p5 = Float::with_val(wprec, parent.pow(5));
            let u = mobius(&phi5, &p5);
            r_values.insert(e.alpha, Float::with_val(wprec, u.clone().root(5)));
            chain.push(ChainStep {
                power: 5,
                alpha: e.alpha,
                value: Float::with_val(out_prec, u),
            });
        }
    }
    Ok(chain)
}

/// Two-branch approximation of the fifth-root fraction at nome exp(-2 alpha):
/// the quadratic-law image of exp(-2 pi^2 / (5 alpha)) up to alpha = pi, the
/// bare exponential exp(-2 alpha / 5) beyond.
pub fn approx_r(alpha: &Float) -> Result<Float> {
    let prec = alpha.prec();
    if !alpha.is_finite() || *alpha <= 0 {
        return Err(Error::Domain {
            value: alpha.to_string(),
            what: "approximation needs alpha > 0",
        });
    }
    let pi = real::pi(prec);
    if *alpha <= pi {
        let num = Float::with_val(prec, pi.square() * 2u32);
        let den = Float::with_val(prec, alpha * 5u32);
        let u = real::exp_neg(Float::with_val(prec, num / den));
        Ok(mobius(&real::phi(prec), &u))
    } else {
        Ok(real::exp_neg(Float::with_val(prec, alpha * 2u32) / 5u32))
    }
}

/// Result of sweeping the approximation error over a log-uniform grid.
#[derive(Clone, Debug)]
pub struct Scan {
    /// (alpha, signed error) per grid point.
    pub points: Vec<(Float, Float)>,
    pub max_error: Float,
    pub argmax_alpha: Float,
    pub argmax_index: usize,
}

/// Sweeps |approx - exact| over `grid` log-uniform points in
/// [alpha_max/10^4, alpha_max] and reports the worst point.
pub fn error_scan(grid: u32, alpha_max: &Float, cfg: &EvalConfig) -> Result<Scan> {
    let prec = cfg.prec();
    if grid < 100 {
        return Err(Error::Domain {
            value: grid.to_string(),
            what: "scan grid needs at least 100 points",
        });
    }
    let two_pi = Float::with_val(prec, 2 * real::pi(prec));
    if !alpha_max.is_finite() || *alpha_max < two_pi {
        return Err(Error::Domain {
            value: alpha_max.to_string(),
            what: "scan range must reach at least 2 pi",
        });
    }
    let lo = Float::with_val(prec, alpha_max / 10_000u32);
    let ratio = Float::with_val(prec, 10_000u32);
    let mut points = Vec::with_capacity(grid as usize);
    let mut max_error = Float::new(prec);
    let mut argmax_alpha = lo.clone();
    let mut argmax_index = 0usize;
    for i in 0..grid {
        let t = Float::with_val(prec, f64::from(i) / f64::from(grid - 1));
        let alpha = Float::with_val(prec, &lo * Float::with_val(prec, ratio.clone().pow(t)));
        let exact = eval(CfKind::R, &alpha, FamilyId::K1, Route::Auto, cfg)?;
        let approx = approx_r(&alpha)?;
        let err = Float::with_val(prec, approx - &exact.value);
        let abs_err = Float::with_val(prec, err.clone().abs());
        if abs_err > max_error {
            max_error = abs_err;
            argmax_alpha = alpha.clone();
            argmax_index = i as usize;
        }
        points.push((alpha, err));
    }
    Ok(Scan {
        points,
        max_error,
        argmax_alpha,
        argmax_index,
    })
}

/// Tabulated curve data for one of the four standard figures.
#[derive(Clone, Debug)]
pub struct Figure {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Float>>,
}

/// Builds figure data on a `grid`-row mesh.
///
/// 1: alpha in [0, pi], the doubled half-sum of the conjugate pair.
/// 2: alpha in [0, pi], the pair values themselves.
/// 3: alpha in [0, 4 pi], pair values against their bare exponentials.
/// 4: alpha log-spaced in [pi/20, pi], the k-invariant read off the nome.
///
/// Figures 1-3 start with an exact limit row at alpha = 0.
pub fn figure_data(id: u32, grid: u32, cfg: &EvalConfig) -> Result<Figure> {
    let prec = cfg.prec();
    if grid < 2 {
        return Err(Error::Domain {
            value: grid.to_string(),
            what: "figure grid needs at least 2 rows",
        });
    }
    let pi = real::pi(prec);
    let fam = family(FamilyId::K1);
    let phi_inv = Float::with_val(prec, real::phi(prec).recip());
    match id {
        1 | 2 | 3 => {
            let span = if id == 3 {
                Float::with_val(prec, 4 * &pi)
            } else {
                pi.clone()
            };
            let columns: Vec<&'static str> = match id {
                1 => vec!["alpha", "two_r"],
                2 => vec!["alpha", "R_alpha", "R_beta"],
                _ => vec!["alpha", "R_alpha", "exp_alpha", "R_beta", "exp_beta"],
            };
            let mut rows = Vec::with_capacity(grid as usize);
            let zero = Float::new(prec);
            let one = Float::with_val(prec, 1);
            rows.push(match id {
                1 => vec![zero.clone(), phi_inv.clone()],
                2 => vec![zero.clone(), phi_inv.clone(), zero.clone()],
                _ => vec![
                    zero.clone(),
                    phi_inv.clone(),
                    one,
                    zero.clone(),
                    zero.clone(),
                ],
            });
            for i in 1..grid {
                let alpha = Float::with_val(prec, &span * i) / (grid - 1);
                let beta = fam.conjugate_alpha(&alpha);
                let ra = eval(CfKind::R, &alpha, FamilyId::K1, Route::Auto, cfg)?.value;
                let rb = eval(CfKind::R, &beta, FamilyId::K1, Route::Auto, cfg)?.value;
                let row = match id {
                    1 => {
                        let two_r = Float::with_val(prec, &ra + &rb);
                        vec![alpha, two_r]
                    }
                    2 => vec![alpha, ra, rb],
                    _ => {
                        let ea = real::exp_neg(Float::with_val(prec, 2 * &alpha) / 5u32);
                        let eb = real::exp_neg(Float::with_val(prec, 2 * &beta) / 5u32);
                        vec![alpha, ra, ea, rb, eb]
                    }
                };
                rows.push(row);
            }
            Ok(Figure { columns, rows })
        }
        4 => {
            let mut rows = Vec::with_capacity(grid as usize);
            let lo = Float::with_val(prec, &pi / 20u32);
            let ratio = Float::with_val(prec, 20);
            for i in 0..grid {
                let t = Float::with_val(prec, f64::from(i) / f64::from(grid - 1));
                let alpha = Float::with_val(prec, &lo * Float::with_val(prec, ratio.clone().pow(t)));
                let q = real::exp_neg(Float::with_val(prec, 2 * &alpha));
                let c = c_from_nome(CfKind::R, &q, cfg)?;
                let k = k_from_c(&c.value)?;
                rows.push(vec![alpha, k]);
            }
            Ok(Figure {
                columns: vec!["alpha", "k"],
                rows,
            })
        }
        _ => Err(Error::Domain {
            value: id.to_string(),
            what: "figure id must be 1..=4",
        }),
    }
}

/// Solves s(exp(-alpha))^8 = x for alpha, where s is the octic fraction.
///
/// The eighth power at the symmetric point alpha = pi equals 1/32, and the
/// map is strictly decreasing from 1/16 (alpha -> 0) to 0 (alpha -> inf),
/// so any x in (0, 1/16) has exactly one preimage, found here by geometric
/// bisection.
pub fn invert_selberg(x: &Float, cfg: &EvalConfig) -> Result<Float> {
    let prec = cfg.prec();
    let sixteenth = Float::with_val(prec, 0.0625f64);
    if !x.is_finite() || *x <= 0 || *x >= sixteenth {
        return Err(Error::Domain {
            value: x.to_string(),
            what: "octic inversion needs x in (0, 1/16)",
        });
    }
    let eighth_power = |alpha: &Float| -> Result<Float> {
        let s = eval(CfKind::Selberg, alpha, FamilyId::Selberg, Route::Auto, cfg)?;
        Ok(Float::with_val(prec, s.value.pow(8)))
    };
    // Bracket [lo, hi] with f(lo) >= x >= f(hi); f decreases in alpha.
    let mut lo = Float::with_val(prec, 1);
    let mut hi = Float::with_val(prec, 1);
    for _ in 0..64 {
        if eighth_power(&lo)? >= *x {
            break;
        }
        lo /= 16u32;
    }
    for _ in 0..64 {
        if eighth_power(&hi)? <= *x {
            break;
        }
        hi *= 16u32;
    }
    let rel_tol = real::pow10(prec, -(cfg.digits as i32 + 2));
    loop {
        let gap = Float::with_val(prec, &hi / &lo) - 1u32;
        if gap <= rel_tol {
            break;
        }
        let mid = Float::with_val(prec, &lo * &hi).sqrt();
        if eighth_power(&mid)? >= *x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Float::with_val(prec, &lo * &hi).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn dec(prec: u32, s: &str) -> Float {
        real::parse_dec(prec, s).unwrap()
    }

    fn assert_close(got: &Float, want: &Float, tol_exp: i32) {
        let prec = got.prec();
        let diff = Float::with_val(prec, got - want).abs();
        assert!(
            diff < real::pow10(prec, tol_exp),
            "diff {:e} exceeds 1e{tol_exp}",
            diff.to_f64()
        );
    }

    #[test]
    fn closed_forms_match_series() {
        let cfg = cfg();
        let prec = cfg.prec();
        for id in [
            ValueId::R2pi,
            ValueId::RPi,
            ValueId::VPi,
            ValueId::GSqrt2Pi,
            ValueId::SelbergPi,
            ValueId::HardyLetter,
        ] {
            let close = known_value(id, prec);
            let direct = id.direct_value(&cfg).unwrap();
            assert_close(&direct.value, &close, -40);
        }
    }

    #[test]
    fn chained_closed_forms_hit_frozen_digits() {
        let prec = cfg().prec();
        let cases = [
            (
                ValueId::R4pi,
                "0.0810023096751576513099720878393495918551164200",
            ),
            (
                ValueId::R5FourPiOver5,
                "0.0550079700368958323139762326043479126514288033",
            ),
            (
                ValueId::R5PiOver5,
                "0.0901664281152738939853043011164883438675353500",
            ),
            (
                ValueId::R10pi,
                "0.00186744273170794640291838277501479851704592624",
            ),
            (
                ValueId::R10Sqrt5Pi,
                "7.91267725311485646179761950479477608094266173e-7",
            ),
        ];
        for (id, digits) in cases {
            let got = known_value(id, prec);
            assert_close(&got, &dec(prec, digits), -38);
        }
    }

    #[test]
    fn chain_from_the_double_exponent() {
        // Two steps from R_2pi: the fifth power at pi/5, then the fraction
        // at 5 pi.
        let cfg = cfg();
        let steps = iterate_chain(ValueId::R2pi, 2, &cfg).unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].power, 5);
        assert_eq!(steps[0].alpha, ExactAlpha::new(1, 5, false));
        assert_eq!(steps[1].power, 1);
        assert_eq!(steps[1].alpha, ExactAlpha::new(5, 1, false));

        let prec = cfg.prec();
        let q = real::exp_neg(Float::with_val(prec, 2 * real::pi(prec)) / 5u32);
        let direct = eval_product(CfKind::R5, &q, &cfg).unwrap();
        assert_close(&steps[0].value, &direct.value, -38);
        assert_close(
            &steps[1].value,
            &dec(prec, "0.00186744273170794640291838277501479851704592624"),
            -38,
        );
    }

    #[test]
    fn chain_from_the_half_exponent() {
        // Three steps from R_pi: the fraction at 2 pi... then fifth powers
        // at 2 pi/5 and pi/10.
        let cfg = cfg();
        let steps = iterate_chain(ValueId::RPi, 3, &cfg).unwrap();
        let shape: Vec<(u32, ExactAlpha)> = steps.iter().map(|s| (s.power, s.alpha)).collect();
        assert_eq!(
            shape,
            vec![
                (1, ExactAlpha::new(2, 1, false)),
                (5, ExactAlpha::new(2, 5, false)),
                (5, ExactAlpha::new(1, 10, false)),
            ]
        );
        let prec = cfg.prec();
        assert_close(
            &steps[0].value,
            &dec(prec, "0.0810023096751576513099720878393495918551164200"),
            -38,
        );
        assert_close(
            &steps[1].value,
            &dec(prec, "0.0550079700368958323139762326043479126514288033"),
            -38,
        );
        assert_close(
            &steps[2].value,
            &dec(prec, "0.0901664281152738939853043011164883438675353500"),
            -38,
        );
    }

    #[test]
    fn chain_from_a_fifth_power_start() {
        let cfg = cfg();
        let steps = iterate_chain(ValueId::R5TwoPiOverSqrt5, 3, &cfg).unwrap();
        let shape: Vec<(u32, ExactAlpha)> = steps.iter().map(|s| (s.power, s.alpha)).collect();
        assert_eq!(
            shape,
            vec![
                (1, ExactAlpha::new(1, 1, true)),
                (5, ExactAlpha::new(1, 25, true)),
                (1, ExactAlpha::new(5, 1, true)),
            ]
        );
        let prec = cfg.prec();
        assert_close(
            &steps[2].value,
            &dec(prec, "7.91267725311485646179761950479477608094266173e-7"),
            -38,
        );
    }

    #[test]
    fn chain_rejects_entries_outside_the_system() {
        let cfg = cfg();
        assert!(matches!(
            iterate_chain(ValueId::VPi, 2, &cfg),
            Err(Error::UnsupportedForm { .. })
        ));
    }

    #[test]
    fn exact_exponent_displays() {
        let cases = [
            (ExactAlpha::new(1, 1, false), "pi"),
            (ExactAlpha::new(2, 1, false), "2pi"),
            (ExactAlpha::new(1, 2, false), "pi/2"),
            (ExactAlpha::new(1, 1, true), "sqrt5*pi"),
            (ExactAlpha::new(1, 5, true), "sqrt5*pi/5"),
            (ExactAlpha::new(5, 1, true), "5sqrt5*pi"),
        ];
        for (a, s) in cases {
            assert_eq!(a.to_string(), s);
        }
    }

    #[test]
    fn conjugation_is_an_involution() {
        for a in [
            ExactAlpha::new(1, 2, false),
            ExactAlpha::new(3, 7, false),
            ExactAlpha::new(1, 5, true),
            ExactAlpha::new(4, 3, true),
        ] {
            assert_eq!(a.conjugate().conjugate(), a);
        }
    }

    #[test]
    fn approximation_error_profile() {
        let prec = cfg().prec();
        let cfg = cfg();
        let pi = real::pi(prec);
        // At the crossover the defect peaks just above 5.30e-4.
        let err_at = |alpha: &Float| -> Float {
            let exact = eval(CfKind::R, alpha, FamilyId::K1, Route::Auto, &cfg).unwrap();
            Float::with_val(prec, approx_r(alpha).unwrap() - exact.value)
        };
        let at_pi = err_at(&pi).abs();
        assert!(at_pi > 5.30e-4 && at_pi < 5.31e-4, "peak {:e}", at_pi.to_f64());
        // Far below the crossover the approximation is essentially exact.
        let small = Float::with_val(prec, &pi / 5u32);
        assert!(err_at(&small).abs() < 1e-6);
        // Beyond the crossover the defect decays.
        let at_2pi = err_at(&Float::with_val(prec, 2 * &pi)).abs();
        let at_4pi = err_at(&Float::with_val(prec, 4 * &pi)).abs();
        assert!(at_2pi < 1e-6);
        assert!(at_4pi < at_2pi);
    }

    #[test]
    fn scan_finds_the_peak_near_the_crossover() {
        let cfg = cfg();
        let prec = cfg.prec();
        let alpha_max = Float::with_val(prec, 2 * real::pi(prec));
        let scan = error_scan(128, &alpha_max, &cfg).unwrap();
        assert_eq!(scan.points.len(), 128);
        assert!(scan.max_error > 4.0e-4);
        assert!(scan.max_error < 5.31e-4);
        // The worst grid point sits within two cells of pi.
        let pi = real::pi(prec);
        let nearest = scan
            .points
            .iter()
            .enumerate()
            .min_by(|(_, (a, _)), (_, (b, _))| {
                let da = Float::with_val(prec, a - &pi).abs();
                let db = Float::with_val(prec, b - &pi).abs();
                da.partial_cmp(&db).unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        assert!(
            scan.argmax_index.abs_diff(nearest) <= 2,
            "argmax {} vs pi cell {}",
            scan.argmax_index,
            nearest
        );
        assert!(matches!(
            error_scan(50, &alpha_max, &cfg),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn figure_limit_rows_and_endpoints() {
        let cfg = cfg();
        let prec = cfg.prec();
        let fig1 = figure_data(1, 9, &cfg).unwrap();
        assert_eq!(fig1.columns, vec!["alpha", "two_r"]);
        assert_eq!(fig1.rows.len(), 9);
        assert!(fig1.rows[0][0].is_zero());
        let phi_inv = Float::with_val(prec, real::phi(prec).recip());
        assert_close(&fig1.rows[0][1], &phi_inv, -45);
        // Last row: alpha = pi, 2r = 2 (sqrt(phi^2 + 1) - phi).
        let want = Float::with_val(prec, known_value(ValueId::R2pi, prec) * 2u32);
        assert_close(&fig1.rows[8][1], &want, -40);

        let fig4 = figure_data(4, 17, &cfg).unwrap();
        assert_eq!(fig4.rows.len(), 17);
        let k_last = &fig4.rows[16][1];
        let one = Float::with_val(prec, 1);
        assert_close(k_last, &one, -40);

        assert!(matches!(
            figure_data(5, 10, &cfg),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn octic_inversion_round_trip() {
        let cfg = cfg();
        let prec = cfg.prec();
        let x = Float::with_val(prec, 0.03125f64);
        let alpha = invert_selberg(&x, &cfg).unwrap();
        let pi = real::pi(prec);
        let diff = Float::with_val(prec, &alpha - &pi);
        assert!(diff.abs() < real::pow10(prec, -45), "got {alpha}");

        // Complementary arguments multiply to pi^2 by the octic law.
        let y = Float::with_val(prec, 0.01f64);
        let comp = Float::with_val(prec, 0.0625f64 - &y);
        let a = invert_selberg(&y, &cfg).unwrap();
        let b = invert_selberg(&comp, &cfg).unwrap();
        let prod = Float::with_val(prec, a * b);
        let pi2 = Float::with_val(prec, pi.square());
        let rel = Float::with_val(prec, Float::with_val(prec, prod - &pi2) / pi2);
        assert!(rel.abs() < real::pow10(prec, -45));

        for bad in [0.0f64, 0.0625, -0.5, 1.0] {
            let v = Float::with_val(prec, bad);
            assert!(matches!(
                invert_selberg(&v, &cfg),
                Err(Error::Domain { .. })
            ));
        }
    }

    #[test]
    fn inversion_is_decreasing() {
        let cfg = cfg();
        let prec = cfg.prec();
        let mut last: Option<Float> = None;
        for i in 1..=10 {
            let x = Float::with_val(prec, 0.006f64 * f64::from(i));
            let a = invert_selberg(&x, &cfg).unwrap();
            if let Some(prev) = &last {
                assert!(a < *prev, "x = {x} gave nondecreasing alpha");
            }
            last = Some(a);
        }
    }

    #[test]
    fn catalog_names_round_trip() {
        for id in ValueId::ALL {
            assert_eq!(ValueId::parse(id.name()), Some(id));
        }
        assert_eq!(ValueId::parse("R_3pi"), None);
    }
}
