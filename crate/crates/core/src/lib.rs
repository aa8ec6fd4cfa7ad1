//! Arbitrary-precision evaluation of Ramanujan-type continued fractions and
//! mechanical verification of the reciprocity laws that relate a fraction's
//! value at nome exp(-c alpha) to its value at the conjugate exponent with
//! alpha * beta = pi^2.
//!
//! The crate covers three strands:
//!
//! - evaluators for the fifth-root (Rogers-Ramanujan), eighth-root
//!   (Gollnitz-Gordon), thirteenth, cubic, and octic fractions, each as an
//!   eta- or theta-style product and, where one exists, as a literal
//!   continued fraction, both returning values with certified error bounds;
//! - a registry of reciprocity families: for each admissible parameter k a
//!   law of the form (c + x1)(c + x2) = 1 + c^2 (or its cubic and octic
//!   analogues) tying conjugate slot values together, with residual checks,
//!   routed evaluation that flips to the conjugate exponent when the direct
//!   nome is too close to 1, and the exact power coefficients of the
//!   constant c = (k + sqrt(k^2 + 4))/2 over the integers;
//! - a catalog of closed-form special values, chain iteration that walks
//!   conjugation and fifth-power descent with exact exponent bookkeeping,
//!   a two-branch elementary approximation with its error scan, and data
//!   for the four standard figures.
//!
//! All arithmetic is `rug::Float` (MPFR). Every evaluator takes an
//! [`EvalConfig`] fixing the trusted digit count; internal precision adds a
//! guard band, and routines that must escalate precision (repelling periodic
//! fractions, deep chains) do so explicitly, failing with
//! [`Error::PrecisionExhausted`] rather than returning degraded digits.

mod cfengine;
mod config;
mod error;
mod qseries;
mod quadratic;
pub use rug;

pub mod real;
mod reciprocity;
mod values;

pub use cfengine::{eval_cf, eval_product, CfKind};
pub use config::{bits_for_digits, EvalConfig, GUARD_DIGITS};
pub use error::{Error, Result};
pub use qseries::{
    euler_f, pattern_product, quotient, theta_phi, theta_psi, Certified, Pattern, Quotient,
};
pub use quadratic::{
    embed_quadratic, periodic_cf, power_coeffs, power_residual, solve_pair, PowerCoeffs, RootPair,
};
pub use reciprocity::{
    c_from_k, c_from_nome, default_family, eval, family, fundamental_residual, k_from_c,
    reciprocal_step, reciprocity_residual, registry, Family, FamilyId, Law, Residual, Route,
};
pub use values::{
    approx_r, error_scan, figure_data, invert_selberg, iterate_chain, known_value, ChainStep,
    ExactAlpha, Figure, Scan, ValueId,
};
