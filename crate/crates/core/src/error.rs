//! Error taxonomy shared by the evaluators, solvers, and lookups.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    /// The argument lies outside the region where the requested computation
    /// is defined or converges.
    #[error("argument {value} rejected: {what}")]
    Domain { value: String, what: &'static str },

    /// A series, product, or continued fraction hit its term cap before the
    /// tail dropped below tolerance.
    #[error("no convergence after {terms} terms at q = {q}")]
    NonConvergence { q: String, terms: u64 },

    /// The requested representation does not exist for this kind.
    #[error("{kind} has no {form} form")]
    UnsupportedForm { kind: &'static str, form: &'static str },

    /// The root pair would be complex: r^2 + 2rc - 1 < 0.
    #[error("complex root pair: discriminant r^2 + 2rc - 1 = {discriminant} < 0")]
    ComplexRoots { discriminant: String },

    /// A reciprocity step hit the pole of its Moebius map.
    #[error("reciprocity step pole at x = {x}")]
    Pole { x: String },

    /// Division by a vanishing combination of inputs.
    #[error("division by zero: {what}")]
    DivisionByZero { what: &'static str },

    /// An identifier (value id, family id, kind name, figure id) is unknown.
    #[error("unknown identifier: {0}")]
    UnknownId(String),

    /// Required working precision exceeds the configured ceiling.
    #[error("needs {needed} working digits, cap is {cap}")]
    PrecisionExhausted { needed: u32, cap: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
