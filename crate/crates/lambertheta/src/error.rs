//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by operators, coefficient providers and evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `lambda = 0` with an operator power that would divide by `lambda^C(k,2)`.
    #[error("lambda = 0 is not admitted for operator powers k >= 2")]
    ZeroLambdaPower,

    /// A denominator came within the pole guard of zero.
    #[error("pole proximity at index {index}: |denominator| = {magnitude:.3e}")]
    PoleProximity { index: usize, magnitude: f64 },

    /// Lucas discriminant s^2 + 4t is (numerically) zero; partial fractions undefined.
    #[error("degenerate Lucas roots: |s^2 + 4t| = {discriminant:.3e}")]
    DegenerateRoots { discriminant: f64 },

    /// Table-backed sequence indexed past its end.
    #[error("table sequence has {len} entries, index {index} out of range")]
    IndexOutOfTable { index: usize, len: usize },

    /// Closed-form argument outside its convergence radius.
    #[error("argument modulus {modulus:.6} outside convergence radius {radius:.6}")]
    OutsideRadius { modulus: f64, radius: f64 },

    /// Adaptive summation hit the term cap before the tail closed.
    #[error("summation did not converge within {max_terms} terms")]
    MaxTermsExceeded { max_terms: usize },

    /// A convergence hypothesis failed during evaluation.
    #[error("domain violation: {0}")]
    DomainViolation(String),

    /// A computation produced a non-finite scalar.
    #[error("non-finite value produced during {0}")]
    NonFinite(&'static str),

    /// Spec and closed form are not a registered pairing.
    #[error("spec {spec} and form {form} are not a registered pair")]
    UnpairedSpecForm { spec: String, form: String },

    /// Sweep invoked with nothing to do.
    #[error("empty parameter grid or pair set")]
    EmptyGrid,

    /// Malformed input (CLI values, table files, complex literals).
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
