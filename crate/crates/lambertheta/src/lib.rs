//! λ-derivative and partial-theta operators with numerical evaluation of
//! generalized Lambert series identities.
//!
//! The λ-derivative acts on a series by `D_λ f(x) = f(λx)/x`, sending the
//! monomial `x^n` to `λ^n x^{n-1}`. Summing its powers with partial-theta
//! weights gives the operator `θ(yD_λ) = Σ_k λ^{C(k,2)} y^k D_λ^k`, which
//! maps `x^n` to the theta-denominator kernel `x^{n+1}/(x - λ^n y)`. Applying
//! it to a power series `f` with coefficients `a_n` produces a generalized
//! Lambert series whose closed form is a geometric expansion in `y/x` — the
//! identities this crate evaluates and verifies numerically.
//!
//! # Operators on truncated Laurent series
//!
//! ```
//! use lambertheta::laurent::LaurentSeries;
//! use lambertheta::operators::{lambda_derivative, theta_monomial};
//! use lambertheta::scalar::scalar;
//!
//! // D_λ{x^3} = λ^3 x^2 at λ = 0.5.
//! let f = LaurentSeries::monomial(3);
//! let df = lambda_derivative(&f, scalar(0.5, 0.0));
//! assert_eq!(df.coefficient(2), Some(scalar(0.125, 0.0)));
//!
//! // θ(yD_λ){x^2} = x^3/(x - λ^2 y) evaluated pointwise.
//! let v = theta_monomial(2, scalar(1.0, 0.0), scalar(0.4, 0.0), scalar(0.5, 0.0)).unwrap();
//! assert!((v.re - 1.0 / 0.9).abs() < 1e-14);
//! ```
//!
//! # Verifying an identity
//!
//! ```
//! use lambertheta::evaluators::{EvalConfig, SeriesParams};
//! use lambertheta::registry::lookup;
//! use lambertheta::scalar::scalar;
//! use lambertheta::verify::{check_identity, DomainMode, Verdict};
//!
//! let pair = lookup("geom-minus").unwrap();
//! let params = SeriesParams::Lambert {
//!     x: scalar(1.0, 0.0),
//!     y: scalar(0.2, 0.0),
//!     z: scalar(0.3, 0.0),
//!     lambda: scalar(0.5, 0.0),
//! };
//! let report = check_identity(
//!     &pair.spec,
//!     &pair.form,
//!     &params,
//!     1e-8,
//!     &EvalConfig::default(),
//!     DomainMode::Strict,
//! )
//! .unwrap();
//! assert_eq!(report.verdict, Verdict::Pass);
//! ```

pub mod cli;
pub mod closed_forms;
pub mod coefficients;
pub mod error;
pub mod evaluators;
pub mod laurent;
pub mod operators;
pub mod registry;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Relative threshold below which a denominator counts as a pole hit.
pub const EPS_POLE: f64 = 1e-9;
