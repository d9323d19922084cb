//! The lambda-derivative D_λ and the partial-theta operator θ(yD_λ).
//!
//! D_λ f(x) = f(λx)/x. On a monomial, D_λ{x^n} = λ^n x^{n-1}, so on a
//! Laurent series the operator scales the coefficient at exponent n by λ^n
//! and shifts it to exponent n-1. The partial-theta operator is the
//! operator series
//!
//! θ(yD_λ) = Σ_{k≥0} λ^{C(k,2)} y^k D_λ^k
//!
//! which maps x^n to x^{n+1}/(x - λ^n y).

use crate::error::{Error, Result};
use crate::laurent::LaurentSeries;
use crate::scalar::{choose2, powi, Scalar};
use crate::EPS_POLE;

/// Applies D_λ once: coefficient f_n moves to exponent n-1 scaled by λ^n.
pub fn lambda_derivative(f: &LaurentSeries, lambda: Scalar) -> LaurentSeries {
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| c * powi(lambda, f.min_exponent() + i as i64))
        .collect();
    LaurentSeries::new(
        f.min_exponent() - 1,
        coeffs,
        f.truncation_order().saturating_sub(1),
    )
}

/// Applies D_λ^n via the closed form D_λ^n f(x) = f(λ^n x)/(λ^{C(n,2)} x^n).
///
/// Rejects λ = 0 for n >= 2, where the closed form divides by λ^{C(n,2)}.
pub fn lambda_derivative_pow(f: &LaurentSeries, lambda: Scalar, n: u32) -> Result<LaurentSeries> {
    if n == 0 {
        return Ok(f.clone());
    }
    if n >= 2 && lambda.norm() == 0.0 {
        return Err(Error::ZeroLambdaPower);
    }
    // Coefficient f_m lands at exponent m - n with weight λ^{nm - C(n,2)}.
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let m = f.min_exponent() + i as i64;
            c * powi(lambda, (n as i64) * m - choose2(n) as i64)
        })
        .collect();
    Ok(LaurentSeries::new(
        f.min_exponent() - n as i64,
        coeffs,
        f.truncation_order().saturating_sub(n as i64),
    ))
}

/// Applies θ(yD_λ) truncated at K operator terms:
/// Σ_{k=0}^{K} λ^{C(k,2)} y^k D_λ^k f.
///
/// The operator weight λ^{C(k,2)} cancels against the λ^{-C(k,2)} in the
/// closed power form, so each coefficient f_m contributes (λ^m y)^k at
/// exponent m - k. The grouping matters numerically: λ^{km} and y^k computed
/// separately overflow/underflow long before their product does.
pub fn theta_apply(f: &LaurentSeries, y: Scalar, lambda: Scalar, cap: u32) -> Result<LaurentSeries> {
    let mut acc = f.clone();
    if y.norm() == 0.0 {
        return Ok(acc);
    }
    // bases[i] = λ^{m_i} y; powers[i] tracks bases[i]^k across the k loop.
    let bases: Vec<Scalar> = (0..f.coeffs().len())
        .map(|i| powi(lambda, f.min_exponent() + i as i64) * y)
        .collect();
    let mut powers = vec![Scalar::new(1.0, 0.0); bases.len()];
    for k in 1..=cap {
        for (p, b) in powers.iter_mut().zip(&bases) {
            *p *= b;
        }
        let coeffs = f
            .coeffs()
            .iter()
            .zip(&powers)
            .map(|(&c, &p)| c * p)
            .collect();
        let term = LaurentSeries::new(
            f.min_exponent() - k as i64,
            coeffs,
            f.truncation_order().saturating_sub(k as i64),
        );
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Closed form of θ(yD_λ){x^n} evaluated at a point:
/// x^{n+1}/(x - λ^n y).
///
/// Fails with `PoleProximity` when the denominator is within the relative
/// pole guard of zero.
pub fn theta_monomial(n: u32, x: Scalar, y: Scalar, lambda: Scalar) -> Result<Scalar> {
    let shifted = powi(lambda, n as i64) * y;
    let denom = x - shifted;
    let scale = x.norm().max(shifted.norm());
    if denom.norm() <= EPS_POLE * scale {
        return Err(Error::PoleProximity {
            index: n as usize,
            magnitude: denom.norm(),
        });
    }
    crate::scalar::ensure_finite(powi(x, n as i64 + 1) / denom, "theta_monomial")
}
