//! Generalized Lambert series: Σ_n a_n x^{n+1}/(x - λ^n y) z^n and its
//! closed-form expansion Σ_k (y/x)^k f(λ^k x z).

use crate::closed_forms::{eval_closed_form, ClosedForm};
use crate::coefficients::{coefficient, SequenceSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{spec_term_ratio, sum_adaptive, EvalConfig, EvalResult, SeriesParams};

fn unpack(params: &SeriesParams) -> Result<(Scalar, Scalar, Scalar, Scalar)> {
    match params {
        SeriesParams::Lambert { x, y, z, lambda } => Ok((*x, *y, *z, *lambda)),
        other => Err(Error::Parse(format!(
            "expected Lambert parameters, got {}",
            other.family_name()
        ))),
    }
}

/// LHS partial sum with per-term pole detection.
pub fn eval_lambert_lhs(
    spec: &SequenceSpec,
    params: &SeriesParams,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let (x, y, z, lambda) = unpack(params)?;
    let ratio_hint = ((x * z).norm() * spec_term_ratio(spec)).min(0.99);
    let len = spec.len_hint();
    let mut lam_pow = Scalar::new(1.0, 0.0); // λ^n
    let mut z_pow = Scalar::new(1.0, 0.0); // z^n
    let mut x_pow = x; // x^{n+1}
    sum_adaptive(cfg, ratio_hint, |n| {
        if let Some(l) = len {
            if n >= l {
                return Ok(None);
            }
        }
        let shifted = lam_pow * y;
        let denom = x - shifted;
        if denom.norm() <= cfg.pole_eps * x.norm().max(shifted.norm()) {
            return Err(Error::PoleProximity {
                index: n,
                magnitude: denom.norm(),
            });
        }
        let a = coefficient(spec, n as u64)?;
        let term = a * x_pow / denom * z_pow;
        lam_pow *= lambda;
        z_pow *= z;
        x_pow *= x;
        Ok(Some(term))
    })
}

/// RHS geometric sum Σ_k (y/x)^k f(λ^k x z) with a rigorous geometric
/// tail bound |y/x|^{K+1} M / (1 - |y/x|).
pub fn eval_lambert_rhs(
    form: &ClosedForm,
    params: &SeriesParams,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let (x, y, z, lambda) = unpack(params)?;
    sum_geometric_expansion(cfg, y / x, x * z, lambda, |arg| eval_closed_form(form, arg))
}

/// Shared engine for Σ_k ρ^k g(λ^k base): used by the Lambert and Rogers
/// right-hand sides.
pub(crate) fn sum_geometric_expansion<G>(
    cfg: &EvalConfig,
    rho: Scalar,
    base: Scalar,
    lambda: Scalar,
    mut g: G,
) -> Result<EvalResult>
where
    G: FnMut(Scalar) -> Result<Scalar>,
{
    let rho_norm = rho.norm();
    if rho_norm >= 1.0 {
        return Err(Error::DomainViolation(format!(
            "geometric ratio |y/x| = {rho_norm:.6} >= 1"
        )));
    }
    let g_zero = g(Scalar::new(0.0, 0.0))?.norm();
    let mut sum = Scalar::new(0.0, 0.0);
    let mut rho_pow = Scalar::new(1.0, 0.0);
    let mut arg = base;
    let mut streak = 0u32;
    for k in 0..cfg.max_terms {
        let gk = g(arg)?;
        let term = rho_pow * gk;
        sum += term;
        crate::scalar::ensure_finite(sum, "geometric expansion")?;
        let thresh = cfg.threshold(sum.norm());
        if term.norm() <= thresh {
            streak += 1;
        } else {
            streak = 0;
        }
        // Remaining |f| along the shrinking argument trajectory is modelled
        // by the larger of the current sample and the limit value f(0).
        let m_rem = gk.norm().max(g_zero);
        let tail = rho_norm.powi(k as i32 + 1) * m_rem / (1.0 - rho_norm);
        if (streak >= 3 || rho_norm == 0.0) && tail <= thresh {
            return Ok(EvalResult {
                value: sum,
                terms_used: k + 1,
                tail_estimate: tail,
                converged: true,
            });
        }
        rho_pow *= rho;
        arg *= lambda;
    }
    Err(Error::MaxTermsExceeded {
        max_terms: cfg.max_terms,
    })
}
