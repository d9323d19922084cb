//! Double-sum bivariate generalized Lambert series (mu != lambda).
//!
//! LHS: Σ_n a_n Σ_k (μ^k x)^{n+1}/(μ^k x - λ^n y) (z/x)^k t^n — the inner
//! k-sum converges geometrically with ratio |z/x| |μ|^{n+1}.
//! RHS: Σ_i (z/x)^i Σ_k (y/(μ^i x))^k f(λ^k μ^i t x) — summed row by row.
//! The inner ratio |y/(μ^i x)| grows with i, so each row is only summable
//! while it stays below 1; the outer truncation horizon must close before
//! that happens or the parameters are outside the summable region.

use crate::closed_forms::{eval_closed_form, ClosedForm};
use crate::coefficients::{coefficient, SequenceSpec};
use crate::error::{Error, Result};
use crate::scalar::{powi, Scalar};

use super::{spec_term_ratio, sum_adaptive, EvalConfig, EvalResult, SeriesParams};

type DsParams = (Scalar, Scalar, Scalar, Scalar, Scalar, Scalar);

fn unpack(params: &SeriesParams) -> Result<DsParams> {
    match params {
        SeriesParams::DoubleSum {
            x,
            y,
            z,
            t,
            lambda,
            mu,
        } => Ok((*x, *y, *z, *t, *lambda, *mu)),
        other => Err(Error::Parse(format!(
            "expected DoubleSum parameters, got {}",
            other.family_name()
        ))),
    }
}

pub fn eval_doublesum_lhs(
    spec: &SequenceSpec,
    params: &SeriesParams,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let (x, y, z, t, lambda, mu) = unpack(params)?;
    let rho_z = (z / x).norm();
    if rho_z >= 1.0 {
        return Err(Error::DomainViolation(format!(
            "inner geometric ratio |z/x| = {rho_z:.6} >= 1"
        )));
    }
    // Outer terms behave like a_n (t x)^n (the k = 0 slice dominates).
    let ratio_hint = ((t * x).norm() * spec_term_ratio(spec)).min(0.99);
    let len = spec.len_hint();
    let mut lam_pow = Scalar::new(1.0, 0.0);
    let mut t_pow = Scalar::new(1.0, 0.0);
    let mut terms_inner = 0usize;
    let result = sum_adaptive(cfg, ratio_hint, |n| {
        if let Some(l) = len {
            if n >= l {
                return Ok(None);
            }
        }
        let shifted = lam_pow * y; // λ^n y
        let inner = {
            // Σ_k (μ^k x)^{n+1}/(μ^k x - λ^n y) (z/x)^k.
            let mut acc = Scalar::new(0.0, 0.0);
            let mut zx_pow = Scalar::new(1.0, 0.0);
            let mut mu_x = x; // μ^k x
            let ratio = (rho_z * mu.norm().powi(n as i32)).min(rho_z);
            let mut k = 0usize;
            loop {
                let denom = mu_x - shifted;
                if denom.norm() <= cfg.pole_eps * mu_x.norm().max(shifted.norm()) {
                    return Err(Error::PoleProximity {
                        index: k,
                        magnitude: denom.norm(),
                    });
                }
                let term = powi(mu_x, n as i64 + 1) / denom * zx_pow;
                acc += term;
                terms_inner += 1;
                if terms_inner > cfg.max_terms {
                    return Err(Error::MaxTermsExceeded {
                        max_terms: cfg.max_terms,
                    });
                }
                let tail = term.norm() * ratio / (1.0 - ratio);
                if k > 2 && tail <= cfg.threshold(acc.norm()) * 0.01 {
                    break;
                }
                zx_pow *= z / x;
                mu_x *= mu;
                k += 1;
            }
            acc
        };
        let a = coefficient(spec, n as u64)?;
        let term = a * inner * t_pow;
        lam_pow *= lambda;
        t_pow *= t;
        Ok(Some(term))
    })?;
    Ok(EvalResult {
        terms_used: terms_inner,
        ..result
    })
}

pub fn eval_doublesum_rhs(
    form: &ClosedForm,
    params: &SeriesParams,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let (x, y, z, t, lambda, mu) = unpack(params)?;
    let zx = z / x;
    let rho_z = zx.norm();
    if rho_z >= 1.0 {
        return Err(Error::DomainViolation(format!(
            "outer geometric ratio |z/x| = {rho_z:.6} >= 1"
        )));
    }
    let f_zero = eval_closed_form(form, Scalar::new(0.0, 0.0))?.norm();
    let mut sum = Scalar::new(0.0, 0.0);
    let mut zx_pow = Scalar::new(1.0, 0.0); // (z/x)^i
    let mut mu_pow = Scalar::new(1.0, 0.0); // μ^i
    let mut terms = 0usize;
    let mut f_max = f_zero;
    for i in 0..cfg.max_terms {
        let rho_i = if y.norm() == 0.0 {
            Scalar::new(0.0, 0.0)
        } else {
            y / (mu_pow * x)
        };
        let rho_i_norm = rho_i.norm();
        if rho_i_norm >= 1.0 - 1e-9 {
            return Err(Error::DomainViolation(format!(
                "inner geometric ratio |y/(mu^{i} x)| = {rho_i_norm:.6} >= 1 \
                 before the outer tail closed"
            )));
        }
        // Row i: Σ_k ρ_i^k f(λ^k μ^i t x), geometric in k.
        let mut row = Scalar::new(0.0, 0.0);
        let mut rho_pow = Scalar::new(1.0, 0.0);
        let mut arg = mu_pow * t * x;
        let mut k = 0usize;
        loop {
            let fk = eval_closed_form(form, arg)?;
            f_max = f_max.max(fk.norm());
            row += rho_pow * fk;
            terms += 1;
            if terms > cfg.max_terms {
                return Err(Error::MaxTermsExceeded {
                    max_terms: cfg.max_terms,
                });
            }
            let m_rem = fk.norm().max(f_zero);
            let row_tail = rho_i_norm.powi(k as i32 + 1) * m_rem / (1.0 - rho_i_norm);
            if (k > 2 || rho_i_norm == 0.0)
                && row_tail <= cfg.threshold(row.norm().max(sum.norm())) * 0.01
            {
                break;
            }
            rho_pow *= rho_i;
            arg *= lambda;
            k += 1;
        }
        sum += zx_pow * row;
        crate::scalar::ensure_finite(sum, "doublesum rhs")?;
        let thresh = cfg.threshold(sum.norm());
        // Remaining rows are bounded by f_max/(1 - ρ_{i+1}) when the next
        // inner ratio still sits below 1.
        let rho_next = rho_i_norm / mu.norm();
        if rho_next < 0.999 {
            let row_bound = f_max / (1.0 - rho_next);
            let tail = rho_z.powi(i as i32 + 1) * row_bound / (1.0 - rho_z);
            if tail <= thresh {
                return Ok(EvalResult {
                    value: sum,
                    terms_used: terms,
                    tail_estimate: tail,
                    converged: true,
                });
            }
        }
        zx_pow *= zx;
        mu_pow *= mu;
    }
    Err(Error::MaxTermsExceeded {
        max_terms: cfg.max_terms,
    })
}
