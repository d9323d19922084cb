//! Lambert-Rogers bilinear series: two coefficient sequences sharing one
//! theta-denominator in n + m.
//!
//! LHS: Σ_n Σ_m a_n b_m x^{n+m+1}/(x - λ^{n+m} y) t^n s^m, summed by
//! anti-diagonals N = n + m.
//! RHS: Σ_k (y/x)^k f(λ^k t x) g(λ^k s x), a single geometric sum.

use crate::closed_forms::{eval_closed_form, ClosedForm};
use crate::coefficients::{coefficient, SequenceSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::lambert::sum_geometric_expansion;
use super::{spec_term_ratio, EvalConfig, EvalResult, SeriesParams};

fn unpack(params: &SeriesParams) -> Result<(Scalar, Scalar, Scalar, Scalar, Scalar)> {
    match params {
        SeriesParams::Rogers { x, y, t, s, lambda } => Ok((*x, *y, *t, *s, *lambda)),
        other => Err(Error::Parse(format!(
            "expected Rogers parameters, got {}",
            other.family_name()
        ))),
    }
}

fn coeff_or_zero(spec: &SequenceSpec, n: u64) -> Result<Scalar> {
    match spec.len_hint() {
        Some(len) if n >= len as u64 => Ok(Scalar::new(0.0, 0.0)),
        _ => coefficient(spec, n),
    }
}

pub fn eval_rogers_lhs(
    spec_a: &SequenceSpec,
    spec_b: &SequenceSpec,
    params: &SeriesParams,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let (x, y, t, s, lambda) = unpack(params)?;
    // Shell magnitudes behave like (N+1) r^N with
    // r = max(|xt| ra, |xs| rb).
    let r_model = ((x * t).norm() * spec_term_ratio(spec_a))
        .max((s * x).norm() * spec_term_ratio(spec_b))
        .min(0.99);
    let finite_end = match (spec_a.len_hint(), spec_b.len_hint()) {
        (Some(la), Some(lb)) => Some(la + lb - 1),
        _ => None,
    };
    let mut sum = Scalar::new(0.0, 0.0);
    let mut lam_pow = Scalar::new(1.0, 0.0); // λ^N
    let mut x_pow = x; // x^{N+1}
    let mut streak = 0u32;
    let mut terms = 0usize;
    let mut shell_norm_prev = 0.0f64;
    let mut emp_ratio = 0.0f64;
    for n_total in 0..cfg.max_terms {
        if let Some(end) = finite_end {
            if n_total >= end {
                return Ok(EvalResult {
                    value: sum,
                    terms_used: terms,
                    tail_estimate: 0.0,
                    converged: true,
                });
            }
        }
        let shifted = lam_pow * y;
        let denom = x - shifted;
        if denom.norm() <= cfg.pole_eps * x.norm().max(shifted.norm()) {
            return Err(Error::PoleProximity {
                index: n_total,
                magnitude: denom.norm(),
            });
        }
        // Convolution Σ_{n=0}^{N} a_n b_{N-n} t^n s^{N-n}.
        let mut conv = Scalar::new(0.0, 0.0);
        let mut t_pow = Scalar::new(1.0, 0.0);
        for n in 0..=n_total {
            let a = coeff_or_zero(spec_a, n as u64)?;
            let b = coeff_or_zero(spec_b, (n_total - n) as u64)?;
            if a.norm() > 0.0 && b.norm() > 0.0 {
                conv += a * b * t_pow * s.powu((n_total - n) as u32);
            }
            t_pow *= t;
        }
        let shell = x_pow / denom * conv;
        sum += shell;
        crate::scalar::ensure_finite(sum, "rogers lhs")?;
        terms += n_total + 1;
        if terms > cfg.max_terms {
            return Err(Error::MaxTermsExceeded {
                max_terms: cfg.max_terms,
            });
        }
        let thresh = cfg.threshold(sum.norm());
        let sn = shell.norm();
        if sn <= thresh {
            streak += 1;
        } else {
            streak = 0;
        }
        if sn > 0.0 {
            if shell_norm_prev > 0.0 {
                emp_ratio = sn / shell_norm_prev;
            }
            shell_norm_prev = sn;
        }
        let r = emp_ratio.max(r_model).min(0.99);
        // Polynomial-in-N factor folded in via the (d+1)r^d tail closed form.
        let dd = n_total as f64;
        let tail = if r > 0.0 {
            shell_norm_prev.max(sn) * r * ((dd + 3.0) - (dd + 2.0) * r)
                / ((dd + 1.0) * (1.0 - r) * (1.0 - r))
        } else {
            0.0
        };
        if streak >= 3 && tail <= thresh {
            return Ok(EvalResult {
                value: sum,
                terms_used: terms,
                tail_estimate: tail,
                converged: true,
            });
        }
        lam_pow *= lambda;
        x_pow *= x;
    }
    Err(Error::MaxTermsExceeded {
        max_terms: cfg.max_terms,
    })
}

pub fn eval_rogers_rhs(
    form_a: &ClosedForm,
    form_b: &ClosedForm,
    params: &SeriesParams,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let (x, y, t, s, lambda) = unpack(params)?;
    // g(base) below receives λ^k t x; the matching second argument λ^k s x
    // is recovered through the shared ratio (s/t) when t != 0.
    if t.norm() > 0.0 {
        let scale = s / t;
        sum_geometric_expansion(cfg, y / x, t * x, lambda, |arg| {
            let fa = eval_closed_form(form_a, arg)?;
            let fb = eval_closed_form(form_b, arg * scale)?;
            Ok(fa * fb)
        })
    } else {
        sum_geometric_expansion(cfg, y / x, s * x, lambda, |arg| {
            let fa = eval_closed_form(form_a, Scalar::new(0.0, 0.0))?;
            let fb = eval_closed_form(form_b, arg)?;
            Ok(fa * fb)
        })
    }
}
