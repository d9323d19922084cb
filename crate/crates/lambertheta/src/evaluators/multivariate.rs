//! Multivariate generalized Lambert series over m coordinates.
//!
//! LHS: Σ_n a_n Π_i x_i^{n+1}/(x_i - λ_i^n y_i) z^n — a single sum.
//! RHS: Σ_{k_1..k_m} Π_i (y_i/x_i)^{k_i} f(λ_1^{k_1}..λ_m^{k_m} x_1..x_m z),
//! enumerated in shells of constant total degree k_1 + .. + k_m so a
//! product-geometric tail bound closes uniformly.

use crate::closed_forms::{eval_closed_form, ClosedForm};
use crate::coefficients::{binomial, coefficient, SequenceSpec};
use crate::error::{Error, Result};
use crate::scalar::{powi, Scalar};
use num_traits::ToPrimitive;

use super::{spec_term_ratio, sum_adaptive, EvalConfig, EvalResult, SeriesParams};

type MvParams = (Vec<Scalar>, Vec<Scalar>, Vec<Scalar>, Scalar);

fn unpack(params: &SeriesParams) -> Result<MvParams> {
    match params {
        SeriesParams::Multivariate { x, y, lambda, z } => {
            if x.is_empty() || x.len() != y.len() || x.len() != lambda.len() {
                return Err(Error::Parse(
                    "multivariate parameters need equal, non-empty x/y/lambda lists".into(),
                ));
            }
            Ok((x.clone(), y.clone(), lambda.clone(), *z))
        }
        other => Err(Error::Parse(format!(
            "expected Multivariate parameters, got {}",
            other.family_name()
        ))),
    }
}

pub fn eval_multivariate_lhs(
    spec: &SequenceSpec,
    params: &SeriesParams,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let (x, y, lambda, z) = unpack(params)?;
    let m = x.len();
    let x_prod: Scalar = x.iter().product();
    let ratio_hint = ((x_prod * z).norm() * spec_term_ratio(spec)).min(0.99);
    let len = spec.len_hint();
    let mut lam_pow = vec![Scalar::new(1.0, 0.0); m];
    let mut x_pow: Vec<Scalar> = x.clone(); // x_i^{n+1}
    let mut z_pow = Scalar::new(1.0, 0.0);
    sum_adaptive(cfg, ratio_hint, |n| {
        if let Some(l) = len {
            if n >= l {
                return Ok(None);
            }
        }
        let mut prod = Scalar::new(1.0, 0.0);
        for i in 0..m {
            let shifted = lam_pow[i] * y[i];
            let denom = x[i] - shifted;
            if denom.norm() <= cfg.pole_eps * x[i].norm().max(shifted.norm()) {
                return Err(Error::PoleProximity {
                    index: n,
                    magnitude: denom.norm(),
                });
            }
            prod *= x_pow[i] / denom;
            lam_pow[i] *= lambda[i];
            x_pow[i] *= x[i];
        }
        let a = coefficient(spec, n as u64)?;
        let term = a * prod * z_pow;
        z_pow *= z;
        Ok(Some(term))
    })
}

pub fn eval_multivariate_rhs(
    form: &ClosedForm,
    params: &SeriesParams,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let (x, y, lambda, z) = unpack(params)?;
    let m = x.len();
    let rho: Vec<Scalar> = (0..m).map(|i| y[i] / x[i]).collect();
    let rho_max = rho.iter().map(|r| r.norm()).fold(0.0f64, f64::max);
    if rho_max >= 1.0 {
        return Err(Error::DomainViolation(format!(
            "geometric ratio max_i |y_i/x_i| = {rho_max:.6} >= 1"
        )));
    }
    let base: Scalar = x.iter().product::<Scalar>() * z;
    let f_zero = eval_closed_form(form, Scalar::new(0.0, 0.0))?.norm();
    let mut sum = Scalar::new(0.0, 0.0);
    let mut streak = 0u32;
    let mut terms = 0usize;
    for d in 0..cfg.max_terms {
        let mut shell = Scalar::new(0.0, 0.0);
        let mut f_max_shell = f_zero;
        let mut exps = vec![0u32; m];
        sum_shell(
            &rho,
            &lambda,
            base,
            form,
            d as u32,
            0,
            Scalar::new(1.0, 0.0),
            Scalar::new(1.0, 0.0),
            &mut exps,
            &mut shell,
            &mut f_max_shell,
            &mut terms,
            cfg,
        )?;
        sum += shell;
        crate::scalar::ensure_finite(sum, "multivariate rhs")?;
        let thresh = cfg.threshold(sum.norm());
        if shell.norm() <= thresh {
            streak += 1;
        } else {
            streak = 0;
        }
        // Shell d holds C(d+m-1, m-1) terms each bounded by rho_max^d M; the
        // bound ratio between consecutive shells is rho_max (d+m)/(d+1).
        let dd = d as f64;
        let q = rho_max * (dd + 1.0 + m as f64) / (dd + 2.0);
        if (streak >= 3 || rho_max == 0.0) && q < 1.0 {
            let count_next = binomial((d + m) as u64, (m - 1) as u64)
                .to_f64()
                .unwrap_or(f64::INFINITY);
            let m_rem = f_max_shell.max(f_zero);
            let tail = count_next * rho_max.powi(d as i32 + 1) * m_rem / (1.0 - q);
            if tail <= thresh {
                return Ok(EvalResult {
                    value: sum,
                    terms_used: terms,
                    tail_estimate: tail,
                    converged: true,
                });
            }
        }
    }
    Err(Error::MaxTermsExceeded {
        max_terms: cfg.max_terms,
    })
}

/// Recursively enumerates all exponent vectors with the given remaining
/// total degree, accumulating weight Π ρ_i^{k_i} and argument factor
/// Π λ_i^{k_i}.
#[allow(clippy::too_many_arguments)]
fn sum_shell(
    rho: &[Scalar],
    lambda: &[Scalar],
    base: Scalar,
    form: &ClosedForm,
    remaining: u32,
    coord: usize,
    weight: Scalar,
    arg_factor: Scalar,
    exps: &mut [u32],
    shell: &mut Scalar,
    f_max: &mut f64,
    terms: &mut usize,
    cfg: &EvalConfig,
) -> Result<()> {
    if coord == rho.len() - 1 {
        let w = weight * powi(rho[coord], remaining as i64);
        let af = arg_factor * powi(lambda[coord], remaining as i64);
        let fv = eval_closed_form(form, af * base)?;
        *f_max = f_max.max(fv.norm());
        *shell += w * fv;
        *terms += 1;
        if *terms > cfg.max_terms {
            return Err(Error::MaxTermsExceeded {
                max_terms: cfg.max_terms,
            });
        }
        return Ok(());
    }
    for k in 0..=remaining {
        exps[coord] = k;
        sum_shell(
            rho,
            lambda,
            base,
            form,
            remaining - k,
            coord + 1,
            weight * powi(rho[coord], k as i64),
            arg_factor * powi(lambda[coord], k as i64),
            exps,
            shell,
            f_max,
            terms,
            cfg,
        )?;
    }
    Ok(())
}
