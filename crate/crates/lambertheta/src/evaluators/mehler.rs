//! Lambert-Mehler bilinear series: two theta-denominators in one index.
//!
//! LHS: Σ_n a_n x^{n+1}/(x - λ^n y) · z^{n+1}/(z - λ^n w) · t^n
//! RHS: Σ_k Σ_n (w/z)^k (y/x)^n f(λ^{k+n} t x z), summed by anti-diagonals
//! k + n = d so the double-geometric tail closes uniformly.

use crate::closed_forms::{eval_closed_form, ClosedForm};
use crate::coefficients::{coefficient, SequenceSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{spec_term_ratio, sum_adaptive, EvalConfig, EvalResult, SeriesParams};

type MehlerParams = (Scalar, Scalar, Scalar, Scalar, Scalar, Scalar);

fn unpack(params: &SeriesParams) -> Result<MehlerParams> {
    match params {
        SeriesParams::Mehler {
            x,
            y,
            z,
            w,
            t,
            lambda,
        } => Ok((*x, *y, *z, *w, *t, *lambda)),
        other => Err(Error::Parse(format!(
            "expected Mehler parameters, got {}",
            other.family_name()
        ))),
    }
}

pub fn eval_mehler_lhs(
    spec: &SequenceSpec,
    params: &SeriesParams,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let (x, y, z, w, t, lambda) = unpack(params)?;
    let ratio_hint = ((t * x * z).norm() * spec_term_ratio(spec)).min(0.99);
    let len = spec.len_hint();
    let mut lam_pow = Scalar::new(1.0, 0.0);
    let mut t_pow = Scalar::new(1.0, 0.0);
    let mut x_pow = x;
    let mut z_pow = z;
    sum_adaptive(cfg, ratio_hint, |n| {
        if let Some(l) = len {
            if n >= l {
                return Ok(None);
            }
        }
        let x_shift = lam_pow * y;
        let z_shift = lam_pow * w;
        let dx = x - x_shift;
        let dz = z - z_shift;
        if dx.norm() <= cfg.pole_eps * x.norm().max(x_shift.norm()) {
            return Err(Error::PoleProximity {
                index: n,
                magnitude: dx.norm(),
            });
        }
        if dz.norm() <= cfg.pole_eps * z.norm().max(z_shift.norm()) {
            return Err(Error::PoleProximity {
                index: n,
                magnitude: dz.norm(),
            });
        }
        let a = coefficient(spec, n as u64)?;
        let term = a * (x_pow / dx) * (z_pow / dz) * t_pow;
        lam_pow *= lambda;
        t_pow *= t;
        x_pow *= x;
        z_pow *= z;
        Ok(Some(term))
    })
}

pub fn eval_mehler_rhs(
    form: &ClosedForm,
    params: &SeriesParams,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let (x, y, z, w, t, lambda) = unpack(params)?;
    let rho_k = w / z;
    let rho_n = y / x;
    let r = rho_k.norm().max(rho_n.norm());
    if r >= 1.0 {
        return Err(Error::DomainViolation(format!(
            "geometric ratio max(|w/z|, |y/x|) = {r:.6} >= 1"
        )));
    }
    let base = t * x * z;
    let f_zero = eval_closed_form(form, Scalar::new(0.0, 0.0))?.norm();
    let mut sum = Scalar::new(0.0, 0.0);
    let mut arg = base; // λ^d t x z
    let mut streak = 0u32;
    let mut terms = 0usize;
    for d in 0..cfg.max_terms {
        // Shell weight Σ_{k+n=d} ρ_k^k ρ_n^{d-k}.
        let mut shell_weight = Scalar::new(0.0, 0.0);
        let mut pk = Scalar::new(1.0, 0.0);
        for k in 0..=d {
            shell_weight += pk * rho_n.powu((d - k) as u32);
            pk *= rho_k;
        }
        let fd = eval_closed_form(form, arg)?;
        let shell = shell_weight * fd;
        sum += shell;
        crate::scalar::ensure_finite(sum, "mehler rhs")?;
        terms += d + 1;
        if terms > cfg.max_terms {
            return Err(Error::MaxTermsExceeded {
                max_terms: cfg.max_terms,
            });
        }
        let thresh = cfg.threshold(sum.norm());
        if shell.norm() <= thresh {
            streak += 1;
        } else {
            streak = 0;
        }
        // |shell_d| <= (d+1) r^d M; Σ_{d>D} (d+1) r^d has the closed form
        // r^{D+1}((D+2) - (D+1)r)/(1-r)^2.
        let m_rem = fd.norm().max(f_zero);
        let dd = d as f64;
        let tail = if r > 0.0 {
            m_rem * r.powi(d as i32 + 1) * ((dd + 2.0) - (dd + 1.0) * r) / ((1.0 - r) * (1.0 - r))
        } else {
            0.0
        };
        if (streak >= 3 || r == 0.0) && tail <= thresh {
            return Ok(EvalResult {
                value: sum,
                terms_used: terms,
                tail_estimate: tail,
                converged: true,
            });
        }
        arg *= lambda;
    }
    Err(Error::MaxTermsExceeded {
        max_terms: cfg.max_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::scalar;

    fn params(x: f64, y: f64, z: f64, w: f64, t: f64, lambda: f64) -> SeriesParams {
        SeriesParams::Mehler {
            x: scalar(x, 0.0),
            y: scalar(y, 0.0),
            z: scalar(z, 0.0),
            w: scalar(w, 0.0),
            t: scalar(t, 0.0),
            lambda: scalar(lambda, 0.0),
        }
    }

    #[test]
    fn both_ratios_zero_gives_single_f() {
        // w=0, y=0: RHS = f(txz); Exp at x=z=1, t=0.2 -> e^{0.2}.
        let cfg = EvalConfig::default();
        let r =
            eval_mehler_rhs(&ClosedForm::Exp, &params(1.0, 0.0, 1.0, 0.0, 0.2, 0.5), &cfg).unwrap();
        assert!((r.value.re - 0.2f64.exp()).abs() < 1e-13);
    }

    #[test]
    fn lhs_matches_rhs_geometric() {
        let cfg = EvalConfig::default();
        let p = params(1.0, 0.3, 1.0, 0.2, 0.25, 0.5);
        let lhs = eval_mehler_lhs(&SequenceSpec::AltSign { sigma: 1 }, &p, &cfg).unwrap();
        let rhs = eval_mehler_rhs(&ClosedForm::Geometric { sigma: 1 }, &p, &cfg).unwrap();
        assert!(
            (lhs.value - rhs.value).norm() < 1e-10,
            "gap {}",
            (lhs.value - rhs.value).norm()
        );
    }

    #[test]
    fn t_zero_collapses_to_closed_geometric_sums() {
        // LHS n=0 term: a_0 x/(x-y) z/(z-w); RHS: f(0)/((1-w/z)(1-y/x)).
        let cfg = EvalConfig::default();
        let p = params(1.0, 0.3, 1.0, 0.2, 0.0, 0.5);
        let lhs = eval_mehler_lhs(&SequenceSpec::AltSign { sigma: 1 }, &p, &cfg).unwrap();
        let expect = (1.0 / 0.7) * (1.0 / 0.8);
        assert!((lhs.value.re - expect).abs() < 1e-12);
        let rhs = eval_mehler_rhs(&ClosedForm::Geometric { sigma: 1 }, &p, &cfg).unwrap();
        assert!((rhs.value.re - expect).abs() < 1e-10);
    }

    #[test]
    fn exp_pair_matches_direct_corollary_sum() {
        // Oracle: Σ_k Σ_n (w/z)^k (y/x)^n e^{λ^{k+n} t x z} summed directly.
        let (x, y, z, w, t, lam): (f64, f64, f64, f64, f64, f64) = (1.0, 0.3, 1.0, 0.2, 0.25, 0.5);
        let mut oracle = 0.0f64;
        for k in 0..60 {
            for n in 0..60 {
                oracle +=
                    (w / z).powi(k) * (y / x).powi(n) * (lam.powi(k + n) * t * x * z).exp();
            }
        }
        let cfg = EvalConfig::default();
        let p = params(x, y, z, w, t, lam);
        let lhs = eval_mehler_lhs(&SequenceSpec::InvFactorial, &p, &cfg).unwrap();
        let rhs = eval_mehler_rhs(&ClosedForm::Exp, &p, &cfg).unwrap();
        assert!((lhs.value.re - oracle).abs() < 1e-10);
        assert!((rhs.value.re - oracle).abs() < 1e-10);
    }
}
