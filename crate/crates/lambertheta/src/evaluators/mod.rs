//! Adaptive evaluators for the five generalized Lambert series families.
//!
//! Each family has an LHS engine (the coefficient-weighted theta-denominator
//! sum) and an RHS engine (the closed-form geometric expansion from the
//! corresponding theorem). All engines share the stopping rule: a term is
//! only trusted as "last" once three consecutive terms fall below the
//! relative tolerance AND a model-based geometric tail bound closes below
//! it. Single-term smallness alone is unsafe for oscillating coefficients.

mod doublesum;
mod lambert;
mod mehler;
mod multivariate;
mod rogers;

pub use doublesum::{eval_doublesum_lhs, eval_doublesum_rhs};
pub use lambert::{eval_lambert_lhs, eval_lambert_rhs};
pub use mehler::{eval_mehler_lhs, eval_mehler_rhs};
pub use multivariate::{eval_multivariate_lhs, eval_multivariate_rhs};
pub use rogers::{eval_rogers_lhs, eval_rogers_rhs};

use serde::{Deserialize, Serialize};

use crate::coefficients::{lucas_roots, SequenceSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Evaluation tolerances and caps.
#[derive(Debug, Clone, Copy)]
pub struct EvalConfig {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub pole_eps: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_terms: 1_000_000,
            pole_eps: crate::EPS_POLE,
        }
    }
}

impl EvalConfig {
    /// Convergence threshold relative to the running value, with an
    /// absolute floor for values indistinguishable from zero.
    pub(crate) fn threshold(&self, value_norm: f64) -> f64 {
        if value_norm < 1e-300 {
            self.rel_tol
        } else {
            self.rel_tol * value_norm
        }
    }
}

/// Outcome of one adaptive summation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EvalResult {
    #[serde(
        serialize_with = "crate::verify::serialize_scalar",
        deserialize_with = "crate::verify::deserialize_scalar"
    )]
    pub value: Scalar,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub converged: bool,
}

/// Parameter bundle per series family.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesParams {
    Lambert {
        x: Scalar,
        y: Scalar,
        z: Scalar,
        lambda: Scalar,
    },
    Mehler {
        x: Scalar,
        y: Scalar,
        z: Scalar,
        w: Scalar,
        t: Scalar,
        lambda: Scalar,
    },
    Rogers {
        x: Scalar,
        y: Scalar,
        t: Scalar,
        s: Scalar,
        lambda: Scalar,
    },
    DoubleSum {
        x: Scalar,
        y: Scalar,
        z: Scalar,
        t: Scalar,
        lambda: Scalar,
        mu: Scalar,
    },
    Multivariate {
        x: Vec<Scalar>,
        y: Vec<Scalar>,
        lambda: Vec<Scalar>,
        z: Scalar,
    },
}

impl SeriesParams {
    pub fn family_name(&self) -> &'static str {
        match self {
            SeriesParams::Lambert { .. } => "lambert",
            SeriesParams::Mehler { .. } => "mehler",
            SeriesParams::Rogers { .. } => "rogers",
            SeriesParams::DoubleSum { .. } => "doublesum",
            SeriesParams::Multivariate { .. } => "multivariate",
        }
    }

    /// Flat (name, value) view of the parameters for reporting.
    pub fn entries(&self) -> Vec<(String, Scalar)> {
        match self {
            SeriesParams::Lambert { x, y, z, lambda } => vec![
                ("x".into(), *x),
                ("y".into(), *y),
                ("z".into(), *z),
                ("lambda".into(), *lambda),
            ],
            SeriesParams::Mehler {
                x,
                y,
                z,
                w,
                t,
                lambda,
            } => vec![
                ("x".into(), *x),
                ("y".into(), *y),
                ("z".into(), *z),
                ("w".into(), *w),
                ("t".into(), *t),
                ("lambda".into(), *lambda),
            ],
            SeriesParams::Rogers { x, y, t, s, lambda } => vec![
                ("x".into(), *x),
                ("y".into(), *y),
                ("t".into(), *t),
                ("s".into(), *s),
                ("lambda".into(), *lambda),
            ],
            SeriesParams::DoubleSum {
                x,
                y,
                z,
                t,
                lambda,
                mu,
            } => vec![
                ("x".into(), *x),
                ("y".into(), *y),
                ("z".into(), *z),
                ("t".into(), *t),
                ("lambda".into(), *lambda),
                ("mu".into(), *mu),
            ],
            SeriesParams::Multivariate { x, y, lambda, z } => {
                let mut out = Vec::new();
                for (i, v) in x.iter().enumerate() {
                    out.push((format!("x{}", i + 1), *v));
                }
                for (i, v) in y.iter().enumerate() {
                    out.push((format!("y{}", i + 1), *v));
                }
                for (i, v) in lambda.iter().enumerate() {
                    out.push((format!("lambda{}", i + 1), *v));
                }
                out.push(("z".into(), *z));
                out
            }
        }
    }
}

const MARGIN: f64 = 1e-12;

fn strictly_less(a: f64, b: f64) -> bool {
    if b.is_infinite() {
        a.is_finite()
    } else {
        a < b - MARGIN * b.abs().max(1.0)
    }
}

fn distinct(a: Scalar, b: Scalar) -> bool {
    (a - b).norm() > MARGIN * a.norm().max(b.norm()).max(1.0)
}

/// Checks the family's convergence hypotheses against the per-function
/// radii (one radius for every family except Rogers, which takes two).
/// Returns one message per violated inequality.
pub fn validate_domain(params: &SeriesParams, radii: &[f64]) -> Vec<String> {
    let r0 = radii.first().copied().unwrap_or(f64::INFINITY);
    let mut out = Vec::new();
    let mut check = |ok: bool, msg: &str| {
        if !ok {
            out.push(format!("{msg} violated"));
        }
    };
    match params {
        SeriesParams::Lambert { x, y, z, lambda } => {
            check(distinct(*x, *y), "x != y");
            check(strictly_less(y.norm(), x.norm()), "|y| < |x|");
            check(strictly_less((x * z).norm(), r0), "|xz| < R");
            check(strictly_less(lambda.norm(), 1.0), "|lambda| < 1");
        }
        SeriesParams::Mehler {
            x,
            y,
            z,
            w,
            t,
            lambda,
        } => {
            check(distinct(*x, *y), "x != y");
            check(distinct(*z, *w), "z != w");
            check(strictly_less(y.norm(), x.norm()), "|y| < |x|");
            check(strictly_less(w.norm(), z.norm()), "|w| < |z|");
            check(strictly_less((t * x * z).norm(), r0), "|txz| < R");
            check(strictly_less(lambda.norm(), 1.0), "|lambda| < 1");
        }
        SeriesParams::Rogers { x, y, t, s, lambda } => {
            let r1 = radii.get(1).copied().unwrap_or(r0);
            check(distinct(*x, *y), "x != y");
            check(strictly_less(y.norm(), x.norm()), "|y| < |x|");
            check(strictly_less((x * t).norm(), r0), "|xt| < R1");
            check(strictly_less((s * x).norm(), r1), "|sx| < R2");
            check(strictly_less(lambda.norm(), 1.0), "|lambda| < 1");
        }
        SeriesParams::DoubleSum {
            x,
            y,
            z,
            t,
            lambda,
            mu,
        } => {
            check(distinct(*x, *y), "x != y");
            check(distinct(*mu, *lambda), "mu != lambda");
            check(strictly_less(z.norm(), x.norm()), "|z| < |x|");
            check(strictly_less(y.norm(), x.norm()), "|y| < |x|");
            check(strictly_less((t * x).norm(), r0), "|tx| < R");
            check(strictly_less(lambda.norm(), 1.0), "|lambda| < 1");
            check(strictly_less(mu.norm(), 1.0), "|mu| < 1");
        }
        SeriesParams::Multivariate { x, y, lambda, z } => {
            check(!x.is_empty(), "m >= 1");
            check(
                x.len() == y.len() && x.len() == lambda.len(),
                "coordinate counts equal",
            );
            let mut prod = Scalar::new(1.0, 0.0);
            for i in 0..x.len().min(y.len()).min(lambda.len()) {
                check(distinct(x[i], y[i]), &format!("x{} != y{}", i + 1, i + 1));
                check(
                    strictly_less(y[i].norm(), x[i].norm()),
                    &format!("|y{}| < |x{}|", i + 1, i + 1),
                );
                check(
                    strictly_less(lambda[i].norm(), 1.0),
                    &format!("|lambda{}| < 1", i + 1),
                );
                prod *= x[i];
            }
            check(strictly_less((prod * z).norm(), r0), "|x1..xm z| < R");
        }
    }
    out
}

/// Asymptotic term-ratio of a coefficient sequence, limsup |a_{n+1}/a_n|.
/// Used as the a-priori geometric decay model of the LHS sums.
pub(crate) fn spec_term_ratio(spec: &SequenceSpec) -> f64 {
    match spec {
        SequenceSpec::AltSign { .. }
        | SequenceSpec::AltSignOverNPlus1 { .. }
        | SequenceSpec::Polytopic { .. } => 1.0,
        SequenceSpec::InvFactorial
        | SequenceSpec::AltInvEvenFactorial
        | SequenceSpec::AltInvOddFactorial
        | SequenceSpec::Table(_) => 0.0,
        SequenceSpec::Lucas { s, t } => match lucas_roots(*s, *t) {
            Ok(roots) => roots.phi.norm(),
            Err(_) => 1.0,
        },
    }
}

/// Adaptive single-index summation with a geometric tail model.
///
/// `term_fn(n)` yields the n-th term, or `None` once the series is exactly
/// exhausted (finite tables). `ratio_hint` is the a-priori modulus of the
/// long-run term ratio; the tail bound uses the larger of the hint and the
/// empirically observed ratio, clamped below 1.
pub(crate) fn sum_adaptive<F>(
    cfg: &EvalConfig,
    ratio_hint: f64,
    mut term_fn: F,
) -> Result<EvalResult>
where
    F: FnMut(usize) -> Result<Option<Scalar>>,
{
    let mut sum = Scalar::new(0.0, 0.0);
    let mut streak = 0u32;
    let mut prev_norm = 0.0f64;
    let mut emp_ratio = 0.0f64;
    let mut last_norm = 0.0f64;
    for n in 0..cfg.max_terms {
        let term = match term_fn(n)? {
            Some(t) => t,
            None => {
                // Exact end of series.
                return Ok(EvalResult {
                    value: sum,
                    terms_used: n,
                    tail_estimate: 0.0,
                    converged: true,
                });
            }
        };
        sum += term;
        crate::scalar::ensure_finite(sum, "series summation")?;
        let t_norm = term.norm();
        if t_norm > 0.0 {
            if prev_norm > 0.0 {
                emp_ratio = t_norm / prev_norm;
            }
            prev_norm = t_norm;
            last_norm = t_norm;
        }
        let thresh = cfg.threshold(sum.norm());
        if t_norm <= thresh {
            streak += 1;
        } else {
            streak = 0;
        }
        let r = emp_ratio.max(ratio_hint).min(0.99);
        let tail = last_norm * r / (1.0 - r);
        if streak >= 3 && tail <= thresh {
            return Ok(EvalResult {
                value: sum,
                terms_used: n + 1,
                tail_estimate: tail,
                converged: true,
            });
        }
    }
    Err(Error::MaxTermsExceeded {
        max_terms: cfg.max_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::scalar;

    fn lambert(x: f64, y: f64, z: f64, lambda: f64) -> SeriesParams {
        SeriesParams::Lambert {
            x: scalar(x, 0.0),
            y: scalar(y, 0.0),
            z: scalar(z, 0.0),
            lambda: scalar(lambda, 0.0),
        }
    }

    #[test]
    fn in_domain_lambert_point_is_clean() {
        let v = validate_domain(&lambert(1.0, 0.2, 0.3, 0.5), &[1.0]);
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn y_exceeding_x_is_named() {
        let v = validate_domain(&lambert(1.0, 1.5, 0.3, 0.5), &[1.0]);
        assert!(v.iter().any(|m| m.contains("|y| < |x|")), "{v:?}");
    }

    #[test]
    fn mehler_w_equal_z_fails_strictly() {
        let p = SeriesParams::Mehler {
            x: scalar(1.0, 0.0),
            y: scalar(0.2, 0.0),
            z: scalar(0.5, 0.0),
            w: scalar(0.5, 0.0),
            t: scalar(0.3, 0.0),
            lambda: scalar(0.5, 0.0),
        };
        let v = validate_domain(&p, &[1.0]);
        assert!(v.iter().any(|m| m.contains("|w| < |z|")), "{v:?}");
    }

    #[test]
    fn sum_adaptive_geometric() {
        let cfg = EvalConfig::default();
        let r = sum_adaptive(&cfg, 0.5, |n| {
            Ok(Some(scalar(0.5f64.powi(n as i32), 0.0)))
        })
        .unwrap();
        assert!(r.converged);
        assert!((r.value.re - 2.0).abs() < 1e-9);
    }

    #[test]
    fn sum_adaptive_finite_table() {
        let cfg = EvalConfig::default();
        let r = sum_adaptive(&cfg, 0.0, |n| {
            Ok(if n < 3 {
                Some(scalar(1.0, 0.0))
            } else {
                None
            })
        })
        .unwrap();
        assert!(r.converged);
        assert_eq!(r.terms_used, 3);
        assert_eq!(r.tail_estimate, 0.0);
        assert_eq!(r.value, scalar(3.0, 0.0));
    }
}
