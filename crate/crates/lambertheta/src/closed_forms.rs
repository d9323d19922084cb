//! Closed-form generating functions paired with coefficient sequences.
//!
//! Each form evaluates f(u) = Σ a_n u^n pointwise, where a_n is the paired
//! sequence's coefficient. The pairing is what the right-hand sides of the
//! series identities consume. Note the even/odd factorial families: the
//! generating function of (-1)^n/(2n)! in u is cos(√u), and of
//! (-1)^n/(2n+1)! it is sin(√u)/√u, both entire in u.

use crate::coefficients::{coefficient, lucas_roots, SequenceSpec};
use crate::error::{Error, Result};
use crate::scalar::{ensure_finite, powi, Scalar};
use crate::EPS_POLE;

#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    /// 1/(1 - σu); coefficients σ^n; radius 1
    Geometric { sigma: i8 },
    /// -ln(1 - σu)/(σu); coefficients σ^n/(n+1); radius 1
    Log { sigma: i8 },
    /// e^u; coefficients 1/n!; entire
    Exp,
    /// cos(√u); coefficients (-1)^n/(2n)!; entire
    Cos,
    /// sin(√u)/√u; coefficients (-1)^n/(2n+1)!; entire
    Sin,
    /// σu/(1 - σu)^{d+1}; coefficients σ^n C(n+d-1,d); radius 1
    PolytopicGF { d: u32, sigma: i8 },
    /// u/(1 - su - tu^2); coefficients {n}_{s,t}; radius 1/|phi|
    LucasGF { s: Scalar, t: Scalar },
    /// Polynomial Σ c_n u^n from a finite table; entire
    TableGF { coeffs: Vec<Scalar> },
}

impl ClosedForm {
    /// Convergence radius of the paired power series.
    pub fn radius(&self) -> f64 {
        match self {
            ClosedForm::Geometric { .. }
            | ClosedForm::Log { .. }
            | ClosedForm::PolytopicGF { .. } => 1.0,
            ClosedForm::Exp | ClosedForm::Cos | ClosedForm::Sin | ClosedForm::TableGF { .. } => {
                f64::INFINITY
            }
            ClosedForm::LucasGF { s, t } => match lucas_roots(*s, *t) {
                Ok(roots) => 1.0 / roots.phi.norm(),
                Err(_) => 0.0,
            },
        }
    }

    /// The coefficient sequence this form generates.
    pub fn paired_spec(&self) -> SequenceSpec {
        match self {
            ClosedForm::Geometric { sigma } => SequenceSpec::AltSign { sigma: *sigma },
            ClosedForm::Log { sigma } => SequenceSpec::AltSignOverNPlus1 { sigma: *sigma },
            ClosedForm::Exp => SequenceSpec::InvFactorial,
            ClosedForm::Cos => SequenceSpec::AltInvEvenFactorial,
            ClosedForm::Sin => SequenceSpec::AltInvOddFactorial,
            ClosedForm::PolytopicGF { d, sigma } => SequenceSpec::Polytopic {
                d: *d,
                sigma: *sigma,
            },
            ClosedForm::LucasGF { s, t } => SequenceSpec::Lucas { s: *s, t: *t },
            ClosedForm::TableGF { coeffs } => SequenceSpec::Table(coeffs.clone()),
        }
    }
}

fn pole_guard(denom: Scalar, scale: f64, index: usize) -> Result<()> {
    if denom.norm() <= EPS_POLE * scale.max(1.0) {
        Err(Error::PoleProximity {
            index,
            magnitude: denom.norm(),
        })
    } else {
        Ok(())
    }
}

/// Pointwise value of a closed form inside its convergence radius.
pub fn eval_closed_form(form: &ClosedForm, u: Scalar) -> Result<Scalar> {
    let radius = form.radius();
    if radius.is_finite() && u.norm() >= radius * (1.0 - 1e-12) {
        return Err(Error::OutsideRadius {
            modulus: u.norm(),
            radius,
        });
    }
    let one = Scalar::new(1.0, 0.0);
    let value = match form {
        ClosedForm::Geometric { sigma } => {
            let denom = one - u * (*sigma as f64);
            pole_guard(denom, u.norm(), 0)?;
            one / denom
        }
        ClosedForm::Log { sigma } => {
            let v = u * (*sigma as f64);
            if v.norm() < 1e-4 {
                // Series head avoids 0/0 cancellation near the origin.
                let mut acc = Scalar::new(0.0, 0.0);
                let mut vp = one;
                for n in 0..6 {
                    acc += vp / (n as f64 + 1.0);
                    vp *= v;
                }
                acc
            } else {
                pole_guard(one - v, v.norm(), 0)?;
                -(one - v).ln() / v
            }
        }
        ClosedForm::Exp => u.exp(),
        ClosedForm::Cos => u.sqrt().cos(),
        ClosedForm::Sin => {
            if u.norm() < 1e-8 {
                one - u / 6.0 + u * u / 120.0
            } else {
                let w = u.sqrt();
                w.sin() / w
            }
        }
        ClosedForm::PolytopicGF { d, sigma } => {
            let v = u * (*sigma as f64);
            let denom = one - v;
            pole_guard(denom, v.norm(), 0)?;
            v / powi(denom, *d as i64 + 1)
        }
        ClosedForm::LucasGF { s, t } => {
            let roots = lucas_roots(*s, *t)?;
            pole_guard(one - roots.phi * u, (roots.phi * u).norm(), 0)?;
            pole_guard(one - roots.varphi * u, (roots.varphi * u).norm(), 1)?;
            u / (one - *s * u - *t * u * u)
        }
        ClosedForm::TableGF { coeffs } => {
            let mut acc = Scalar::new(0.0, 0.0);
            for &c in coeffs.iter().rev() {
                acc = acc * u + c;
            }
            acc
        }
    };
    ensure_finite(value, "eval_closed_form")
}

/// |f(u) - Σ_{n=0}^{N} a_n u^n| with a_n from the paired sequence.
///
/// Certifies that a (spec, form) pairing is sound.
pub fn series_residual(form: &ClosedForm, u: Scalar, n_terms: u64) -> Result<f64> {
    let spec = form.paired_spec();
    let exact = eval_closed_form(form, u)?;
    let mut sum = Scalar::new(0.0, 0.0);
    let mut up = Scalar::new(1.0, 0.0);
    let cap = match spec.len_hint() {
        Some(len) => n_terms.min(len as u64 - 1),
        None => n_terms,
    };
    for n in 0..=cap {
        sum += coefficient(&spec, n)? * up;
        up *= u;
    }
    Ok((exact - sum).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::scalar;

    #[test]
    fn exp_at_zero() {
        let v = eval_closed_form(&ClosedForm::Exp, scalar(0.0, 0.0)).unwrap();
        assert_eq!(v, scalar(1.0, 0.0));
    }

    #[test]
    fn geometric_minus_at_half() {
        let v = eval_closed_form(&ClosedForm::Geometric { sigma: 1 }, scalar(0.5, 0.0)).unwrap();
        assert!((v.re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lucas_gf_rational_value() {
        let form = ClosedForm::LucasGF {
            s: scalar(1.0, 0.0),
            t: scalar(1.0, 0.0),
        };
        let v = eval_closed_form(&form, scalar(0.2, 0.0)).unwrap();
        assert!((v.re - 0.2 / 0.76).abs() < 1e-14);
    }

    #[test]
    fn outside_radius_rejected() {
        let err =
            eval_closed_form(&ClosedForm::Geometric { sigma: 1 }, scalar(1.5, 0.0)).unwrap_err();
        assert!(matches!(err, Error::OutsideRadius { .. }));
    }

    #[test]
    fn residual_exp() {
        let r = series_residual(&ClosedForm::Exp, scalar(0.3, 0.0), 25).unwrap();
        assert!(r < 1e-14, "residual {r}");
    }

    #[test]
    fn residual_cos_at_zero() {
        for n in [0u64, 1, 5] {
            let r = series_residual(&ClosedForm::Cos, scalar(0.0, 0.0), n).unwrap();
            assert_eq!(r, 0.0);
        }
    }

    #[test]
    fn residual_geometric_near_edge() {
        // Tail bound 0.9^{201}/0.1 ~ 6.4e-9.
        let r = series_residual(&ClosedForm::Geometric { sigma: 1 }, scalar(0.9, 0.0), 200)
            .unwrap();
        assert!(r < 1e-8, "residual {r}");
    }

    #[test]
    fn log_small_argument_path_is_smooth() {
        // The series head (taken below the switch point) agrees with the
        // direct -ln(1-u)/u formula at the same argument.
        let form = ClosedForm::Log { sigma: 1 };
        let u = 9.9e-5f64;
        let a = eval_closed_form(&form, scalar(u, 0.0)).unwrap();
        let direct = -(1.0 - u).ln() / u;
        assert!((a.re - direct).abs() < 1e-12, "{} vs {direct}", a.re);
        assert!((a.re - 1.0).abs() < 1e-4);
    }

    #[test]
    fn polytopic_gf_sign_variants() {
        // d=1: σ=+1 gives u/(1-u)^2, σ=-1 gives -u/(1+u)^2 = Σ(-1)^n n u^n.
        let u = scalar(0.3, 0.0);
        let plus = eval_closed_form(&ClosedForm::PolytopicGF { d: 1, sigma: 1 }, u).unwrap();
        assert!((plus.re - 0.3 / 0.49).abs() < 1e-14);
        let minus = eval_closed_form(&ClosedForm::PolytopicGF { d: 1, sigma: -1 }, u).unwrap();
        let direct: f64 = (1..60).map(|n| (-0.3f64).powi(n) * n as f64).sum();
        assert!((minus.re - direct).abs() < 1e-13);
    }
}
