//! Coefficient sequences a_n: elementary-function coefficients, simplicial
//! polytopic numbers and Lucas sequences.
//!
//! Factorials, binomials and integer Lucas terms are computed exactly in
//! big-integer arithmetic and converted to floating point at the end.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{ensure_finite, Scalar};

/// Descriptor of a coefficient sequence a_n.
///
/// `sigma` is the alternation base (+1 or -1): the sequence σ^n pairs with
/// the generating function 1/(1 - σu), so σ = +1 corresponds to the
/// denominator-minus variant 1/(1-u).
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    /// σ^n
    AltSign { sigma: i8 },
    /// σ^n / (n+1)
    AltSignOverNPlus1 { sigma: i8 },
    /// 1 / n!
    InvFactorial,
    /// (-1)^n / (2n)!
    AltInvEvenFactorial,
    /// (-1)^n / (2n+1)!
    AltInvOddFactorial,
    /// σ^n · C(n+d-1, d), the signed simplicial d-polytopic numbers
    Polytopic { d: u32, sigma: i8 },
    /// Lucas sequence {n}_{s,t}: {n+2} = s{n+1} + t{n}, {0}=0, {1}=1
    Lucas { s: Scalar, t: Scalar },
    /// Finite table of coefficients
    Table(Vec<Scalar>),
}

impl SequenceSpec {
    /// Checks the structural invariants (d >= 1, s,t nonzero, table non-empty).
    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::AltSign { sigma } | SequenceSpec::AltSignOverNPlus1 { sigma } => {
                if *sigma != 1 && *sigma != -1 {
                    return Err(Error::Parse(format!("sigma must be +-1, got {sigma}")));
                }
            }
            SequenceSpec::Polytopic { d, sigma } => {
                if *d < 1 {
                    return Err(Error::Parse("polytopic dimension d must be >= 1".into()));
                }
                if *sigma != 1 && *sigma != -1 {
                    return Err(Error::Parse(format!("sigma must be +-1, got {sigma}")));
                }
            }
            SequenceSpec::Lucas { s, t } => {
                if s.norm() == 0.0 || t.norm() == 0.0 {
                    return Err(Error::Parse("Lucas parameters s, t must be nonzero".into()));
                }
            }
            SequenceSpec::Table(entries) => {
                if entries.is_empty() {
                    return Err(Error::Parse("table sequence must be non-empty".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Number of terms for finite sequences (tables); None when infinite.
    pub fn len_hint(&self) -> Option<usize> {
        match self {
            SequenceSpec::Table(entries) => Some(entries.len()),
            _ => None,
        }
    }
}

/// Exact n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Exact binomial C(n, k).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The simplicial d-polytopic number P_n^d = C(n+d-1, d), exact.
pub fn polytopic_int(d: u32, n: u64) -> BigInt {
    binomial(n + d as u64 - 1, d as u64)
}

/// Lucas term {n}_{s,t} by the recurrence, exact in integers.
pub fn lucas_int(s: i64, t: i64, n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        let next = &b * s + &a * t;
        a = b;
        b = next;
    }
    b
}

fn as_integer(v: Scalar) -> Option<i64> {
    if v.im == 0.0 && v.re.fract() == 0.0 && v.re.abs() < 9e15 {
        Some(v.re as i64)
    } else {
        None
    }
}

fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(if v.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

fn sigma_pow(sigma: i8, n: u64) -> f64 {
    if sigma >= 0 || n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The n-th coefficient of a sequence.
pub fn coefficient(spec: &SequenceSpec, n: u64) -> Result<Scalar> {
    let v = match spec {
        SequenceSpec::AltSign { sigma } => Scalar::new(sigma_pow(*sigma, n), 0.0),
        SequenceSpec::AltSignOverNPlus1 { sigma } => {
            Scalar::new(sigma_pow(*sigma, n) / (n as f64 + 1.0), 0.0)
        }
        SequenceSpec::InvFactorial => Scalar::new(1.0 / big_to_f64(&factorial(n)), 0.0),
        SequenceSpec::AltInvEvenFactorial => {
            Scalar::new(sigma_pow(-1, n) / big_to_f64(&factorial(2 * n)), 0.0)
        }
        SequenceSpec::AltInvOddFactorial => {
            Scalar::new(sigma_pow(-1, n) / big_to_f64(&factorial(2 * n + 1)), 0.0)
        }
        SequenceSpec::Polytopic { d, sigma } => Scalar::new(
            sigma_pow(*sigma, n) * big_to_f64(&polytopic_int(*d, n)),
            0.0,
        ),
        SequenceSpec::Lucas { s, t } => match (as_integer(*s), as_integer(*t)) {
            (Some(si), Some(ti)) => Scalar::new(big_to_f64(&lucas_int(si, ti, n as usize)), 0.0),
            _ => lucas_float(*s, *t, n as usize),
        },
        SequenceSpec::Table(entries) => *entries.get(n as usize).ok_or(Error::IndexOutOfTable {
            index: n as usize,
            len: entries.len(),
        })?,
    };
    ensure_finite(v, "coefficient")
}

/// Lucas recurrence in complex floating point for non-integer (s, t).
fn lucas_float(s: Scalar, t: Scalar, n: usize) -> Scalar {
    let (mut a, mut b) = (Scalar::new(0.0, 0.0), Scalar::new(1.0, 0.0));
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        let next = s * b + t * a;
        a = b;
        b = next;
    }
    b
}

/// The two roots of x^2 - sx - t = 0 ordered by modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LucasRoots {
    /// Larger-modulus root phi.
    pub phi: Scalar,
    /// Smaller-modulus root varphi = s - phi = -t/phi.
    pub varphi: Scalar,
}

/// Characteristic roots phi = (s + sqrt(s^2+4t))/2, varphi = s - phi,
/// ordered so that |phi| >= |varphi|.
pub fn lucas_roots(s: Scalar, t: Scalar) -> Result<LucasRoots> {
    let disc = s * s + Scalar::new(4.0, 0.0) * t;
    let scale = (s.norm() * s.norm()).max(t.norm());
    if disc.norm() < 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateRoots {
            discriminant: disc.norm(),
        });
    }
    let root = disc.sqrt();
    let mut phi = (s + root) / 2.0;
    let mut varphi = (s - root) / 2.0;
    if varphi.norm() > phi.norm() {
        std::mem::swap(&mut phi, &mut varphi);
    }
    Ok(LucasRoots { phi, varphi })
}

/// Partial-fraction value of the Lucas generating function at x:
/// (1/(phi - varphi)) (1/(1 - phi x) - 1/(1 - varphi x)).
pub fn lucas_generating_check(s: Scalar, t: Scalar, x: Scalar) -> Result<Scalar> {
    let roots = lucas_roots(s, t)?;
    let one = Scalar::new(1.0, 0.0);
    for (idx, root) in [roots.phi, roots.varphi].into_iter().enumerate() {
        let denom = one - root * x;
        if denom.norm() <= crate::EPS_POLE * (root * x).norm().max(1.0) {
            return Err(Error::PoleProximity {
                index: idx,
                magnitude: denom.norm(),
            });
        }
    }
    let value =
        (one / (one - roots.phi * x) - one / (one - roots.varphi * x)) / (roots.phi - roots.varphi);
    ensure_finite(value, "lucas_generating_check")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::scalar;

    fn real(spec: &SequenceSpec, n: u64) -> f64 {
        coefficient(spec, n).unwrap().re
    }

    #[test]
    fn fibonacci_prefix() {
        let spec = SequenceSpec::Lucas {
            s: scalar(1.0, 0.0),
            t: scalar(1.0, 0.0),
        };
        let expect = [0.0, 1.0, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0, 34.0, 55.0];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(real(&spec, n as u64), *e);
        }
    }

    #[test]
    fn mersenne_prefix() {
        let spec = SequenceSpec::Lucas {
            s: scalar(3.0, 0.0),
            t: scalar(-2.0, 0.0),
        };
        for n in 1..=8u64 {
            assert_eq!(real(&spec, n), (2f64).powi(n as i32) - 1.0);
        }
    }

    #[test]
    fn triangular_numbers() {
        let spec = SequenceSpec::Polytopic { d: 2, sigma: 1 };
        let expect = [1.0, 3.0, 6.0, 10.0, 15.0];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(real(&spec, i as u64 + 1), *e);
        }
    }

    #[test]
    fn inv_factorial_at_zero() {
        assert_eq!(real(&SequenceSpec::InvFactorial, 0), 1.0);
    }

    #[test]
    fn huge_factorial_underflows_to_zero() {
        // 1/n! below double range converts to exactly 0, not NaN.
        assert_eq!(real(&SequenceSpec::InvFactorial, 200), 0.0);
    }

    #[test]
    fn table_out_of_range() {
        let spec = SequenceSpec::Table(vec![scalar(1.0, 0.0)]);
        assert_eq!(real(&spec, 0), 1.0);
        assert!(matches!(
            coefficient(&spec, 1),
            Err(Error::IndexOutOfTable { index: 1, len: 1 })
        ));
    }

    #[test]
    fn golden_ratio_roots() {
        let r = lucas_roots(scalar(1.0, 0.0), scalar(1.0, 0.0)).unwrap();
        assert!((r.phi.re - 1.618_033_988_749_895).abs() < 1e-12);
        assert!((r.varphi.re - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_roots_rejected() {
        // s=2, t=-1: discriminant 0.
        let err = lucas_roots(scalar(2.0, 0.0), scalar(-1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateRoots { .. }));
    }

    #[test]
    fn silver_ratio_roots_satisfy_characteristic() {
        let r = lucas_roots(scalar(2.0, 0.0), scalar(1.0, 0.0)).unwrap();
        for root in [r.phi, r.varphi] {
            let residue = root * root - 2.0 * root - Scalar::new(1.0, 0.0);
            assert!(residue.norm() < 1e-12);
        }
        assert!((r.phi.re - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn generating_check_values() {
        // x=0: series has no constant term.
        let v = lucas_generating_check(scalar(1.0, 0.0), scalar(1.0, 0.0), scalar(0.0, 0.0));
        assert!(v.unwrap().norm() < 1e-15);
        // x=0.2: rational closed form x/(1 - sx - tx^2) = 0.2/0.76.
        let v = lucas_generating_check(scalar(1.0, 0.0), scalar(1.0, 0.0), scalar(0.2, 0.0));
        assert!((v.unwrap().re - 0.2 / 0.76).abs() < 1e-14);
    }

    #[test]
    fn generating_check_matches_partial_sum() {
        // s=2, t=1 (Pell) at x=0.1 against 40 summed terms.
        let (s, t, x) = (scalar(2.0, 0.0), scalar(1.0, 0.0), scalar(0.1, 0.0));
        let spec = SequenceSpec::Lucas { s, t };
        let mut sum = Scalar::new(0.0, 0.0);
        let mut xp = Scalar::new(1.0, 0.0);
        for n in 0..=40u64 {
            sum += coefficient(&spec, n).unwrap() * xp;
            xp *= x;
        }
        let v = lucas_generating_check(s, t, x).unwrap();
        assert!((v - sum).norm() < 1e-12);
    }

    #[test]
    fn validation_catches_bad_specs() {
        assert!(SequenceSpec::Polytopic { d: 0, sigma: 1 }.validate().is_err());
        assert!(SequenceSpec::Lucas {
            s: scalar(0.0, 0.0),
            t: scalar(1.0, 0.0)
        }
        .validate()
        .is_err());
        assert!(SequenceSpec::Table(vec![]).validate().is_err());
    }
}
