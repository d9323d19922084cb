//! Truncated Laurent series over complex coefficients.
//!
//! A series is stored densely over a contiguous exponent window:
//!
//! f(x) = Σ_{e = min_exponent}^{min_exponent + len - 1} c_{e} x^e
//!
//! Exponents above `truncation_order` are unknown (not zero); exponents
//! below `min_exponent` and between the stored window and the truncation
//! order are known to be zero. The operators in this crate only shift and
//! scale coefficients, so the dense window never grows gaps.

use crate::error::{Error, Result};
use crate::scalar::{powi, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries {
    min_exponent: i64,
    coeffs: Vec<Scalar>,
    truncation_order: i64,
}

impl LaurentSeries {
    /// Builds a series from a dense coefficient window.
    pub fn new(min_exponent: i64, coeffs: Vec<Scalar>, truncation_order: i64) -> Self {
        assert!(!coeffs.is_empty(), "coefficient window must be non-empty");
        assert!(
            truncation_order >= min_exponent + coeffs.len() as i64 - 1,
            "truncation order below the stored window"
        );
        let mut s = Self {
            min_exponent,
            coeffs,
            truncation_order,
        };
        s.normalize();
        s
    }

    /// The monomial x^n (n may be negative); exact, so nothing is truncated.
    pub fn monomial(n: i64) -> Self {
        Self {
            min_exponent: n,
            coeffs: vec![Scalar::new(1.0, 0.0)],
            truncation_order: i64::MAX,
        }
    }

    /// A constant series (exact).
    pub fn constant(c: Scalar) -> Self {
        Self {
            min_exponent: 0,
            coeffs: vec![c],
            truncation_order: i64::MAX,
        }
    }

    /// An exact polynomial Σ coeffs[n] x^n; all higher coefficients are
    /// known to be zero.
    pub fn polynomial(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty());
        Self::new(0, coeffs, i64::MAX)
    }

    pub fn min_exponent(&self) -> i64 {
        self.min_exponent
    }

    pub fn max_exponent(&self) -> i64 {
        self.min_exponent + self.coeffs.len() as i64 - 1
    }

    pub fn truncation_order(&self) -> i64 {
        self.truncation_order
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient at an exponent; zero outside the window, None above truncation.
    pub fn coefficient(&self, exponent: i64) -> Option<Scalar> {
        if exponent > self.truncation_order {
            return None;
        }
        if exponent < self.min_exponent || exponent > self.max_exponent() {
            return Some(Scalar::new(0.0, 0.0));
        }
        Some(self.coeffs[(exponent - self.min_exponent) as usize])
    }

    /// Strips exact leading/trailing zeros, keeping at least one coefficient.
    pub fn normalize(&mut self) {
        let zero = Scalar::new(0.0, 0.0);
        let mut start = 0;
        while start + 1 < self.coeffs.len() && self.coeffs[start] == zero {
            start += 1;
        }
        let mut end = self.coeffs.len();
        while end > start + 1 && self.coeffs[end - 1] == zero {
            end -= 1;
        }
        if start > 0 || end < self.coeffs.len() {
            self.coeffs = self.coeffs[start..end].to_vec();
            self.min_exponent += start as i64;
        }
    }

    /// Scales every coefficient by a constant.
    pub fn scale(&self, c: Scalar) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| a * c).collect();
        Self::new(self.min_exponent, coeffs, self.truncation_order)
    }

    /// Multiplies by x^k (exponent shift).
    pub fn shift(&self, k: i64) -> Self {
        Self {
            min_exponent: self.min_exponent + k,
            coeffs: self.coeffs.clone(),
            truncation_order: self.truncation_order.saturating_add(k),
        }
    }

    /// Sum of two series; truncation is the min of the two orders.
    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.truncation_order.min(other.truncation_order);
        let min_exp = self.min_exponent.min(other.min_exponent);
        let max_exp = self.max_exponent().max(other.max_exponent()).min(trunc);
        let len = (max_exp - min_exp + 1).max(1) as usize;
        let mut coeffs = vec![Scalar::new(0.0, 0.0); len];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let e = min_exp + i as i64;
            let a = self.coefficient(e).unwrap_or_default();
            let b = other.coefficient(e).unwrap_or_default();
            *c = a + b;
        }
        Self::new(min_exp, coeffs, trunc)
    }

    /// Cauchy product. Truncation order of the product is the smallest
    /// exponent at which an unknown coefficient of either factor can land:
    /// min(a.trunc + b.min, b.trunc + a.min).
    pub fn mul(&self, other: &Self) -> Self {
        let trunc = (self.truncation_order.saturating_add(other.min_exponent))
            .min(other.truncation_order.saturating_add(self.min_exponent));
        let min_exp = self.min_exponent + other.min_exponent;
        let max_exp = (self.max_exponent() + other.max_exponent()).min(trunc);
        let len = (max_exp - min_exp + 1).max(1) as usize;
        let mut coeffs = vec![Scalar::new(0.0, 0.0); len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let e = self.min_exponent + i as i64 + other.min_exponent + j as i64;
                if e <= trunc {
                    coeffs[(e - min_exp) as usize] += a * b;
                }
            }
        }
        Self::new(min_exp, coeffs, trunc)
    }

    /// Evaluates at a point: Horner on the nonnegative part plus explicit
    /// negative powers. Requires x != 0 when negative exponents are present.
    pub fn eval(&self, x: Scalar) -> Result<Scalar> {
        let mut nonneg = Scalar::new(0.0, 0.0);
        let mut have_nonneg = false;
        // Horner over exponents max..0.
        for e in (0..=self.max_exponent()).rev() {
            let c = self.coefficient(e).unwrap_or_default();
            nonneg = nonneg * x + c;
            have_nonneg = true;
        }
        let mut total = if have_nonneg {
            nonneg
        } else {
            Scalar::new(0.0, 0.0)
        };
        if self.min_exponent < 0 {
            if x.norm() == 0.0 {
                return Err(Error::NonFinite("evaluation of negative powers at x = 0"));
            }
            for e in self.min_exponent..0 {
                let c = self.coefficient(e).unwrap_or_default();
                if c != Scalar::new(0.0, 0.0) {
                    total += c * powi(x, e);
                }
            }
        }
        if total.re.is_finite() && total.im.is_finite() {
            Ok(total)
        } else {
            Err(Error::NonFinite("series evaluation"))
        }
    }

    /// Largest coefficientwise difference against another series over the
    /// union of known exponents.
    pub fn max_coeff_distance(&self, other: &Self) -> f64 {
        let lo = self.min_exponent.min(other.min_exponent);
        let hi = self
            .max_exponent()
            .max(other.max_exponent())
            .min(self.truncation_order.min(other.truncation_order));
        let mut worst = 0.0f64;
        for e in lo..=hi {
            let a = self.coefficient(e).unwrap_or_default();
            let b = other.coefficient(e).unwrap_or_default();
            worst = worst.max((a - b).norm());
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::scalar;

    #[test]
    fn normalize_strips_exact_zeros() {
        let s = LaurentSeries::new(
            -2,
            vec![
                scalar(0.0, 0.0),
                scalar(1.0, 0.0),
                scalar(0.0, 0.0),
                scalar(2.0, 0.0),
                scalar(0.0, 0.0),
            ],
            5,
        );
        assert_eq!(s.min_exponent(), -1);
        assert_eq!(s.max_exponent(), 1);
        assert_eq!(s.truncation_order(), 5);
        assert_eq!(s.coefficient(0), Some(scalar(0.0, 0.0)));
        assert_eq!(s.coefficient(1), Some(scalar(2.0, 0.0)));
        // Between window and truncation: known zero. Above: unknown.
        assert_eq!(s.coefficient(4), Some(scalar(0.0, 0.0)));
        assert_eq!(s.coefficient(6), None);
    }

    #[test]
    fn add_respects_truncation() {
        let a = LaurentSeries::polynomial(vec![scalar(1.0, 0.0), scalar(2.0, 0.0)]);
        let b = LaurentSeries::new(0, vec![scalar(3.0, 0.0)], 5);
        let c = a.add(&b);
        assert_eq!(c.truncation_order(), 5);
        assert_eq!(c.coefficient(0), Some(scalar(4.0, 0.0)));
        assert_eq!(c.coefficient(1), Some(scalar(2.0, 0.0)));
        assert_eq!(c.coefficient(5), Some(scalar(0.0, 0.0)));
        assert_eq!(c.coefficient(6), None);
    }

    #[test]
    fn mul_matches_hand_product() {
        // (1 + x)(2 + x) = 2 + 3x + x^2
        let a = LaurentSeries::polynomial(vec![scalar(1.0, 0.0), scalar(1.0, 0.0)]);
        let b = LaurentSeries::polynomial(vec![scalar(2.0, 0.0), scalar(1.0, 0.0)]);
        let c = a.mul(&b);
        assert_eq!(c.coefficient(0), Some(scalar(2.0, 0.0)));
        assert_eq!(c.coefficient(1), Some(scalar(3.0, 0.0)));
        assert_eq!(c.coefficient(2), Some(scalar(1.0, 0.0)));
    }

    #[test]
    fn eval_mixes_negative_and_positive_powers() {
        // 5 x^{-1} + 2 + 3x at x = 2 -> 2.5 + 2 + 6
        let s = LaurentSeries::new(
            -1,
            vec![scalar(5.0, 0.0), scalar(2.0, 0.0), scalar(3.0, 0.0)],
            1,
        );
        let v = s.eval(scalar(2.0, 0.0)).unwrap();
        assert!((v.re - 10.5).abs() < 1e-14);
    }

    #[test]
    fn eval_rejects_zero_with_negative_exponents() {
        let s = LaurentSeries::monomial(-1);
        assert!(s.eval(scalar(0.0, 0.0)).is_err());
    }
}
