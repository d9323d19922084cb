//! Complex scalar type and the `RE[+|-]IMi` literal grammar.
//!
//! All parameters (x, y, z, lambda, ...) are complex doubles. Real inputs
//! embed with zero imaginary part. Results with NaN or infinite components
//! are rejected at the point they appear rather than propagated.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex double-precision scalar used throughout the crate.
pub type Scalar = Complex64;

/// Shorthand constructor.
pub fn scalar(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

/// Checks both components are finite, naming the computation on failure.
pub fn ensure_finite(v: Scalar, context: &'static str) -> Result<Scalar> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(context))
    }
}

/// Integer power that handles negative exponents.
pub fn powi(base: Scalar, exp: i64) -> Scalar {
    if exp >= 0 {
        base.powu(exp as u32)
    } else {
        base.powu((-exp) as u32).finv()
    }
}

/// Binomial C(k, 2) = k(k-1)/2 as used in the operator weights.
pub fn choose2(k: u32) -> u32 {
    k * (k.saturating_sub(1)) / 2
}

/// Parses the complex literal grammar `RE[+|-]IMi` (decimal only).
///
/// Accepted: `1`, `-0.5`, `0.3+0.4i`, `1-2i`, `0.4i`.
pub fn parse_complex(s: &str) -> Result<Scalar> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    if let Some(body) = s.strip_suffix('i') {
        // Find the +/- separating RE and IM, skipping a leading sign and
        // exponent signs are excluded by the decimal-only grammar.
        let bytes = body.as_bytes();
        let mut split = None;
        for (idx, &b) in bytes.iter().enumerate().skip(1) {
            if b == b'+' || b == b'-' {
                split = Some(idx);
            }
        }
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let re: f64 = re_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad real part in '{s}'")))?;
        let im_str = match im_str {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let im: f64 = im_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad imaginary part in '{s}'")))?;
        Ok(Scalar::new(re, im))
    } else {
        let re: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad number '{s}'")))?;
        Ok(Scalar::new(re, 0.0))
    }
}

/// Formats a scalar in the same grammar `parse_complex` accepts.
pub fn format_complex(v: Scalar) -> String {
    if v.im == 0.0 {
        format!("{}", v.re)
    } else if v.im < 0.0 {
        format!("{}{}i", v.re, v.im)
    } else {
        format!("{}+{}i", v.re, v.im)
    }
}
