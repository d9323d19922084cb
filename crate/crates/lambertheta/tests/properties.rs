//! Property tests for the algebraic invariants: operator laws on random
//! Laurent polynomials, literal round-trips, and series arithmetic.

use proptest::prelude::*;

use lambertheta::laurent::LaurentSeries;
use lambertheta::operators::{lambda_derivative, lambda_derivative_pow};
use lambertheta::scalar::{choose2, format_complex, parse_complex, powi, scalar, Scalar};

fn coeff_strategy() -> impl Strategy<Value = Scalar> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| scalar(re, im))
}

fn poly_strategy() -> impl Strategy<Value = LaurentSeries> {
    (
        proptest::collection::vec(coeff_strategy(), 1..=10),
        -4..4i64,
    )
        .prop_map(|(coeffs, min_exp)| LaurentSeries::new(min_exp, coeffs, i64::MAX))
}

fn lambda_strategy() -> impl Strategy<Value = Scalar> {
    // Away from zero so the power closed form is defined.
    (0.1..0.9f64, 0.0..std::f64::consts::TAU).prop_map(|(m, t)| Scalar::from_polar(m, t))
}

fn max_norm(s: &LaurentSeries) -> f64 {
    s.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn close(a: &LaurentSeries, b: &LaurentSeries) -> bool {
    a.max_coeff_distance(b) <= 1e-11 * max_norm(a).max(max_norm(b)).max(1.0)
}

proptest! {
    #[test]
    fn derivative_is_linear(
        f in poly_strategy(),
        g in poly_strategy(),
        alpha in coeff_strategy(),
        beta in coeff_strategy(),
        lam in lambda_strategy(),
    ) {
        let lhs = lambda_derivative(&f.scale(alpha).add(&g.scale(beta)), lam);
        let rhs = lambda_derivative(&f, lam)
            .scale(alpha)
            .add(&lambda_derivative(&g, lam).scale(beta));
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn product_rule_holds(
        f in poly_strategy(),
        g in poly_strategy(),
        lam in lambda_strategy(),
    ) {
        // D(fg) = x D(f) D(g)
        let lhs = lambda_derivative(&f.mul(&g), lam);
        let rhs = lambda_derivative(&f, lam)
            .mul(&lambda_derivative(&g, lam))
            .shift(1);
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn power_closed_form_matches_iteration(
        f in poly_strategy(),
        lam in lambda_strategy(),
        n in 1..6u32,
    ) {
        let closed = lambda_derivative_pow(&f, lam, n).unwrap();
        let mut iterated = f.clone();
        for _ in 0..n {
            iterated = lambda_derivative(&iterated, lam);
        }
        prop_assert!(close(&closed, &iterated));
    }

    #[test]
    fn power_product_rule_holds(
        f in poly_strategy(),
        g in poly_strategy(),
        lam in lambda_strategy(),
        n in 1..5u32,
    ) {
        // D^n(fg) = λ^{C(n,2)} x^n D^n(f) D^n(g)
        let lhs = lambda_derivative_pow(&f.mul(&g), lam, n).unwrap();
        let rhs = lambda_derivative_pow(&f, lam, n)
            .unwrap()
            .mul(&lambda_derivative_pow(&g, lam, n).unwrap())
            .shift(n as i64)
            .scale(powi(lam, choose2(n) as i64));
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn derivative_matches_substitution_pointwise(
        f in poly_strategy(),
        lam in lambda_strategy(),
        mag in 0.5..1.5f64,
        theta in 0.0..std::f64::consts::TAU,
    ) {
        // D f(x) = f(λx)/x at a nonzero evaluation point.
        let x = Scalar::from_polar(mag, theta);
        let direct = lambda_derivative(&f, lam).eval(x).unwrap();
        let substituted = f.eval(lam * x).unwrap() / x;
        let scale = direct.norm().max(substituted.norm()).max(1.0);
        prop_assert!((direct - substituted).norm() <= 1e-10 * scale);
    }

    #[test]
    fn mul_agrees_with_pointwise_product(
        f in poly_strategy(),
        g in poly_strategy(),
        mag in 0.5..1.5f64,
        theta in 0.0..std::f64::consts::TAU,
    ) {
        let x = Scalar::from_polar(mag, theta);
        let product = f.mul(&g).eval(x).unwrap();
        let pointwise = f.eval(x).unwrap() * g.eval(x).unwrap();
        let scale = product.norm().max(pointwise.norm()).max(1.0);
        prop_assert!((product - pointwise).norm() <= 1e-9 * scale);
    }

    #[test]
    fn complex_literal_round_trips(v in coeff_strategy()) {
        prop_assert_eq!(parse_complex(&format_complex(v)).unwrap(), v);
    }
}
