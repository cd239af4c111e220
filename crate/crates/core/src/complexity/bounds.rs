use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::E;

/// Largest exponent accepted before `exp` is reported as out of range.
pub const MAX_EXPONENT: f64 = 700.0;

/// Absolute constants of the separation theorems. None of them is known
/// explicitly; the defaults keep desk-scale experiments non-degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsoluteConstants {
    /// Prefactor `c` of the margin.
    pub c: f64,
    /// Exponent constant `C` in `θ`.
    pub big_c: f64,
    /// Constant `C′` in the width conditions and the bias hypothesis.
    pub c_prime: f64,
    /// Constant `c₁` in the two-point separation probability.
    pub c1: f64,
}

impl Default for AbsoluteConstants {
    fn default() -> Self {
        AbsoluteConstants { c: 1.0, big_c: 0.01, c_prime: 1.0, c1: 0.004 }
    }
}

/// `max(widths) + C·R·√(log N)`.
pub fn union_width_bound(component_widths: &[f64], radius: f64, big_c: f64) -> Result<f64> {
    if component_widths.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(radius > 0.0 && big_c > 0.0) {
        return Err(Error::Domain(format!("need R > 0 and C > 0, got R={radius}, C={big_c}")));
    }
    let max = component_widths.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(max + big_c * radius * (component_widths.len() as f64).ln().sqrt())
}

fn check_ratio(lambda: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && lambda > 0.0) {
        return Err(Error::Domain(format!("need λ > 0 and δ > 0, got λ={lambda}, δ={delta}")));
    }
    let ratio = lambda / delta;
    // λ = e·δ is admitted even when the quotient rounds just below e.
    if ratio < E * (1.0 - 4.0 * f64::EPSILON) {
        return Err(Error::HypothesisViolated(format!("λ/δ = {ratio} < e")));
    }
    Ok(ratio)
}

/// `s·λ⁶·δ⁻⁸·log(λ/δ)`, the common exponent shape with `s` the squared scale.
fn shape_exponent(scale_sq: f64, lambda: f64, delta: f64) -> Result<f64> {
    let ratio = check_ratio(lambda, delta)?;
    Ok(scale_sq * lambda.powi(6) * delta.powi(-8) * ratio.ln())
}

/// `C·(α²+λ²)·λ⁶·δ⁻⁸·log(λ/δ)`.
pub fn theta_exponent(alpha: f64, lambda: f64, delta: f64, big_c: f64) -> Result<f64> {
    if !(big_c > 0.0) || !(alpha >= 0.0) {
        return Err(Error::Domain(format!("need C > 0 and α ≥ 0, got C={big_c}, α={alpha}")));
    }
    Ok(big_c * shape_exponent(alpha * alpha + lambda * lambda, lambda, delta)?)
}

/// `θ = exp(C·(α²+λ²)·λ⁶·δ⁻⁸·log(λ/δ))`.
pub fn compute_theta(alpha: f64, lambda: f64, delta: f64, big_c: f64) -> Result<f64> {
    let x = theta_exponent(alpha, lambda, delta, big_c)?;
    if !(x <= MAX_EXPONENT) {
        return Err(Error::Overflow(x));
    }
    Ok(x.exp())
}

/// `k·(λ/δ)⁴·(α+λ)`, the default second-layer bias scale.
pub fn default_lambda_hat(alpha: f64, lambda: f64, delta: f64, k: f64) -> Result<f64> {
    if !(delta > 0.0 && lambda > 0.0 && k > 0.0 && alpha >= 0.0) {
        return Err(Error::Domain("need λ, δ, k > 0 and α ≥ 0".into()));
    }
    Ok(k * (lambda / delta).powi(4) * (alpha + lambda))
}

/// `λ ≥ C′·R·√(log(λ/δ))`, checked post hoc. `false` when `λ/δ < 1`.
pub fn bias_hypothesis_holds(lambda: f64, radius: f64, delta: f64, c_prime: f64) -> bool {
    let ratio = lambda / delta;
    ratio >= 1.0 && lambda >= c_prime * radius * ratio.ln().sqrt()
}

/// Parameters and derived quantities of the two-layer separation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalBounds {
    pub alpha: f64,
    pub lambda: f64,
    pub lambda_hat: f64,
    pub delta: f64,
    pub theta: f64,
    /// `c·λ²/(λ̂·θ)`, the margin at scale `α`.
    pub predicted_margin: f64,
    pub constant_c: f64,
    pub constant_big_c: f64,
}

impl TheoreticalBounds {
    pub fn new(alpha: f64, lambda: f64, lambda_hat: f64, delta: f64, constants: &AbsoluteConstants) -> Result<Self> {
        if !(lambda_hat > 0.0 && constants.c > 0.0) {
            return Err(Error::Domain(format!("need λ̂ > 0 and c > 0, got λ̂={lambda_hat}, c={}", constants.c)));
        }
        let theta = compute_theta(alpha, lambda, delta, constants.big_c)?;
        Ok(TheoreticalBounds {
            alpha,
            lambda,
            lambda_hat,
            delta,
            theta,
            predicted_margin: constants.c * lambda * lambda / (lambda_hat * theta),
            constant_c: constants.c,
            constant_big_c: constants.big_c,
        })
    }
}

/// Natural log of `c·s²/λ̂·exp(−C·s²·λ⁶·δ⁻⁸·log(λ/δ))` with `s = w⁻ + w⁺ + λ`.
pub fn ln_predicted_margin(bounds: &TheoreticalBounds, w_minus: f64, width_plus: f64) -> Result<f64> {
    if !(w_minus >= 0.0 && width_plus >= 0.0) {
        return Err(Error::Domain(format!("widths must be nonnegative, got {w_minus}, {width_plus}")));
    }
    let s = w_minus + width_plus + bounds.lambda;
    let x = bounds.constant_big_c * shape_exponent(s * s, bounds.lambda, bounds.delta)?;
    Ok(bounds.constant_c.ln() + 2.0 * s.ln() - bounds.lambda_hat.ln() - x)
}

/// `c·s²/λ̂·exp(−C·s²·λ⁶·δ⁻⁸·log(λ/δ))` with `s = w⁻ + w⁺ + λ`. An exponent
/// beyond [`MAX_EXPONENT`] is an overflow error; use [`ln_predicted_margin`]
/// for the log-scale value.
pub fn predicted_margin(bounds: &TheoreticalBounds, w_minus: f64, width_plus: f64) -> Result<f64> {
    if !(w_minus >= 0.0 && width_plus >= 0.0) {
        return Err(Error::Domain(format!("widths must be nonnegative, got {w_minus}, {width_plus}")));
    }
    let s = w_minus + width_plus + bounds.lambda;
    let x = bounds.constant_big_c * shape_exponent(s * s, bounds.lambda, bounds.delta)?;
    if !(x <= MAX_EXPONENT) {
        return Err(Error::Overflow(x));
    }
    Ok(bounds.constant_c * s * s / bounds.lambda_hat * (-x).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_constants() -> AbsoluteConstants {
        AbsoluteConstants { c: 1.0, big_c: 1.0, ..AbsoluteConstants::default() }
    }

    #[test]
    fn union_bound_examples() {
        assert_eq!(union_width_bound(&[0.5], 2.0, 7.0).unwrap(), 0.5);
        let b = union_width_bound(&[0.0, 0.0], 1.0, 3.0).unwrap();
        assert!((b - 3.0 * 2f64.ln().sqrt()).abs() < 1e-15);
        assert!((b - 2.4977).abs() < 1e-4);
        assert!(union_width_bound(&[], 1.0, 1.0).is_err());
        assert!(union_width_bound(&[1.0], 0.0, 1.0).is_err());
    }

    #[test]
    fn theta_examples() {
        let t = compute_theta(0.0, E, 1.0, 1e-12).unwrap();
        assert!((t - 1.0).abs() < 1e-8);

        // exp(0.01·(1+e²)·e⁶).
        let x = theta_exponent(1.0, E, 1.0, 0.01).unwrap();
        let expected = 0.01 * (1.0 + E * E) * E.powi(6);
        assert!((x - expected).abs() < 1e-12 * expected);
        assert!((x - 33.8439).abs() < 1e-3);
        let t = compute_theta(1.0, E, 1.0, 0.01).unwrap();
        assert!((t / expected.exp() - 1.0).abs() < 1e-12);
        assert!(t > 4.9e14 && t < 5.0e14);

        assert!(matches!(compute_theta(1.0, E, 0.3, 0.01), Err(Error::Overflow(_))));
        assert!(matches!(compute_theta(1.0, 2.0, 1.0, 0.01), Err(Error::HypothesisViolated(_))));
        assert!(compute_theta(1.0, E, 1.0, 0.0).is_err());
    }

    #[test]
    fn theta_is_at_least_one() {
        for &l in &[E, 3.0, 4.0, 5.0] {
            for &a in &[0.0, 0.5, 1.0] {
                assert!(compute_theta(a, l, 1.0, 0.001).unwrap() >= 1.0);
            }
        }
    }

    #[test]
    fn theta_monotonicity() {
        let c = 1e-4;
        let alphas = [0.0, 0.5, 1.0, 2.0, 4.0];
        for w in alphas.windows(2) {
            assert!(compute_theta(w[1], 3.0, 1.0, c).unwrap() > compute_theta(w[0], 3.0, 1.0, c).unwrap());
        }
        let lambdas = [2.8, 3.0, 3.5, 4.0, 5.0];
        for w in lambdas.windows(2) {
            assert!(compute_theta(1.0, w[1], 1.0, c).unwrap() > compute_theta(1.0, w[0], 1.0, c).unwrap());
        }
        let deltas = [0.5, 0.7, 0.9, 1.0];
        for w in deltas.windows(2) {
            assert!(compute_theta(1.0, 3.0, w[1], c).unwrap() < compute_theta(1.0, 3.0, w[0], c).unwrap());
        }
    }

    #[test]
    fn margin_scales_inversely_with_lambda_hat() {
        let k = AbsoluteConstants { big_c: 1e-4, ..AbsoluteConstants::default() };
        let a = TheoreticalBounds::new(1.0, 3.0, 10.0, 1.0, &k).unwrap();
        let b = TheoreticalBounds::new(1.0, 3.0, 40.0, 1.0, &k).unwrap();
        let ma = predicted_margin(&a, 0.3, 0.7).unwrap();
        let mb = predicted_margin(&b, 0.3, 0.7).unwrap();
        assert!(ma > 0.0 && mb > 0.0);
        assert!((ma / mb - 4.0).abs() < 1e-12);
        assert!(a.predicted_margin > 0.0);
    }

    #[test]
    fn margin_at_unit_constants() {
        // s = λ = e, δ = 1: exponent e²·e⁶·1 = e⁸ ≈ 2981 is beyond double range.
        let b = TheoreticalBounds {
            alpha: 0.0,
            lambda: E,
            lambda_hat: E * E,
            delta: 1.0,
            theta: 1.0,
            predicted_margin: 1.0,
            constant_c: 1.0,
            constant_big_c: unit_constants().big_c,
        };
        assert!(matches!(predicted_margin(&b, 0.0, 0.0), Err(Error::Overflow(_))));
        let ln = ln_predicted_margin(&b, 0.0, 0.0).unwrap();
        let expected = -E.powi(8);
        assert!((ln - expected).abs() < 1e-9, "{ln} vs {expected}");
        assert!((ln - (-2980.957987041728)).abs() < 1e-9);
    }

    #[test]
    fn lambda_hat_default_and_bias_hypothesis() {
        assert!((default_lambda_hat(1.0, 2.0, 1.0, 0.5).unwrap() - 0.5 * 16.0 * 3.0).abs() < 1e-12);
        assert!(bias_hypothesis_holds(10.0, 1.0, 0.5, 1.0));
        assert!(!bias_hypothesis_holds(1.0, 10.0, 0.5, 1.0));
        assert!(!bias_hypothesis_holds(0.1, 1.0, 0.5, 1.0));
    }
}
