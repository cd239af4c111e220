//! Probabilities that a random hyperplane `H_τ[g]`, `g ~ N(0, I_d)`,
//! `τ ~ U[−λ, λ]`, t-separates two sets, and the lower bounds they are
//! compared against.

use crate::error::{Error, Result};
use crate::geometry::{dist, dot, ensure_dim, PointSet};
use crate::layers::RandomReluLayer;
use crate::monte_carlo::{draws, EstimatorResult};
use crate::rng::{fill_gaussian, uniform_symmetric};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use std::io::Write;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationProbe {
    pub x_minus: PointSet,
    pub x_plus: PointSet,
    pub lambda: f64,
    pub t: f64,
    pub trials: usize,
    pub seed: u64,
}

impl SeparationProbe {
    pub fn new(x_minus: PointSet, x_plus: PointSet, lambda: f64, t: f64, trials: usize, seed: u64) -> Result<Self> {
        let p = SeparationProbe { x_minus, x_plus, lambda, t, trials, seed };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_dim(self.x_minus.dim(), self.x_plus.dim())?;
        if self.x_minus.is_empty() || self.x_plus.is_empty() {
            return Err(Error::EmptySet);
        }
        if !(self.lambda > 0.0) || !(self.t >= 0.0) {
            return Err(Error::Domain(format!("need λ > 0 and t ≥ 0, got λ={}, t={}", self.lambda, self.t)));
        }
        if self.trials == 0 {
            return Err(Error::Estimator("need at least one trial".into()));
        }
        Ok(())
    }
}

/// Estimate with the binomial standard error `√(p̂(1 − p̂)/n)`.
pub fn binomial_result(successes: usize, n: usize, seed: u64) -> EstimatorResult {
    let p = successes as f64 / n as f64;
    EstimatorResult { estimate: p, std_error: (p * (1.0 - p) / n as f64).sqrt(), n_samples: n, seed }
}

/// Per draw, `(max_{X⁻} <g,x> + τ, min_{X⁺} <g,x> + τ)`. The hyperplane
/// t-separates iff the first is `≤ −t` and the second `> t`, so one set of
/// draws serves every `t`.
pub fn hyperplane_extremes(p: &SeparationProbe) -> Result<Vec<(f64, f64)>> {
    p.validate()?;
    let d = p.x_minus.dim();
    Ok(draws(p.trials, p.seed, |rng| {
        let mut g = vec![0.0; d];
        fill_gaussian(rng, &mut g);
        let tau = uniform_symmetric(rng, p.lambda);
        let hi = p.x_minus.iter().map(|x| dot(&g, x)).fold(f64::NEG_INFINITY, f64::max);
        let lo = p.x_plus.iter().map(|x| dot(&g, x)).fold(f64::INFINITY, f64::min);
        (hi + tau, lo + tau)
    }))
}

fn count_separating(extremes: &[(f64, f64)], t: f64) -> usize {
    extremes.iter().filter(|&&(m, pl)| m <= -t && pl > t).count()
}

pub fn estimate_separation_probability(p: &SeparationProbe) -> Result<EstimatorResult> {
    let ex = hyperplane_extremes(p)?;
    Ok(binomial_result(count_separating(&ex, p.t), p.trials, p.seed))
}

/// Estimates on a grid of levels from one shared set of draws; the curve is
/// exactly nonincreasing in `t`. `p.t` is ignored.
pub fn separation_probability_curve(p: &SeparationProbe, ts: &[f64]) -> Result<Vec<EstimatorResult>> {
    if let Some(t) = ts.iter().find(|t| !(**t >= 0.0)) {
        return Err(Error::Domain(format!("levels must be nonnegative, got {t}")));
    }
    let ex = hyperplane_extremes(p)?;
    Ok(ts.iter().map(|&t| binomial_result(count_separating(&ex, t), p.trials, p.seed)).collect())
}

/// `c·δ/λ` clamped to `[0, 1]`.
pub fn two_point_lower_bound(delta: f64, lambda: f64, c: f64) -> Result<f64> {
    if !(delta >= 0.0 && lambda > 0.0 && c > 0.0) {
        return Err(Error::Domain(format!("need δ ≥ 0, λ > 0, c > 0; got δ={delta}, λ={lambda}, c={c}")));
    }
    Ok((c * delta / lambda).clamp(0.0, 1.0))
}

/// `(t/λ)·exp(−C·t²·γ_m⁻²·log(4/(1−ε)))` clamped to `[0, 1]`.
pub fn general_lower_bound(t: f64, gamma_m: f64, epsilon: f64, lambda: f64, big_c: f64) -> Result<f64> {
    if epsilon >= 1.0 {
        return Err(Error::Domain(format!("degenerate narrowness ε = {epsilon}")));
    }
    if !(t >= 0.0 && gamma_m > 0.0 && lambda > 0.0 && big_c >= 0.0 && epsilon >= 0.0) {
        return Err(Error::Domain("need t ≥ 0, γ_m > 0, λ > 0, C ≥ 0, ε ∈ [0, 1)".into()));
    }
    let x = big_c * t * t / (gamma_m * gamma_m) * (4.0 / (1.0 - epsilon)).ln();
    Ok((t / lambda * (-x).exp()).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapProbability {
    pub exact: f64,
    /// Present only when `d ≥ 2/m²`.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// `P(<v, u> ≥ m)` for `v` uniform on `S^{d−1}`, i.e.
/// `½·I_{1−m²}((d−1)/2, ½)`, with the two-sided estimate
/// `(1/(k·m√d))·(1−m²)^{(d−1)/2}`, `k = 6` below and `k = 2` above.
pub fn spherical_cap_probability(m: f64, d: usize) -> Result<CapProbability> {
    if !(m > 0.0 && m <= 1.0) {
        return Err(Error::Domain(format!("cap height must lie in (0, 1], got {m}")));
    }
    if d < 2 {
        return Err(Error::Domain(format!("need d ≥ 2, got {d}")));
    }
    let x = 1.0 - m * m;
    let a = (d as f64 - 1.0) / 2.0;
    let exact = if x <= 0.0 { 0.0 } else { 0.5 * beta_reg(a, 0.5, x) };
    let (lower, upper) = if d as f64 >= 2.0 / (m * m) {
        let base = x.powf(a) / (m * (d as f64).sqrt());
        (Some(base / 6.0), Some(base / 2.0))
    } else {
        (None, None)
    };
    Ok(CapProbability { exact, lower, upper })
}

/// `n′ = ⌊(c₁/2)·δ·n/λ⌋`.
pub fn expected_separating_neurons(n: usize, delta: f64, lambda: f64, c1: f64) -> Result<usize> {
    if !(delta > 0.0 && lambda > 0.0 && c1 > 0.0) {
        return Err(Error::Domain("need δ, λ, c₁ > 0".into()));
    }
    Ok((c1 / 2.0 * delta / lambda * n as f64).floor() as usize)
}

/// Number of neurons whose hyperplane `|x⁺ − x⁻|`-separates `x⁻` from `x⁺`.
pub fn count_separating_neurons(layer: &RandomReluLayer, x_minus: &[f64], x_plus: &[f64]) -> Result<usize> {
    let t = dist(x_minus, x_plus);
    let pm = layer.pre_activations(x_minus)?;
    let pp = layer.pre_activations(x_plus)?;
    Ok(pm.iter().zip(&pp).filter(|&(&a, &b)| a <= -t && b > t).count())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub c: f64,
    pub big_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundComparison {
    pub empirical: EstimatorResult,
    pub theoretical_lower: f64,
    pub constants_used: BoundConstants,
    pub consistent: bool,
}

impl BoundComparison {
    /// Consistent iff `estimate + 3·std_error ≥ theoretical_lower`.
    pub fn new(empirical: EstimatorResult, theoretical_lower: f64, constants_used: BoundConstants) -> Self {
        let consistent = empirical.estimate + 3.0 * empirical.std_error >= theoretical_lower;
        BoundComparison { empirical, theoretical_lower, constants_used, consistent }
    }

    pub fn verdict(&self) -> &'static str {
        if self.consistent {
            "consistent"
        } else {
            "violated"
        }
    }
}

/// One row of a probability curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub d: usize,
    pub lambda: f64,
    pub t: f64,
    pub comparison: BoundComparison,
}

/// Columns `d,lambda,t,estimate,std_error,lower_bound,verdict`.
pub fn write_curve_csv<W: Write>(writer: W, rows: &[CurveRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["d", "lambda", "t", "estimate", "std_error", "lower_bound", "verdict"])?;
    for r in rows {
        w.write_record([
            r.d.to_string(),
            format!("{:?}", r.lambda),
            format!("{:?}", r.t),
            format!("{:?}", r.comparison.empirical.estimate),
            format!("{:?}", r.comparison.empirical.std_error),
            format!("{:?}", r.comparison.theoretical_lower),
            r.comparison.verdict().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Largest `c` with `c·δ/λ ≤ estimate + 3·std_error` on every observation
/// `(estimate, δ, λ)`.
pub fn calibrate_two_point_c(observations: &[(EstimatorResult, f64, f64)]) -> Result<f64> {
    if observations.is_empty() {
        return Err(Error::EmptySet);
    }
    let c = observations
        .iter()
        .map(|(e, delta, lambda)| (e.estimate + 3.0 * e.std_error) * lambda / delta)
        .fold(f64::INFINITY, f64::min);
    if !(c > 0.0) {
        return Err(Error::Estimator("no positive constant is consistent with the observations".into()));
    }
    Ok(c)
}

/// Smallest `C ≥ 0` keeping [`general_lower_bound`] consistent on every
/// observation `(estimate, t, γ_m, ε, λ)`.
pub fn calibrate_general_big_c(observations: &[(EstimatorResult, f64, f64, f64, f64)]) -> Result<f64> {
    if observations.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut need = 0.0f64;
    for &(e, t, gamma_m, epsilon, lambda) in observations {
        let ceiling = e.estimate + 3.0 * e.std_error;
        let prefactor = (t / lambda).min(1.0);
        if prefactor <= ceiling {
            continue;
        }
        if ceiling <= 0.0 {
            return Err(Error::Estimator(format!("zero empirical probability at t={t}; no finite C is consistent")));
        }
        let scale = t * t / (gamma_m * gamma_m) * (4.0 / (1.0 - epsilon)).ln();
        need = need.max((prefactor / ceiling).ln() / scale);
    }
    Ok(need)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sepcap_oracles::{sphere2_cap, two_point_separation_probability};

    fn line(xs: &[f64]) -> PointSet {
        PointSet::from_rows(&xs.iter().map(|x| vec![*x]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn infeasible_level_gives_zero() {
        let p = SeparationProbe::new(line(&[0.0]), line(&[1.0]), 1.0, 1.5, 5000, 1).unwrap();
        let r = estimate_separation_probability(&p).unwrap();
        assert_eq!((r.estimate, r.std_error), (0.0, 0.0));
    }

    #[test]
    fn two_point_probability_matches_quadrature() {
        let p = SeparationProbe::new(line(&[0.0]), line(&[1.0]), 10.0, 1.0, 2_000_000, 2).unwrap();
        let r = estimate_separation_probability(&p).unwrap();
        let exact = two_point_separation_probability(1.0, 10.0, 1.0);
        assert!(r.within(exact, 3.0), "{r:?} vs {exact}");
    }

    #[test]
    fn probability_halves_when_lambda_doubles() {
        let a = SeparationProbe::new(line(&[0.0]), line(&[1.0]), 10.0, 1.0, 2_000_000, 3).unwrap();
        let b = SeparationProbe { lambda: 20.0, seed: 4, ..a.clone() };
        let (ra, rb) = (estimate_separation_probability(&a).unwrap(), estimate_separation_probability(&b).unwrap());
        assert!((ra.estimate / 2.0 - rb.estimate).abs() <= 4.0 * (ra.std_error / 2.0).hypot(rb.std_error));
        let (pa, pb) = (
            two_point_separation_probability(1.0, 10.0, 1.0),
            two_point_separation_probability(1.0, 20.0, 1.0),
        );
        assert!((pa / 2.0 - pb).abs() < 1e-10);
    }

    #[test]
    fn two_point_bound_examples() {
        assert!((two_point_lower_bound(1.0, 10.0, 0.1).unwrap() - 0.01).abs() < 1e-15);
        assert_eq!(two_point_lower_bound(5.0, 1.0, 1.0).unwrap(), 1.0);
        let exact = two_point_separation_probability(1.0, 10.0, 1.0);
        // c = 0.1 is not admissible here; the largest admissible c is p*·λ/δ.
        assert!(exact < two_point_lower_bound(1.0, 10.0, 0.1).unwrap());
        let c = exact * 10.0;
        assert!(exact >= two_point_lower_bound(1.0, 10.0, c).unwrap() - 1e-18);
    }

    #[test]
    fn general_bound_examples() {
        assert_eq!(general_lower_bound(2.0, 2.0, 0.0, 2.0, 0.0).unwrap(), 1.0);
        let v = general_lower_bound(1.0, 1.0, 0.5, 10.0, 1.0).unwrap();
        assert!((v - 0.0125).abs() < 1e-15, "{v}");
        assert!(general_lower_bound(1.0, 1.0, 1.0, 10.0, 1.0).is_err());
        let cs = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0];
        for w in cs.windows(2) {
            assert!(
                general_lower_bound(1.0, 0.8, 0.2, 4.0, w[1]).unwrap()
                    < general_lower_bound(1.0, 0.8, 0.2, 4.0, w[0]).unwrap()
            );
        }
    }

    #[test]
    fn spherical_cap_values() {
        let c = spherical_cap_probability(1e-9, 10).unwrap();
        assert!((c.exact - 0.5).abs() < 1e-8);
        let c = spherical_cap_probability(0.5, 3).unwrap();
        assert!((c.exact - sphere2_cap(0.5)).abs() < 1e-12);
        assert!((c.exact - 0.25).abs() < 1e-12);
        let c = spherical_cap_probability(0.3, 25).unwrap();
        assert!(c.lower.is_some());
        assert!(c.lower.unwrap() <= c.exact && c.exact <= c.upper.unwrap(), "{c:?}");
        assert_eq!(spherical_cap_probability(1.0, 5).unwrap().exact, 0.0);
        assert!(spherical_cap_probability(0.0, 5).is_err());
        assert!(spherical_cap_probability(1.1, 5).is_err());
        assert!(spherical_cap_probability(0.5, 1).is_err());
    }

    #[test]
    fn neuron_count_formula() {
        assert_eq!(expected_separating_neurons(100, 1.0, 10.0, 0.2).unwrap(), 1);
        for n in [1000usize, 3000, 12345] {
            let a = expected_separating_neurons(n, 1.0, 3.0, 0.05).unwrap();
            let b = expected_separating_neurons(2 * n, 1.0, 3.0, 0.05).unwrap();
            assert!(b == 2 * a || b == 2 * a + 1);
        }
    }

    #[test]
    fn curve_is_nonincreasing() {
        let p = SeparationProbe::new(line(&[0.0, 0.2]), line(&[1.0, 1.4]), 3.0, 0.0, 20_000, 9).unwrap();
        let ts: Vec<f64> = (0..30).map(|k| k as f64 * 0.1).collect();
        let curve = separation_probability_curve(&p, &ts).unwrap();
        for w in curve.windows(2) {
            assert!(w[1].estimate <= w[0].estimate);
        }
        let single = estimate_separation_probability(&SeparationProbe { t: 0.5, ..p }).unwrap();
        assert_eq!(single.estimate, curve[5].estimate);
    }

    #[test]
    fn comparison_verdicts_and_calibration() {
        let e = binomial_result(10, 1000, 0);
        let k = BoundConstants { c: 1.0, big_c: 0.0 };
        assert!(BoundComparison::new(e, 0.01, k).consistent);
        assert!(!BoundComparison::new(e, 0.5, k).consistent);
        let c = calibrate_two_point_c(&[(e, 1.0, 2.0)]).unwrap();
        assert!((c - (0.01 + 3.0 * e.std_error) * 2.0).abs() < 1e-15);
        assert!(BoundComparison::new(e, two_point_lower_bound(1.0, 2.0, c).unwrap(), k).consistent);
        let big_c = calibrate_general_big_c(&[(e, 1.0, 1.0, 0.0, 2.0)]).unwrap();
        let lb = general_lower_bound(1.0, 1.0, 0.0, 2.0, big_c).unwrap();
        assert!(lb <= e.estimate + 3.0 * e.std_error + 1e-15);
    }
}
