//! Complexity measures: Gaussian mean width (plain and of the normalized
//! difference cone), greedy and mutual coverings, and the closed-form
//! width/margin bounds that consume them.
//!
//! The mean width of an infinite set is approximated by the width of a
//! finite sample. Since the supremum runs over a subset, the sample width is
//! a lower bound in expectation.

mod bounds;
mod covering;

pub use bounds::{
    bias_hypothesis_holds, compute_theta, default_lambda_hat, ln_predicted_margin, predicted_margin,
    theta_exponent, union_width_bound, AbsoluteConstants, TheoreticalBounds, MAX_EXPONENT,
};
pub use covering::{
    build_mutual_covering, greedy_covering, greedy_covering_indices, measure_mutual_complexity,
    validate_mutual_covering, CoveringViolations, MutualComplexity, MutualCovering,
};

use crate::error::{Error, Result};
use crate::geometry::{dist, dot, PointSet};
use crate::monte_carlo::{estimate, EstimatorResult};
use crate::rng::fill_gaussian;

/// Monte Carlo estimate of `E sup_{x in s} <g, x>` with `g ~ N(0, I_d)`.
pub fn estimate_mean_width(s: &PointSet, n_samples: usize, seed: u64) -> Result<EstimatorResult> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let d = s.dim();
    estimate(n_samples, seed, |rng| {
        let mut g = vec![0.0; d];
        fill_gaussian(rng, &mut g);
        s.iter().map(|x| dot(&g, x)).fold(f64::NEG_INFINITY, f64::max)
    })
}

/// Unit vectors `(x - x') / |x - x'|` over unordered pairs of distinct points.
/// The opposite orientation is implicit: callers take `|<g, u>|`.
pub fn normalized_differences(s: &PointSet) -> Result<PointSet> {
    let n = s.len();
    if n < 2 {
        return Err(Error::DegenerateCone);
    }
    let mut out = PointSet::empty(s.dim());
    let mut buf = vec![0.0; s.dim()];
    for i in 0..n {
        for j in i + 1..n {
            let (p, q) = (s.point(i), s.point(j));
            let len = dist(p, q);
            if len == 0.0 {
                continue;
            }
            for ((b, x), y) in buf.iter_mut().zip(p).zip(q) {
                *b = (x - y) / len;
            }
            out.push(&buf)?;
        }
    }
    if out.is_empty() {
        return Err(Error::DegenerateCone);
    }
    Ok(out)
}

/// Monte Carlo estimate of `w(cone(s - s) ∩ S^{d-1})`, with the supremum over
/// the normalized differences of all point pairs of `s`.
pub fn estimate_cone_width(s: &PointSet, n_samples: usize, seed: u64) -> Result<EstimatorResult> {
    let dirs = normalized_differences(s)?;
    let d = s.dim();
    estimate(n_samples, seed, |rng| {
        let mut g = vec![0.0; d];
        fill_gaussian(rng, &mut g);
        dirs.iter().map(|u| dot(&g, u).abs()).fold(0.0, f64::max)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{rng_from_seed, unit_sphere};
    use sepcap_oracles::{chi_mean, half_normal_mean};

    fn sphere_samples(n: usize, d: usize, seed: u64) -> PointSet {
        let mut rng = rng_from_seed(seed);
        let mut s = PointSet::empty(d);
        let mut v = vec![0.0; d];
        for _ in 0..n {
            unit_sphere(&mut rng, &mut v);
            s.push(&v).unwrap();
        }
        s
    }

    #[test]
    fn width_of_origin_is_zero() {
        let s = PointSet::from_rows(&[vec![0.0; 4]]).unwrap();
        let r = estimate_mean_width(&s, 1000, 1).unwrap();
        assert_eq!((r.estimate, r.std_error), (0.0, 0.0));
    }

    #[test]
    fn width_of_symmetric_pair_is_half_normal_mean() {
        let s = PointSet::from_rows(&[[-1.0], [1.0]]).unwrap();
        let r = estimate_mean_width(&s, 100_000, 2).unwrap();
        assert!(r.within(half_normal_mean(), 3.0), "{r:?}");
    }

    #[test]
    fn width_of_circle_is_chi_mean() {
        let s = sphere_samples(500, 2, 5);
        let r = estimate_mean_width(&s, 100_000, 3).unwrap();
        assert!(r.within(chi_mean(2), 3.0), "{r:?} vs {}", chi_mean(2));
    }

    #[test]
    fn width_needs_two_samples() {
        let s = PointSet::from_rows(&[[1.0]]).unwrap();
        assert!(matches!(estimate_mean_width(&s, 1, 0), Err(Error::Estimator(_))));
        assert!(matches!(estimate_mean_width(&PointSet::empty(1), 10, 0), Err(Error::EmptySet)));
    }

    #[test]
    fn cone_width_examples() {
        let s = PointSet::from_rows(&[[0.0], [1.0]]).unwrap();
        let r = estimate_cone_width(&s, 100_000, 4).unwrap();
        assert!(r.within(half_normal_mean(), 3.0), "{r:?}");

        let s = PointSet::from_rows(&[[0.3, -1.0, 2.0], [1.0, 0.5, -0.7]]).unwrap();
        let r = estimate_cone_width(&s, 100_000, 5).unwrap();
        assert!(r.within(half_normal_mean(), 3.0), "{r:?}");

        let s = sphere_samples(100, 3, 9);
        let r = estimate_cone_width(&s, 20_000, 6).unwrap();
        assert!(r.estimate <= chi_mean(3) + 3.0 * r.std_error);
    }

    #[test]
    fn cone_width_rejects_coincident_points() {
        let s = PointSet::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(matches!(estimate_cone_width(&s, 100, 0), Err(Error::DegenerateCone)));
        let s = PointSet::from_rows(&[[1.0, 1.0]]).unwrap();
        assert!(matches!(estimate_cone_width(&s, 100, 0), Err(Error::DegenerateCone)));
    }

    #[test]
    fn width_is_translation_invariant() {
        let s = sphere_samples(60, 3, 21);
        for (k, v) in [[0.5, -2.0, 1.0], [3.0, 0.0, -1.5]].iter().enumerate() {
            let a = estimate_mean_width(&s, 40_000, 100 + k as u64).unwrap();
            let b = estimate_mean_width(&s.translate(v).unwrap(), 40_000, 200 + k as u64).unwrap();
            assert!((a.estimate - b.estimate).abs() <= 4.0 * a.joint_std_error(&b), "{a:?} {b:?}");
        }
    }

    #[test]
    fn width_is_convex_hull_invariant() {
        let s = sphere_samples(25, 4, 33);
        let mut hull = s.clone();
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                let mid: Vec<f64> = s.point(i).iter().zip(s.point(j)).map(|(a, b)| 0.5 * (a + b)).collect();
                hull.push(&mid).unwrap();
            }
        }
        let a = estimate_mean_width(&s, 40_000, 1).unwrap();
        let b = estimate_mean_width(&hull, 40_000, 2).unwrap();
        assert!((a.estimate - b.estimate).abs() <= 4.0 * a.joint_std_error(&b), "{a:?} {b:?}");
    }

    #[test]
    fn estimates_reproduce_bit_for_bit() {
        let s = sphere_samples(30, 3, 1);
        let a = estimate_mean_width(&s, 5000, 77).unwrap();
        let b = estimate_mean_width(&s, 5000, 77).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.seed, 77);
    }
}
