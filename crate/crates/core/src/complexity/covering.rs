use super::estimate_mean_width;
use crate::error::{Error, Result};
use crate::geometry::{dist, dist_sq_to_set, ensure_dim, min_cross_distance, PointSet};
use crate::rng::derive_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Farthest-point greedy covering; returns indices of the chosen centers.
///
/// The traversal order does not depend on `r`: centers are added in
/// farthest-point order until the covering radius drops to `r`. Counts are
/// therefore nonincreasing in `r`.
pub fn greedy_covering_indices(s: &PointSet, r: f64) -> Result<Vec<usize>> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("covering radius must be positive, got {r}")));
    }
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut centers = vec![0];
    let mut nearest: Vec<f64> = s.iter().map(|p| dist(p, s.point(0))).collect();
    loop {
        let (far, far_d) = nearest
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc });
        if far_d <= r {
            return Ok(centers);
        }
        centers.push(far);
        let c = s.point(far);
        for (i, p) in s.iter().enumerate() {
            nearest[i] = nearest[i].min(dist(p, c));
        }
    }
}

/// Centers (a subset of `s`) such that every point of `s` is within `r` of one.
pub fn greedy_covering(s: &PointSet, r: f64) -> Result<PointSet> {
    Ok(s.select(&greedy_covering_indices(s, r)?))
}

/// A λ-mutual covering of `(X⁺, X⁻)`: class-wise ball coverings whose radii
/// are at most `λ⁻¹ d²(center, opposite centers)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutualCovering {
    pub centers_plus: PointSet,
    pub centers_minus: PointSet,
    pub radii_plus: Vec<f64>,
    pub radii_minus: Vec<f64>,
    pub assignment_plus: Vec<usize>,
    pub assignment_minus: Vec<usize>,
    pub lambda: f64,
}

impl MutualCovering {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Indices of the points of `x` inside ball `j` (the component `X_j`).
    pub fn component_members(x: &PointSet, center: &[f64], radius: f64) -> Vec<usize> {
        x.iter()
            .enumerate()
            .filter(|(_, p)| dist(p, center) <= radius)
            .map(|(i, _)| i)
            .collect()
    }
}

struct ClassCover {
    centers: Vec<usize>,
    radii: Vec<f64>,
    assignment: Vec<usize>,
}

/// Covers `x` greedily: the uncovered point with the largest admissible
/// radius `bound_sq[i] / λ` becomes the next center; its ball takes every
/// uncovered point within that radius and is then shrunk to the farthest
/// member.
fn cover_class(x: &PointSet, bound_sq: &[f64], lambda: f64) -> ClassCover {
    let n = x.len();
    let mut assignment = vec![usize::MAX; n];
    let mut centers = Vec::new();
    let mut radii = Vec::new();
    let mut remaining = n;
    while remaining > 0 {
        let c = (0..n)
            .filter(|&i| assignment[i] == usize::MAX)
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if bound_sq[b] >= bound_sq[i] => Some(b),
                _ => Some(i),
            })
            .expect("an uncovered point exists");
        let cap = bound_sq[c] / lambda;
        let k = centers.len();
        let mut radius = 0.0f64;
        for (i, slot) in assignment.iter_mut().enumerate() {
            if *slot != usize::MAX {
                continue;
            }
            let d = dist(x.point(i), x.point(c));
            if d <= cap {
                *slot = k;
                radius = radius.max(d);
                remaining -= 1;
            }
        }
        centers.push(c);
        radii.push(radius);
    }
    ClassCover { centers, radii, assignment }
}

/// Builds a valid λ-mutual covering with centers drawn from the data.
///
/// `X⁻` is covered first with radii bounded through the distance to all of
/// `X⁺`, which dominates the distance to any subset of centers. `X⁺` is then
/// covered against the final `X⁻` centers.
pub fn build_mutual_covering(x_plus: &PointSet, x_minus: &PointSet, lambda: f64) -> Result<MutualCovering> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    let delta = min_cross_distance(x_plus, x_minus)?;
    if delta == 0.0 {
        return Err(Error::NotSeparated(delta));
    }
    let bound_minus: Vec<f64> = x_minus.iter().map(|p| dist_sq_to_set(p, x_plus)).collect();
    let minus = cover_class(x_minus, &bound_minus, lambda);
    let centers_minus = x_minus.select(&minus.centers);

    let bound_plus: Vec<f64> = x_plus.iter().map(|p| dist_sq_to_set(p, &centers_minus)).collect();
    let plus = cover_class(x_plus, &bound_plus, lambda);

    Ok(MutualCovering {
        centers_plus: x_plus.select(&plus.centers),
        centers_minus,
        radii_plus: plus.radii,
        radii_minus: minus.radii,
        assignment_plus: plus.assignment,
        assignment_minus: minus.assignment,
        lambda,
    })
}

/// Indices violating the covering or the radius condition, per class.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CoveringViolations {
    /// Points of `X⁺` not inside the ball of their assigned component.
    pub uncovered_plus: Vec<usize>,
    pub uncovered_minus: Vec<usize>,
    /// Components whose radius exceeds `λ⁻¹ d²(center, opposite centers)`.
    pub oversized_plus: Vec<usize>,
    pub oversized_minus: Vec<usize>,
}

impl CoveringViolations {
    pub fn is_valid(&self) -> bool {
        self.uncovered_plus.is_empty()
            && self.uncovered_minus.is_empty()
            && self.oversized_plus.is_empty()
            && self.oversized_minus.is_empty()
    }
}

fn uncovered(x: &PointSet, centers: &PointSet, radii: &[f64], assignment: &[usize]) -> Vec<usize> {
    (0..x.len())
        .filter(|&i| match assignment.get(i) {
            Some(&j) if j < centers.len() && j < radii.len() => dist(x.point(i), centers.point(j)) > radii[j],
            _ => true,
        })
        .collect()
}

fn oversized(centers: &PointSet, radii: &[f64], opposite: &PointSet, lambda: f64) -> Vec<usize> {
    (0..centers.len())
        .filter(|&j| match radii.get(j) {
            Some(&r) => !(r >= 0.0) || r > dist_sq_to_set(centers.point(j), opposite) / lambda,
            None => true,
        })
        .collect()
}

/// Checks both covering conditions exactly. Never fails on content; the
/// returned report lists every violating index.
pub fn validate_mutual_covering(
    mc: &MutualCovering,
    x_plus: &PointSet,
    x_minus: &PointSet,
) -> Result<(bool, CoveringViolations)> {
    let d = x_plus.dim();
    ensure_dim(d, x_minus.dim())?;
    ensure_dim(d, mc.centers_plus.dim())?;
    ensure_dim(d, mc.centers_minus.dim())?;
    let report = CoveringViolations {
        uncovered_plus: uncovered(x_plus, &mc.centers_plus, &mc.radii_plus, &mc.assignment_plus),
        uncovered_minus: uncovered(x_minus, &mc.centers_minus, &mc.radii_minus, &mc.assignment_minus),
        oversized_plus: oversized(&mc.centers_plus, &mc.radii_plus, &mc.centers_minus, mc.lambda),
        oversized_minus: oversized(&mc.centers_minus, &mc.radii_minus, &mc.centers_plus, mc.lambda),
    };
    Ok((report.is_valid(), report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutualComplexity {
    pub n_plus: usize,
    pub n_minus: usize,
    pub w_plus: f64,
    pub w_minus: f64,
    /// Smallest `R` with both center sets in `R·B₂ᵈ`.
    pub radius: f64,
    /// Minimal distance between the two center sets.
    pub delta: f64,
    pub lambda: f64,
    pub component_widths_plus: Vec<f64>,
    pub component_widths_minus: Vec<f64>,
}

fn component_widths(
    x: &PointSet,
    centers: &PointSet,
    radii: &[f64],
    class: &'static str,
    n_samples: usize,
    seed: u64,
    tag: u64,
) -> Result<Vec<f64>> {
    (0..centers.len())
        .into_par_iter()
        .map(|j| {
            let c = centers.point(j);
            let members = MutualCovering::component_members(x, c, radii[j]);
            if members.is_empty() {
                return Err(Error::EmptyComponent { class, index: j });
            }
            // w(X_j) = w(X_j - c_j); centering removes the <g, c_j> noise.
            let neg: Vec<f64> = c.iter().map(|v| -v).collect();
            let comp = x.select(&members).translate(&neg)?;
            let est = estimate_mean_width(&comp, n_samples, derive_seed(seed, 2 * j as u64 + tag))?;
            Ok(est.estimate)
        })
        .collect()
}

/// Center counts, local widths `w±` (max component width), enclosing radius
/// and separation of the centers.
pub fn measure_mutual_complexity(
    mc: &MutualCovering,
    x_plus: &PointSet,
    x_minus: &PointSet,
    n_samples: usize,
    seed: u64,
) -> Result<MutualComplexity> {
    let (valid, report) = validate_mutual_covering(mc, x_plus, x_minus)?;
    if !valid {
        return Err(Error::HypothesisViolated(format!("mutual covering is invalid: {report:?}")));
    }
    let wp = component_widths(x_plus, &mc.centers_plus, &mc.radii_plus, "plus", n_samples, seed, 0)?;
    let wm = component_widths(x_minus, &mc.centers_minus, &mc.radii_minus, "minus", n_samples, seed, 1)?;
    let max = |w: &[f64]| w.iter().copied().fold(0.0f64, f64::max);
    Ok(MutualComplexity {
        n_plus: mc.centers_plus.len(),
        n_minus: mc.centers_minus.len(),
        w_plus: max(&wp),
        w_minus: max(&wm),
        radius: mc.centers_plus.max_norm().max(mc.centers_minus.max_norm()),
        delta: min_cross_distance(&mc.centers_plus, &mc.centers_minus)?,
        lambda: mc.lambda,
        component_widths_plus: wp,
        component_widths_minus: wm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{rng_from_seed, unit_ball};
    use proptest::prelude::*;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::from_rows(&xs.iter().map(|x| vec![*x]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn greedy_examples() {
        let s = line(&[0.0, 0.3, 1.1, 2.0]);
        assert_eq!(greedy_covering(&s, 2.0).unwrap().len(), 1);
        assert_eq!(greedy_covering(&line(&[0.0, 1.0, 2.0, 3.0]), 0.4).unwrap().len(), 4);

        let s = line(&[0.0, 0.1, 0.2]);
        let c = greedy_covering(&s, 0.25).unwrap();
        assert!(c.len() <= 2);
        for p in s.iter() {
            assert!(c.iter().any(|q| dist(p, q) <= 0.25));
        }
        assert!(greedy_covering(&s, 0.0).is_err());
    }

    #[test]
    fn singleton_mutual_covering() {
        let xp = PointSet::from_rows(&[[0.0, 0.0]]).unwrap();
        let xm = PointSet::from_rows(&[[2.0, 0.0]]).unwrap();
        let mc = build_mutual_covering(&xp, &xm, 4.0).unwrap();
        assert_eq!((mc.centers_plus.len(), mc.centers_minus.len()), (1, 1));
        assert_eq!((mc.radii_plus[0], mc.radii_minus[0]), (0.0, 0.0));
        assert!(validate_mutual_covering(&mc, &xp, &xm).unwrap().0);
    }

    #[test]
    fn touching_sets_are_rejected() {
        let xp = PointSet::from_rows(&[[0.0, 0.0]]).unwrap();
        assert!(matches!(build_mutual_covering(&xp, &xp, 1.0), Err(Error::NotSeparated(_))));
    }

    #[test]
    fn oversized_radius_is_reported() {
        // d² = 4, λ = 4: admissible radius 1, so 1.5 violates condition (ii).
        let xp = PointSet::from_rows(&[[0.0, 0.0]]).unwrap();
        let xm = PointSet::from_rows(&[[2.0, 0.0]]).unwrap();
        let mut mc = build_mutual_covering(&xp, &xm, 4.0).unwrap();
        mc.radii_plus[0] = 1.5;
        let (ok, report) = validate_mutual_covering(&mc, &xp, &xm).unwrap();
        assert!(!ok);
        assert_eq!(report.oversized_plus, vec![0]);
        assert!(report.uncovered_plus.is_empty());
    }

    #[test]
    fn missing_point_is_reported() {
        let xp = PointSet::from_rows(&[[0.0, 0.0], [0.0, 0.5]]).unwrap();
        let xm = PointSet::from_rows(&[[3.0, 0.0]]).unwrap();
        let mut mc = build_mutual_covering(&xp, &xm, 1.0).unwrap();
        assert!(validate_mutual_covering(&mc, &xp, &xm).unwrap().0);
        // Shrink the only plus ball so that one member falls outside.
        mc.radii_plus[0] = 0.0;
        let (ok, report) = validate_mutual_covering(&mc, &xp, &xm).unwrap();
        assert!(!ok);
        assert_eq!(report.uncovered_plus.len(), 1);
    }

    #[test]
    fn singleton_components_have_zero_width() {
        let xp = PointSet::from_rows(&[[0.0, 0.0], [0.0, 1.0]]).unwrap();
        let xm = PointSet::from_rows(&[[2.0, 0.0], [2.0, 1.0]]).unwrap();
        // λ huge forces radius 0 balls.
        let mc = build_mutual_covering(&xp, &xm, 1e9).unwrap();
        let m = measure_mutual_complexity(&mc, &xp, &xm, 100, 3).unwrap();
        assert_eq!((m.n_plus, m.n_minus), (2, 2));
        assert_eq!((m.w_plus, m.w_minus), (0.0, 0.0));
        assert_eq!(m.delta, 2.0);
    }

    #[test]
    fn empty_component_is_an_error() {
        let xp = PointSet::from_rows(&[[0.0, 0.0]]).unwrap();
        let xm = PointSet::from_rows(&[[2.0, 0.0]]).unwrap();
        let mut mc = build_mutual_covering(&xp, &xm, 4.0).unwrap();
        mc.centers_plus.push(&[0.0, -5.0]).unwrap();
        mc.radii_plus.push(0.0);
        assert!(matches!(
            measure_mutual_complexity(&mc, &xp, &xm, 100, 0),
            Err(Error::EmptyComponent { class: "plus", index: 1 })
        ));
    }

    #[test]
    fn json_round_trip() {
        let xp = PointSet::from_rows(&[[0.0, 0.0], [0.1, 0.0]]).unwrap();
        let xm = PointSet::from_rows(&[[2.0, 0.0]]).unwrap();
        let mc = build_mutual_covering(&xp, &xm, 2.0).unwrap();
        assert_eq!(MutualCovering::from_json(&mc.to_json().unwrap()).unwrap(), mc);
    }

    fn random_cloud(n: usize, d: usize, shift: f64, seed: u64) -> PointSet {
        let mut rng = rng_from_seed(seed);
        let mut s = PointSet::empty(d);
        let mut v = vec![0.0; d];
        for _ in 0..n {
            unit_ball(&mut rng, 0.5, &mut v);
            v[0] += shift;
            s.push(&v).unwrap();
        }
        s
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn greedy_always_covers_and_is_monotone(seed in 0u64..10_000, n in 1usize..60) {
            let s = random_cloud(n, 3, 0.0, seed);
            let mut last = usize::MAX;
            for r in [0.05, 0.1, 0.2, 0.4, 0.8, 1.6] {
                let c = greedy_covering(&s, r).unwrap();
                for p in s.iter() {
                    prop_assert!(c.iter().any(|q| dist(p, q) <= r));
                }
                prop_assert!(c.len() <= last);
                last = c.len();
            }
        }

        #[test]
        fn built_coverings_validate(seed in 0u64..10_000, lambda in 0.05f64..20.0, shift in 0.8f64..3.0) {
            let xp = random_cloud(20, 2, 0.0, seed);
            let xm = random_cloud(25, 2, shift, seed + 1);
            prop_assume!(min_cross_distance(&xp, &xm).unwrap() > 0.0);
            let mc = build_mutual_covering(&xp, &xm, lambda).unwrap();
            let (ok, report) = validate_mutual_covering(&mc, &xp, &xm).unwrap();
            prop_assert!(ok, "{:?}", report);
        }
    }
}
