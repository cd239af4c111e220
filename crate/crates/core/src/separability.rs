//! Max-margin hyperplanes, t-separation and (ε, γ)-linear separability of
//! finite sets.

use crate::error::{Error, Result};
use crate::geometry::{dot, ensure_dim, min_cross_distance, norm, PointSet, Vector};
use crate::hull::{min_norm_difference, min_norm_point, DEFAULT_GAP_TOLERANCE, DEFAULT_MAX_ITERATIONS};
use serde::{Deserialize, Serialize};

/// Hull distances below this count as touching.
pub const SEPARATION_THRESHOLD: f64 = 1e-7;
pub const DEFAULT_NARROWNESS_ITERATIONS: usize = 20_000;

/// `H_τ[v] = {z : <v, z> + τ = 0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub direction: Vector,
    pub offset: f64,
}

impl Hyperplane {
    pub fn new(direction: Vec<f64>, offset: f64) -> Result<Self> {
        let direction = Vector::new(direction)?;
        if direction.norm() == 0.0 {
            return Err(Error::Domain("hyperplane direction must be nonzero".into()));
        }
        if !offset.is_finite() {
            return Err(Error::NonFinite(direction.dim()));
        }
        Ok(Hyperplane { direction, offset })
    }

    pub fn dim(&self) -> usize {
        self.direction.dim()
    }

    /// `<v, x> + τ`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(self.direction.as_slice(), x) + self.offset
    }

    /// Same hyperplane with the direction scaled by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Hyperplane::new(self.direction.as_slice().iter().map(|v| v * s).collect(), self.offset * s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub separable: bool,
    /// `(min_b <u,b> − max_a <u,a>) / 2` for the unit direction `u`, which
    /// equals half the hull distance up to the solver gap.
    pub margin: f64,
    /// Hull distance `|b* − a*|` of the final iterate.
    pub distance: f64,
    /// Unit direction from `a` towards `b`, offset at the midpoint.
    pub hyperplane: Hyperplane,
    /// `(a*, b*)`: the closest pair of convex combinations found.
    pub witness_pair: (Vector, Vector),
    pub converged: bool,
    pub iterations: usize,
}

impl SeparationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Half the distance between `conv(a)` and `conv(b)` and the corresponding
/// midpoint hyperplane, `a` on the negative side.
pub fn max_margin_separator(a: &PointSet, b: &PointSet) -> Result<SeparationReport> {
    max_margin_separator_with(a, b, DEFAULT_MAX_ITERATIONS, DEFAULT_GAP_TOLERANCE)
}

pub fn max_margin_separator_with(
    a: &PointSet,
    b: &PointSet,
    max_iterations: usize,
    gap_tol: f64,
) -> Result<SeparationReport> {
    let r = min_norm_difference(a, b, max_iterations, gap_tol, SEPARATION_THRESHOLD)?;
    let d = a.dim();
    let (mut wa, mut wb) = (vec![0.0; d], vec![0.0; d]);
    for &((i, j), l) in &r.support {
        for k in 0..d {
            wa[k] += l * a.point(i)[k];
            wb[k] += l * b.point(j)[k];
        }
    }
    let distance = r.norm();
    let witness_pair = (Vector::new(wa)?, Vector::new(wb)?);

    let touching = || -> Result<SeparationReport> {
        let mut e0 = vec![0.0; d];
        e0[0] = 1.0;
        Ok(SeparationReport {
            separable: false,
            margin: 0.0,
            distance,
            hyperplane: Hyperplane::new(e0, 0.0)?,
            witness_pair: witness_pair.clone(),
            converged: r.converged,
            iterations: r.iterations,
        })
    };
    if distance < SEPARATION_THRESHOLD {
        return touching();
    }
    let u: Vec<f64> = r.point.iter().map(|v| v / distance).collect();
    let hi = a.iter().map(|p| dot(&u, p)).fold(f64::NEG_INFINITY, f64::max);
    let lo = b.iter().map(|p| dot(&u, p)).fold(f64::INFINITY, f64::min);
    let margin = (lo - hi) / 2.0;
    if !(margin > 0.0) {
        return touching();
    }
    Ok(SeparationReport {
        separable: true,
        margin,
        distance,
        hyperplane: Hyperplane::new(u, -(lo + hi) / 2.0)?,
        witness_pair,
        converged: r.converged,
        iterations: r.iterations,
    })
}

/// `<v,x> + τ ≤ −t` on all of `a` and `<v,x> + τ > t` on all of `b`.
pub fn check_t_separation(h: &Hyperplane, a: &PointSet, b: &PointSet, t: f64) -> Result<bool> {
    ensure_dim(h.dim(), a.dim())?;
    ensure_dim(h.dim(), b.dim())?;
    Ok(a.iter().all(|x| h.eval(x) <= -t) && b.iter().all(|x| h.eval(x) > t))
}

/// `X⁻` and `X⁺` are (ε, γ)-linearly separable along `direction`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NarrownessCertificate {
    pub epsilon: f64,
    pub gamma: f64,
    pub direction: Vector,
    /// `min_pairs <u, (x⁺ − x⁻)/|x⁺ − x⁻|> = 1 − ε`.
    pub value: f64,
    /// No unit direction achieves more than this.
    pub upper_bound: f64,
    pub optimal: bool,
}

fn normalized_cross_differences(minus: &PointSet, plus: &PointSet) -> Result<PointSet> {
    let mut out = PointSet::empty(minus.dim());
    let mut buf = vec![0.0; minus.dim()];
    for p in plus.iter() {
        for q in minus.iter() {
            for ((o, x), y) in buf.iter_mut().zip(p).zip(q) {
                *o = x - y;
            }
            let n = norm(&buf);
            buf.iter_mut().for_each(|v| *v /= n);
            out.push(&buf)?;
        }
    }
    Ok(out)
}

fn min_value(dirs: &PointSet, u: &[f64]) -> f64 {
    dirs.iter().map(|q| dot(u, q)).fold(f64::INFINITY, f64::min)
}

/// Maximizes `min_pairs <u, (x⁺ − x⁻)/|x⁺ − x⁻|>` over unit vectors `u` by
/// projected supergradient ascent with averaging (step `1/√k`). The maximum
/// equals the norm of the minimum-norm point of the normalized differences,
/// which is used both as an upper bound and as a second candidate direction.
pub fn min_narrowness(
    minus: &PointSet,
    plus: &PointSet,
    iterations: usize,
    tolerance: f64,
) -> Result<NarrownessCertificate> {
    let gamma = min_cross_distance(minus, plus)?;
    if gamma == 0.0 {
        return Err(Error::NotSeparated(gamma));
    }
    let dirs = normalized_cross_differences(minus, plus)?;
    let d = dirs.dim();

    let mut u = vec![0.0; d];
    let mut avg = vec![0.0; d];
    for k in 1..=iterations {
        let (i, _) = dirs
            .iter()
            .enumerate()
            .map(|(i, q)| (i, dot(&u, q)))
            .fold((0, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc });
        let step = 1.0 / (k as f64).sqrt();
        for (ui, gi) in u.iter_mut().zip(dirs.point(i)) {
            *ui += step * gi;
        }
        let n = norm(&u);
        if n > 1.0 {
            u.iter_mut().for_each(|v| *v /= n);
        }
        let w = 1.0 / k as f64;
        for (a, ui) in avg.iter_mut().zip(&u) {
            *a += w * (ui - *a);
        }
    }
    let unit = |v: &[f64]| {
        let n = norm(v);
        (n > 0.0).then(|| v.iter().map(|x| x / n).collect::<Vec<f64>>())
    };

    let exact = min_norm_point(&dirs, DEFAULT_MAX_ITERATIONS, 1e-14, 0.0);
    let upper_bound = exact.norm();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for cand in [unit(&avg), unit(&exact.point)].into_iter().flatten() {
        let v = min_value(&dirs, &cand);
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, cand));
        }
    }
    let (value, direction) = best.ok_or_else(|| Error::HypothesisViolated("sets are not linearly separable".into()))?;
    if !(value > 0.0) {
        return Err(Error::HypothesisViolated(format!(
            "sets are not linearly separable (best narrowness value {value})"
        )));
    }
    Ok(NarrownessCertificate {
        epsilon: 1.0 - value,
        gamma,
        direction: Vector::new(direction)?,
        value,
        upper_bound,
        optimal: value >= upper_bound - tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist;
    use sepcap_oracles::{planar_margin_by_direction_grid, planar_narrowness_by_grid};

    fn ps<const D: usize>(rows: &[[f64; D]]) -> PointSet {
        PointSet::from_rows(rows).unwrap()
    }

    #[test]
    fn margin_examples() {
        let r = max_margin_separator(&ps(&[[-1.0, 0.0]]), &ps(&[[1.0, 0.0]])).unwrap();
        assert!(r.separable);
        assert!((r.margin - 1.0).abs() < 1e-12);
        assert!(dist(r.hyperplane.direction.as_slice(), &[1.0, 0.0]) < 1e-12);
        assert!(r.hyperplane.offset.abs() < 1e-12);

        let r = max_margin_separator(&ps(&[[0.0, 0.0]]), &ps(&[[3.0, 4.0]])).unwrap();
        assert!((r.margin - 2.5).abs() < 1e-12);

        let a = ps(&[[0.0, 0.0], [1.0, 1.0]]);
        let b = ps(&[[1.0, 0.0], [0.0, 1.0]]);
        let r = max_margin_separator(&a, &b).unwrap();
        assert!(!r.separable);
        assert_eq!(r.margin, 0.0);
        assert_eq!(planar_margin_by_direction_grid(&Vec::from(a), &Vec::from(b), 10_000), 0.0);
    }

    #[test]
    fn margin_matches_planar_oracle() {
        let a = ps(&[[0.0, 0.0], [1.0, 0.3], [0.2, 1.0], [-0.5, 0.4]]);
        let b = ps(&[[2.0, 1.5], [1.8, 0.7], [3.0, -0.2]]);
        let r = max_margin_separator(&a, &b).unwrap();
        let oracle = planar_margin_by_direction_grid(&Vec::from(a.clone()), &Vec::from(b.clone()), 20_000);
        assert!((r.margin - oracle).abs() < 1e-8, "{} vs {oracle}", r.margin);
        assert!(check_t_separation(&r.hyperplane, &a, &b, r.margin * (1.0 - 1e-9)).unwrap());
        let (wa, wb) = &r.witness_pair;
        assert!((dist(wa.as_slice(), wb.as_slice()) - 2.0 * r.margin).abs() < 1e-8);
    }

    #[test]
    fn t_separation_examples() {
        let h = Hyperplane::new(vec![1.0], 0.0).unwrap();
        let (a, b) = (ps(&[[-2.0]]), ps(&[[2.0]]));
        assert!(check_t_separation(&h, &a, &b, 1.0).unwrap());
        assert!(!check_t_separation(&h, &a, &b, 2.0).unwrap());
        let h10 = h.scaled(10.0).unwrap();
        assert!(check_t_separation(&h10, &a, &b, 10.0).unwrap());
        let r = max_margin_separator(&a, &b).unwrap();
        assert!(r.margin >= 10.0 / 10.0 - 1e-12);
        assert!(check_t_separation(&h, &a, &ps(&[[2.0, 0.0]]), 1.0).is_err());
        assert!(Hyperplane::new(vec![0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn narrowness_examples() {
        let c = min_narrowness(&ps(&[[0.0, 0.0]]), &ps(&[[1.0, 0.0]]), 2000, 1e-9).unwrap();
        assert!(c.epsilon.abs() < 1e-12);
        assert!(dist(c.direction.as_slice(), &[1.0, 0.0]) < 1e-9);

        let minus = ps(&[[0.0, 0.0]]);
        let plus = ps(&[[1.0, 0.0], [0.0, 1.0]]);
        let c = min_narrowness(&minus, &plus, DEFAULT_NARROWNESS_ITERATIONS, 1e-9).unwrap();
        let (grid, _) = planar_narrowness_by_grid(&Vec::from(minus), &Vec::from(plus), 10_000);
        assert!((c.epsilon - (1.0 - 0.5f64.sqrt())).abs() < 1e-9);
        assert!(c.value >= grid - 1e-12);
        assert!(c.optimal);
        let s = 0.5f64.sqrt();
        assert!(dist(c.direction.as_slice(), &[s, s]) < 1e-6);

        let c = min_narrowness(&ps(&[[-1.0]]), &ps(&[[1.0]]), 100, 1e-9).unwrap();
        assert_eq!((c.epsilon, c.gamma), (0.0, 2.0));
    }

    #[test]
    fn narrowness_rejects_inseparable_sets() {
        let a = ps(&[[0.0, 0.0], [1.0, 1.0]]);
        let b = ps(&[[1.0, 0.0], [0.0, 1.0]]);
        assert!(min_narrowness(&a, &b, 500, 1e-9).is_err());
        assert!(matches!(min_narrowness(&a, &a, 10, 1e-9), Err(Error::NotSeparated(_))));
    }

    #[test]
    fn report_serializes() {
        let r = max_margin_separator(&ps(&[[-1.0, 0.0]]), &ps(&[[1.0, 0.0]])).unwrap();
        let back: SeparationReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
