//! Seeded generators for labeled point configurations.

use crate::error::{Error, Result};
use crate::geometry::{dist_sq, norm, set_stats, PointSet, SeparationStats};
use crate::rng::{fill_gaussian, rng_from_seed, unit_ball, unit_sphere, SeededRng};
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Total number of rejected samples a generator may spend.
pub const REJECTION_BUDGET: usize = 100_000;

fn default_radius() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    #[serde(flatten)]
    pub kind: ScenarioKind,
    pub dim: usize,
    pub delta: f64,
    /// Both classes lie in `radius·B₂ᵈ`.
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioKind {
    FiniteLabeled {
        n_minus: usize,
        n_plus: usize,
    },
    BallUnion {
        balls_minus: usize,
        balls_plus: usize,
        ball_radius: f64,
        samples_per_ball: usize,
        #[serde(default)]
        centers_minus: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        centers_plus: Option<Vec<Vec<f64>>>,
    },
    SphereVsBall {
        inner_radius: f64,
        n_sphere: usize,
        n_ball: usize,
    },
    BulkWithOutliers {
        bulk_size: usize,
        bulk_radius: f64,
        bulk_separation: f64,
        outlier_pairs: usize,
    },
    SubspaceUnion {
        subspaces_minus: usize,
        subspaces_plus: usize,
        subspace_dim: usize,
        samples_per_subspace: usize,
    },
    ConvexHullCloud {
        vertices: usize,
        samples: usize,
    },
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::FiniteLabeled { .. } => "finite_labeled",
            ScenarioKind::BallUnion { .. } => "ball_union",
            ScenarioKind::SphereVsBall { .. } => "sphere_vs_ball",
            ScenarioKind::BulkWithOutliers { .. } => "bulk_with_outliers",
            ScenarioKind::SubspaceUnion { .. } => "subspace_union",
            ScenarioKind::ConvexHullCloud { .. } => "convex_hull_cloud",
        }
    }
}

impl ScenarioConfig {
    pub fn new(kind: ScenarioKind, dim: usize, delta: f64, seed: u64) -> Self {
        ScenarioConfig { kind, dim, delta, radius: 1.0, seed }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ScenarioConfig { seed, ..self.clone() }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::ZeroDimension(0));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::Domain(format!("delta must be positive, got {}", self.delta)));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::Domain(format!("radius must be positive, got {}", self.radius)));
        }
        Ok(())
    }
}

/// Generated classes with their verified statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub x_minus: PointSet,
    pub x_plus: PointSet,
    pub stats: SeparationStats,
}

/// `r ≤ 1/√d`: the small ball is a low-complexity class next to the sphere.
pub fn thin_sphere_regime(dim: usize, inner_radius: f64) -> bool {
    inner_radius <= 1.0 / (dim as f64).sqrt()
}

pub fn generate(cfg: &ScenarioConfig) -> Result<Scenario> {
    let (x_minus, x_plus) = match &cfg.kind {
        ScenarioKind::FiniteLabeled { .. } => gen_finite_labeled(cfg)?,
        ScenarioKind::BallUnion { .. } => gen_ball_union(cfg)?,
        ScenarioKind::SphereVsBall { .. } => gen_sphere_vs_ball(cfg)?,
        ScenarioKind::BulkWithOutliers { .. } => gen_bulk_with_outliers(cfg)?,
        ScenarioKind::SubspaceUnion { .. } => gen_subspace_union(cfg)?,
        ScenarioKind::ConvexHullCloud { .. } => gen_convex_hull_cloud(cfg)?,
    };
    let stats = set_stats(&x_minus, &x_plus)?;
    Ok(Scenario { x_minus, x_plus, stats })
}

fn wrong_kind(cfg: &ScenarioConfig, expected: &str) -> Error {
    Error::Domain(format!("expected a {expected} scenario, got {}", cfg.kind.name()))
}

fn verify(cfg: &ScenarioConfig, x_minus: PointSet, x_plus: PointSet) -> Result<(PointSet, PointSet)> {
    let stats = set_stats(&x_minus, &x_plus)?;
    if stats.delta < cfg.delta {
        return Err(Error::Infeasible(format!(
            "generated sets are only {}-separated, {} requested",
            stats.delta, cfg.delta
        )));
    }
    let bound = cfg.radius * (1.0 + 1e-12);
    if stats.radius_bound > bound {
        return Err(Error::Infeasible(format!("a point of norm {} leaves the ball of radius {}", stats.radius_bound, cfg.radius)));
    }
    Ok((x_minus, x_plus))
}

struct Budget(usize);

impl Budget {
    fn spend(&mut self) -> Result<()> {
        self.0 += 1;
        if self.0 > REJECTION_BUDGET {
            Err(Error::Infeasible(format!("rejection budget of {REJECTION_BUDGET} samples exhausted")))
        } else {
            Ok(())
        }
    }
}

fn far_from(p: &[f64], s: &PointSet, delta_sq: f64) -> bool {
    s.iter().all(|q| dist_sq(p, q) >= delta_sq)
}

fn sample_ball(rng: &mut SeededRng, dim: usize, radius: f64) -> Vec<f64> {
    let mut p = vec![0.0; dim];
    unit_ball(rng, radius, &mut p);
    p
}

/// `N⁻` then `N⁺` points uniform in `R·B₂ᵈ`; plus points closer than `δ` to
/// the minus class are redrawn.
pub fn gen_finite_labeled(cfg: &ScenarioConfig) -> Result<(PointSet, PointSet)> {
    cfg.validate()?;
    let ScenarioKind::FiniteLabeled { n_minus, n_plus } = cfg.kind else {
        return Err(wrong_kind(cfg, "finite_labeled"));
    };
    if cfg.delta > 2.0 * cfg.radius {
        return Err(Error::Infeasible(format!("δ = {} exceeds the diameter {}", cfg.delta, 2.0 * cfg.radius)));
    }
    let mut rng = rng_from_seed(cfg.seed);
    let mut xm = PointSet::empty(cfg.dim);
    for _ in 0..n_minus {
        xm.push(&sample_ball(&mut rng, cfg.dim, cfg.radius))?;
    }
    let mut xp = PointSet::empty(cfg.dim);
    let mut budget = Budget(0);
    let d2 = cfg.delta * cfg.delta;
    while xp.len() < n_plus {
        let p = sample_ball(&mut rng, cfg.dim, cfg.radius);
        if far_from(&p, &xm, d2) {
            xp.push(&p)?;
        } else {
            budget.spend()?;
        }
    }
    verify(cfg, xm, xp)
}

fn fill_balls(rng: &mut SeededRng, centers: &PointSet, r: f64, m: usize) -> Result<PointSet> {
    let mut out = PointSet::empty(centers.dim());
    let mut offset = vec![0.0; centers.dim()];
    for c in centers.iter() {
        for _ in 0..m {
            unit_ball(rng, r, &mut offset);
            let p: Vec<f64> = c.iter().zip(&offset).map(|(a, b)| a + b).collect();
            out.push(&p)?;
        }
    }
    Ok(out)
}

/// `m` samples in each ball of radius `r`; centers of different classes are
/// `δ + 2r` apart, balls of one class may overlap.
pub fn gen_ball_union(cfg: &ScenarioConfig) -> Result<(PointSet, PointSet)> {
    cfg.validate()?;
    let ScenarioKind::BallUnion { balls_minus, balls_plus, ball_radius: r, samples_per_ball, centers_minus, centers_plus } =
        &cfg.kind
    else {
        return Err(wrong_kind(cfg, "ball_union"));
    };
    let r = *r;
    if !(r >= 0.0 && r <= cfg.radius) {
        return Err(Error::Domain(format!("ball radius must lie in [0, {}], got {r}", cfg.radius)));
    }
    let sep = cfg.delta + 2.0 * r;
    let mut rng = rng_from_seed(cfg.seed);
    let mut budget = Budget(0);
    let cm = match centers_minus {
        Some(c) => PointSet::from_rows(c)?,
        None => {
            let mut s = PointSet::empty(cfg.dim);
            for _ in 0..*balls_minus {
                s.push(&sample_ball(&mut rng, cfg.dim, cfg.radius - r))?;
            }
            s
        }
    };
    let cp = match centers_plus {
        Some(c) => PointSet::from_rows(c)?,
        None => {
            let mut s = PointSet::empty(cfg.dim);
            while s.len() < *balls_plus {
                let p = sample_ball(&mut rng, cfg.dim, cfg.radius - r);
                if far_from(&p, &cm, sep * sep) {
                    s.push(&p)?;
                } else {
                    budget.spend()?;
                }
            }
            s
        }
    };
    if cm.dim() != cfg.dim || cp.dim() != cfg.dim {
        return Err(Error::DimensionMismatch { expected: cfg.dim, found: if cm.dim() != cfg.dim { cm.dim() } else { cp.dim() } });
    }
    if cm.iter().chain(cp.iter()).any(|c| norm(c) + r > cfg.radius * (1.0 + 1e-12)) {
        return Err(Error::Infeasible("a supplied ball leaves the enclosing ball".into()));
    }
    if cp.iter().any(|c| !far_from(c, &cm, sep * sep)) {
        return Err(Error::Infeasible(format!("supplied centers are closer than δ + 2r = {sep}")));
    }
    let xm = fill_balls(&mut rng, &cm, r, *samples_per_ball)?;
    let xp = fill_balls(&mut rng, &cp, r, *samples_per_ball)?;
    verify(cfg, xm, xp)
}

/// `X⁻` on the unit sphere, `X⁺` in `r·B₂ᵈ`.
pub fn gen_sphere_vs_ball(cfg: &ScenarioConfig) -> Result<(PointSet, PointSet)> {
    cfg.validate()?;
    let ScenarioKind::SphereVsBall { inner_radius, n_sphere, n_ball } = cfg.kind else {
        return Err(wrong_kind(cfg, "sphere_vs_ball"));
    };
    if !(inner_radius >= 0.0) || 1.0 - inner_radius < cfg.delta {
        return Err(Error::Infeasible(format!("gap 1 − r = {} is below δ = {}", 1.0 - inner_radius, cfg.delta)));
    }
    let mut rng = rng_from_seed(cfg.seed);
    let mut xm = PointSet::empty(cfg.dim);
    let mut p = vec![0.0; cfg.dim];
    for _ in 0..n_sphere {
        unit_sphere(&mut rng, &mut p);
        xm.push(&p)?;
    }
    let mut xp = PointSet::empty(cfg.dim);
    for _ in 0..n_ball {
        xp.push(&sample_ball(&mut rng, cfg.dim, inner_radius))?;
    }
    verify(cfg, xm, xp)
}

/// Two bulks centered at `∓(s/2)e₀` plus outlier pairs `p ∓ (δ/2)e₀` with
/// `p ⟂ e₀`.
pub fn gen_bulk_with_outliers(cfg: &ScenarioConfig) -> Result<(PointSet, PointSet)> {
    cfg.validate()?;
    let ScenarioKind::BulkWithOutliers { bulk_size, bulk_radius, bulk_separation, outlier_pairs } = cfg.kind else {
        return Err(wrong_kind(cfg, "bulk_with_outliers"));
    };
    if !(bulk_radius >= 0.0) || bulk_separation - 2.0 * bulk_radius < cfg.delta {
        return Err(Error::Infeasible("the bulks are closer than δ".into()));
    }
    if bulk_separation / 2.0 + bulk_radius > cfg.radius {
        return Err(Error::Infeasible("the bulks leave the enclosing ball".into()));
    }
    if outlier_pairs > 0 && cfg.dim < 2 {
        return Err(Error::Infeasible("outlier pairs need dim ≥ 2".into()));
    }
    let mut rng = rng_from_seed(cfg.seed);
    let bulk = |sign: f64, rng: &mut SeededRng| -> Result<PointSet> {
        let mut s = PointSet::empty(cfg.dim);
        for _ in 0..bulk_size {
            let mut p = sample_ball(rng, cfg.dim, bulk_radius);
            p[0] += sign * bulk_separation / 2.0;
            s.push(&p)?;
        }
        Ok(s)
    };
    let mut xm = bulk(-1.0, &mut rng)?;
    let mut xp = bulk(1.0, &mut rng)?;
    let half = cfg.delta / 2.0;
    let reach = (cfg.radius * cfg.radius - half * half).max(0.0).sqrt() / 2.0;
    let mut dir = vec![0.0; cfg.dim - 1];
    for _ in 0..outlier_pairs {
        unit_sphere(&mut rng, &mut dir);
        let t = reach * rng.random::<f64>();
        let mut p = vec![0.0; cfg.dim];
        for (pi, di) in p[1..].iter_mut().zip(&dir) {
            *pi = t * di;
        }
        p[0] = -half;
        xm.push(&p)?;
        p[0] = half;
        xp.push(&p)?;
    }
    verify(cfg, xm, xp)
}

/// Orthonormal basis of a uniformly random `k`-dimensional subspace.
fn random_basis(rng: &mut SeededRng, dim: usize, k: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    while basis.len() < k {
        let mut v = vec![0.0; dim];
        fill_gaussian(rng, &mut v);
        for b in &basis {
            let c: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let n = norm(&v);
        if n > 1e-8 {
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
    }
    basis
}

fn subspace_point(rng: &mut SeededRng, basis: &[Vec<f64>], dim: usize, radius: f64) -> Vec<f64> {
    let coeffs = sample_ball(rng, basis.len(), radius);
    let mut p = vec![0.0; dim];
    for (c, b) in coeffs.iter().zip(basis) {
        p.iter_mut().zip(b).for_each(|(x, y)| *x += c * y);
    }
    p
}

/// Samples of `V ∩ R·B₂ᵈ` for random subspaces `V`; plus samples within `δ`
/// of the minus class are redrawn.
pub fn gen_subspace_union(cfg: &ScenarioConfig) -> Result<(PointSet, PointSet)> {
    cfg.validate()?;
    let ScenarioKind::SubspaceUnion { subspaces_minus, subspaces_plus, subspace_dim, samples_per_subspace } = cfg.kind
    else {
        return Err(wrong_kind(cfg, "subspace_union"));
    };
    if subspace_dim == 0 || subspace_dim > cfg.dim {
        return Err(Error::Domain(format!("subspace dimension must lie in [1, {}], got {subspace_dim}", cfg.dim)));
    }
    let mut rng = rng_from_seed(cfg.seed);
    let mut xm = PointSet::empty(cfg.dim);
    for _ in 0..subspaces_minus {
        let basis = random_basis(&mut rng, cfg.dim, subspace_dim);
        for _ in 0..samples_per_subspace {
            xm.push(&subspace_point(&mut rng, &basis, cfg.dim, cfg.radius))?;
        }
    }
    let mut xp = PointSet::empty(cfg.dim);
    let mut budget = Budget(0);
    let d2 = cfg.delta * cfg.delta;
    for _ in 0..subspaces_plus {
        let basis = random_basis(&mut rng, cfg.dim, subspace_dim);
        let mut taken = 0;
        while taken < samples_per_subspace {
            let p = subspace_point(&mut rng, &basis, cfg.dim, cfg.radius);
            if far_from(&p, &xm, d2) {
                xp.push(&p)?;
                taken += 1;
            } else {
                budget.spend()?;
            }
        }
    }
    verify(cfg, xm, xp)
}

/// Hull of `N` random vertices per class, the minus vertices in
/// `{x₀ ≤ −δ/2}` and the plus vertices in `{x₀ ≥ δ/2}`; each class is its
/// vertices followed by uniform (Dirichlet) convex combinations.
pub fn gen_convex_hull_cloud(cfg: &ScenarioConfig) -> Result<(PointSet, PointSet)> {
    cfg.validate()?;
    let ScenarioKind::ConvexHullCloud { vertices, samples } = cfg.kind else {
        return Err(wrong_kind(cfg, "convex_hull_cloud"));
    };
    if vertices == 0 {
        return Err(Error::Domain("at least one vertex is needed".into()));
    }
    let half = cfg.delta / 2.0;
    if half >= cfg.radius {
        return Err(Error::Infeasible(format!("δ = {} does not fit in the enclosing ball", cfg.delta)));
    }
    let mut rng = rng_from_seed(cfg.seed);
    let mut budget = Budget(0);
    let class = |sign: f64, rng: &mut SeededRng, budget: &mut Budget| -> Result<PointSet> {
        let mut verts = PointSet::empty(cfg.dim);
        while verts.len() < vertices {
            let p = sample_ball(rng, cfg.dim, cfg.radius);
            if sign * p[0] >= half {
                verts.push(&p)?;
            } else {
                budget.spend()?;
            }
        }
        let mut out = verts.clone();
        for _ in 0..samples {
            let w: Vec<f64> = (0..vertices).map(|_| Exp1.sample(rng)).collect();
            let total: f64 = w.iter().sum();
            let mut p = vec![0.0; cfg.dim];
            for (wi, v) in w.iter().zip(verts.iter()) {
                p.iter_mut().zip(v).for_each(|(x, y)| *x += wi / total * y);
            }
            if sign * p[0] < half {
                p[0] = sign * half;
            }
            out.push(&p)?;
        }
        Ok(out)
    };
    let xm = class(-1.0, &mut rng, &mut budget)?;
    let xp = class(1.0, &mut rng, &mut budget)?;
    verify(cfg, xm, xp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::min_cross_distance;

    fn finite(n_minus: usize, n_plus: usize, dim: usize, delta: f64, seed: u64) -> ScenarioConfig {
        ScenarioConfig::new(ScenarioKind::FiniteLabeled { n_minus, n_plus }, dim, delta, seed)
    }

    #[test]
    fn finite_labeled_examples() {
        let (a, b) = gen_finite_labeled(&finite(1, 1, 3, 0.5, 7)).unwrap();
        assert!(min_cross_distance(&a, &b).unwrap() >= 0.5);
        assert!(a.max_norm() <= 1.0 && b.max_norm() <= 1.0);
        assert!(matches!(gen_finite_labeled(&finite(1, 1, 3, 2.1, 7)), Err(Error::Infeasible(_))));
        assert_eq!(gen_finite_labeled(&finite(5, 5, 4, 0.3, 9)).unwrap(), gen_finite_labeled(&finite(5, 5, 4, 0.3, 9)).unwrap());
        assert!(matches!(gen_finite_labeled(&finite(200, 50, 2, 1.9, 1)), Err(Error::Infeasible(_))));
    }

    #[test]
    fn ball_union_examples() {
        type Centers = Option<(Vec<Vec<f64>>, Vec<Vec<f64>>)>;
        let kind = |r: f64, c: Centers| ScenarioKind::BallUnion {
            balls_minus: 1,
            balls_plus: 1,
            ball_radius: r,
            samples_per_ball: 50,
            centers_minus: c.clone().map(|c| c.0),
            centers_plus: c.map(|c| c.1),
        };
        let centers = (vec![vec![-0.35, 0.0]], vec![vec![0.35, 0.0]]);
        let cfg = ScenarioConfig::new(kind(0.1, Some(centers)), 2, 0.5, 3);
        let (a, b) = gen_ball_union(&cfg).unwrap();
        assert!(min_cross_distance(&a, &b).unwrap() >= 0.5);
        let cfg = ScenarioConfig::new(kind(0.0, None), 3, 0.4, 3);
        let (a, b) = gen_ball_union(&cfg).unwrap();
        assert!(a.iter().all(|p| p == a.point(0)) && b.iter().all(|p| p == b.point(0)));
        let overlapping = ScenarioKind::BallUnion {
            balls_minus: 2,
            balls_plus: 1,
            ball_radius: 0.2,
            samples_per_ball: 10,
            centers_minus: Some(vec![vec![-0.5, 0.0], vec![-0.5, 0.1]]),
            centers_plus: Some(vec![vec![0.5, 0.0]]),
        };
        assert!(gen_ball_union(&ScenarioConfig::new(overlapping, 2, 0.5, 0)).is_ok());
    }

    #[test]
    fn sphere_vs_ball_examples() {
        let kind = ScenarioKind::SphereVsBall { inner_radius: 0.2, n_sphere: 256, n_ball: 64 };
        let (a, b) = gen_sphere_vs_ball(&ScenarioConfig::new(kind.clone(), 2, 0.79, 1)).unwrap();
        assert!(min_cross_distance(&a, &b).unwrap() >= 0.8 - 1e-12);
        assert!(thin_sphere_regime(16, 0.2));
        assert!(!thin_sphere_regime(100, 0.2));
        assert!(matches!(gen_sphere_vs_ball(&ScenarioConfig::new(kind.clone(), 2, 0.9, 1)), Err(Error::Infeasible(_))));
        let cfg = ScenarioConfig::new(kind, 5, 0.5, 11);
        assert_eq!(gen_sphere_vs_ball(&cfg).unwrap(), gen_sphere_vs_ball(&cfg).unwrap());
    }

    #[test]
    fn bulk_with_outliers_examples() {
        let kind = |k| ScenarioKind::BulkWithOutliers { bulk_size: 40, bulk_radius: 0.2, bulk_separation: 1.4, outlier_pairs: k };
        let (a, b) = gen_bulk_with_outliers(&ScenarioConfig::new(kind(0), 3, 0.1, 2)).unwrap();
        assert_eq!((a.len(), b.len()), (40, 40));
        assert!(min_cross_distance(&a, &b).unwrap() >= 1.0);
        let (a, b) = gen_bulk_with_outliers(&ScenarioConfig::new(kind(3), 3, 0.1, 2)).unwrap();
        assert!((min_cross_distance(&a, &b).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn subspace_and_hull_examples() {
        let kind = ScenarioKind::SubspaceUnion { subspaces_minus: 2, subspaces_plus: 2, subspace_dim: 1, samples_per_subspace: 30 };
        let cfg = ScenarioConfig::new(kind, 10, 0.1, 5);
        let (a, b) = gen_subspace_union(&cfg).unwrap();
        assert_eq!((a.len(), b.len()), (60, 60));
        assert_eq!(gen_subspace_union(&cfg).unwrap(), (a, b));
        let cfg = ScenarioConfig::new(ScenarioKind::ConvexHullCloud { vertices: 8, samples: 40 }, 20, 0.3, 5);
        let (a, b) = gen_convex_hull_cloud(&cfg).unwrap();
        assert_eq!((a.len(), b.len()), (48, 48));
        assert!(a.iter().all(|p| p[0] <= -0.15) && b.iter().all(|p| p[0] >= 0.15));
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = ScenarioConfig::new(ScenarioKind::SphereVsBall { inner_radius: 0.2, n_sphere: 10, n_ball: 5 }, 16, 0.5, 4);
        let s = cfg.to_json().unwrap();
        assert!(s.contains("\"kind\": \"sphere_vs_ball\""));
        assert_eq!(ScenarioConfig::from_json(&s).unwrap(), cfg);
        let parsed = ScenarioConfig::from_json(r#"{"kind":"finite_labeled","n_minus":2,"n_plus":3,"dim":2,"delta":0.1}"#).unwrap();
        assert_eq!(parsed.radius, 1.0);
        assert!(ScenarioConfig::from_json(r#"{"kind":"torus","dim":2,"delta":0.1}"#).is_err());
    }
}
