//! Closed-form expectations for random ReLU layers and their empirical
//! verification: distances, norms and inner products after one layer, the
//! mean width after one layer, and the cone-preservation inequality for
//! Gaussian maps.

use crate::complexity::estimate_mean_width;
use crate::error::{Error, Result};
use crate::geometry::{dist, dist_sq, dot, ensure_dim, norm, norm_sq, PointSet};
use crate::layers::RandomReluLayer;
use crate::monte_carlo::EstimatorResult;
use crate::rng::{derive_seed, fill_gaussian, rng_from_seed};
use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
}

impl KernelParams {
    pub fn new(a: f64, b: f64, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
        }
        if !(a.abs() <= lambda && b.abs() <= lambda) {
            return Err(Error::HypothesisViolated(format!("need |a|, |b| ≤ λ, got a={a}, b={b}, λ={lambda}")));
        }
        Ok(KernelParams { lambda, a, b })
    }
}

/// `E[ReLU(a+τ)·ReLU(b+τ)]` for `τ ~ U[−λ, λ]`:
/// `ab/2 + min²·max/(4λ) − min³/(12λ) + (a+b)λ/4 + λ²/6`.
pub fn relu_kernel_expectation(p: &KernelParams) -> Result<f64> {
    let p = KernelParams::new(p.a, p.b, p.lambda)?;
    let (lo, hi) = if p.a <= p.b { (p.a, p.b) } else { (p.b, p.a) };
    let l = p.lambda;
    Ok(p.a * p.b / 2.0 + lo * lo * hi / (4.0 * l) - lo * lo * lo / (12.0 * l) + (p.a + p.b) * l / 4.0 + l * l / 6.0)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
    }
    Ok(())
}

/// `<x⁺, x⁻> + λ²/3 + √(2/π)·|x⁺ − x⁻|³/(6λ)`, the large-λ value of
/// `E<Φ(x⁺), Φ(x⁻)>`.
pub fn expected_inner_product(x_plus: &[f64], x_minus: &[f64], lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    ensure_dim(x_plus.len(), x_minus.len())?;
    let r = dist(x_plus, x_minus);
    Ok(dot(x_plus, x_minus) + lambda * lambda / 3.0 + (2.0 / PI).sqrt() * r * r * r / (6.0 * lambda))
}

/// `|x⁺ − x⁻|²·(1 − √(2/π)·|x⁺ − x⁻|/(3λ))`.
pub fn expected_squared_distance(x_plus: &[f64], x_minus: &[f64], lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    ensure_dim(x_plus.len(), x_minus.len())?;
    let r = dist(x_plus, x_minus);
    Ok(r * r * (1.0 - (2.0 / PI).sqrt() * r / (3.0 * lambda)))
}

/// `|x|² + λ²/3`.
pub fn expected_squared_norm(x: &[f64], lambda: f64) -> f64 {
    norm_sq(x) + lambda * lambda / 3.0
}

/// Largest deviations of one layer from the three expected values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LayerDeviation {
    pub dist: f64,
    pub norm: f64,
    pub inner_product: f64,
}

impl LayerDeviation {
    pub fn max(&self) -> f64 {
        self.dist.max(self.norm).max(self.inner_product)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    /// Max over layers of [`LayerDeviation::max`].
    pub max_abs_deviation: f64,
    pub max_dev_dist: f64,
    pub max_dev_norm: f64,
    pub max_dev_ip: f64,
    pub epsilon_target: f64,
    /// Layer width.
    pub n_used: usize,
    pub n_layers: usize,
    pub lambda: f64,
    /// Fraction of layers whose deviations are all within the target.
    pub pass_fraction: f64,
    pub pass: bool,
    pub seed: u64,
    pub per_layer: Vec<LayerDeviation>,
    pub diagnostics: Vec<String>,
}

impl DeviationReport {
    pub fn mean_max_deviation(&self) -> f64 {
        self.per_layer.iter().map(LayerDeviation::max).sum::<f64>() / self.per_layer.len() as f64
    }

    pub fn csv_header() -> [&'static str; 8] {
        ["n", "lambda", "epsilon_target", "max_dev_dist", "max_dev_norm", "max_dev_ip", "pass_fraction", "seed"]
    }

    pub fn csv_record(&self) -> [String; 8] {
        [
            self.n_used.to_string(),
            format!("{:?}", self.lambda),
            format!("{:?}", self.epsilon_target),
            format!("{:?}", self.max_dev_dist),
            format!("{:?}", self.max_dev_norm),
            format!("{:?}", self.max_dev_ip),
            format!("{:?}", self.pass_fraction),
            self.seed.to_string(),
        ]
    }
}

pub fn write_deviation_csv<W: Write>(writer: W, rows: &[DeviationReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(DeviationReport::csv_header())?;
    for r in rows {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}

fn layer_deviation(layer: &RandomReluLayer, xp: &PointSet, xm: &PointSet, lambda: f64) -> Result<LayerDeviation> {
    let (ip, im) = (layer.apply_set(xp)?, layer.apply_set(xm)?);
    let mut dev = LayerDeviation::default();
    for (s, img) in [(xp, &ip), (xm, &im)] {
        for (x, y) in s.iter().zip(img.iter()) {
            dev.norm = dev.norm.max((norm_sq(y) - expected_squared_norm(x, lambda)).abs());
        }
    }
    for (x, fx) in xp.iter().zip(ip.iter()) {
        for (z, fz) in xm.iter().zip(im.iter()) {
            let r2 = dist_sq(x, z);
            let r = r2.sqrt();
            let e_dist = r2 * (1.0 - (2.0 / PI).sqrt() * r / (3.0 * lambda));
            let e_ip = dot(x, z) + lambda * lambda / 3.0 + (2.0 / PI).sqrt() * r2 * r / (6.0 * lambda);
            dev.dist = dev.dist.max((dist_sq(fx, fz) - e_dist).abs());
            dev.inner_product = dev.inner_product.max((dot(fx, fz) - e_ip).abs());
        }
    }
    Ok(dev)
}

fn deviation_diagnostics(xp: &PointSet, xm: &PointSet, lambda: f64, n: usize, eps: f64, seed: u64) -> Vec<String> {
    let mut notes = Vec::new();
    let radius = xp.max_norm().max(xm.max_norm());
    if eps > lambda * lambda / std::f64::consts::E {
        notes.push(format!("ε = {eps} exceeds λ²/e"));
    } else if lambda < radius * (lambda * lambda / eps).ln().sqrt() {
        notes.push(format!("λ = {lambda} below R·√log(λ²/ε) = {}", radius * (lambda * lambda / eps).ln().sqrt()));
    }
    let width = |s: &PointSet, tag| estimate_mean_width(s, 1000, derive_seed(seed, tag)).map(|e| e.estimate.max(0.0));
    if let (Ok(wp), Ok(wm)) = (width(xp, 11), width(xm, 12)) {
        let need = lambda * lambda * (wp * wp + wm * wm) / (eps * eps);
        if (n as f64) < need {
            notes.push(format!("n = {n} below ε⁻²λ²(w(X⁺)² + w(X⁻)²) ≈ {need:.1}"));
        }
    }
    for note in &notes {
        warn!("deviation check hypothesis: {note}");
    }
    notes
}

/// Samples `n_layers` independent layers of width `n` and records, per
/// layer, the largest deviation of squared distances, squared norms and
/// inner products from their expected values over all cross pairs (norms
/// over both sets). For `λ = 0` the bias-free expectations are used.
pub fn empirical_deviation(
    x_plus: &PointSet,
    x_minus: &PointSet,
    lambda: f64,
    n: usize,
    n_layers: usize,
    epsilon_target: f64,
    seed: u64,
) -> Result<DeviationReport> {
    ensure_dim(x_plus.dim(), x_minus.dim())?;
    if x_plus.is_empty() || x_minus.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(epsilon_target > 0.0) || n_layers == 0 {
        return Err(Error::Domain("need ε > 0 and at least one layer".into()));
    }
    let d = x_plus.dim();
    let per_layer: Vec<LayerDeviation> = (0..n_layers)
        .into_par_iter()
        .map(|l| {
            let layer = RandomReluLayer::sample(d, n, lambda, derive_seed(seed, l as u64))?;
            if lambda > 0.0 {
                layer_deviation(&layer, x_plus, x_minus, lambda)
            } else {
                zero_bias_deviation(&layer, x_plus, x_minus)
            }
        })
        .collect::<Result<_>>()?;
    let diagnostics = if lambda > 0.0 {
        deviation_diagnostics(x_plus, x_minus, lambda, n, epsilon_target, seed)
    } else {
        Vec::new()
    };
    let fold = |f: fn(&LayerDeviation) -> f64| per_layer.iter().map(f).fold(0.0, f64::max);
    let max_abs_deviation = fold(LayerDeviation::max);
    let passing = per_layer.iter().filter(|l| l.max() <= epsilon_target).count();
    Ok(DeviationReport {
        max_abs_deviation,
        max_dev_dist: fold(|l| l.dist),
        max_dev_norm: fold(|l| l.norm),
        max_dev_ip: fold(|l| l.inner_product),
        epsilon_target,
        n_used: n,
        n_layers,
        lambda,
        pass_fraction: passing as f64 / n_layers as f64,
        pass: max_abs_deviation <= epsilon_target,
        seed,
        per_layer,
        diagnostics,
    })
}

/// `E<Φx, Φz>` without bias: the degree-one arc-cosine kernel
/// `|x||z|·(sin θ + (π − θ)·cos θ)/π`.
pub fn arc_cosine_kernel(x: &[f64], z: &[f64]) -> f64 {
    let (nx, nz) = (norm(x), norm(z));
    if nx == 0.0 || nz == 0.0 {
        return 0.0;
    }
    let cos = (dot(x, z) / (nx * nz)).clamp(-1.0, 1.0);
    let theta = cos.acos();
    nx * nz * (theta.sin() + (PI - theta) * cos) / PI
}

/// `λ = 0` compares against the exact bias-free expectations.
fn zero_bias_deviation(layer: &RandomReluLayer, xp: &PointSet, xm: &PointSet) -> Result<LayerDeviation> {
    let (ip, im) = (layer.apply_set(xp)?, layer.apply_set(xm)?);
    let mut dev = LayerDeviation::default();
    for (s, img) in [(xp, &ip), (xm, &im)] {
        for (x, y) in s.iter().zip(img.iter()) {
            dev.norm = dev.norm.max((norm_sq(y) - norm_sq(x)).abs());
        }
    }
    for (x, fx) in xp.iter().zip(ip.iter()) {
        for (z, fz) in xm.iter().zip(im.iter()) {
            let k = arc_cosine_kernel(x, z);
            dev.dist = dev.dist.max((dist_sq(fx, fz) - (norm_sq(x) + norm_sq(z) - 2.0 * k)).abs());
            dev.inner_product = dev.inner_product.max((dot(fx, fz) - k).abs());
        }
    }
    Ok(dev)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthCheck {
    /// `w(Φ(s))`.
    pub w_after: EstimatorResult,
    /// `w(√(2/n)·W·s)` for the same `W`.
    pub w_matrix: EstimatorResult,
    /// `w_after ≤ w_matrix + 4` joint standard errors.
    pub verdict: bool,
}

/// Compares the mean width after a random layer with that of the linear part.
/// Both sets are translated by the image of the first point before the
/// estimate, which leaves the widths unchanged and makes singletons exact.
pub fn width_after_layer_check(s: &PointSet, lambda: f64, n: usize, n_samples: usize, seed: u64) -> Result<WidthCheck> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let layer = RandomReluLayer::sample(s.dim(), n, lambda, seed)?;
    width_after_given_layer(&layer, s, n_samples, derive_seed(seed, 1))
}

pub fn width_after_given_layer(
    layer: &RandomReluLayer,
    s: &PointSet,
    n_samples: usize,
    seed: u64,
) -> Result<WidthCheck> {
    ensure_dim(layer.n_in(), s.dim())?;
    let after = layer.apply_set(s)?;
    let linear = s.map_points(layer.n_out(), |x, out| {
        for (i, o) in out.iter_mut().enumerate() {
            *o = layer.scale() * dot(layer.row(i), x);
        }
    });
    let centered = |p: &PointSet| {
        let neg: Vec<f64> = p.point(0).iter().map(|v| -v).collect();
        p.translate(&neg)
    };
    let w_after = estimate_mean_width(&centered(&after)?, n_samples, seed)?;
    let w_matrix = estimate_mean_width(&centered(&linear)?, n_samples, seed)?;
    let verdict = w_after.estimate <= w_matrix.estimate + 4.0 * w_after.joint_std_error(&w_matrix);
    Ok(WidthCheck { w_after, w_matrix, verdict })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeTransformReport {
    /// All three hypotheses on `A` hold for this draw.
    pub hypotheses_hold: bool,
    /// The conclusion holds for every probed point.
    pub conclusion_holds: bool,
    /// `AX ⊂ 2R·B₂ᵏ`.
    pub in_double_ball: bool,
    /// Smallest `lhs − rhs` of the conclusion over the probed points.
    pub min_slack: f64,
}

impl ConeTransformReport {
    /// The implication "hypotheses ⇒ conclusion".
    pub fn holds(&self) -> bool {
        !self.hypotheses_hold || (self.conclusion_holds && self.in_double_ball)
    }
}

/// Checks the cone-preservation inequality for `A = G/√k`, `G` a `k × d`
/// standard Gaussian matrix drawn from `seed`.
#[allow(clippy::too_many_arguments)]
pub fn cone_transform_check(
    u: &[f64],
    t: f64,
    s: &PointSet,
    k: usize,
    kappa: f64,
    alpha: f64,
    beta: f64,
    seed: u64,
) -> Result<ConeTransformReport> {
    if k == 0 {
        return Err(Error::ZeroDimension(k));
    }
    let d = s.dim();
    let mut rng = rng_from_seed(seed);
    let mut rows = vec![vec![0.0; d]; k];
    let scale = 1.0 / (k as f64).sqrt();
    for r in rows.iter_mut() {
        fill_gaussian(&mut rng, r);
        r.iter_mut().for_each(|v| *v *= scale);
    }
    cone_transform_check_with_matrix(u, t, s, &rows, kappa, alpha, beta)
}

/// As [`cone_transform_check`] with the rows of `A` given. `u` is a unit
/// vector with `<u, x> ≥ t|x|` on `s`, `t ∈ [0, 1]`, `κ ∈ [0, ½]`,
/// `α, β ∈ [0, R]`.
pub fn cone_transform_check_with_matrix(
    u: &[f64],
    t: f64,
    s: &PointSet,
    a: &[Vec<f64>],
    kappa: f64,
    alpha: f64,
    beta: f64,
) -> Result<ConeTransformReport> {
    ensure_dim(s.dim(), u.len())?;
    if a.is_empty() {
        return Err(Error::ZeroDimension(0));
    }
    for (row, r) in a.iter().enumerate() {
        if r.len() != s.dim() {
            return Err(Error::Ragged { row, expected: s.dim(), found: r.len() });
        }
    }
    let radius = s.max_norm();
    if !((0.0..=1.0).contains(&t) && (0.0..=0.5).contains(&kappa) && alpha >= 0.0 && beta >= 0.0) {
        return Err(Error::Domain("need t ∈ [0,1], κ ∈ [0,½], α, β ≥ 0".into()));
    }
    if alpha > radius || beta > radius {
        return Err(Error::Domain(format!("α, β must not exceed R = {radius}")));
    }
    if (norm(u) - 1.0).abs() > 1e-9 {
        return Err(Error::Domain("u must be a unit vector".into()));
    }
    let tol = 1e-12 * (1.0 + radius);
    if let Some(x) = s.iter().find(|x| dot(u, x) < t * norm(x) - tol) {
        return Err(Error::HypothesisViolated(format!("<u, x> < t|x| for x = {x:?}")));
    }
    let apply = |x: &[f64]| a.iter().map(|r| dot(r, x)).collect::<Vec<f64>>();
    let au = apply(u);
    let au_sq = norm_sq(&au);
    let mut hyp = (1.0 - kappa) - tol <= au_sq && au_sq <= (1.0 + kappa) + tol;
    let mut images = Vec::with_capacity(s.len());
    for x in s.iter() {
        let ax = apply(x);
        let diff: Vec<f64> = u.iter().zip(x).map(|(p, q)| p - q).collect();
        let (nd, nad) = (norm(&diff), dist(&au, &ax));
        let (nx, nax) = (norm(x), norm(&ax));
        hyp &= (nad - nd).abs() <= alpha + tol && (nax - nx).abs() <= beta + tol;
        images.push(ax);
    }
    let au_norm = au_sq.sqrt();
    let penalty = kappa / 2f64.sqrt()
        + 2f64.sqrt() * (1.5 * radius + t) * beta
        + 3.0 / 2f64.sqrt() * (1.0 + radius) * alpha;
    let mut min_slack = f64::INFINITY;
    let mut in_ball = true;
    for ax in &images {
        let nax = norm(ax);
        let lhs = dot(&au, ax) / au_norm;
        let rhs = t / (1.0 + kappa).sqrt() * nax - penalty;
        min_slack = min_slack.min(lhs - rhs);
        in_ball &= nax <= 2.0 * radius + tol;
    }
    Ok(ConeTransformReport {
        hypotheses_hold: hyp,
        conclusion_holds: min_slack >= -tol,
        in_double_ball: in_ball,
        min_slack,
    })
}
