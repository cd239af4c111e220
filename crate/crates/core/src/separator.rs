//! Explicit separating hyperplanes built from the zero pattern of a ReLU
//! layer, and the per-component separation check for mutual coverings.

use crate::complexity::{bias_hypothesis_holds, MutualCovering};
use crate::error::{Error, Result};
use crate::geometry::{dist_sq_to_set, dot, ensure_dim, min_cross_distance, PointSet, Vector};
use crate::layers::RandomReluLayer;
use crate::separability::{max_margin_separator, Hyperplane};
use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Neurons whose pre-activation is `≤ slack` on every point of a set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeuronIndexSet {
    /// Sorted, 0-based.
    pub indices: Vec<usize>,
    pub context: String,
}

impl NeuronIndexSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &NeuronIndexSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }
}

/// `u = 1/√|I|` on `I`, zero elsewhere, with an offset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorSeparator {
    pub direction: Vector,
    pub offset: f64,
    pub support: NeuronIndexSet,
}

impl IndicatorSeparator {
    fn from_support(support: NeuronIndexSet, n: usize, offset: f64) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptyIndicator);
        }
        let v = 1.0 / (support.len() as f64).sqrt();
        let mut direction = vec![0.0; n];
        for &i in &support.indices {
            direction[i] = v;
        }
        Ok(IndicatorSeparator { direction: Vector::new(direction)?, offset, support })
    }

    /// `<u, y>` summed over the support only.
    pub fn project(&self, y: &[f64]) -> f64 {
        let v = 1.0 / (self.support.len() as f64).sqrt();
        v * self.support.indices.iter().map(|&i| y[i]).sum::<f64>()
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        self.project(y) + self.offset
    }

    pub fn hyperplane(&self) -> Result<Hyperplane> {
        Hyperplane::new(self.direction.as_slice().to_vec(), self.offset)
    }

    pub fn with_offset(&self, offset: f64) -> Self {
        IndicatorSeparator { offset, ..self.clone() }
    }
}

pub fn negative_index_set(layer: &RandomReluLayer, s: &PointSet) -> Result<NeuronIndexSet> {
    negative_index_set_with_slack(layer, s, 0.0)
}

/// `{i : <w_i, x> + b_i ≤ slack for all x ∈ s}`.
pub fn negative_index_set_with_slack(layer: &RandomReluLayer, s: &PointSet, slack: f64) -> Result<NeuronIndexSet> {
    ensure_dim(layer.n_in(), s.dim())?;
    let mut alive = vec![true; layer.n_out()];
    for x in s.iter() {
        for (i, a) in alive.iter_mut().enumerate() {
            if *a && dot(layer.row(i), x) + layer.bias()[i] > slack {
                *a = false;
            }
        }
    }
    Ok(NeuronIndexSet {
        indices: (0..layer.n_out()).filter(|&i| alive[i]).collect(),
        context: format!("{} point(s)", s.len()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorSeparation {
    pub separator: IndicatorSeparator,
    /// For each `x⁺`, the number of neurons that t-separate `X⁻` from it.
    pub per_point_counts: Vec<usize>,
    /// `min` of the counts.
    pub n_prime: usize,
    /// `t·n′/(2n)`.
    pub margin: f64,
}

/// Uniform direction on the neurons inactive on all of `X⁻`, offset
/// `−t·n′/(2n)`. Fails with [`Error::NoSeparatingNeuron`] if some `x⁺` is
/// t-separated from `X⁻` by no neuron.
pub fn build_indicator_separator(
    layer: &RandomReluLayer,
    x_minus: &PointSet,
    x_plus: &PointSet,
    t: f64,
) -> Result<IndicatorSeparation> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    ensure_dim(layer.n_in(), x_plus.dim())?;
    if x_minus.is_empty() || x_plus.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = layer.n_out();
    let minus_pre: Vec<Vec<f64>> = x_minus.iter().map(|x| layer.pre_activations(x)).collect::<Result<_>>()?;
    let mut minus_max = vec![f64::NEG_INFINITY; n];
    for pre in &minus_pre {
        for (m, p) in minus_max.iter_mut().zip(pre) {
            *m = m.max(*p);
        }
    }
    let mut counts = Vec::with_capacity(x_plus.len());
    let mut lower = Vec::with_capacity(x_plus.len());
    for (k, x) in x_plus.iter().enumerate() {
        let pre = layer.pre_activations(x)?;
        let (mut count, mut zero_sum) = (0, 0.0);
        for i in 0..n {
            if minus_max[i] <= 0.0 && pre[i] > 0.0 {
                zero_sum += pre[i];
            }
            if minus_max[i] <= -t && pre[i] > t {
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::NoSeparatingNeuron(k));
        }
        counts.push(count);
        lower.push(zero_sum / n as f64);
    }
    let n_prime = *counts.iter().min().expect("x_plus is nonempty");
    let margin = t * n_prime as f64 / (2.0 * n as f64);
    let support = NeuronIndexSet {
        indices: (0..n).filter(|&i| minus_max[i] <= 0.0).collect(),
        context: format!("X⁻ ({} point(s))", x_minus.len()),
    };
    let separator = IndicatorSeparator::from_support(support, n, -margin)?;

    for x in x_minus.iter() {
        let v = separator.project(&layer.apply(x)?);
        if v > 0.0 {
            return Err(Error::HypothesisViolated(format!("<u, Φ(x⁻)> = {v} > 0")));
        }
    }
    for (k, x) in x_plus.iter().enumerate() {
        let v = separator.project(&layer.apply(x)?);
        if v < lower[k] * (1.0 - 1e-12) {
            return Err(Error::HypothesisViolated(format!("<u, Φ(x⁺_{k})> = {v} below {}", lower[k])));
        }
    }
    Ok(IndicatorSeparation { separator, per_point_counts: counts, n_prime, margin })
}

/// Normalized indicator of the zero coordinates of `Φ(x⁻)`, offset 0.
pub fn per_point_separator(layer: &RandomReluLayer, x_minus_point: &[f64]) -> Result<IndicatorSeparator> {
    let img = layer.apply(x_minus_point)?;
    let support = NeuronIndexSet {
        indices: (0..img.len()).filter(|&i| img[i] == 0.0).collect(),
        context: "single point".into(),
    };
    IndicatorSeparator::from_support(support, layer.n_out(), 0.0)
}

/// The constants `c` and `c′` of the per-component separation statement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConstants {
    pub c: f64,
    pub c_prime: f64,
}

impl Default for GeometryConstants {
    fn default() -> Self {
        GeometryConstants { c: 1.0, c_prime: 1.0 / 256.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentCheck {
    pub component: usize,
    /// `d²(c⁻_l, C⁺)`.
    pub dist_sq: f64,
    pub margin_required: f64,
    pub margin_observed: f64,
    pub pass: bool,
    /// `Φ(c⁻_l) ∉ conv(Φ(C⁺))`.
    pub center_excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub components: Vec<ComponentCheck>,
    pub pass_fraction: f64,
    pub excluded_fraction: f64,
    pub diagnostics: Vec<String>,
}

impl GeometryReport {
    /// Columns `component,dist_sq,margin_required,margin_observed,pass`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["component", "dist_sq", "margin_required", "margin_observed", "pass"])?;
        for c in &self.components {
            w.write_record([
                c.component.to_string(),
                format!("{:?}", c.dist_sq),
                format!("{:?}", c.margin_required),
                format!("{:?}", c.margin_observed),
                c.pass.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// For each minus component `l`, takes the zero-pattern direction of
/// `Φ(c⁻_l)` with offset `−4c′λ⁻¹d²(c⁻_l, C⁺)` and measures how well it
/// separates `Φ(X⁻_l)` from `Φ(X⁺)`; it passes when the observed margin is at
/// least `min{2c′, c/2}·λ⁻¹·d²(c⁻_l, C⁺)`.
pub fn first_layer_geometry_check(
    layer: &RandomReluLayer,
    mc: &MutualCovering,
    x_plus: &PointSet,
    x_minus: &PointSet,
    constants: &GeometryConstants,
) -> Result<GeometryReport> {
    ensure_dim(layer.n_in(), x_plus.dim())?;
    ensure_dim(layer.n_in(), x_minus.dim())?;
    ensure_dim(layer.n_in(), mc.centers_minus.dim())?;
    let lambda = layer.lambda();
    if !(lambda > 0.0) {
        return Err(Error::Domain("the layer needs a positive maximal bias".into()));
    }
    let mut diagnostics = Vec::new();
    let radius = x_plus.max_norm().max(x_minus.max_norm());
    let delta = min_cross_distance(x_plus, x_minus)?;
    if delta > 0.0 && !(lambda / delta >= std::f64::consts::E && bias_hypothesis_holds(lambda, radius, delta, 1.0)) {
        diagnostics.push(format!("λ = {lambda} misses λ/δ ≥ e or λ ≳ R√log(λ/δ) (R = {radius}, δ = {delta})"));
    }
    let scale = lambda / constants.c_prime;
    if (mc.lambda - scale).abs() > 1e-9 * scale {
        diagnostics.push(format!("covering built at scale {} instead of λ/c′ = {scale}", mc.lambda));
    }
    for d in &diagnostics {
        warn!("first-layer geometry: {d}");
    }

    let plus_images = layer.apply_set(x_plus)?;
    let centers_plus_images = layer.apply_set(&mc.centers_plus)?;
    let factor = (2.0 * constants.c_prime).min(constants.c / 2.0);
    let components: Vec<ComponentCheck> = (0..mc.centers_minus.len())
        .into_par_iter()
        .map(|l| {
            let c = mc.centers_minus.point(l);
            let d2 = dist_sq_to_set(c, &mc.centers_plus);
            let sep = per_point_separator(layer, c)?.with_offset(-4.0 * constants.c_prime * d2 / lambda);
            let members: Vec<usize> = (0..x_minus.len()).filter(|&i| mc.assignment_minus.get(i) == Some(&l)).collect();
            let mut minus_side = f64::NEG_INFINITY;
            for &i in &members {
                minus_side = minus_side.max(sep.eval(&layer.apply(x_minus.point(i))?));
            }
            let plus_side = plus_images.iter().map(|y| sep.eval(y)).fold(f64::INFINITY, f64::min);
            let margin_observed = (-minus_side).min(plus_side);
            let margin_required = factor * d2 / lambda;
            let center_image = PointSet::from_rows(&[layer.apply(c)?])?;
            let center_excluded = max_margin_separator(&center_image, &centers_plus_images)?.separable;
            Ok(ComponentCheck {
                component: l,
                dist_sq: d2,
                margin_required,
                margin_observed,
                pass: margin_observed >= margin_required,
                center_excluded,
            })
        })
        .collect::<Result<_>>()?;
    let k = components.len().max(1) as f64;
    Ok(GeometryReport {
        pass_fraction: components.iter().filter(|c| c.pass).count() as f64 / k,
        excluded_fraction: components.iter().filter(|c| c.center_excluded).count() as f64 / k,
        components,
        diagnostics,
    })
}
