//! Random ReLU layers `Φ(x) = √(2/n_out)·ReLU(Wx + b)` and their two-layer
//! composition.

use crate::error::{Error, Result};
use crate::geometry::{dot, ensure_dim, PointSet};
use crate::rng::{fill_gaussian, rng_from_seed, uniform_symmetric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// Everything needed to re-derive a sampled layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub n_in: usize,
    pub n_out: usize,
    pub lambda: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomReluLayer {
    n_in: usize,
    n_out: usize,
    lambda: f64,
    scale: f64,
    /// Row-major `n_out × n_in`.
    weights: Vec<f64>,
    bias: Vec<f64>,
    seed: Option<u64>,
}

impl RandomReluLayer {
    /// Weights i.i.d. `N(0,1)` filled row by row, then biases i.i.d. uniform
    /// on `[−λ, λ]`, all from one ChaCha8 stream keyed by `seed`.
    pub fn sample(n_in: usize, n_out: usize, lambda: f64, seed: u64) -> Result<Self> {
        check_shape(n_in, n_out, lambda)?;
        let mut rng = rng_from_seed(seed);
        let mut weights = vec![0.0; n_in * n_out];
        fill_gaussian(&mut rng, &mut weights);
        let bias = (0..n_out).map(|_| uniform_symmetric(&mut rng, lambda)).collect();
        Ok(RandomReluLayer {
            n_in,
            n_out,
            lambda,
            scale: (2.0 / n_out as f64).sqrt(),
            weights,
            bias,
            seed: Some(seed),
        })
    }

    pub fn from_spec(spec: &LayerSpec) -> Result<Self> {
        Self::sample(spec.n_in, spec.n_out, spec.lambda, spec.seed)
    }

    /// Layer with given `W` (rows) and `b`. `lambda` must dominate `|b|`.
    pub fn from_parts(weights: &[Vec<f64>], bias: &[f64], lambda: f64) -> Result<Self> {
        let n_out = weights.len();
        let n_in = weights.first().map_or(0, Vec::len);
        check_shape(n_in, n_out, lambda)?;
        ensure_dim(n_out, bias.len())?;
        let mut flat = Vec::with_capacity(n_in * n_out);
        for (row, w) in weights.iter().enumerate() {
            if w.len() != n_in {
                return Err(Error::Ragged { row, expected: n_in, found: w.len() });
            }
            flat.extend_from_slice(w);
        }
        if let Some(i) = flat.iter().chain(bias).position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if let Some(b) = bias.iter().find(|b| b.abs() > lambda) {
            return Err(Error::Domain(format!("bias {b} outside [-{lambda}, {lambda}]")));
        }
        Ok(RandomReluLayer {
            n_in,
            n_out,
            lambda,
            scale: (2.0 / n_out as f64).sqrt(),
            weights: flat,
            bias: bias.to_vec(),
            seed: None,
        })
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.weights[i * self.n_in..(i + 1) * self.n_in]
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    /// `None` for injected layers.
    pub fn spec(&self) -> Option<LayerSpec> {
        self.seed.map(|seed| LayerSpec { n_in: self.n_in, n_out: self.n_out, lambda: self.lambda, seed })
    }

    /// `Wx + b` (unscaled, before the ReLU).
    pub fn pre_activations(&self, x: &[f64]) -> Result<Vec<f64>> {
        ensure_dim(self.n_in, x.len())?;
        Ok((0..self.n_out).map(|i| dot(self.row(i), x) + self.bias[i]).collect())
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.scale * (dot(self.row(i), x) + self.bias[i]).max(0.0);
        }
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        ensure_dim(self.n_in, x.len())?;
        let mut out = vec![0.0; self.n_out];
        self.apply_into(x, &mut out);
        Ok(out)
    }

    pub fn apply_set(&self, s: &PointSet) -> Result<PointSet> {
        ensure_dim(self.n_in, s.dim())?;
        let mut data = vec![0.0; s.len() * self.n_out];
        data.par_chunks_mut(self.n_out.max(1))
            .zip(s.as_flat().par_chunks(self.n_in))
            .for_each(|(out, x)| self.apply_into(x, out));
        PointSet::from_flat(self.n_out, data)
    }

    pub fn spec_json(&self) -> Result<String> {
        let spec = self
            .spec()
            .ok_or_else(|| Error::Domain("injected layer has no seed; use the matrix dump".into()))?;
        Ok(serde_json::to_string_pretty(&spec)?)
    }

    pub fn from_spec_json(s: &str) -> Result<Self> {
        Self::from_spec(&serde_json::from_str(s)?)
    }

    /// One row per neuron: `w0,…,w{n_in-1},b`.
    pub fn write_matrix_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (0..self.n_in).map(|j| format!("w{j}")).collect();
        header.push("b".into());
        w.write_record(&header)?;
        for i in 0..self.n_out {
            let mut rec: Vec<String> = self.row(i).iter().map(|v| format!("{v:?}")).collect();
            rec.push(format!("{:?}", self.bias[i]));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a matrix dump; `lambda` is the declared maximal bias.
    pub fn read_matrix_csv<R: Read>(reader: R, lambda: f64) -> Result<Self> {
        let rows = PointSet::read_csv(reader)?;
        if rows.dim() < 2 {
            return Err(Error::ZeroDimension(rows.dim()));
        }
        let n_in = rows.dim() - 1;
        let weights: Vec<Vec<f64>> = rows.iter().map(|r| r[..n_in].to_vec()).collect();
        let bias: Vec<f64> = rows.iter().map(|r| r[n_in]).collect();
        Self::from_parts(&weights, &bias, lambda)
    }
}

fn check_shape(n_in: usize, n_out: usize, lambda: f64) -> Result<()> {
    if n_in == 0 {
        return Err(Error::ZeroDimension(n_in));
    }
    if n_out == 0 {
        return Err(Error::ZeroDimension(n_out));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("maximal bias must be finite and nonnegative, got {lambda}")));
    }
    Ok(())
}

/// `x ↦ Φ̂(Φ(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLayerNetwork {
    pub first: RandomReluLayer,
    pub second: RandomReluLayer,
}

impl TwoLayerNetwork {
    pub fn new(first: RandomReluLayer, second: RandomReluLayer) -> Result<Self> {
        ensure_dim(first.n_out(), second.n_in())?;
        Ok(TwoLayerNetwork { first, second })
    }

    /// First layer from `seed`, second from `seed + 1`.
    pub fn sample(d: usize, n: usize, n_hat: usize, lambda: f64, lambda_hat: f64, seed: u64) -> Result<Self> {
        Self::new(
            RandomReluLayer::sample(d, n, lambda, seed)?,
            RandomReluLayer::sample(n, n_hat, lambda_hat, seed.wrapping_add(1))?,
        )
    }

    pub fn forward(&self, s: &PointSet) -> Result<PointSet> {
        self.second.apply_set(&self.first.apply_set(s)?)
    }

    pub fn forward_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.second.apply(&self.first.apply(x)?)
    }
}
