//! Chunked, seed-stable Monte Carlo estimation.
//!
//! Samples are split into fixed-size chunks. Chunk `k` draws from stream `k`
//! of the run's seed, chunks may be evaluated on any number of workers, and
//! the partial moments are merged in chunk order. The result is therefore
//! independent of the thread count.

use crate::error::{Error, Result};
use crate::rng::{rng_for_stream, SeededRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const CHUNK_SIZE: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorResult {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl EstimatorResult {
    /// `sqrt(se_a^2 + se_b^2)` for two independent estimates.
    pub fn joint_std_error(&self, other: &EstimatorResult) -> f64 {
        self.std_error.hypot(other.std_error)
    }

    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.std_error
    }

    pub fn csv_header() -> [&'static str; 5] {
        ["quantity", "estimate", "std_error", "n_samples", "seed"]
    }

    pub fn csv_record(&self, quantity: &str) -> [String; 5] {
        [
            quantity.to_string(),
            format!("{:?}", self.estimate),
            format!("{:?}", self.std_error),
            self.n_samples.to_string(),
            self.seed.to_string(),
        ]
    }
}

/// Appends `quantity,estimate,std_error,n_samples,seed` rows; writes the header
/// when `with_header` is set.
pub fn write_estimates_csv<W: Write>(
    writer: W,
    rows: &[(&str, EstimatorResult)],
    with_header: bool,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if with_header {
        w.write_record(EstimatorResult::csv_header())?;
    }
    for (q, r) in rows {
        w.write_record(r.csv_record(q))?;
    }
    w.flush()?;
    Ok(())
}

/// Running mean and sum of squared deviations (Welford / Chan et al.).
#[derive(Debug, Clone, Copy, Default)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        self.mean += d * other.count as f64 / n;
        self.m2 += other.m2 + d * d * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn into_result(self, seed: u64) -> EstimatorResult {
        EstimatorResult {
            estimate: self.mean,
            std_error: (self.sample_variance() / self.count as f64).sqrt(),
            n_samples: self.count,
            seed,
        }
    }
}

/// Mean of `sample(rng)` over `n_samples` draws.
pub fn estimate<F>(n_samples: usize, seed: u64, sample: F) -> Result<EstimatorResult>
where
    F: Fn(&mut SeededRng) -> f64 + Sync,
{
    if n_samples < 2 {
        return Err(Error::Estimator(format!(
            "need at least 2 samples for a standard error, got {n_samples}"
        )));
    }
    let chunks = n_samples.div_ceil(CHUNK_SIZE);
    let partial: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_for_stream(seed, k as u64);
            let len = CHUNK_SIZE.min(n_samples - k * CHUNK_SIZE);
            let mut m = Moments::default();
            for _ in 0..len {
                m.push(sample(&mut rng));
            }
            m
        })
        .collect();
    let mut total = Moments::default();
    for m in &partial {
        total.merge(m);
    }
    Ok(total.into_result(seed))
}

/// Runs `trial(rng)` once per chunked draw and returns all outcomes in order.
/// Outcomes are identical regardless of the worker count.
pub fn draws<T, F>(n: usize, seed: u64, trial: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut SeededRng) -> T + Sync,
{
    let chunks = n.div_ceil(CHUNK_SIZE);
    let nested: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_for_stream(seed, k as u64);
            let len = CHUNK_SIZE.min(n - k * CHUNK_SIZE);
            (0..len).map(|_| trial(&mut rng)).collect()
        })
        .collect();
    nested.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn rejects_too_few_samples() {
        assert!(estimate(1, 0, |_| 0.0).is_err());
    }

    #[test]
    fn moments_match_two_pass() {
        let xs: Vec<f64> = (0..5000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut a = Moments::default();
        let mut b = Moments::default();
        for (i, x) in xs.iter().enumerate() {
            if i < 1234 {
                a.push(*x)
            } else {
                b.push(*x)
            }
        }
        a.merge(&b);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((a.mean - mean).abs() < 1e-12);
        assert!((a.sample_variance() - var).abs() < 1e-9);
    }

    #[test]
    fn independent_of_thread_count() {
        let f = |rng: &mut SeededRng| rng.random::<f64>();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| estimate(10_000, 3, f).unwrap());
        let b = four.install(|| estimate(10_000, 3, f).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
    }

    #[test]
    fn constant_has_zero_error() {
        let r = estimate(100, 0, |_| 2.5).unwrap();
        assert_eq!((r.estimate, r.std_error, r.n_samples), (2.5, 0.0, 100));
    }
}
