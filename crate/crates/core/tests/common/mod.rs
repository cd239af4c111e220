#![allow(dead_code)]

use sepcap_core::rng::{rng_from_seed, unit_ball};
use sepcap_core::PointSet;

/// Two unit-ball clouds centered at `∓shift·e₀`.
pub fn clouds(seed: u64, dim: usize, n_minus: usize, n_plus: usize, shift: f64) -> (PointSet, PointSet) {
    let mut rng = rng_from_seed(seed);
    let mut cloud = |n: usize, sign: f64| {
        let mut s = PointSet::empty(dim);
        let mut p = vec![0.0; dim];
        for _ in 0..n {
            unit_ball(&mut rng, 1.0, &mut p);
            p[0] += sign * shift;
            s.push(&p).unwrap();
        }
        s
    };
    let a = cloud(n_minus, -1.0);
    let b = cloud(n_plus, 1.0);
    (a, b)
}

/// `n` points uniform in `radius·B₂ᵈ`.
pub fn ball_points(seed: u64, dim: usize, n: usize, radius: f64) -> PointSet {
    let mut rng = rng_from_seed(seed);
    let mut s = PointSet::empty(dim);
    let mut p = vec![0.0; dim];
    for _ in 0..n {
        unit_ball(&mut rng, radius, &mut p);
        s.push(&p).unwrap();
    }
    s
}
