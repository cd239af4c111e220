mod common;

use common::ball_points;
use sepcap_core::layers::RandomReluLayer;
use sepcap_core::monte_carlo::estimate;
use sepcap_core::randomized::{
    count_separating_neurons, estimate_separation_probability, expected_separating_neurons, general_lower_bound,
    spherical_cap_probability, two_point_lower_bound, SeparationProbe,
};
use sepcap_core::rng::{derive_seed, unit_sphere};
use sepcap_oracles::two_point_separation_probability;

#[test]
fn swapping_the_classes_keeps_the_probability() {
    let xm = ball_points(1, 3, 3, 0.4);
    let xp = ball_points(2, 3, 3, 0.4).translate(&[0.8, 0.0, 0.0]).unwrap();
    let fwd = SeparationProbe::new(xm.clone(), xp.clone(), 2.0, 0.05, 100_000, 10).unwrap();
    let rev = SeparationProbe::new(xp, xm, 2.0, 0.05, 100_000, 11).unwrap();
    let (a, b) = (estimate_separation_probability(&fwd).unwrap(), estimate_separation_probability(&rev).unwrap());
    assert!(a.estimate > 0.0);
    assert!((a.estimate - b.estimate).abs() <= 4.0 * a.joint_std_error(&b), "{a:?} vs {b:?}");
}

#[test]
fn calibrated_two_point_constant_is_consistent_with_quadrature() {
    let exact = two_point_separation_probability(1.0, 10.0, 1.0);
    let c = exact * 10.0 / 1.0;
    assert!(two_point_lower_bound(1.0, 10.0, c).unwrap() <= exact);
    for (delta, lambda) in [(0.5, 10.0), (1.0, 20.0), (2.0, 20.0)] {
        let p = two_point_separation_probability(delta, lambda, delta);
        let lower = two_point_lower_bound(delta, lambda, c * 0.5).unwrap();
        assert!(lower <= p, "δ={delta} λ={lambda}: {lower} > {p}");
    }
}

#[test]
fn general_bound_decreases_in_the_constant() {
    for &t in &[0.5, 1.0, 2.0] {
        let mut prev = f64::INFINITY;
        for k in 0..20 {
            let v = general_lower_bound(t, 0.8, 0.3, 10.0, 0.25 * k as f64).unwrap();
            assert!(v <= prev);
            prev = v;
        }
    }
}

#[test]
fn neuron_counts_exceed_the_chernoff_level() {
    let (d, n, lambda) = (3, 20_000, 2.0);
    let xm = vec![0.0; d];
    let xp = vec![1.0, 0.0, 0.0];
    let counts = |offset: u64| -> Vec<usize> {
        (0..200)
            .map(|k| {
                let layer = RandomReluLayer::sample(d, n, lambda, derive_seed(offset, k)).unwrap();
                count_separating_neurons(&layer, &xm, &xp).unwrap()
            })
            .collect()
    };
    let mut calib = counts(1);
    calib.sort_unstable();
    let c1 = 2.0 * calib[10] as f64 * lambda / (n as f64 * 1.0);
    let level = expected_separating_neurons(n, 1.0, lambda, c1).unwrap();
    assert!(level > 0);
    let fresh = counts(2);
    let hits = fresh.iter().filter(|&&c| c >= level).count();
    assert!(hits >= 180, "{hits}/200 at n′ = {level} (c₁ = {c1})");
}

#[test]
fn cap_probability_matches_sphere_sampling() {
    for &d in &[3usize, 5, 10] {
        for &m in &[0.1, 0.3, 0.5] {
            let exact = spherical_cap_probability(m, d).unwrap().exact;
            let e = estimate(200_000, derive_seed(d as u64, (m * 10.0) as u64), |rng| {
                let mut v = vec![0.0; d];
                unit_sphere(rng, &mut v);
                if v[0] >= m {
                    1.0
                } else {
                    0.0
                }
            })
            .unwrap();
            assert!(e.within(exact, 3.0), "d={d} m={m}: {} vs {exact}", e.estimate);
        }
    }
}
