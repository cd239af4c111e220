use sepcap_oracles::*;
use std::f64::consts::PI;

#[test]
fn simpson_integrates_polynomials() {
    let v = adaptive_simpson(&|x: f64| x * x, 0.0, 3.0, 1e-12);
    assert!((v - 9.0).abs() < 1e-10);
}

#[test]
fn kernel_at_origin() {
    assert!((dithered_relu_kernel(0.0, 0.0, 1.0) - 1.0 / 6.0).abs() < 1e-12);
}

#[test]
fn chi_means() {
    assert!((chi_mean(1) - half_normal_mean()).abs() < 1e-12);
    assert!((chi_mean(2) - (PI / 2.0).sqrt()).abs() < 1e-12);
    assert!((chi_mean(3) - 2.0 * (2.0 / PI).sqrt()).abs() < 1e-12);
}

#[test]
fn two_point_probability_matches_reference() {
    // scipy.integrate.quad reference
    let p = two_point_separation_probability(1.0, 10.0, 1.0);
    assert!((p - 4.2453513084148183e-4).abs() < 1e-12);
}
