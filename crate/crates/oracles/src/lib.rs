//! Reference computations that the `sepcap` test suites compare against.
//!
//! Plain quadrature, exhaustive grids and closed-form moments, sharing no
//! code with `sepcap-core`.

use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::{PI, SQRT_2};

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrates a piecewise-smooth `f` by splitting `[a, b]` at `cuts`.
pub fn integrate_with_cuts<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cuts: &[f64], tol: f64) -> f64 {
    let mut knots: Vec<f64> = vec![a];
    knots.extend(cuts.iter().copied().filter(|c| *c > a && *c < b));
    knots.push(b);
    knots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let pieces = (knots.len() - 1) as f64;
    knots
        .windows(2)
        .map(|w| adaptive_simpson(f, w[0], w[1], tol / pieces))
        .sum()
}

/// `E[ReLU(a + tau) ReLU(b + tau)]` for `tau ~ U[-lambda, lambda]`, by quadrature.
pub fn dithered_relu_kernel(a: f64, b: f64, lambda: f64) -> f64 {
    let f = |s: f64| (a + s).max(0.0) * (b + s).max(0.0) / (2.0 * lambda);
    integrate_with_cuts(&f, -lambda, lambda, &[-a, -b], 1e-13)
}

/// Standard normal upper tail `P(g > x)`.
pub fn normal_tail(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

/// Probability that `H_tau[g]` t-separates `0` from `delta` in one dimension,
/// with `g ~ N(0,1)` and `tau ~ U[-lambda, lambda]`.
///
/// The event is `tau <= -t` and `g * delta + tau > t`.
pub fn two_point_separation_probability(delta: f64, lambda: f64, t: f64) -> f64 {
    if t >= lambda {
        return 0.0;
    }
    let f = |tau: f64| normal_tail((t - tau) / delta);
    adaptive_simpson(&f, -lambda, -t, 1e-14) / (2.0 * lambda)
}

/// `E|g|` for a standard normal `g`.
pub fn half_normal_mean() -> f64 {
    (2.0 / PI).sqrt()
}

/// `E||g||_2` for `g ~ N(0, I_d)`.
pub fn chi_mean(d: usize) -> f64 {
    let d = d as f64;
    SQRT_2 * (ln_gamma((d + 1.0) / 2.0) - ln_gamma(d / 2.0)).exp()
}

fn dot2(u: (f64, f64), p: &[f64]) -> f64 {
    u.0 * p[0] + u.1 * p[1]
}

/// Half the distance between the convex hulls of two planar point sets,
/// from a dense scan of directions followed by golden-section polishing.
///
/// Returns `0.0` when no direction separates the hulls.
pub fn planar_margin_by_direction_grid(a: &[Vec<f64>], b: &[Vec<f64>], grid: usize) -> f64 {
    let gap = |angle: f64| {
        let u = (angle.cos(), angle.sin());
        let max_a = a.iter().map(|p| dot2(u, p)).fold(f64::NEG_INFINITY, f64::max);
        let min_b = b.iter().map(|p| dot2(u, p)).fold(f64::INFINITY, f64::min);
        min_b - max_a
    };
    let step = 2.0 * PI / grid as f64;
    let (mut best_angle, mut best) = (0.0, f64::NEG_INFINITY);
    for k in 0..grid {
        let angle = k as f64 * step;
        let g = gap(angle);
        if g > best {
            best = g;
            best_angle = angle;
        }
    }
    // The gap is concave in the direction wherever it is positive.
    let (mut lo, mut hi) = (best_angle - step, best_angle + step);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if gap(m1) < gap(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let polished = gap(0.5 * (lo + hi)).max(best);
    (polished / 2.0).max(0.0)
}

/// Best narrowness value `max_u min_pairs <u, (p - q)/|p - q|>` over a grid of
/// `grid` unit directions in the plane.
pub fn planar_narrowness_by_grid(minus: &[Vec<f64>], plus: &[Vec<f64>], grid: usize) -> (f64, (f64, f64)) {
    let mut dirs = Vec::new();
    for p in plus {
        for q in minus {
            let dx = p[0] - q[0];
            let dy = p[1] - q[1];
            let n = (dx * dx + dy * dy).sqrt();
            dirs.push((dx / n, dy / n));
        }
    }
    let mut best = (f64::NEG_INFINITY, (0.0, 0.0));
    for k in 0..grid {
        let angle = 2.0 * PI * k as f64 / grid as f64;
        let u = (angle.cos(), angle.sin());
        let v = dirs
            .iter()
            .map(|d| u.0 * d.0 + u.1 * d.1)
            .fold(f64::INFINITY, f64::min);
        if v > best.0 {
            best = (v, u);
        }
    }
    best
}

/// Smallest distance between `conv(a)` and `conv(b)` over a barycentric grid,
/// for two-point hulls in the plane. Used to confirm hull intersections.
pub fn segment_pair_distance_by_grid(a: [[f64; 2]; 2], b: [[f64; 2]; 2], steps: usize) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..=steps {
        let s = i as f64 / steps as f64;
        let pa = [a[0][0] * (1.0 - s) + a[1][0] * s, a[0][1] * (1.0 - s) + a[1][1] * s];
        for j in 0..=steps {
            let r = j as f64 / steps as f64;
            let pb = [b[0][0] * (1.0 - r) + b[1][0] * r, b[0][1] * (1.0 - r) + b[1][1] * r];
            let d = ((pa[0] - pb[0]).powi(2) + (pa[1] - pb[1]).powi(2)).sqrt();
            best = best.min(d);
        }
    }
    best
}

/// Probability that a uniform point on `S^2` has first coordinate `>= m`.
///
/// On the two-sphere the height is uniform on `[-1, 1]` (Archimedes).
pub fn sphere2_cap(m: f64) -> f64 {
    (1.0 - m) / 2.0
}
