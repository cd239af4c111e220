//! Deterministic random streams.
//!
//! Every random quantity in the crate is drawn from ChaCha8 keyed by a 64-bit
//! seed. Independent sub-streams (estimator chunks, trials, layers) are
//! obtained either from the ChaCha stream selector or from [`derive_seed`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `stream` of the generator keyed by `seed`.
pub fn rng_for_stream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for sub-task `tag` of a run keyed by `seed`.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag.wrapping_add(0x5EED)))
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn fill_gaussian<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    for x in out {
        *x = rng.sample(StandardNormal);
    }
}

/// Uniform on `[-half_width, half_width]`; exactly zero when `half_width == 0`.
pub fn uniform_symmetric<R: Rng + ?Sized>(rng: &mut R, half_width: f64) -> f64 {
    let u: f64 = rng.random();
    half_width * (2.0 * u - 1.0)
}

/// Uniform point on the unit sphere `S^{d-1}` (normalized Gaussian).
pub fn unit_sphere<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        fill_gaussian(rng, out);
        let n = crate::geometry::norm(out);
        if n > 1e-300 {
            out.iter_mut().for_each(|x| *x /= n);
            return;
        }
    }
}

/// Uniform point in the ball of radius `radius` centred at the origin.
pub fn unit_ball<R: Rng + ?Sized>(rng: &mut R, radius: f64, out: &mut [f64]) {
    unit_sphere(rng, out);
    let u: f64 = rng.random();
    let r = radius * u.powf(1.0 / out.len() as f64);
    out.iter_mut().for_each(|x| *x *= r);
}
