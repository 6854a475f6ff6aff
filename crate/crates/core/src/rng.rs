//! Seeded random sources shared by every sampler in the crate.
//!
//! All randomness flows from a single `u64` seed. Sub-streams (per Monte
//! Carlo chunk, per mixture component, per check) are derived with a
//! SplitMix64 step so that results never depend on thread scheduling.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent child seed from `seed` and a stream index.
pub fn derive(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform point on the unit sphere from two uniforms (inverse CDF in z,
/// uniform azimuth).
pub fn uniform_sphere(rng: &mut Rng) -> [f64; 3] {
    let z: f64 = 1.0 - 2.0 * rng.random::<f64>();
    let phi = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Uniform in `[0, 1)`.
pub fn unit_interval(rng: &mut Rng) -> f64 {
    rng.random::<f64>()
}

pub fn standard_normal(rng: &mut Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn index(rng: &mut Rng, n: usize) -> usize {
    rng.random_range(0..n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_streams_differ() {
        assert_ne!(derive(7, 0), derive(7, 1));
        assert_ne!(derive(7, 0), derive(8, 0));
        assert_eq!(derive(7, 3), derive(7, 3));
    }

    #[test]
    fn sphere_points_are_unit_and_unbiased() {
        let mut rng = seeded(1);
        let n = 200_000;
        let mut mean = [0.0; 3];
        let mut zz = 0.0;
        for _ in 0..n {
            let p = uniform_sphere(&mut rng);
            let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            for i in 0..3 {
                mean[i] += p[i] / n as f64;
            }
            zz += p[2] * p[2] / n as f64;
        }
        for m in mean {
            assert!(m.abs() < 0.01);
        }
        // E[z^2] = 1/3 for the uniform sphere.
        assert!((zz - 1.0 / 3.0).abs() < 0.005);
    }
}
