//! Seeded counting noise.
//!
//! Each scan point gets its own ChaCha8 stream derived from the run seed
//! and the point index, so sampling is independent of evaluation order
//! and identical on every platform. Poisson deviates use Knuth's
//! product-of-uniforms method below a mean of 30 and exact additive
//! splitting above it, which keeps the sampler free of transcendental
//! rejection steps.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math;

/// Identifier recorded in output metadata for reproducibility.
pub const RNG_ALGORITHM: &str = "chacha8/knuth-split";

const KNUTH_LIMIT: f64 = 30.0;
const DOMAIN_TAG: u64 = 0x7472_6970_686f_746f;

/// The per-point RNG stream for (run seed, point index).
pub fn point_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    key[16..24].copy_from_slice(&DOMAIN_TAG.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

fn knuth(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    let limit = math::exp(-mean);
    let mut count = 0u64;
    let mut product = 1.0;
    loop {
        product *= uniform(rng);
        if product <= limit {
            return count;
        }
        count += 1;
    }
}

/// One Poisson deviate with the given mean.
pub fn sample_poisson(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    assert!(mean.is_finite() && mean >= 0.0, "Poisson mean must be ≥ 0");
    if mean == 0.0 {
        return 0;
    }
    if mean <= KNUTH_LIMIT {
        return knuth(rng, mean);
    }
    // Poisson(λ) = Σ Poisson(λ/k) exactly, for any split.
    let chunks = (mean / KNUTH_LIMIT) as u64 + 1;
    let part = mean / chunks as f64;
    (0..chunks).map(|_| knuth(rng, part)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_mean_yields_zero_counts() {
        let mut rng = point_rng(7, 0);
        for _ in 0..100 {
            assert_eq!(sample_poisson(&mut rng, 0.0), 0);
        }
    }

    #[test]
    fn identical_seeds_yield_identical_streams() {
        let draw = |seed, index| {
            let mut rng = point_rng(seed, index);
            (0..32)
                .map(|_| sample_poisson(&mut rng, 184.0))
                .collect::<alloc::vec::Vec<u64>>()
        };
        assert_eq!(draw(42, 3), draw(42, 3));
        assert_ne!(draw(42, 3), draw(42, 4));
        assert_ne!(draw(42, 3), draw(43, 3));
    }

    #[test]
    fn background_mean_is_unbiased() {
        // Mean 120 over 10⁴ streams: the sample mean must sit within
        // three standard errors, SE = √(120/10⁴).
        let mean = 120.0;
        let runs = 10_000u64;
        let mut total = 0u64;
        for seed in 0..runs {
            let mut rng = point_rng(seed, 0);
            total += sample_poisson(&mut rng, mean);
        }
        let sample_mean = total as f64 / runs as f64;
        let standard_error = math::sqrt(mean / runs as f64);
        assert!(
            math::abs(sample_mean - mean) < 3.0 * standard_error,
            "sample mean {sample_mean} vs {mean} ± {standard_error}"
        );
    }

    #[test]
    fn variance_tracks_the_mean() {
        let mean = 45.0;
        let runs = 10_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for seed in 0..runs {
            let mut rng = point_rng(seed, 1);
            let x = sample_poisson(&mut rng, mean) as f64;
            sum += x;
            sum_sq += x * x;
        }
        let n = runs as f64;
        let variance = sum_sq / n - (sum / n) * (sum / n);
        assert!(
            math::abs(variance - mean) < 0.1 * mean,
            "variance {variance} should track the mean {mean}"
        );
    }
}
