//! Deterministic RNG substreams.
//!
//! A master seed expands into independent named streams keyed by
//! `(seed, label, index)`. Trials that run in parallel each own the stream
//! for their index, so thread scheduling never changes results.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::scalar::{real, Complex, Real};

/// 64-bit FNV-1a, used only to fold stream labels into the seed.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Independent, reproducible RNG for `(master seed, label, index)`.
pub fn substream(master: u64, label: &str, index: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master.to_le_bytes());
    seed[8..16].copy_from_slice(&fnv1a64(label.as_bytes()).to_le_bytes());
    seed[16..24].copy_from_slice(&index.to_le_bytes());
    seed[24..].copy_from_slice(&0x9e37_79b9_7f4a_7c15u64.to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

/// Uniform draw from `[0, 1)` in the working scalar.
#[inline]
pub fn uniform_unit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    real(rng.random::<f64>())
}

/// Standard normal draw in the working scalar.
#[inline]
pub fn standard_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    real(StandardNormal.sample(rng))
}

/// Standard complex Gaussian: `(N(0,1) + i N(0,1)) / sqrt(2)`.
#[inline]
pub fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let s = real::<T>(std::f64::consts::FRAC_1_SQRT_2);
    Complex::new(standard_normal::<T, R>(rng) * s, standard_normal::<T, R>(rng) * s)
}
