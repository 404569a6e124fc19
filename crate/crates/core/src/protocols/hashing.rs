//! Local hashing: each user draws a private hash `H: [d] -> [g]` (identified
//! by a 64-bit seed) and reports `(seed, GRR(H(v)))`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::direct::grr;
use crate::framework::PrivacyBudget;

/// Identity of one member of the hash family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HashFunctionId(pub u64);

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Maps a 64-bit word onto `[g]` by widening multiply; per-bucket bias is at
/// most `g / 2^64`.
#[inline]
fn reduce(h: u64, g: usize) -> usize {
    ((h as u128 * g as u128) >> 64) as usize
}

#[inline]
fn keyed(key: u64, v: usize) -> u64 {
    mix64(key ^ (v as u64).wrapping_mul(GOLDEN))
}

/// Evaluates the hash function `seed` at `v`, giving a value in `[g]`.
#[inline]
pub fn lh_hash(seed: HashFunctionId, v: usize, g: usize) -> usize {
    reduce(keyed(mix64(seed.0), v), g)
}

/// OLH hash range: `max(2, round(e^eps) + 1)`.
pub fn olh_g(epsilon: PrivacyBudget) -> usize {
    let g = epsilon.epsilon().exp().round() + 1.0;
    (g as usize).max(2)
}

/// Draws a fresh hash seed and perturbs the hashed value. Returns `(seed, y)`.
pub fn lh_encode_perturb<R: Rng + ?Sized>(v: usize, g: usize, p: f64, rng: &mut R) -> (u64, usize) {
    let seed: u64 = rng.random();
    let x = lh_hash(HashFunctionId(seed), v, g);
    (seed, grr(x, g, p, rng))
}

/// Adds one to `counts[v]` for every `v` with `H_seed(v) = y`.
pub fn accumulate(seed: HashFunctionId, y: usize, g: usize, counts: &mut [u64]) {
    let key = mix64(seed.0);
    for (v, c) in counts.iter_mut().enumerate() {
        *c += u64::from(reduce(keyed(key, v), g) == y);
    }
}
