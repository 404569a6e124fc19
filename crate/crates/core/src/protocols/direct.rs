//! Direct encoding: generalized randomized response over the domain.

use rand::Rng;

/// `(p, q)` for randomized response over `k` values with budget `ln(exp_eps)`.
pub fn de_params(exp_eps: f64, k: usize) -> (f64, f64) {
    let denom = exp_eps + k as f64 - 1.0;
    (exp_eps / denom, 1.0 / denom)
}

/// Keeps `x` with probability `p`, otherwise returns one of the other `k - 1`
/// values uniformly.
#[inline]
pub fn grr<R: Rng + ?Sized>(x: usize, k: usize, p: f64, rng: &mut R) -> usize {
    if rng.random_bool(p.clamp(0.0, 1.0)) {
        x
    } else {
        let y = rng.random_range(0..k - 1);
        if y >= x {
            y + 1
        } else {
            y
        }
    }
}
