//! Unary encoding: one-hot bit vector, each bit perturbed independently.

use rand::distr::{Bernoulli, Distribution};
use rand::Rng;

use super::ProtocolKind;
use crate::error::{Error, Result};
use crate::framework::PrivacyBudget;

/// `(p, q)` for SUE (symmetric, `p + q = 1`) or OUE (`p = 1/2`, `q = 1/(e^eps + 1)`).
pub fn ue_params(kind: ProtocolKind, epsilon: PrivacyBudget) -> Result<(f64, f64)> {
    let e = epsilon.epsilon();
    match kind {
        ProtocolKind::Sue => {
            let h = (e / 2.0).exp();
            Ok((h / (h + 1.0), 1.0 / (h + 1.0)))
        }
        ProtocolKind::Oue => Ok((0.5, 1.0 / (e.exp() + 1.0))),
        other => Err(Error::InvalidParameter(format!(
            "{other} is not a unary-encoding protocol"
        ))),
    }
}

/// Bit `v` is set with probability `p`, every other bit with probability `q`.
pub fn ue_perturb<R: Rng + ?Sized>(v: usize, d: usize, p: f64, q: f64, rng: &mut R) -> Vec<bool> {
    let keep = Bernoulli::new(p.clamp(0.0, 1.0)).expect("p clamped to [0, 1]");
    let flip = Bernoulli::new(q.clamp(0.0, 1.0)).expect("q clamped to [0, 1]");
    (0..d)
        .map(|i| {
            if i == v {
                keep.sample(rng)
            } else {
                flip.sample(rng)
            }
        })
        .collect()
}
