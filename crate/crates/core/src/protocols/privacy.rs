//! Exhaustive epsilon-LDP verification.
//!
//! For discrete outputs the worst-case likelihood ratio is
//! `max_y max_v Pr[y|v] / min_v Pr[y|v]`, which equals the maximum over all
//! `(v1, v2, y)` triples. Local hashing is checked conditionally on each of a
//! fixed set of hash seeds. Histogram encodings have continuous outputs and
//! are checked on a grid of output points with the exact Laplace density.

use serde::Serialize;

use super::hashing::{lh_hash, HashFunctionId};
use super::{Mechanism, ProtocolKind, ProtocolSpec};
use crate::error::{Error, Result};

pub const MAX_DIRECT_D: usize = 12;
pub const MAX_UNARY_D: usize = 4;
pub const MAX_HISTOGRAM_D: usize = 4;
pub const MAX_HASHED_D: usize = 1 << 16;
/// Seeds enumerated by the conditional local-hashing check.
pub const HASH_SEEDS: u64 = 256;
/// Relative slack on `e^eps` that absorbs floating-point rounding.
pub const RATIO_SLACK: f64 = 1e-9;

const HISTOGRAM_GRID: [f64; 9] = [-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0];

#[derive(Debug, Clone, Serialize)]
pub struct PrivacyCheck {
    pub protocol: ProtocolKind,
    pub epsilon: f64,
    pub d: usize,
    pub max_ratio: f64,
    pub bound: f64,
    pub outputs_checked: u64,
    pub mode: &'static str,
    pub passed: bool,
}

/// Worst-case `Pr[y|v1] / Pr[y|v2]` for the given likelihood rows.
fn worst_ratio<I>(outputs: I) -> f64
where
    I: IntoIterator<Item = (f64, f64)>,
{
    outputs
        .into_iter()
        .map(|(hi, lo)| {
            if hi == 0.0 {
                1.0
            } else if lo == 0.0 {
                f64::INFINITY
            } else {
                hi / lo
            }
        })
        .fold(1.0, f64::max)
}

fn min_max<I: IntoIterator<Item = f64>>(it: I) -> (f64, f64) {
    it.into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        })
}

/// Runs the exhaustive check for `spec` and compares against `e^eps (1 + 1e-9)`.
pub fn check_privacy(spec: &ProtocolSpec) -> Result<PrivacyCheck> {
    let d = spec.domain().size();
    let refuse = |limit: usize, what: &str| {
        Err(Error::InvalidParameter(format!(
            "d = {d} is too large for exhaustive {what} enumeration (limit {limit}); \
             rerun with --d {limit} or smaller, the check does not depend on d beyond that"
        )))
    };
    let (max_ratio, outputs_checked, mode) = match spec.mechanism {
        Mechanism::Direct { p, q } => {
            if d > MAX_DIRECT_D {
                return refuse(MAX_DIRECT_D, "direct-encoding");
            }
            let ratio = worst_ratio((0..d).map(|y| {
                let (lo, hi) = min_max((0..d).map(|v| if v == y { p } else { q }));
                (hi, lo)
            }));
            (ratio, d as u64, "exhaustive")
        }
        Mechanism::Unary { p, q } => {
            if d > MAX_UNARY_D {
                return refuse(MAX_UNARY_D, "unary-encoding");
            }
            let ratio = worst_ratio((0u32..1 << d).map(|bits| {
                let (lo, hi) = min_max((0..d).map(|v| {
                    (0..d)
                        .map(|i| {
                            let one = if i == v { p } else { q };
                            if bits >> i & 1 == 1 {
                                one
                            } else {
                                1.0 - one
                            }
                        })
                        .product::<f64>()
                }));
                (hi, lo)
            }));
            (ratio, 1u64 << d, "exhaustive")
        }
        Mechanism::Hashed { g, p, q } => {
            if d > MAX_HASHED_D {
                return refuse(MAX_HASHED_D, "local-hashing");
            }
            let mut ratio: f64 = 1.0;
            let mut hashes = vec![0usize; d];
            for s in 0..HASH_SEEDS {
                let seed = HashFunctionId(s.wrapping_mul(0x9e37_79b9_7f4a_7c15));
                for (v, h) in hashes.iter_mut().enumerate() {
                    *h = lh_hash(seed, v, g);
                }
                let mut hit = vec![false; g];
                for &h in &hashes {
                    hit[h] = true;
                }
                let distinct = hit.iter().filter(|&&x| x).count();
                // Pr[y|v] is p when H(v) = y and q otherwise
                ratio = ratio.max(worst_ratio((0..g).map(|y| {
                    let hi = if hit[y] { p } else { q };
                    let lo = if hit[y] && distinct == 1 { p } else { q };
                    (hi.max(lo), hi.min(lo))
                })));
            }
            (ratio, HASH_SEEDS * g as u64, "conditional-per-seed")
        }
        Mechanism::Histogram { scale, .. } => {
            if d > MAX_HISTOGRAM_D {
                return refuse(MAX_HISTOGRAM_D, "histogram grid");
            }
            let k = HISTOGRAM_GRID.len();
            let points = k.pow(d as u32);
            let mut log_ratio: f64 = 0.0;
            let mut y = vec![0.0; d];
            for idx in 0..points {
                let mut rest = idx;
                for yi in y.iter_mut() {
                    *yi = HISTOGRAM_GRID[rest % k];
                    rest /= k;
                }
                // log density up to a constant shared by every input
                let (lo, hi) = min_max((0..d).map(|v| {
                    -y.iter()
                        .enumerate()
                        .map(|(i, &yi)| (yi - if i == v { 1.0 } else { 0.0 }).abs())
                        .sum::<f64>()
                        / scale
                }));
                log_ratio = log_ratio.max(hi - lo);
            }
            (log_ratio.exp(), points as u64, "grid-density")
        }
    };
    let bound = spec.exp_eps() * (1.0 + RATIO_SLACK);
    Ok(PrivacyCheck {
        protocol: spec.kind(),
        epsilon: spec.epsilon().epsilon(),
        d,
        max_ratio,
        bound,
        outputs_checked,
        mode,
        passed: max_ratio <= bound,
    })
}
