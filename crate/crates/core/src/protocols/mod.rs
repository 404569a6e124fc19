//! The seven frequency-oracle protocols.
//!
//! | kind | report | support of a report |
//! |------|--------|---------------------|
//! | DE   | value in `[d]` | the value itself |
//! | SHE  | noisy histogram | none (summed directly) |
//! | THE  | noisy histogram | entries above `theta` |
//! | SUE, OUE | bit vector | set bits |
//! | BLH, OLH | `(seed, y)` | values hashing to `y` |

pub mod direct;
pub mod hashing;
pub mod histogram;
pub mod privacy;
pub mod unary;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{self, Domain, EstimateVector, PrivacyBudget, PureParams, Report};

pub use hashing::{lh_hash, olh_g, HashFunctionId};
pub use histogram::{laplace_sample, she_aggregate, the_optimal_theta, the_params};
pub use unary::{ue_params, ue_perturb};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    De,
    She,
    The,
    Sue,
    Oue,
    Blh,
    Olh,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 7] = [
        ProtocolKind::De,
        ProtocolKind::She,
        ProtocolKind::The,
        ProtocolKind::Sue,
        ProtocolKind::Oue,
        ProtocolKind::Blh,
        ProtocolKind::Olh,
    ];

    /// Every kind except SHE.
    pub const PURE: [ProtocolKind; 6] = [
        ProtocolKind::De,
        ProtocolKind::The,
        ProtocolKind::Sue,
        ProtocolKind::Oue,
        ProtocolKind::Blh,
        ProtocolKind::Olh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::De => "de",
            ProtocolKind::She => "she",
            ProtocolKind::The => "the",
            ProtocolKind::Sue => "sue",
            ProtocolKind::Oue => "oue",
            ProtocolKind::Blh => "blh",
            ProtocolKind::Olh => "olh",
        }
    }

    pub fn is_pure(self) -> bool {
        self != ProtocolKind::She
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name().to_uppercase())
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProtocolKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown protocol '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mechanism {
    /// Generalized randomized response over `[d]`.
    Direct {
        p: f64,
        q: f64,
    },
    /// Laplace noise of the given scale on a one-hot histogram.
    Histogram {
        scale: f64,
        theta: f64,
    },
    Unary {
        p: f64,
        q: f64,
    },
    /// Randomized response over `[g]` after a per-user hash.
    Hashed {
        g: usize,
        p: f64,
        q: f64,
    },
}

/// A protocol instance: kind, budget, domain and the derived perturbation
/// parameters. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolSpec {
    kind: ProtocolKind,
    epsilon: PrivacyBudget,
    domain: Domain,
    exp_eps: f64,
    mechanism: Mechanism,
}

impl ProtocolSpec {
    /// Builds `kind` with its default parameters: the optimal `theta` for
    /// THE and `g = max(2, round(e^eps) + 1)` for OLH.
    pub fn new(kind: ProtocolKind, epsilon: f64, d: usize) -> Result<Self> {
        let epsilon = PrivacyBudget::new(epsilon)?;
        let domain = Domain::new(d)?;
        let eps = epsilon.epsilon();
        let exp_eps = eps.exp();
        let mechanism = match kind {
            ProtocolKind::De => {
                let (p, q) = direct::de_params(exp_eps, d);
                Mechanism::Direct { p, q }
            }
            ProtocolKind::She => Mechanism::Histogram {
                scale: 2.0 / eps,
                theta: f64::NAN,
            },
            ProtocolKind::The => Mechanism::Histogram {
                scale: 2.0 / eps,
                theta: the_optimal_theta(epsilon),
            },
            ProtocolKind::Sue | ProtocolKind::Oue => {
                let (p, q) = ue_params(kind, epsilon)?;
                Mechanism::Unary { p, q }
            }
            ProtocolKind::Blh => hashed(exp_eps, 2),
            ProtocolKind::Olh => hashed(exp_eps, olh_g(epsilon)),
        };
        Ok(Self {
            kind,
            epsilon,
            domain,
            exp_eps,
            mechanism,
        })
    }

    /// Overrides the THE threshold. Requires `0.5 < theta <= 1`.
    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        match &mut self.mechanism {
            Mechanism::Histogram { theta: t, .. } if self.kind == ProtocolKind::The => {
                if !(theta > 0.5 && theta <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "theta must lie in (0.5, 1], got {theta}"
                    )));
                }
                *t = theta;
                Ok(self)
            }
            _ => Err(Error::InvalidParameter(format!(
                "--theta applies to THE only, not {}",
                self.kind
            ))),
        }
    }

    /// Overrides the OLH hash range. BLH is fixed at `g = 2`.
    pub fn with_g(mut self, g: usize) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidParameter(format!(
                "g must be at least 2, got {g}"
            )));
        }
        match self.kind {
            ProtocolKind::Olh => {
                self.mechanism = hashed(self.exp_eps, g);
                Ok(self)
            }
            ProtocolKind::Blh if g == 2 => Ok(self),
            _ => Err(Error::InvalidParameter(format!(
                "g = {g} is not valid for {}",
                self.kind
            ))),
        }
    }

    /// Replaces the randomized-response probabilities of a DE, UE or LH
    /// instance without any privacy validation. Test hook for negative
    /// controls of the privacy check.
    pub fn with_raw_probabilities(mut self, p: f64, q: f64) -> Result<Self> {
        if !((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q)) {
            return Err(Error::InvalidParameter(format!(
                "probabilities must lie in [0, 1], got p = {p}, q = {q}"
            )));
        }
        match &mut self.mechanism {
            Mechanism::Direct { p: pp, q: qq }
            | Mechanism::Unary { p: pp, q: qq }
            | Mechanism::Hashed { p: pp, q: qq, .. } => {
                *pp = p;
                *qq = q;
                Ok(self)
            }
            Mechanism::Histogram { .. } => Err(Error::InvalidParameter(format!(
                "{} has no (p, q) to override",
                self.kind
            ))),
        }
    }

    pub fn kind(&self) -> ProtocolKind {
        self.kind
    }

    pub fn epsilon(&self) -> PrivacyBudget {
        self.epsilon
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Cached `e^epsilon`.
    pub fn exp_eps(&self) -> f64 {
        self.exp_eps
    }

    /// THE threshold, if this is THE.
    pub fn theta(&self) -> Option<f64> {
        match self.mechanism {
            Mechanism::Histogram { theta, .. } if self.kind == ProtocolKind::The => Some(theta),
            _ => None,
        }
    }

    /// Hash range for BLH/OLH.
    pub fn g(&self) -> Option<usize> {
        match self.mechanism {
            Mechanism::Hashed { g, .. } => Some(g),
            _ => None,
        }
    }

    /// Laplace scale of the histogram encodings.
    pub fn noise_scale(&self) -> Option<f64> {
        match self.mechanism {
            Mechanism::Histogram { scale, .. } => Some(scale),
            _ => None,
        }
    }

    /// Randomized-response probabilities `(p, q)`: keep probability and the
    /// probability of each specific other output (DE, LH) or of a 0 bit
    /// flipping to 1 (UE).
    pub fn rr_probabilities(&self) -> Option<(f64, f64)> {
        match self.mechanism {
            Mechanism::Direct { p, q }
            | Mechanism::Unary { p, q }
            | Mechanism::Hashed { p, q, .. } => Some((p, q)),
            Mechanism::Histogram { .. } => None,
        }
    }

    /// `(p*, q*)` for the estimator. SHE is not pure and returns an error.
    pub fn pure_params(&self) -> Result<PureParams> {
        match self.mechanism {
            Mechanism::Direct { p, q } | Mechanism::Unary { p, q } => PureParams::new(p, q),
            Mechanism::Histogram { theta, .. } => match self.kind {
                ProtocolKind::The => {
                    let (p, q) = the_params(self.epsilon, theta);
                    PureParams::new(p, q)
                }
                _ => Err(Error::NotPure(self.kind)),
            },
            Mechanism::Hashed { g, p, .. } => PureParams::new(p, 1.0 / g as f64),
        }
    }

    /// Per-user variance factor of the estimator for this instance.
    pub fn var_star(&self) -> Result<f64> {
        match self.kind {
            ProtocolKind::She => Ok(histogram::she_var_per_user(self.epsilon)),
            _ => Ok(framework::var_star(self.pure_params()?)),
        }
    }

    /// Encodes and perturbs one user's value.
    pub fn perturb<R: Rng + ?Sized>(&self, value: usize, rng: &mut R) -> Result<Report> {
        self.domain.check(value)?;
        let d = self.domain.size();
        Ok(match self.mechanism {
            Mechanism::Direct { p, .. } => Report::Categorical(direct::grr(value, d, p, rng)),
            Mechanism::Histogram { scale, .. } => {
                Report::Histogram(histogram::encode_perturb_with(value, d, || {
                    laplace_sample(rng, scale)
                }))
            }
            Mechanism::Unary { p, q } => Report::BitVector(ue_perturb(value, d, p, q, rng)),
            Mechanism::Hashed { g, p, .. } => {
                let (seed, value) = hashing::lh_encode_perturb(value, g, p, rng);
                Report::Hashed { seed, value }
            }
        })
    }

    /// Whether `report` supports `value`.
    pub fn supports(&self, report: &Report, value: usize) -> Result<bool> {
        self.domain.check(value)?;
        let d = self.domain.size();
        match (self.mechanism, report) {
            (Mechanism::Direct { .. }, Report::Categorical(y)) => Ok(*y == value),
            (Mechanism::Histogram { theta, .. }, Report::Histogram(h))
                if self.kind == ProtocolKind::The =>
            {
                check_len(d, h.len())?;
                Ok(h[value] > theta)
            }
            (Mechanism::Unary { .. }, Report::BitVector(b)) => {
                check_len(d, b.len())?;
                Ok(b[value])
            }
            (Mechanism::Hashed { g, .. }, Report::Hashed { seed, value: y }) => {
                Ok(lh_hash(HashFunctionId(*seed), value, g) == *y)
            }
            (Mechanism::Histogram { .. }, Report::Histogram(_)) => Err(Error::NotPure(self.kind)),
            _ => Err(Error::VariantMismatch(self.kind)),
        }
    }

    /// Adds one to `counts[i]` for every value `i` that `report` supports.
    pub fn accumulate_support(&self, report: &Report, counts: &mut [u64]) -> Result<()> {
        let d = self.domain.size();
        check_len(d, counts.len())?;
        match (self.mechanism, report) {
            (Mechanism::Direct { .. }, Report::Categorical(y)) => {
                self.domain.check(*y)?;
                counts[*y] += 1;
            }
            (Mechanism::Histogram { theta, .. }, Report::Histogram(h))
                if self.kind == ProtocolKind::The =>
            {
                check_len(d, h.len())?;
                for (c, &x) in counts.iter_mut().zip(h) {
                    *c += u64::from(x > theta);
                }
            }
            (Mechanism::Unary { .. }, Report::BitVector(b)) => {
                check_len(d, b.len())?;
                for (c, &bit) in counts.iter_mut().zip(b) {
                    *c += u64::from(bit);
                }
            }
            (Mechanism::Hashed { g, .. }, Report::Hashed { seed, value }) => {
                hashing::accumulate(HashFunctionId(*seed), *value, g, counts);
            }
            (Mechanism::Histogram { .. }, Report::Histogram(_)) => {
                return Err(Error::NotPure(self.kind));
            }
            _ => return Err(Error::VariantMismatch(self.kind)),
        }
        Ok(())
    }

    /// Full-domain estimates from a batch of reports: the generic estimator
    /// for pure protocols and a plain sum for SHE.
    pub fn aggregate(&self, reports: &[Report]) -> Result<EstimateVector> {
        if self.kind == ProtocolKind::She {
            return she_aggregate(reports, self.domain.size());
        }
        let counts = framework::support_count(reports, self)?;
        framework::estimate(&counts, reports.len() as u64, self.pure_params()?)
    }
}

fn hashed(exp_eps: f64, g: usize) -> Mechanism {
    let denom = exp_eps + g as f64 - 1.0;
    Mechanism::Hashed {
        g,
        p: exp_eps / denom,
        q: 1.0 / denom,
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}
