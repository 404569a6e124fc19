use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The local privacy budget `epsilon`, in nats.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PrivacyBudget(f64);

impl PrivacyBudget {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon.is_finite() && epsilon > 0.0 {
            Ok(Self(epsilon))
        } else {
            Err(Error::InvalidBudget(epsilon))
        }
    }

    #[inline]
    pub fn epsilon(self) -> f64 {
        self.0
    }
}

/// Input domain `{0, ..., d-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Domain(usize);

impl Domain {
    pub fn new(d: usize) -> Result<Self> {
        if d >= 2 {
            Ok(Self(d))
        } else {
            Err(Error::InvalidDomain(d))
        }
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0
    }

    pub fn check(self, value: usize) -> Result<()> {
        if value < self.0 {
            Ok(())
        } else {
            Err(Error::OutOfDomain { value, d: self.0 })
        }
    }
}

/// Support probabilities of a pure protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureParams {
    p_star: f64,
    q_star: f64,
}

impl PureParams {
    pub fn new(p_star: f64, q_star: f64) -> Result<Self> {
        if q_star > 0.0 && q_star < p_star && p_star <= 1.0 {
            Ok(Self { p_star, q_star })
        } else {
            Err(Error::InvalidPureParams { p_star, q_star })
        }
    }

    /// Probability that a report supports the reporting user's own value.
    #[inline]
    pub fn p_star(&self) -> f64 {
        self.p_star
    }

    /// Probability that a report supports some other fixed value.
    #[inline]
    pub fn q_star(&self) -> f64 {
        self.q_star
    }
}

/// One user's perturbed output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Report {
    /// A value in `[d]` (direct encoding) or `[g]`.
    Categorical(usize),
    /// Noisy one-hot histogram of length `d`.
    Histogram(Vec<f64>),
    /// Perturbed one-hot bit vector of length `d`.
    BitVector(Vec<bool>),
    /// Hash function identity plus the perturbed hashed value in `[g]`.
    Hashed { seed: u64, value: usize },
}

impl Report {
    pub fn variant_name(&self) -> &'static str {
        match self {
            Report::Categorical(_) => "categorical",
            Report::Histogram(_) => "histogram",
            Report::BitVector(_) => "bit-vector",
            Report::Hashed { .. } => "hashed",
        }
    }
}

/// Per-value count estimates. Entries may be negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateVector {
    pub estimates: Vec<f64>,
    pub n: u64,
}

impl EstimateVector {
    pub fn len(&self) -> usize {
        self.estimates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.estimates.is_empty()
    }

    /// Post-processing that clamps every estimate into `[0, n]`. The result
    /// is no longer unbiased.
    pub fn clamped(&self) -> EstimateVector {
        let hi = self.n as f64;
        EstimateVector {
            estimates: self.estimates.iter().map(|e| e.clamp(0.0, hi)).collect(),
            n: self.n,
        }
    }
}
