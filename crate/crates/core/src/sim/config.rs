use std::path::PathBuf;

use serde::Serialize;

use crate::analytics::{significance_threshold, ThresholdSpec};
use crate::error::{Error, Result};
use crate::protocols::{ProtocolKind, ProtocolSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DataSource {
    /// i.i.d. Zipf with exponent `s`; rank 1 is value 0.
    Zipf(f64),
    Uniform,
    /// One base-10 value per line. The population size is the line count.
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ThresholdRule {
    /// Significance threshold at level `alpha` from the protocol's variance.
    Alpha(f64),
    Explicit(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub protocol: ProtocolKind,
    pub theta: Option<f64>,
    pub g: Option<usize>,
    pub epsilon: f64,
    pub d: usize,
    pub n: usize,
    pub source: DataSource,
    pub master_seed: u64,
    pub repetitions: usize,
    /// Defaults to `min(30, d)`.
    pub top_k: Option<usize>,
    pub threshold: ThresholdRule,
}

impl ExperimentConfig {
    pub fn new(protocol: ProtocolKind, epsilon: f64, d: usize, n: usize) -> Self {
        Self {
            protocol,
            theta: None,
            g: None,
            epsilon,
            d,
            n,
            source: DataSource::Zipf(1.1),
            master_seed: 0,
            repetitions: 10,
            top_k: None,
            threshold: ThresholdRule::Alpha(0.05),
        }
    }

    pub fn with_source(mut self, source: DataSource) -> Self {
        self.source = source;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_repetitions(mut self, reps: usize) -> Self {
        self.repetitions = reps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidParameter(
                "repetitions must be at least 1".into(),
            ));
        }
        if self.n == 0 && !matches!(self.source, DataSource::File(_)) {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if let DataSource::Zipf(s) = self.source {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "zipf exponent must be positive, got {s}"
                )));
            }
        }
        if let Some(k) = self.top_k {
            if k == 0 || k > self.d {
                return Err(Error::InvalidParameter(format!(
                    "top-k must lie in [1, d], got {k}"
                )));
            }
        }
        match self.threshold {
            ThresholdRule::Alpha(a) if !(a > 0.0 && a < 1.0) => {
                return Err(Error::InvalidParameter(format!(
                    "alpha must lie in (0, 1), got {a}"
                )))
            }
            ThresholdRule::Explicit(t) if t.is_nan() || t < 0.0 => {
                return Err(Error::InvalidParameter(format!(
                    "threshold must be non-negative, got {t}"
                )))
            }
            _ => {}
        }
        self.spec().map(|_| ())
    }

    pub fn spec(&self) -> Result<ProtocolSpec> {
        let mut spec = ProtocolSpec::new(self.protocol, self.epsilon, self.d)?;
        if let Some(theta) = self.theta {
            spec = spec.with_theta(theta)?;
        }
        if let Some(g) = self.g {
            spec = spec.with_g(g)?;
        }
        Ok(spec)
    }

    pub fn top_k(&self) -> usize {
        self.top_k.unwrap_or(self.d.min(30))
    }

    /// Count threshold for true/false positives over `n` reports.
    pub fn threshold_for(&self, spec: &ProtocolSpec, n: usize) -> Result<f64> {
        match self.threshold {
            ThresholdRule::Explicit(t) => Ok(t),
            ThresholdRule::Alpha(alpha) => {
                let ts = ThresholdSpec::new(alpha, self.d, n as f64, spec.var_star()?)?;
                significance_threshold(&ts)
            }
        }
    }
}
