use serde::Serialize;

use super::normal::inv_normal_cdf;
use crate::error::{Error, Result};

/// Inputs of the Bonferroni-style significance threshold
/// `Phi^{-1}(1 - alpha/d) * sqrt(var_per_user * n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdSpec {
    pub alpha: f64,
    pub d: usize,
    pub n: f64,
    pub var_star_total: f64,
}

impl ThresholdSpec {
    pub fn new(alpha: f64, d: usize, n: f64, var_per_user: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        if d == 0 || n.is_nan() || n < 0.0 || var_per_user.is_nan() || var_per_user <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "threshold needs d >= 1, n >= 0 and a positive variance (d = {d}, n = {n}, var = {var_per_user})"
            )));
        }
        Ok(Self {
            alpha,
            d,
            n,
            var_star_total: var_per_user * n,
        })
    }
}

pub fn significance_threshold(spec: &ThresholdSpec) -> Result<f64> {
    let tail = spec.alpha / spec.d as f64;
    if tail >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha/d = {tail} must be below 1"
        )));
    }
    Ok(inv_normal_cdf(1.0 - tail)? * spec.var_star_total.sqrt())
}
