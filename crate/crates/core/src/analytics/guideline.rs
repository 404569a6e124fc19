use std::str::FromStr;

use serde::Serialize;

use super::variance::analytic_var;
use crate::error::{Error, Result};
use crate::framework::PrivacyBudget;
use crate::protocols::ProtocolKind;

/// Whether `Theta(d)` bits per report are acceptable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommBudget {
    Unbounded,
    Logarithmic,
}

impl FromStr for CommBudget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unbounded" => Ok(CommBudget::Unbounded),
            "logarithmic" | "log" => Ok(CommBudget::Logarithmic),
            _ => Err(Error::InvalidParameter(format!(
                "unknown communication budget '{s}'"
            ))),
        }
    }
}

/// DE below `d = 3e^eps + 2`, otherwise OUE or, when reports must stay
/// small, OLH.
pub fn choose_protocol(epsilon: PrivacyBudget, d: usize, comm: CommBudget) -> ProtocolKind {
    if (d as f64) < 3.0 * epsilon.epsilon().exp() + 2.0 {
        ProtocolKind::De
    } else {
        match comm {
            CommBudget::Unbounded => ProtocolKind::Oue,
            CommBudget::Logarithmic => ProtocolKind::Olh,
        }
    }
}

/// `T1 / T2`: the threshold when every user answers two questions at budget
/// `eps/2`, over the threshold when half the users answer each question at
/// the full budget. Uses the continuous OLH variance; the normal quantile
/// cancels.
pub fn split_ratio(epsilon: PrivacyBudget) -> f64 {
    let e = epsilon.epsilon();
    let var = |x: f64| analytic_var(ProtocolKind::Olh, x, 2).expect("positive budget");
    (2.0 * var(e / 2.0) / var(e)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitVerdict {
    SplitPopulation,
    SplitBudget,
}

/// Splitting the population doubles the expected counts per question, so it
/// wins whenever `T1 > 2 T2`.
pub fn split_verdict(ratio: f64) -> SplitVerdict {
    if ratio > 2.0 {
        SplitVerdict::SplitPopulation
    } else {
        SplitVerdict::SplitBudget
    }
}
