//! The pure-protocol framework: domain types shared by every protocol and the
//! generic unbiased estimator built on a protocol's `(p*, q*)` pair.
//!
//! A protocol is *pure* when each report supports its own input with
//! probability `p*` and supports any other fixed value with probability `q*`.
//! Given support counts over `n` reports, the estimate for value `i` is
//! `(count_i - n q*) / (p* - q*)`, which is unbiased for the true count.

mod estimator;
mod types;

pub use estimator::{estimate, exact_variance, support_count, support_count_with, var_star};
pub use types::{Domain, EstimateVector, PrivacyBudget, PureParams, Report};
