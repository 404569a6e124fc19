//! Closed-form variance analysis and the decisions built on it.

mod guideline;
mod normal;
mod threshold;
mod variance;

pub use guideline::{choose_protocol, split_ratio, split_verdict, CommBudget, SplitVerdict};
pub use normal::{inv_normal_cdf, normal_cdf};
pub use threshold::{significance_threshold, ThresholdSpec};
pub use variance::{analytic_var, analytic_var_the, variance_table, VarianceTableRow};
