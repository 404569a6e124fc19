//! Monte-Carlo harness: synthetic and file-backed datasets, one perturbed
//! report per user, aggregation and error metrics.
//!
//! Every random draw comes from a ChaCha8 stream whose seed is derived from
//! `(master_seed, trial, user)`, and user reports are folded into fixed-size
//! chunks merged in order, so a trial is bit-for-bit reproducible whatever
//! the thread count.

mod config;
mod data;
mod metrics;
mod trial;

pub use config::{DataSource, ExperimentConfig, ThresholdRule};
pub use data::{dataset, gen_uniform, gen_zipf, ingest_values, true_counts, zipf_pmf};
pub use metrics::{avg_sq_error, topk_error, tp_fp};
pub use trial::{run_experiment, run_trial, run_trial_with, stream_seed, TrialResult};
