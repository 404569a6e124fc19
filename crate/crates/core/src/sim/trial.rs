use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::data::{dataset, true_counts};
use super::metrics::avg_sq_error;
use crate::error::{Error, Result};
use crate::exec::{self, Execution, DEFAULT_CHUNK};
use crate::framework::{estimate, EstimateVector};
use crate::protocols::{ProtocolKind, ProtocolSpec};

/// Stream index reserved for dataset generation; users are `0..n`.
pub(crate) const DATA_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub true_counts: Vec<u64>,
    pub estimates: EstimateVector,
    pub avg_sq_error: f64,
    /// Wall time of the trial. Not part of the reproducible output.
    pub seconds: f64,
}

#[inline]
fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the random stream for `index` (a user, or [`DATA_STREAM`]) in
/// repetition `trial`.
pub fn stream_seed(master: u64, trial: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ trial) ^ index)
}

/// Runs repetition 0 of `config` on the default execution mode.
pub fn run_trial(config: &ExperimentConfig) -> Result<TrialResult> {
    run_trial_with(config, 0, Execution::default())
}

/// Runs one repetition: generate data, perturb each user's value on its own
/// stream, fold reports into counts (or sums for SHE) and estimate.
pub fn run_trial_with(
    config: &ExperimentConfig,
    trial: u64,
    exec: Execution,
) -> Result<TrialResult> {
    let start = Instant::now();
    config.validate()?;
    let spec = config.spec()?;
    let values = dataset(config, trial)?;
    if values.is_empty() {
        return Err(Error::InvalidParameter(
            "the dataset has no users (n = 0)".into(),
        ));
    }
    let d = config.d;
    let n = values.len();
    let truth = true_counts(&values, d);

    let estimates = if spec.kind() == ProtocolKind::She {
        let sums = fold_users(
            &values,
            &spec,
            config.master_seed,
            trial,
            exec,
            0.0f64,
            |r, acc| {
                if let crate::framework::Report::Histogram(h) = r {
                    for (a, x) in acc.iter_mut().zip(h) {
                        *a += x;
                    }
                }
                Ok(())
            },
        )?;
        EstimateVector {
            estimates: sums,
            n: n as u64,
        }
    } else {
        let counts = fold_users(
            &values,
            &spec,
            config.master_seed,
            trial,
            exec,
            0u64,
            |r, acc| spec.accumulate_support(&r, acc),
        )?;
        estimate(&counts, n as u64, spec.pure_params()?)?
    };

    let avg_sq_error = avg_sq_error(&estimates.estimates, &truth);
    Ok(TrialResult {
        true_counts: truth,
        estimates,
        avg_sq_error,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs every repetition of `config` in order.
pub fn run_experiment(config: &ExperimentConfig, exec: Execution) -> Result<Vec<TrialResult>> {
    config.validate()?;
    (0..config.repetitions as u64)
        .map(|trial| run_trial_with(config, trial, exec))
        .collect()
}

fn fold_users<T, F>(
    values: &[usize],
    spec: &ProtocolSpec,
    master: u64,
    trial: u64,
    exec: Execution,
    zero: T,
    fold: F,
) -> Result<Vec<T>>
where
    T: Copy + Send + Sync + std::ops::AddAssign,
    F: Fn(crate::framework::Report, &mut [T]) -> Result<()> + Sync + Send,
{
    let d = spec.domain().size();
    let parts = exec::map_chunks(values.len(), DEFAULT_CHUNK, exec, |range| {
        let mut acc = vec![zero; d];
        for user in range {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(master, trial, user as u64));
            let report = spec.perturb(values[user], &mut rng)?;
            fold(report, &mut acc)?;
        }
        Ok::<_, Error>(acc)
    });
    let mut total = vec![zero; d];
    for part in parts {
        for (t, p) in total.iter_mut().zip(part?) {
            *t += p;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::DataSource;

    #[test]
    fn stream_seeds_differ() {
        let a = stream_seed(1, 0, 0);
        assert_ne!(a, stream_seed(1, 0, 1));
        assert_ne!(a, stream_seed(1, 1, 0));
        assert_ne!(a, stream_seed(2, 0, 0));
        assert_eq!(a, stream_seed(1, 0, 0));
    }

    #[test]
    fn noiseless_channel_is_exact() {
        // a direct-encoding channel that never lies
        let config = ExperimentConfig::new(ProtocolKind::De, 60.0, 8, 2000)
            .with_source(DataSource::Uniform)
            .with_seed(3);
        let r = run_trial(&config).unwrap();
        assert_eq!(r.true_counts.iter().sum::<u64>(), 2000);
        assert!(r.avg_sq_error < 1e-20, "{}", r.avg_sq_error);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        for kind in ProtocolKind::ALL {
            let config = ExperimentConfig::new(kind, 2.0, 16, 10_000).with_seed(17);
            let a = run_trial_with(&config, 2, Execution::Sequential).unwrap();
            let b = run_trial_with(&config, 2, Execution::Parallel).unwrap();
            assert_eq!(a.true_counts, b.true_counts);
            let bits = |r: &TrialResult| {
                r.estimates
                    .estimates
                    .iter()
                    .map(|x| x.to_bits())
                    .collect::<Vec<_>>()
            };
            assert_eq!(bits(&a), bits(&b), "{kind}");
        }
    }

    #[test]
    fn rejects_empty_file() {
        let f = tempfile::NamedTempFile::new().unwrap();
        let config = ExperimentConfig::new(ProtocolKind::Oue, 1.0, 4, 0)
            .with_source(DataSource::File(f.path().to_path_buf()));
        assert!(run_trial(&config).is_err());
    }
}
