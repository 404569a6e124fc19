use std::fs;
use std::path::Path;

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Zipf;

use super::config::{DataSource, ExperimentConfig};
use super::trial::{stream_seed, DATA_STREAM};
use crate::error::{Error, Result};

/// Zipf probabilities over `[d]`: value `i` has weight `1/(i+1)^s`.
pub fn zipf_pmf(d: usize, s: f64) -> Vec<f64> {
    let w: Vec<f64> = (1..=d).map(|k| (k as f64).powf(-s)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// `n` i.i.d. Zipf(`s`) draws over `[d]`.
pub fn gen_zipf(d: usize, s: f64, n: usize, seed: u64) -> Result<Vec<usize>> {
    let zipf = Zipf::new(d as f64, s)
        .map_err(|e| Error::InvalidParameter(format!("zipf(d = {d}, s = {s}): {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| zipf.sample(&mut rng) as usize - 1).collect())
}

pub fn gen_uniform(d: usize, n: usize, seed: u64) -> Vec<usize> {
    let dist = Uniform::new(0, d).expect("d >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| dist.sample(&mut rng)).collect()
}

/// Reads one base-10 value per line, each checked against `[0, d)`. Blank
/// lines are skipped.
pub fn ingest_values(path: &Path, d: usize) -> Result<Vec<usize>> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: shown.clone(),
        message: e.to_string(),
    })?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fail = |message: String| Error::Ingest {
            path: shown.clone(),
            line: idx + 1,
            message,
        };
        let v: usize = line
            .parse()
            .map_err(|e| fail(format!("cannot parse '{line}': {e}")))?;
        if v >= d {
            return Err(fail(format!("value {v} is outside [0, {d})")));
        }
        values.push(v);
    }
    Ok(values)
}

/// The users' true values for one trial.
pub fn dataset(config: &ExperimentConfig, trial: u64) -> Result<Vec<usize>> {
    let seed = stream_seed(config.master_seed, trial, DATA_STREAM);
    match &config.source {
        DataSource::Zipf(s) => gen_zipf(config.d, *s, config.n, seed),
        DataSource::Uniform => Ok(gen_uniform(config.d, config.n, seed)),
        DataSource::File(path) => ingest_values(path, config.d),
    }
}

pub fn true_counts(values: &[usize], d: usize) -> Vec<u64> {
    let mut counts = vec![0u64; d];
    for &v in values {
        counts[v] += 1;
    }
    counts
}
