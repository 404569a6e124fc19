use super::trial::TrialResult;

/// `(1/d) * sum_i (estimate_i - true_i)^2`.
pub fn avg_sq_error(estimates: &[f64], true_counts: &[u64]) -> f64 {
    let total: f64 = estimates
        .iter()
        .zip(true_counts)
        .map(|(e, &t)| (e - t as f64).powi(2))
        .sum();
    total / true_counts.len() as f64
}

/// Mean squared error over the `k` values with the largest true counts,
/// ties broken by smaller index.
pub fn topk_error(result: &TrialResult, k: usize) -> f64 {
    let k = k.min(result.true_counts.len());
    if k == 0 {
        return 0.0;
    }
    let mut idx: Vec<usize> = (0..result.true_counts.len()).collect();
    idx.sort_by(|&a, &b| {
        result.true_counts[b]
            .cmp(&result.true_counts[a])
            .then(a.cmp(&b))
    });
    let est = &result.estimates.estimates;
    idx[..k]
        .iter()
        .map(|&i| (est[i] - result.true_counts[i] as f64).powi(2))
        .sum::<f64>()
        / k as f64
}

/// Values estimated above `threshold`, split by whether their true count is
/// above it (`tp`) or not (`fp`).
pub fn tp_fp(result: &TrialResult, threshold: f64) -> (usize, usize) {
    let mut tp = 0;
    let mut fp = 0;
    for (&t, &e) in result.true_counts.iter().zip(&result.estimates.estimates) {
        if e > threshold {
            if t as f64 > threshold {
                tp += 1;
            } else {
                fp += 1;
            }
        }
    }
    (tp, fp)
}
