use super::{EstimateVector, PureParams, Report};
use crate::error::{Error, Result};
use crate::exec::{self, Execution, DEFAULT_CHUNK};
use crate::protocols::ProtocolSpec;

/// Counts, for each value in the domain, how many reports support it.
pub fn support_count(reports: &[Report], spec: &ProtocolSpec) -> Result<Vec<u64>> {
    support_count_with(reports, spec, Execution::default())
}

/// [`support_count`] with an explicit execution mode. The result does not
/// depend on the mode.
pub fn support_count_with(
    reports: &[Report],
    spec: &ProtocolSpec,
    exec: Execution,
) -> Result<Vec<u64>> {
    let d = spec.domain().size();
    let parts = exec::map_chunks(reports.len(), DEFAULT_CHUNK, exec, |range| {
        let mut counts = vec![0u64; d];
        for report in &reports[range] {
            spec.accumulate_support(report, &mut counts)?;
        }
        Ok::<_, Error>(counts)
    });
    let mut total = vec![0u64; d];
    for part in parts {
        exec::add_counts(&mut total, part?);
    }
    Ok(total)
}

/// Unbiased count estimates from support counts over `n` reports.
pub fn estimate(support_counts: &[u64], n: u64, params: PureParams) -> Result<EstimateVector> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "estimate needs at least one report".into(),
        ));
    }
    let nq = n as f64 * params.q_star();
    let gap = params.p_star() - params.q_star();
    Ok(EstimateVector {
        estimates: support_counts
            .iter()
            .map(|&c| (c as f64 - nq) / gap)
            .collect(),
        n,
    })
}

/// Exact variance of the estimate for a value held by a fraction `f_i` of `n` users.
pub fn exact_variance(params: PureParams, n: f64, f_i: f64) -> f64 {
    let (p, q) = (params.p_star(), params.q_star());
    let gap = p - q;
    n * q * (1.0 - q) / (gap * gap) + n * f_i * (1.0 - p - q) / gap
}

/// Per-user variance factor `q*(1-q*)/(p*-q*)^2`, i.e. the variance for a
/// value with vanishing frequency divided by `n`.
pub fn var_star(params: PureParams) -> f64 {
    let (p, q) = (params.p_star(), params.q_star());
    q * (1.0 - q) / ((p - q) * (p - q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: f64, q: f64) -> PureParams {
        PureParams::new(p, q).unwrap()
    }

    #[test]
    fn estimate_examples() {
        let params = pp(0.75, 0.25);
        let e = estimate(&[25, 60, 10], 100, params).unwrap();
        assert_eq!(e.estimates, vec![0.0, 70.0, -30.0]);
        assert_eq!(e.n, 100);
    }

    #[test]
    fn estimate_rejects_empty_population() {
        assert!(estimate(&[0, 0], 0, pp(0.75, 0.25)).is_err());
    }

    #[test]
    fn estimate_is_affine_at_anchor_points() {
        let params = pp(0.8, 0.2);
        let n = 1000u64;
        let e = estimate(&[200, 800], n, params).unwrap();
        assert_eq!(e.estimates[0], 0.0);
        assert!((e.estimates[1] - n as f64).abs() < 1e-9);
    }

    #[test]
    fn variance_examples() {
        let params = pp(0.75, 0.25);
        assert!((exact_variance(params, 100.0, 0.0) - 75.0).abs() < 1e-12);
        assert!((var_star(params) - 0.75).abs() < 1e-12);
        // p* + q* = 1 removes the frequency term
        for f in [0.0, 0.3, 1.0] {
            assert!((exact_variance(params, 100.0, f) - 100.0 * var_star(params)).abs() < 1e-9);
        }
    }

    #[test]
    fn var_star_table_values() {
        let e1 = 1f64.exp();
        assert!((var_star(pp(0.5, 1.0 / (e1 + 1.0))) - 3.68).abs() < 0.005);
        let e4 = 4f64.exp();
        assert!((var_star(pp(e4 / (e4 + 1.0), 0.5)) - 1.08).abs() < 0.005);
    }
}
