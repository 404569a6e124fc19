use serde::Serialize;

use crate::error::Result;
use crate::framework::{Domain, PrivacyBudget};
use crate::protocols::ProtocolKind;

/// Per-user variance factor `Var*/n` in closed form.
///
/// THE is evaluated at `theta = 1` and OLH at the continuous optimum
/// `g = e^eps + 1`; `d` only matters for DE.
pub fn analytic_var(kind: ProtocolKind, epsilon: f64, d: usize) -> Result<f64> {
    let e = PrivacyBudget::new(epsilon)?.epsilon();
    let d = Domain::new(d)?.size() as f64;
    let ee = e.exp();
    let eh = (e / 2.0).exp();
    Ok(match kind {
        ProtocolKind::De => (d - 2.0 + ee) / ((ee - 1.0) * (ee - 1.0)),
        ProtocolKind::She => 8.0 / (e * e),
        ProtocolKind::The => (2.0 * eh - 1.0) / ((eh - 1.0) * (eh - 1.0)),
        ProtocolKind::Sue => eh / ((eh - 1.0) * (eh - 1.0)),
        ProtocolKind::Oue | ProtocolKind::Olh => 4.0 * ee / ((ee - 1.0) * (ee - 1.0)),
        ProtocolKind::Blh => (ee + 1.0) * (ee + 1.0) / ((ee - 1.0) * (ee - 1.0)),
    })
}

/// THE's variance factor at an arbitrary threshold `theta` in `[0, 1]`.
pub fn analytic_var_the(epsilon: f64, theta: f64) -> Result<f64> {
    let e = PrivacyBudget::new(epsilon)?.epsilon();
    let a = (e * theta / 2.0).exp();
    let denom = 1.0 + (e * (theta - 0.5)).exp() - 2.0 * a;
    Ok((2.0 * a - 1.0) / (denom * denom))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceTableRow {
    pub kind: ProtocolKind,
    pub epsilon: f64,
    /// Set for DE only.
    pub d: Option<usize>,
    pub var_per_user: f64,
}

impl VarianceTableRow {
    pub fn label(&self) -> String {
        match (self.kind, self.d) {
            (ProtocolKind::De, Some(d)) => format!("DE(d={d})"),
            (ProtocolKind::The, _) => "THE(theta=1)".to_string(),
            (k, _) => k.to_string(),
        }
    }
}

/// Analytic variances for every protocol at every `epsilon`: one DE column
/// per domain size in `ds`, then SHE, THE, SUE, OUE, BLH, OLH. Row-major by
/// `epsilon`.
pub fn variance_table(epsilons: &[f64], ds: &[usize]) -> Result<Vec<VarianceTableRow>> {
    let mut rows = Vec::with_capacity(epsilons.len() * (ds.len() + 6));
    for &epsilon in epsilons {
        for &d in ds {
            rows.push(VarianceTableRow {
                kind: ProtocolKind::De,
                epsilon,
                d: Some(d),
                var_per_user: analytic_var(ProtocolKind::De, epsilon, d)?,
            });
        }
        for kind in &ProtocolKind::ALL[1..] {
            rows.push(VarianceTableRow {
                kind: *kind,
                epsilon,
                d: None,
                var_per_user: analytic_var(*kind, epsilon, 2)?,
            });
        }
    }
    Ok(rows)
}
