//! Histogram encoding: a one-hot vector with independent Laplace noise of
//! scale `2/eps` on every component. SHE sums the noisy vectors; THE turns
//! each component into a vote when it exceeds a threshold `theta`.

use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::framework::{EstimateVector, PrivacyBudget, Report};

/// Draws Laplace(0, `scale`) noise from one uniform `u` on `(-1/2, 1/2)`:
/// `-scale * sgn(u) * ln(1 - 2|u|)`.
#[inline]
pub fn laplace_sample<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> f64 {
    let u: f64 = rng.sample::<f64, _>(Open01) - 0.5;
    -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
}

/// One-hot encodes `v` over `[d]` and adds `noise()` to each component.
pub fn encode_perturb_with<F: FnMut() -> f64>(v: usize, d: usize, mut noise: F) -> Vec<f64> {
    (0..d)
        .map(|i| if i == v { 1.0 } else { 0.0 } + noise())
        .collect()
}

/// Sums histogram reports component-wise.
pub fn she_aggregate(reports: &[Report], d: usize) -> Result<EstimateVector> {
    let mut sums = vec![0.0; d];
    for r in reports {
        match r {
            Report::Histogram(h) if h.len() == d => {
                for (s, x) in sums.iter_mut().zip(h) {
                    *s += x;
                }
            }
            Report::Histogram(h) => {
                return Err(Error::LengthMismatch {
                    expected: d,
                    actual: h.len(),
                })
            }
            _ => return Err(Error::VariantMismatch(super::ProtocolKind::She)),
        }
    }
    Ok(EstimateVector {
        estimates: sums,
        n: reports.len() as u64,
    })
}

/// Variance of one Laplace(2/eps) component: `8/eps^2`.
pub fn she_var_per_user(epsilon: PrivacyBudget) -> f64 {
    let e = epsilon.epsilon();
    8.0 / (e * e)
}

/// `(p*, q*)` of THE from the Laplace CDF, valid for `0 <= theta <= 1`.
pub fn the_params(epsilon: PrivacyBudget, theta: f64) -> (f64, f64) {
    let e = epsilon.epsilon();
    let p = 1.0 - 0.5 * (e * (theta - 1.0) / 2.0).exp();
    let q = 0.5 * (-e * theta / 2.0).exp();
    (p, q)
}

fn the_var_star(epsilon: PrivacyBudget, theta: f64) -> f64 {
    let (p, q) = the_params(epsilon, theta);
    q * (1.0 - q) / ((p - q) * (p - q))
}

/// Threshold in `(0.5, 1]` minimizing THE's variance factor, found by
/// golden-section search to an absolute tolerance of 1e-6.
pub fn the_optimal_theta(epsilon: PrivacyBudget) -> f64 {
    const TOL: f64 = 1e-7;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let f = |t: f64| the_var_star(epsilon, t);
    let (mut a, mut b) = (0.5, 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    // the minimum can sit on the closed end of the interval
    if f(1.0) <= f(t) {
        1.0
    } else {
        t
    }
}
