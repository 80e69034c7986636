use serde::{Deserialize, Serialize};

use super::{chi2_contrast, InitialDistribution, SpectralData};
use crate::bound_calculus::{suggest_burnin_aggregate, GAP_EPS};
use crate::error::{domain, Error, Result};

/// Certified bounds on the squared error over the unit `‖·‖₂` ball.
///
/// `lower`/`upper` use `β₁` in the leading term; the `_uniform` pair uses `β` wherever the
/// spectral gap enters a second-order term, as in the suggested burn-in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteBounds {
    pub lower: f64,
    pub upper: f64,
    pub lower_uniform: f64,
    pub upper_uniform: f64,
}

/// `C = sqrt(‖1/π‖∞) · ‖ν/π - 1‖₂`.
pub fn initial_constant(nu: &InitialDistribution, pi: &nalgebra::DVector<f64>) -> f64 {
    let inv_min = pi.iter().fold(f64::INFINITY, |m, &v| m.min(v)).recip();
    inv_min.sqrt() * chi2_contrast(nu, pi).sqrt()
}

pub fn bounds_finite(s: &SpectralData, c: f64, n: u64, n0: u64) -> Result<FiniteBounds> {
    bounds_from_gaps(s.beta1, s.beta, c, n, n0)
}

/// [`bounds_finite`] from the gaps alone, for chains whose spectrum is known analytically.
pub fn bounds_from_gaps(beta1: f64, beta: f64, c: f64, n: u64, n0: u64) -> Result<FiniteBounds> {
    if !(beta < 1.0 - GAP_EPS) {
        return Err(Error::GapExhausted { rate: beta });
    }
    if !(c >= 0.0) || n == 0 {
        return domain("bounds need C >= 0 and n >= 1");
    }
    let nf = n as f64;
    let g1 = 1.0 - beta1;
    let g = 1.0 - beta;
    let decay = if c == 0.0 {
        0.0
    } else if beta == 0.0 {
        if n0 == 0 {
            c
        } else {
            0.0
        }
    } else {
        (c.ln() + n0 as f64 * beta.ln()).exp()
    };
    let bias = 2.0 * decay / (nf * nf * g * g);
    let lead = (1.0 + beta1) / (nf * g1);
    Ok(FiniteBounds {
        lower: (lead - 2.0 / (nf * nf * g1 * g1) - bias).max(0.0),
        upper: 2.0 / (nf * g1) + bias,
        lower_uniform: (lead - 2.0 / (nf * nf * g * g) - bias).max(0.0),
        upper_uniform: 2.0 / (nf * g) + bias,
    })
}

/// `n0 = max{⌈log C / log β⁻¹⌉, 0}`.
pub fn suggest_burnin_finite(c: f64, beta: f64) -> Result<u64> {
    suggest_burnin_aggregate(c, beta, 2.0)
}
