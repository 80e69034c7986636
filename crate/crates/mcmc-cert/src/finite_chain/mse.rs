use nalgebra::DVector;

use super::{InitialDistribution, ReversibleChain, SpectralData};
use crate::bound_calculus::w_factor;
use crate::error::{domain, Result};

/// Stationary-start mean square error `(1/n²) Σ_{k>=1} a_k² W(n, β_k)`.
pub fn exact_stationary_mse(s: &SpectralData, f: &DVector<f64>, n: u64) -> f64 {
    let nf = n as f64;
    let a = s.coefficients(f);
    let total: f64 = a.iter().zip(&s.eigenvalues).skip(1).map(|(ak, &bk)| ak * ak * w_factor(n, bk)).sum();
    (total / (nf * nf)).max(0.0)
}

/// Mean square error of `S_{n,n0}` from initial law `ν`, by iterated matrix-vector products.
pub fn exact_mse(c: &ReversibleChain, nu: &InitialDistribution, f: &DVector<f64>, n: u64, n0: u64) -> Result<f64> {
    if n == 0 {
        return domain("n must be positive");
    }
    if f.len() != c.size() || nu.nu().len() != c.size() {
        return domain("vector lengths do not match the chain");
    }
    let p = c.p();
    let nn = n as usize;
    let g = f.add_scalar(-c.mean(f));

    // w_m = P^m g for m = 1..n-1 and its running sums
    let mut cum: Vec<DVector<f64>> = Vec::with_capacity(nn);
    cum.push(DVector::zeros(c.size()));
    let mut w = g.clone();
    let mut stat = n as f64 * c.inner(&g, &g);
    for m in 1..nn {
        w = p * &w;
        stat += 2.0 * (nn - m) as f64 * c.inner(&g, &w);
        let next = &cum[m - 1] + &w;
        cum.push(next);
    }

    // d_i = P^i (ν/π - 1), starting at i = n0 + 1
    let mut d = nu.density().add_scalar(-1.0);
    d.add_scalar_mut(-c.mean(&d));
    for _ in 0..n0 {
        d = p * &d;
    }
    let g2 = g.component_mul(&g);
    let mut bias = 0.0;
    for j in 1..=nn {
        d = p * &d;
        bias += c.inner(&d, &g2);
        if j < nn {
            bias += 2.0 * c.inner(&d, &g.component_mul(&cum[nn - j]));
        }
    }
    let nf = n as f64;
    Ok(((stat + bias) / (nf * nf)).max(0.0))
}
