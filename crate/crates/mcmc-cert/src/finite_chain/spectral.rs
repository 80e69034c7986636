use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::ReversibleChain;
use crate::error::{Error, Result};

/// Eigen-decomposition of a reversible chain with `π`-orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    /// Sorted descending, `eigenvalues[0] = 1`.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` pairs with `eigenvalues[k]`; `eigenvectors[0] ≡ 1`.
    pub eigenvectors: Vec<DVector<f64>>,
    pub pi: DVector<f64>,
    /// Second-largest eigenvalue.
    pub beta1: f64,
    /// `max{β₁, |β_{|D|-1}|}`.
    pub beta: f64,
}

impl SpectralData {
    /// `a_k = ⟨f, u_k⟩_π`.
    pub fn coefficients(&self, f: &DVector<f64>) -> Vec<f64> {
        self.eigenvectors
            .iter()
            .map(|u| u.iter().zip(f.iter()).zip(self.pi.iter()).map(|((a, b), w)| a * b * w).sum())
            .collect()
    }

    pub fn smallest(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }
}

const DEGENERATE_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-8;

/// Spectrum through the symmetric similarity transform `D^{1/2} P D^{-1/2}`.
pub fn spectral_decompose(c: &ReversibleChain) -> Result<SpectralData> {
    let n = c.size();
    if n < 2 {
        return Err(Error::Domain("spectral data needs at least two states".into()));
    }
    let pi = c.pi();
    let sq: Vec<f64> = pi.iter().map(|v| v.sqrt()).collect();
    let p = c.p();
    let a = DMatrix::from_fn(n, n, |i, j| sq[i] * p[(i, j)] / sq[j]);
    let a = (&a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(a);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors: Vec<DVector<f64>> =
        order.iter().map(|&k| DVector::from_fn(n, |i, _| eig.eigenvectors[(i, k)] / sq[i])).collect();

    if vectors[0].sum() < 0.0 {
        vectors[0].neg_mut();
    }
    // π-Gram-Schmidt inside each cluster of (numerically) equal eigenvalues
    let inner = |a: &DVector<f64>, b: &DVector<f64>| -> f64 {
        a.iter().zip(b.iter()).zip(pi.iter()).map(|((x, y), w)| x * y * w).sum()
    };
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[end] - values[start]).abs() < DEGENERATE_TOL {
            end += 1;
        }
        for k in start..end {
            for j in start..k {
                let proj = inner(&vectors[k], &vectors[j]);
                let vj = vectors[j].clone();
                vectors[k].axpy(-proj, &vj, 1.0);
            }
            let norm = inner(&vectors[k], &vectors[k]).sqrt();
            vectors[k] /= norm;
        }
        start = end;
    }

    for (k, u) in vectors.iter().enumerate() {
        let resid = (p * u - u * values[k]).amax() / u.amax().max(1.0);
        if !(resid <= RESIDUAL_TOL) {
            return Err(Error::NumericalFailure(format!("eigenpair {k} residual {resid:e}")));
        }
    }
    if (values[0] - 1.0).abs() > 1e-10 {
        return Err(Error::NumericalFailure(format!("top eigenvalue {} is not 1", values[0])));
    }
    values[0] = 1.0;
    for v in values.iter_mut() {
        *v = v.clamp(-1.0, 1.0);
    }
    let beta1 = values[1];
    let beta = beta1.max(values[n - 1].abs());
    Ok(SpectralData { eigenvalues: values, eigenvectors: vectors, pi: pi.clone(), beta1, beta })
}
