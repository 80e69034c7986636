use nalgebra::{DMatrix, DVector};

use super::{StochasticMatrix, BALANCE_TOL, ROW_SUM_TOL};
use crate::error::{domain, Error, Result};

/// Stochastic matrix together with a strictly positive reversing distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversibleChain {
    matrix: StochasticMatrix,
    pi: DVector<f64>,
}

impl ReversibleChain {
    /// Solves for the stationary law and checks detailed balance.
    pub fn new(matrix: StochasticMatrix) -> Result<Self> {
        let pi = stationary_distribution(&matrix)?;
        Self::with_pi(matrix, pi)
    }

    /// Uses a known stationary law; detailed balance is still verified.
    pub fn with_pi(matrix: StochasticMatrix, pi: DVector<f64>) -> Result<Self> {
        let n = matrix.size();
        if pi.len() != n {
            return domain(format!("pi has length {}, matrix has size {n}", pi.len()));
        }
        if pi.iter().any(|&v| !(v > 0.0)) {
            return domain("pi must be strictly positive");
        }
        if (pi.sum() - 1.0).abs() > ROW_SUM_TOL {
            return domain(format!("pi sums to {}", pi.sum()));
        }
        let p = matrix.matrix();
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                defect = defect.max((pi[i] * p[(i, j)] - pi[j] * p[(j, i)]).abs());
            }
        }
        if defect > BALANCE_TOL {
            return Err(Error::NotReversible { defect });
        }
        Ok(ReversibleChain { matrix, pi })
    }

    pub fn matrix(&self) -> &StochasticMatrix {
        &self.matrix
    }

    pub fn p(&self) -> &DMatrix<f64> {
        self.matrix.matrix()
    }

    pub fn pi(&self) -> &DVector<f64> {
        &self.pi
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    /// `S(f) = Σ π(x) f(x)`.
    pub fn mean(&self, f: &DVector<f64>) -> f64 {
        self.pi.dot(f)
    }

    /// `⟨a, b⟩_π`.
    pub fn inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.iter().zip(b.iter()).zip(self.pi.iter()).map(|((x, y), w)| x * y * w).sum()
    }
}

fn reach(adj: &DMatrix<f64>, transpose: bool) -> Vec<bool> {
    let n = adj.nrows();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for y in 0..n {
            let w = if transpose { adj[(y, x)] } else { adj[(x, y)] };
            if w > 0.0 && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Unique stationary law of an irreducible chain, by a direct linear solve.
pub fn stationary_distribution(m: &StochasticMatrix) -> Result<DVector<f64>> {
    let p = m.matrix();
    let n = m.size();
    let fwd = reach(p, false);
    let bwd = reach(p, true);
    if let Some(state) = (0..n).find(|&i| !fwd[i] || !bwd[i]) {
        return Err(Error::ReducibleChain { state });
    }
    let mut a = p.transpose() - DMatrix::identity(n, n);
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    let mut pi = a.lu().solve(&rhs).ok_or_else(|| Error::NumericalFailure("singular stationary system".into()))?;
    for v in pi.iter_mut() {
        if *v < 0.0 && *v > -1e-14 {
            *v = 0.0;
        }
    }
    let s = pi.sum();
    pi /= s;
    let resid = (p.transpose() * &pi - &pi).amax();
    if resid > 1e-12 {
        return Err(Error::NumericalFailure(format!("stationary residual {resid:e}")));
    }
    Ok(pi)
}

/// Lazy version `(I + P)/2`.
pub fn lazy(m: &StochasticMatrix) -> StochasticMatrix {
    let n = m.size();
    StochasticMatrix::from_trusted((DMatrix::identity(n, n) + m.matrix()) * 0.5)
}

/// Initial law `ν` stored with its density `ν/π`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialDistribution {
    nu: DVector<f64>,
    density: DVector<f64>,
}

impl InitialDistribution {
    pub fn new(nu: DVector<f64>, pi: &DVector<f64>) -> Result<Self> {
        if nu.len() != pi.len() {
            return domain("nu and pi differ in length");
        }
        if nu.iter().any(|&v| !(v >= 0.0)) || (nu.sum() - 1.0).abs() > ROW_SUM_TOL {
            return domain("nu must be a probability vector");
        }
        if pi.iter().any(|&v| !(v > 0.0)) {
            return domain("pi must be strictly positive");
        }
        let density = nu.component_div(pi);
        Ok(InitialDistribution { nu, density })
    }

    pub fn point_mass(x: usize, pi: &DVector<f64>) -> Result<Self> {
        if x >= pi.len() {
            return domain(format!("state {x} out of range"));
        }
        let mut nu = DVector::zeros(pi.len());
        nu[x] = 1.0;
        Self::new(nu, pi)
    }

    pub fn nu(&self) -> &DVector<f64> {
        &self.nu
    }

    /// `ν/π`.
    pub fn density(&self) -> &DVector<f64> {
        &self.density
    }
}

/// `χ²(ν, π) = Σ (ν - π)²/π`.
pub fn chi2_contrast(nu: &InitialDistribution, pi: &DVector<f64>) -> f64 {
    nu.nu().iter().zip(pi.iter()).map(|(a, b)| (a - b) * (a - b) / b).sum()
}

/// Exact `‖Pⁿ - S‖` on `L∞`, i.e. `max_x Σ_y |pⁿ(x,y) - π(y)|`.
pub fn tv_operator_norm(c: &ReversibleChain, n: u64) -> f64 {
    let pn = matrix_power(c.p(), n);
    let pi = c.pi();
    (0..c.size()).map(|x| (0..c.size()).map(|y| (pn[(x, y)] - pi[y]).abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub(crate) fn matrix_power(p: &DMatrix<f64>, mut n: u64) -> DMatrix<f64> {
    let mut result = DMatrix::identity(p.nrows(), p.ncols());
    let mut base = p.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}
