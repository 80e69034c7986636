//! Finite-state reversible Markov chains: spectra, exact mean square errors, certified
//! bounds, burn-in, conductance and the circle / hypercube / star example families.
//!
//! Chains are indexed so that the initial law `ν` is the law of `X_0`; the estimator
//! averages `f(X_{n0+1}), ..., f(X_{n0+n})`.

mod bounds;
mod chain;
mod conductance;
mod matrix;
mod mse;
mod spectral;
mod toy;

pub use bounds::{bounds_finite, bounds_from_gaps, initial_constant, suggest_burnin_finite, FiniteBounds};
pub use chain::{chi2_contrast, lazy, stationary_distribution, tv_operator_norm, InitialDistribution, ReversibleChain};
pub use conductance::{conductance_candidates, conductance_finite, sublevel_candidates, Conductance, EXHAUSTIVE_CAP};
pub use matrix::StochasticMatrix;
pub use mse::{exact_mse, exact_stationary_mse};
pub use spectral::{spectral_decompose, SpectralData};
pub use toy::{analytic_example_error, make_example, make_example_with_cap, ToyExample, ToySpec, DEFAULT_STATE_CAP};

/// Row-sum tolerance for stochastic matrices.
pub const ROW_SUM_TOL: f64 = 1e-12;
/// Detailed-balance tolerance for reversible chains.
pub const BALANCE_TOL: f64 = 1e-10;
