//! Explicit error bounds, burn-in planning and samplers for Markov chain Monte Carlo.
//!
//! The crate is organised bottom-up: [`bound_calculus`] holds the scalar formulas,
//! [`finite_chain`] the exact analysis of finite reversible chains, [`sampler_core`] the
//! general state space transition samplers, [`mcmc_estimator`] replicated runs of the
//! estimator, and [`planner`] the application-level certified plans.

pub mod bound_calculus;
pub mod error;
pub mod finite_chain;
pub mod mcmc_estimator;
pub mod numeric;
pub mod planner;
pub mod sampler_core;

pub use error::{Error, Result};
