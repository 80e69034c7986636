//! Replicated runs of `S_{n,n0}(f)`: empirical mean square error with a jackknife error bar,
//! and certification against predicted bounds.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numeric::pairwise_sum;
use crate::sampler_core::{Initial, KernelSampler, OracleCalls, RngStream};

type PointFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Integrand handle.
#[derive(Clone)]
pub enum Integrand {
    /// Values indexed by the state of a finite kernel.
    Table(Arc<Vec<f64>>),
    Function(PointFn),
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Integrand::Table(t) => f.debug_tuple("Table").field(&t.len()).finish(),
            Integrand::Function(_) => f.write_str("Function(..)"),
        }
    }
}

impl Integrand {
    pub fn function(g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Integrand::Function(Arc::new(g))
    }

    pub fn table(values: Vec<f64>) -> Self {
        Integrand::Table(Arc::new(values))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Integrand::Table(t) => t[x[0] as usize],
            Integrand::Function(g) => g(x),
        }
    }
}

/// Serializable integrands used by the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum NamedIntegrand {
    Constant {
        value: f64,
    },
    Coordinate {
        index: usize,
    },
    SquaredNorm,
    /// `−1` on `[−1, −1/2] ∪ [0, 1/2)`, `+1` elsewhere on `[−1, 1]`.
    Example2Eigen,
    Table {
        values: Vec<f64>,
    },
}

impl NamedIntegrand {
    pub fn build(&self) -> Integrand {
        match self.clone() {
            NamedIntegrand::Constant { value } => Integrand::function(move |_| value),
            NamedIntegrand::Coordinate { index } => Integrand::function(move |x| x[index]),
            NamedIntegrand::SquaredNorm => Integrand::function(|x| x.iter().map(|v| v * v).sum()),
            NamedIntegrand::Example2Eigen => Integrand::function(|x| example2_eigen(x[0])),
            NamedIntegrand::Table { values } => Integrand::table(values),
        }
    }
}

pub fn example2_eigen(x: f64) -> f64 {
    if (-1.0..=-0.5).contains(&x) || (0.0..0.5).contains(&x) {
        -1.0
    } else {
        1.0
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub kernel: KernelSampler,
    pub initial: Initial,
    pub f: Integrand,
    pub n: u64,
    pub n0: u64,
    pub replications: u64,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return domain("n must be at least 1");
        }
        if self.replications == 0 {
            return domain("replications must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCounts {
    pub f: u64,
    pub rho: u64,
    pub membership: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub n: u64,
    pub n0: u64,
    pub replications: u64,
    pub mean_estimate: f64,
    pub empirical_mse: f64,
    pub mse_std_error: f64,
    pub true_value: Option<f64>,
    pub bound_lower: Option<f64>,
    pub bound_upper: Option<f64>,
    pub seed: u64,
    pub oracle_calls: OracleCounts,
}

fn replicate(cfg: &RunConfig, index: u64) -> Result<(f64, OracleCalls)> {
    let mut rng = RngStream::new(cfg.seed, index).rng();
    let mut calls = OracleCalls::default();
    let mut s = cfg.kernel.init(&cfg.initial, &mut rng)?;
    for _ in 0..cfg.n0 {
        cfg.kernel.step(&mut s, &mut rng, &mut calls)?;
    }
    let mut acc = Vec::with_capacity(cfg.n.min(1 << 20) as usize);
    let mut chunk = 0.0;
    // blocks of 1024 keep the summation error small without storing every value
    for j in 0..cfg.n {
        cfg.kernel.step(&mut s, &mut rng, &mut calls)?;
        chunk += cfg.f.eval(&s.x);
        if (j + 1) % 1024 == 0 {
            acc.push(chunk);
            chunk = 0.0;
        }
    }
    acc.push(chunk);
    calls.f += cfg.n;
    Ok((pairwise_sum(&acc) / cfg.n as f64, calls))
}

/// One realization of `S_{n,n0}(f)` on the stream `(seed, replication_index)`.
pub fn run_estimate(cfg: &RunConfig, replication_index: u64) -> Result<f64> {
    cfg.validate()?;
    replicate(cfg, replication_index).map(|r| r.0)
}

/// Mean and jackknife standard error of the mean of `values`.
pub fn jackknife_mean(values: &[f64]) -> (f64, f64) {
    let r = values.len();
    let total = pairwise_sum(values);
    let mean = total / r as f64;
    if r < 2 {
        return (mean, 0.0);
    }
    let rf = r as f64;
    let dev: Vec<f64> = values
        .iter()
        .map(|&v| {
            let loo = (total - v) / (rf - 1.0);
            (loo - mean) * (loo - mean)
        })
        .collect();
    (mean, ((rf - 1.0) / rf * pairwise_sum(&dev)).sqrt())
}

/// Replicates the estimator and reports the mean square error against `true_value`.
pub fn empirical_mse(cfg: &RunConfig, true_value: f64) -> Result<EstimateReport> {
    cfg.validate()?;
    let runs: Vec<(f64, OracleCalls)> =
        (0..cfg.replications).into_par_iter().map(|i| replicate(cfg, i)).collect::<Result<_>>()?;
    let estimates: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let sq: Vec<f64> = estimates.iter().map(|e| (e - true_value) * (e - true_value)).collect();
    let (mse, se) = jackknife_mean(&sq);
    let mut calls = OracleCalls::default();
    for r in &runs {
        calls.add(&r.1);
    }
    Ok(EstimateReport {
        n: cfg.n,
        n0: cfg.n0,
        replications: cfg.replications,
        mean_estimate: pairwise_sum(&estimates) / estimates.len() as f64,
        empirical_mse: mse,
        mse_std_error: se,
        true_value: Some(true_value),
        bound_lower: None,
        bound_upper: None,
        seed: cfg.seed,
        oracle_calls: OracleCounts { f: calls.f, rho: calls.rho, membership: calls.membership },
    })
}

/// Outcome of comparing a report's root MSE with a predicted bracket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub n: u64,
    pub n0: u64,
    pub empirical_mse: f64,
    pub std_error: f64,
    /// Standard error of the root MSE, by the delta method.
    pub root_std_error: f64,
    pub lower: f64,
    pub upper: f64,
    pub sigmas: f64,
    pub pass: bool,
    pub seed: u64,
}

pub const VERDICT_CSV_HEADER: &str = "config_hash,n,n0,empirical_mse,std_error,lower,upper,verdict,seed";

impl Verdict {
    pub fn csv_row(&self, config_hash: &str) -> String {
        format!(
            "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
            config_hash,
            self.n,
            self.n0,
            self.empirical_mse,
            self.std_error,
            self.lower,
            self.upper,
            if self.pass { "pass" } else { "fail" },
            self.seed
        )
    }
}

/// Checks `lower − kσ ≤ √mse ≤ upper + kσ` with `k = sigmas`; `upper = ∞` always passes the
/// upper side.
pub fn certify_with(report: &EstimateReport, lower: f64, upper: f64, sigmas: f64) -> Verdict {
    let root = report.empirical_mse.sqrt();
    let root_se = if root > 0.0 { report.mse_std_error / (2.0 * root) } else { report.mse_std_error.sqrt() };
    let slack = sigmas * root_se;
    let pass = lower - slack <= root && (upper == f64::INFINITY || root <= upper + slack);
    Verdict {
        n: report.n,
        n0: report.n0,
        empirical_mse: report.empirical_mse,
        std_error: report.mse_std_error,
        root_std_error: root_se,
        lower,
        upper,
        sigmas,
        pass,
        seed: report.seed,
    }
}

/// [`certify_with`] at the default 3σ threshold.
pub fn certify(report: &EstimateReport, lower: f64, upper: f64) -> Verdict {
    certify_with(report, lower, upper, 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler_core::{builtin_kernel, BuiltinKind};

    fn example2(n: u64, reps: u64, f: Integrand) -> RunConfig {
        RunConfig {
            kernel: builtin_kernel(&BuiltinKind::Example2, true).unwrap(),
            initial: Initial::UniformInterval { lo: 0.0, hi: 1e-3 },
            f,
            n,
            n0: 13,
            replications: reps,
            seed: 11,
        }
    }

    #[test]
    fn constant_integrand_is_exact() {
        let cfg = example2(50, 20, Integrand::function(|_| 2.5));
        assert_eq!(run_estimate(&cfg, 3).unwrap(), 2.5);
        let rep = empirical_mse(&cfg, 2.5).unwrap();
        assert_eq!(rep.empirical_mse, 0.0);
        assert_eq!(rep.oracle_calls.f, 20 * 50);
    }

    #[test]
    fn deterministic_reports() {
        let cfg = example2(40, 64, Integrand::function(|x| example2_eigen(x[0])));
        assert_eq!(empirical_mse(&cfg, 0.0).unwrap(), empirical_mse(&cfg, 0.0).unwrap());
    }

    #[test]
    fn jackknife_of_mean_is_standard_error() {
        let v = [1.0, 2.0, 4.0, 8.0];
        let (m, se) = jackknife_mean(&v);
        let s2 = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / 3.0;
        assert!((se - (s2 / 4.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn infinite_upper_always_passes() {
        let cfg = example2(10, 10, Integrand::function(|x| example2_eigen(x[0])));
        let rep = empirical_mse(&cfg, 0.0).unwrap();
        assert!(certify(&rep, 0.0, f64::INFINITY).pass);
    }
}
