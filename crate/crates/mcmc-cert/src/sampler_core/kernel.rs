use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::oracle::{LogDensityOracle, MembershipOracle, OracleCalls};
use super::steps::{accept_log, hit_and_run_step, uniform_in_ball};
use crate::error::{domain, Result};
use crate::finite_chain::StochasticMatrix;

/// Transition mechanism and its parameters.
#[derive(Debug, Clone)]
pub enum KernelKind {
    /// Metropolis filter on a uniform proposal in `B(x, delta)`.
    BallWalkMetropolis { delta: f64, log_rho: LogDensityOracle },
    /// Hit-and-run on a body given by its membership oracle.
    HitAndRun { membership: MembershipOracle, eps0: f64 },
    /// `N(θx, 1 − θ²)`.
    ContractingNormal { theta: f64 },
    /// Independence Metropolis with `N(0, ξ²)` proposals targeting `N(0, 1)`.
    IndependenceNormal { xi: f64 },
    /// Density `(1 + x + y) / (x + 3/2)` on `[0, 1]`.
    Example1,
    /// Flip between `[-1, 0]` and `(0, 1]`, uniform on the other half.
    Example2,
    /// Finite-state chain; the state is the index stored in coordinate 0.
    Finite { cumulative: Arc<Vec<Vec<f64>>> },
}

/// Serializable names for the built-in kernels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum BuiltinKind {
    /// Standard Gaussian restricted to `rB`; `delta` defaults to `min{1/r, r/√(d+1)}`.
    GaussianBallMetropolis {
        d: usize,
        r: f64,
        delta: Option<f64>,
    },
    /// Uniform distribution on `rB` via the plain ball walk.
    UniformBallMetropolis {
        d: usize,
        r: f64,
        delta: Option<f64>,
    },
    HitAndRunBall {
        d: usize,
        r: f64,
        eps0: Option<f64>,
    },
    HitAndRunCube {
        d: usize,
        half_width: f64,
        eps0: Option<f64>,
    },
    ContractingNormal {
        theta: f64,
    },
    IndependenceNormal {
        xi: f64,
    },
    Example1,
    Example2,
}

/// Initial distribution of the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Initial {
    PointMass {
        x: Vec<f64>,
    },
    UniformInterval {
        lo: f64,
        hi: f64,
    },
    UniformBall {
        center: Vec<f64>,
        radius: f64,
    },
    /// Distribution over the states of a finite kernel.
    Discrete {
        probs: Vec<f64>,
    },
}

/// Current point plus the cached log density (0 for kernels without a density oracle).
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub x: Vec<f64>,
    pub log_rho: f64,
}

#[derive(Debug, Clone)]
pub struct KernelSampler {
    pub kind: KernelKind,
    pub lazy: bool,
}

fn pick(cumulative: &[f64], u: f64) -> usize {
    cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
}

fn cumulate(row: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    row.map(|p| {
        acc += p;
        acc
    })
    .collect()
}

impl KernelSampler {
    pub fn new(kind: KernelKind, lazy: bool) -> Result<Self> {
        match &kind {
            KernelKind::BallWalkMetropolis { delta, .. } if !(*delta > 0.0 && delta.is_finite()) => {
                return domain(format!("step radius must be positive, got {delta}"))
            }
            KernelKind::HitAndRun { eps0, .. } if !(*eps0 > 0.0) => {
                return domain(format!("eps0 must be positive, got {eps0}"))
            }
            KernelKind::ContractingNormal { theta } if !(theta.abs() < 1.0) => {
                return domain(format!("theta must lie in (-1, 1), got {theta}"))
            }
            KernelKind::IndependenceNormal { xi } if !(*xi > 1.0 && xi.is_finite()) => {
                return domain(format!("xi must exceed 1, got {xi}"))
            }
            _ => {}
        }
        Ok(KernelSampler { kind, lazy })
    }

    /// Sampler for a finite transition matrix.
    pub fn finite(m: &StochasticMatrix, lazy: bool) -> Self {
        let n = m.size();
        let cumulative = (0..n).map(|i| cumulate((0..n).map(|j| m.get(i, j)))).collect();
        KernelSampler { kind: KernelKind::Finite { cumulative: Arc::new(cumulative) }, lazy }
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            KernelKind::BallWalkMetropolis { log_rho, .. } => log_rho.dim,
            KernelKind::HitAndRun { membership, .. } => membership.dim,
            _ => 1,
        }
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        match &self.kind {
            KernelKind::BallWalkMetropolis { log_rho, .. } => log_rho.eval(x),
            KernelKind::IndependenceNormal { .. } => -0.5 * x[0] * x[0],
            _ => 0.0,
        }
    }

    /// Draws `X_0` and validates that it lies in the state space.
    pub fn init<R: Rng + ?Sized>(&self, initial: &Initial, rng: &mut R) -> Result<State> {
        let x = match initial {
            Initial::PointMass { x } => x.clone(),
            Initial::UniformInterval { lo, hi } => {
                if !(lo <= hi) {
                    return domain(format!("empty interval [{lo}, {hi}]"));
                }
                vec![lo + (hi - lo) * rng.random::<f64>()]
            }
            Initial::UniformBall { center, radius } => uniform_in_ball(rng, center, *radius),
            Initial::Discrete { probs } => {
                let KernelKind::Finite { cumulative } = &self.kind else {
                    return domain("discrete initial distributions need a finite kernel");
                };
                if probs.len() != cumulative.len() {
                    return domain(format!("{} initial probabilities for {} states", probs.len(), cumulative.len()));
                }
                vec![pick(&cumulate(probs.iter().copied()), rng.random::<f64>()) as f64]
            }
        };
        if x.len() != self.dim() {
            return domain(format!("initial point has dimension {}, kernel has {}", x.len(), self.dim()));
        }
        match &self.kind {
            KernelKind::HitAndRun { membership, .. } if !membership.contains(&x) => {
                return domain("initial point lies outside the body")
            }
            KernelKind::Example1 if !(0.0..=1.0).contains(&x[0]) => return domain("example1 lives on [0, 1]"),
            KernelKind::Example2 if !(-1.0..=1.0).contains(&x[0]) => return domain("example2 lives on [-1, 1]"),
            KernelKind::Finite { cumulative }
                if x[0].fract() != 0.0 || x[0] < 0.0 || x[0] as usize >= cumulative.len() =>
            {
                return domain(format!("{} is not a state index", x[0]))
            }
            _ => {}
        }
        let log_rho = self.log_density(&x);
        if log_rho == f64::NEG_INFINITY || log_rho.is_nan() {
            return domain("initial point has zero density");
        }
        Ok(State { x, log_rho })
    }

    /// Advances the state by one transition. One density call is charged per transition
    /// of the Metropolis kernels, held or not.
    pub fn step<R: Rng + ?Sized>(&self, s: &mut State, rng: &mut R, calls: &mut OracleCalls) -> Result<()> {
        if matches!(self.kind, KernelKind::BallWalkMetropolis { .. } | KernelKind::IndependenceNormal { .. }) {
            calls.rho += 1;
        }
        if self.lazy && rng.random::<f64>() > 0.5 {
            return Ok(());
        }
        match &self.kind {
            KernelKind::BallWalkMetropolis { delta, log_rho } => {
                let y = uniform_in_ball(rng, &s.x, *delta);
                let ly = log_rho.eval(&y);
                if accept_log(ly - s.log_rho, rng) {
                    s.x = y;
                    s.log_rho = ly;
                }
            }
            KernelKind::HitAndRun { membership, eps0 } => {
                let (y, c) = hit_and_run_step(&s.x, membership, rng, *eps0)?;
                calls.membership += c;
                s.x = y;
            }
            KernelKind::ContractingNormal { theta } => {
                let z: f64 = rng.sample(StandardNormal);
                s.x[0] = theta * s.x[0] + (1.0 - theta * theta).sqrt() * z;
            }
            KernelKind::IndependenceNormal { xi } => {
                let z: f64 = rng.sample(StandardNormal);
                let y = xi * z;
                let x = s.x[0];
                if accept_log(0.5 * (x * x - y * y) * (1.0 - 1.0 / (xi * xi)), rng) {
                    s.x[0] = y;
                    s.log_rho = -0.5 * y * y;
                }
            }
            KernelKind::Example1 => {
                let x = s.x[0];
                let u: f64 = rng.random();
                let a = 1.0 + x;
                let b = 2.0 * u * (x + 1.5);
                s.x[0] = b / (a + (a * a + b).sqrt());
            }
            KernelKind::Example2 => {
                let u: f64 = rng.random();
                s.x[0] = if s.x[0] <= 0.0 { 1.0 - u } else { -u };
            }
            KernelKind::Finite { cumulative } => {
                let i = s.x[0] as usize;
                s.x[0] = pick(&cumulative[i], rng.random::<f64>()) as f64;
            }
        }
        Ok(())
    }
}

/// Builds one of the built-in kernels.
pub fn builtin_kernel(kind: &BuiltinKind, lazy: bool) -> Result<KernelSampler> {
    let default_delta = |d: usize, r: f64, lip: f64| {
        let by_shape = r / ((d + 1) as f64).sqrt();
        if lip > 0.0 {
            by_shape.min(1.0 / lip)
        } else {
            by_shape
        }
    };
    let check_ball = |d: usize, r: f64| {
        if d == 0 || !(r > 0.0 && r.is_finite()) {
            domain(format!("need d >= 1 and r > 0, got d = {d}, r = {r}"))
        } else {
            Ok(())
        }
    };
    let k = match kind {
        BuiltinKind::GaussianBallMetropolis { d, r, delta } => {
            check_ball(*d, *r)?;
            KernelKind::BallWalkMetropolis {
                delta: delta.unwrap_or_else(|| default_delta(*d, *r, *r)),
                log_rho: LogDensityOracle::gaussian_on_ball(*d, *r),
            }
        }
        BuiltinKind::UniformBallMetropolis { d, r, delta } => {
            check_ball(*d, *r)?;
            KernelKind::BallWalkMetropolis {
                delta: delta.unwrap_or_else(|| default_delta(*d, *r, 0.0)),
                log_rho: LogDensityOracle::uniform_on_ball(*d, *r),
            }
        }
        BuiltinKind::HitAndRunBall { d, r, eps0 } => {
            check_ball(*d, *r)?;
            KernelKind::HitAndRun {
                membership: MembershipOracle::ball(*d, *r, vec![0.0; *d]),
                eps0: eps0.unwrap_or(1e-9 * r),
            }
        }
        BuiltinKind::HitAndRunCube { d, half_width, eps0 } => {
            check_ball(*d, *half_width)?;
            let m = MembershipOracle::cube(*d, *half_width);
            let eps0 = eps0.unwrap_or(1e-9 * m.outer_radius);
            KernelKind::HitAndRun { membership: m, eps0 }
        }
        BuiltinKind::ContractingNormal { theta } => KernelKind::ContractingNormal { theta: *theta },
        BuiltinKind::IndependenceNormal { xi } => KernelKind::IndependenceNormal { xi: *xi },
        BuiltinKind::Example1 => KernelKind::Example1,
        BuiltinKind::Example2 => KernelKind::Example2,
    };
    KernelSampler::new(k, lazy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler_core::RngStream;

    #[test]
    fn example2_from_half_lands_in_left_half() {
        let k = builtin_kernel(&BuiltinKind::Example2, false).unwrap();
        let mut rng = RngStream::new(5, 0).rng();
        let mut calls = OracleCalls::default();
        for _ in 0..1000 {
            let mut s = k.init(&Initial::PointMass { x: vec![0.5] }, &mut rng).unwrap();
            k.step(&mut s, &mut rng, &mut calls).unwrap();
            assert!((-1.0..=0.0).contains(&s.x[0]));
        }
    }

    #[test]
    fn example1_inverse_cdf_stays_in_unit_interval() {
        let k = builtin_kernel(&BuiltinKind::Example1, false).unwrap();
        let mut rng = RngStream::new(6, 0).rng();
        let mut calls = OracleCalls::default();
        let mut s = k.init(&Initial::PointMass { x: vec![0.0] }, &mut rng).unwrap();
        for _ in 0..10_000 {
            k.step(&mut s, &mut rng, &mut calls).unwrap();
            assert!((0.0..=1.0).contains(&s.x[0]));
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(builtin_kernel(&BuiltinKind::ContractingNormal { theta: 1.0 }, false).is_err());
        assert!(builtin_kernel(&BuiltinKind::IndependenceNormal { xi: 1.0 }, false).is_err());
        assert!(builtin_kernel(&BuiltinKind::GaussianBallMetropolis { d: 2, r: 1.0, delta: Some(0.0) }, false).is_err());
    }

    #[test]
    fn finite_sampler_follows_deterministic_rows() {
        let m = StochasticMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let k = KernelSampler::finite(&m, false);
        let mut rng = RngStream::new(7, 0).rng();
        let mut calls = OracleCalls::default();
        let mut s = k.init(&Initial::Discrete { probs: vec![1.0, 0.0] }, &mut rng).unwrap();
        for i in 1..10 {
            k.step(&mut s, &mut rng, &mut calls).unwrap();
            assert_eq!(s.x[0] as usize, i % 2);
        }
    }
}
