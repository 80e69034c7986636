use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{InitialDistribution, ReversibleChain, StochasticMatrix};
use crate::bound_calculus::w_factor;
use crate::error::{domain, Error, Result};

/// Default cap on materialized (dense) state spaces.
pub const DEFAULT_STATE_CAP: usize = 1 << 12;

/// The three analytic example families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ToySpec {
    /// Simple random walk on `Z/TZ`, `T` odd.
    Circle {
        #[serde(rename = "T")]
        t: usize,
    },
    /// Lazy nearest-neighbour walk on `{0,1}^d`.
    Hypercube { d: u32 },
    /// Star with centre 0 and `T` leaves; the centre holds with probability `θ`.
    Star {
        #[serde(rename = "T")]
        t: usize,
        theta: f64,
    },
}

/// A materialized example: chain, canonical integrand `u₁` and canonical point-mass start.
#[derive(Debug, Clone)]
pub struct ToyExample {
    pub chain: ReversibleChain,
    pub f: DVector<f64>,
    pub nu: InitialDistribution,
}

impl ToySpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ToySpec::Circle { t } if t < 3 || t % 2 == 0 => domain(format!("circle needs odd T >= 3, got {t}")),
            ToySpec::Hypercube { d } if d < 1 => domain("hypercube needs d >= 1"),
            ToySpec::Star { t, theta } if t < 2 || t % 2 == 1 || !(theta > 0.0 && theta < 1.0) => {
                domain(format!("star needs even T >= 2 and theta in (0,1), got T = {t}, theta = {theta}"))
            }
            _ => Ok(()),
        }
    }

    /// Number of states.
    pub fn states(&self) -> u128 {
        match *self {
            ToySpec::Circle { t } => t as u128,
            ToySpec::Hypercube { d } => 1u128.checked_shl(d).unwrap_or(u128::MAX),
            ToySpec::Star { t, .. } => t as u128 + 1,
        }
    }

    /// `(β₁, β)` from the analytic spectrum.
    pub fn gaps(&self) -> (f64, f64) {
        match *self {
            ToySpec::Circle { t } => {
                let t = t as f64;
                ((2.0 * PI / t).cos(), (PI / t).cos())
            }
            ToySpec::Hypercube { d } => {
                let b = 1.0 - 1.0 / d as f64;
                (b, b)
            }
            ToySpec::Star { theta, .. } => (0.0, 1.0 - theta),
        }
    }

    /// Analytic eigenvalues, descending, with multiplicity. Only sensible for small spaces.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v = match *self {
            ToySpec::Circle { t } => (0..t).map(|k| (2.0 * PI * k as f64 / t as f64).cos()).collect(),
            ToySpec::Hypercube { d } => (0u64..(1u64 << d)).map(|z| 1.0 - z.count_ones() as f64 / d as f64).collect(),
            ToySpec::Star { t, theta } => {
                let mut v = vec![1.0, theta - 1.0];
                v.extend(std::iter::repeat_n(0.0, t - 1));
                v
            }
        };
        v.sort_by(|a: &f64, b| b.total_cmp(a));
        v
    }

    /// `C = sqrt(‖1/π‖∞) ‖ν/π - 1‖₂` for the canonical point-mass start.
    pub fn initial_constant(&self) -> f64 {
        match *self {
            ToySpec::Circle { t } => {
                let t = t as f64;
                (t * t - t).sqrt()
            }
            ToySpec::Hypercube { d } => {
                let s = 2f64.powi(d as i32);
                (s * s - s).sqrt()
            }
            ToySpec::Star { t, theta } => ((2.0 - theta) * t as f64).sqrt(),
        }
    }
}

pub fn make_example(spec: &ToySpec) -> Result<ToyExample> {
    make_example_with_cap(spec, DEFAULT_STATE_CAP)
}

pub fn make_example_with_cap(spec: &ToySpec, cap: usize) -> Result<ToyExample> {
    spec.validate()?;
    let size = spec.states();
    if size > cap as u128 {
        return Err(Error::SizeOverflow { size, cap: cap as u128 });
    }
    let n = size as usize;
    let (p, pi, f) = match *spec {
        ToySpec::Circle { t } => {
            let mut p = DMatrix::zeros(n, n);
            for x in 0..t {
                p[(x, (x + 1) % t)] = 0.5;
                p[(x, (x + t - 1) % t)] = 0.5;
            }
            let f = DVector::from_fn(n, |x, _| 2f64.sqrt() * (2.0 * PI * x as f64 / t as f64).cos());
            (p, DVector::from_element(n, 1.0 / t as f64), f)
        }
        ToySpec::Hypercube { d } => {
            let mut p = DMatrix::zeros(n, n);
            for x in 0..n {
                p[(x, x)] = 0.5;
                for i in 0..d {
                    p[(x, x ^ (1 << i))] = 0.5 / d as f64;
                }
            }
            let f = DVector::from_fn(n, |x, _| if x & 1 == 0 { 1.0 } else { -1.0 });
            (p, DVector::from_element(n, 1.0 / n as f64), f)
        }
        ToySpec::Star { t, theta } => {
            let mut p = DMatrix::zeros(n, n);
            p[(0, 0)] = theta;
            for y in 1..n {
                p[(0, y)] = (1.0 - theta) / t as f64;
                p[(y, 0)] = 1.0;
            }
            let leaf = (1.0 - theta) / (t as f64 * (2.0 - theta));
            let pi = DVector::from_fn(n, |x, _| if x == 0 { 1.0 / (2.0 - theta) } else { leaf });
            let amp = ((2.0 - theta) / (1.0 - theta)).sqrt();
            let f = DVector::from_fn(n, |x, _| match x {
                0 => 0.0,
                x if x <= t / 2 => amp,
                _ => -amp,
            });
            (p, pi, f)
        }
    };
    let chain = ReversibleChain::with_pi(StochasticMatrix::new(p)?, pi)?;
    let nu = InitialDistribution::point_mass(0, chain.pi())?;
    Ok(ToyExample { chain, f, nu })
}

/// Closed-form squared error `e_ν(S_{n,n0}, u₁)²` from the family's canonical start.
pub fn analytic_example_error(spec: &ToySpec, n: u64, n0: u64) -> Result<f64> {
    spec.validate()?;
    if n == 0 {
        return domain("n must be positive");
    }
    let nf = n as f64;
    Ok(match *spec {
        ToySpec::Circle { t } => {
            let b = (2.0 * PI / t as f64).cos();
            let c = (4.0 * PI / t as f64).cos();
            // Σ_j (1 + b - 2 b^{n-j+1}) / (1 - b) · c^{j+n0}
            let mut sum = 0.0;
            let mut cj = c.powf(n0 as f64);
            for j in 1..=n {
                cj *= c;
                let bk = b.powf((n - j + 1) as f64);
                sum += (1.0 + b - 2.0 * bk) / (1.0 - b) * cj;
                if cj.abs() < 1e-300 {
                    break;
                }
            }
            w_factor(n, b) / (nf * nf) + sum / (nf * nf)
        }
        ToySpec::Hypercube { d } => {
            let d = d as f64;
            (2.0 * d - 1.0) / nf - 2.0 * (d * d - d) * (1.0 - (1.0 - 1.0 / d).powf(nf)) / (nf * nf)
        }
        ToySpec::Star { theta, .. } => {
            let q = theta - 1.0;
            1.0 / nf - q.powf(n0 as f64 + 1.0) * (q.powf(nf) - 1.0) / ((theta - 2.0) * nf * nf)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_five() {
        let ex = make_example(&ToySpec::Circle { t: 5 }).unwrap();
        let p = ex.chain.p();
        assert_eq!(p[(0, 1)], 0.5);
        assert_eq!(p[(0, 4)], 0.5);
        assert_eq!(p[(2, 3)], 0.5);
    }

    #[test]
    fn hypercube_two() {
        let ex = make_example(&ToySpec::Hypercube { d: 2 }).unwrap();
        let p = ex.chain.p();
        assert_eq!(p[(0, 0)], 0.5);
        assert_eq!(p[(0, 1)], 0.25);
        assert_eq!(p[(0, 2)], 0.25);
        assert_eq!(p[(0, 3)], 0.0);
    }

    #[test]
    fn star_row_zero() {
        let ex = make_example(&ToySpec::Star { t: 4, theta: 0.3 }).unwrap();
        let row: Vec<f64> = (0..5).map(|j| ex.chain.p()[(0, j)]).collect();
        let expect = [0.3, 0.175, 0.175, 0.175, 0.175];
        for (a, b) in row.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        let ex = make_example(&ToySpec::Star { t: 2, theta: 0.5 }).unwrap();
        let pi = ex.chain.pi();
        assert!((pi[0] - 2.0 / 3.0).abs() < 1e-15 && (pi[1] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn size_cap() {
        assert!(matches!(make_example(&ToySpec::Hypercube { d: 13 }), Err(Error::SizeOverflow { .. })));
        assert!(make_example(&ToySpec::Circle { t: 4 }).is_err());
    }

    #[test]
    fn star_stationary_limit() {
        let spec = ToySpec::Star { t: 100_000, theta: 0.1 };
        let n = 37;
        let e = analytic_example_error(&spec, n, 100_000).unwrap();
        assert!((e - 1.0 / n as f64).abs() < 1e-15);
    }
}
