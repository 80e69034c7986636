//! Certified plans (step size, burn-in, sample size, error bound) for log-concave
//! integration on balls, uniform integration on convex bodies and the one-dimensional
//! worked examples.

use serde::{Deserialize, Serialize};

use crate::bound_calculus::{
    metro_delta_star, metro_gap_lower, optimize_beta_hat, sample_size_for_eps, suggest_burnin_general, BurninInputs,
    GapParams,
};
use crate::error::{domain, Error, Result};
use crate::numeric::ceil_count;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogConcaveProblem {
    pub d: usize,
    pub r: f64,
    #[serde(rename = "L")]
    pub lip: f64,
    pub p: f64,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexBodyProblem {
    pub d: usize,
    pub r: f64,
    pub p: f64,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub delta: Option<f64>,
    pub n0: u64,
    /// Present when a target precision was given.
    pub n: Option<u64>,
    pub gap_lower: f64,
    /// Root-MSE bound of the plan at `(n, n0)`.
    pub error_bound: Option<f64>,
    /// `sqrt(2/(n·gap) + 2/(n·gap)²)` evaluated from `gap_lower` and `n`.
    pub est_bound: Option<f64>,
    /// Root-MSE lower bound, where one is known.
    pub error_lower: Option<f64>,
    /// Expected oracle calls for the whole run (density or membership, plus `f`).
    pub oracle_budget: Option<f64>,
}

fn check_p(p: f64) -> Result<()> {
    if p > 2.0 {
        Ok(())
    } else {
        domain(format!("p = {p} must exceed 2"))
    }
}

fn check_eps(eps: Option<f64>) -> Result<()> {
    match eps {
        Some(e) if !(e > 0.0 && e.is_finite()) => domain(format!("eps = {e} must be positive")),
        _ => Ok(()),
    }
}

/// `ceil_count` that refuses values beyond the `u64` range.
fn count(x: f64) -> Result<u64> {
    if x >= u64::MAX as f64 {
        return Err(Error::CountOverflow { value: x });
    }
    Ok(ceil_count(x))
}

/// Smallest `n` with `a/√n + b/n ≤ eps`.
fn solve_root_display(a: f64, b: f64, eps: f64) -> Result<u64> {
    let x = 2.0 * eps / (a + (a * a + 4.0 * b * eps).sqrt());
    let mut n = count(1.0 / (x * x))?.max(1);
    while n > 1 && a / ((n - 1) as f64).sqrt() + b / (n - 1) as f64 <= eps {
        n -= 1;
    }
    while a / (n as f64).sqrt() + b / n as f64 > eps {
        n += 1;
    }
    Ok(n)
}

/// `est_upper(n, 0, 1 − gap, 1, ·)` written in terms of the gap, which for hit-and-run is
/// far below the spacing of doubles near 1.
fn gap_est(n: u64, gap: f64) -> f64 {
    let t = 1.0 / (n as f64 * gap);
    (2.0 * t + 2.0 * t * t).sqrt()
}

/// Scale factor `(d+1)·max{r²L², d+1}` shared by the log-concave displays.
fn logconcave_scale(prob: &LogConcaveProblem) -> f64 {
    let d1 = (prob.d + 1) as f64;
    d1 * (prob.r * prob.r * prob.lip * prob.lip).max(d1)
}

fn logconcave_branch(prob: &LogConcaveProblem) -> f64 {
    let (p, lr) = (prob.p, prob.lip * prob.r);
    if p < 4.0 {
        p / (p - 2.0) * (lr + 0.5 * (32.0 * p / (p - 2.0)).ln())
    } else {
        2.0 * lr + 4.16
    }
}

/// Plan for the lazy ball-walk Metropolis algorithm with uniform start on `rB`.
pub fn plan_logconcave(prob: &LogConcaveProblem) -> Result<Plan> {
    check_p(prob.p)?;
    check_eps(prob.eps)?;
    let LogConcaveProblem { d, r, lip, .. } = *prob;
    let gap = metro_gap_lower(d, r, lip, None)?;
    let scale = logconcave_scale(prob);
    let n0 = count(5.92e6 * scale * logconcave_branch(prob))?;
    let d1 = (d + 1) as f64;
    let a = 1089.0 * d1.sqrt() * (r * lip).max(d1.sqrt());
    let b = 8.38e5 * scale;
    let n = prob.eps.map(|e| solve_root_display(a, b, e)).transpose()?;
    Ok(Plan {
        delta: Some(metro_delta_star(d, r, lip)),
        n0,
        n,
        gap_lower: gap,
        error_bound: n.map(|n| a / (n as f64).sqrt() + b / n as f64),
        est_bound: n.map(|n| gap_est(n, gap)),
        error_lower: None,
        oracle_budget: n.map(|n| n0 as f64 + 2.0 * n as f64),
    })
}

/// Upper bound of the log-concave complexity display.
pub fn logconcave_complexity(prob: &LogConcaveProblem, eps: f64) -> f64 {
    logconcave_scale(prob) * (4.8e6 / (eps * eps) + 1.2e6 * logconcave_branch(prob))
}

fn convex_branch(prob: &ConvexBodyProblem) -> f64 {
    let (p, dlr) = (prob.p, prob.d as f64 * prob.r.ln());
    if p < 4.0 {
        p / (2.0 * (p - 2.0)) * (dlr + (32.0 * p / (p - 2.0)).ln())
    } else {
        dlr + 4.16
    }
}

/// Expected membership calls per hit-and-run step at `eps0 = 1e-9·r`.
pub fn hit_and_run_calls_per_step() -> f64 {
    3.0 * (2.0 / 1e-9f64).log2() + 8.0
}

/// Plan for lazy hit-and-run on `A ∈ 𝒮_d(r)` with uniform start on the unit ball.
pub fn plan_convex_body(prob: &ConvexBodyProblem) -> Result<Plan> {
    check_p(prob.p)?;
    check_eps(prob.eps)?;
    if prob.d == 0 || !(prob.r >= 1.0) {
        return domain(format!("need d >= 1 and r >= 1, got d = {}, r = {}", prob.d, prob.r));
    }
    let dr = prob.d as f64 * prob.r;
    let gap = 2f64.powi(-52) / (dr * dr);
    let n0 = count(4.51e15 * dr * dr * convex_branch(prob))?;
    let (a, b) = (9.5e7 * dr, 6.4e15 * dr * dr);
    let n = prob.eps.map(|e| solve_root_display(a, b, e)).transpose()?;
    Ok(Plan {
        delta: None,
        n0,
        n,
        gap_lower: gap,
        error_bound: n.map(|n| a / (n as f64).sqrt() + b / n as f64),
        est_bound: n.map(|n| gap_est(n, gap)),
        error_lower: None,
        oracle_budget: n.map(|n| (n0 as f64 + n as f64) * hit_and_run_calls_per_step() + n as f64),
    })
}

/// Upper bound of the convex-body complexity display.
pub fn convex_complexity(prob: &ConvexBodyProblem, eps: f64) -> f64 {
    let dr = prob.d as f64 * prob.r;
    dr * dr * (4e16 / (eps * eps) + 5e15 * convex_branch(prob))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractingNormalsPlan {
    pub theta: f64,
    pub c: f64,
    pub beta_hat: f64,
    pub plan: Plan,
}

pub const NORMALS_CSV_HEADER: &str = "theta,c,beta_hat,n0,n,N";

impl ContractingNormalsPlan {
    pub fn total(&self) -> Option<u64> {
        self.plan.n.map(|n| n + self.plan.n0)
    }

    pub fn csv_row(&self) -> String {
        let n = self.plan.n.map_or(String::new(), |v| v.to_string());
        let total = self.total().map_or(String::new(), |v| v.to_string());
        format!("{:.16e},{:.16e},{:.16e},{},{},{}", self.theta, self.c, self.beta_hat, self.plan.n0, n, total)
    }
}

/// `‖dν/dπ − 1‖∞` bound for `ν = U[x0−δ, x0+δ]` against `N(0,1)`.
pub fn normal_start_density_norm(x0: f64, delta: f64) -> f64 {
    (std::f64::consts::PI / 2.0).sqrt() * ((x0 + delta).powi(2) / 2.0).exp() / delta
}

/// Plan for the contracting normal chain with start uniform on `[x0−δ, x0+δ]`.
pub fn plan_contracting_normals(
    theta: f64,
    x0: f64,
    delta: f64,
    p: f64,
    eps: Option<f64>,
) -> Result<ContractingNormalsPlan> {
    check_p(p)?;
    check_eps(eps)?;
    if !(delta > 0.0 && delta < 1.0) || !(x0 >= 0.0) {
        return domain(format!("need delta in (0, 1) and x0 >= 0, got delta = {delta}, x0 = {x0}"));
    }
    let (c, beta_hat) = optimize_beta_hat(theta)?;
    let g = GapParams::new(beta_hat, beta_hat)?;
    let inputs = BurninInputs { c: 1.0, p, density_norm: normal_start_density_norm(x0, delta), normal_op: false };
    let n0 = suggest_burnin_general(&inputs, &g)?;
    let n = eps.map(|e| sample_size_for_eps(beta_hat, e)).transpose()?;
    let gap = 1.0 - beta_hat;
    Ok(ContractingNormalsPlan {
        theta,
        c,
        beta_hat,
        plan: Plan {
            delta: None,
            n0,
            n,
            gap_lower: gap,
            error_bound: n.map(|n| gap_est(n, gap)),
            est_bound: n.map(|n| gap_est(n, gap)),
            error_lower: None,
            oracle_budget: n.map(|n| (n + n0) as f64),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "example", rename_all = "snake_case", deny_unknown_fields)]
pub enum WorkedExample {
    /// Start uniform on `[0, δ]`.
    Example1 { delta: f64 },
    /// Start uniform on `[0, δ]`.
    Example2 { delta: f64 },
    /// Start uniform on `[x0−δ, x0+δ]`.
    IndependenceNormal { xi: f64, x0: f64, delta: f64 },
}

/// Root-MSE lower bound as a function of `n`.
type LowerBound = fn(f64) -> f64;

/// Plan for one of the one-dimensional examples; `eps` selects the sample size.
pub fn plan_worked_example(which: &WorkedExample, eps: Option<f64>) -> Result<Plan> {
    check_eps(eps)?;
    let (gap, n0, lower): (f64, u64, Option<LowerBound>) = match *which {
        WorkedExample::Example1 { delta } => {
            if !(delta > 0.0 && delta <= 1.0) {
                return domain(format!("delta = {delta} must lie in (0, 1]"));
            }
            let alpha = 1.0 / 24.0;
            let g = GapParams::new(alpha, alpha)?.with_l1(alpha, 1.0, true)?;
            let inputs = BurninInputs { c: 1.0, p: 2.0, density_norm: 4.0 / (3.0 * delta) - 1.0, normal_op: false };
            (1.0 - alpha, suggest_burnin_general(&inputs, &g)?, None)
        }
        WorkedExample::Example2 { delta } => {
            if !(delta > 0.0 && delta <= 1.0) {
                return domain(format!("delta = {delta} must lie in (0, 1]"));
            }
            let g = GapParams::new(0.5, 0.5)?.with_l1(0.5, 3.0, true)?;
            let inputs = BurninInputs { c: 1.0, p: 2.0, density_norm: 2.0 / delta - 1.0, normal_op: false };
            let lower: fn(f64) -> f64 = |n| (3.0 / n - 16.0 / (n * n)).max(0.0).sqrt();
            (0.5, suggest_burnin_general(&inputs, &g)?, Some(lower))
        }
        WorkedExample::IndependenceNormal { xi, x0, delta } => {
            if !(xi > 1.0) || !(delta > 0.0 && delta < 1.0) || !(x0 >= 0.0) {
                return domain(format!("need xi > 1, delta in (0, 1), x0 >= 0; got {xi}, {delta}, {x0}"));
            }
            let n0 = ceil_count(xi * ((1.0 / delta).ln() + (x0 + delta).powi(2) / 2.0 + 0.23));
            (1.0 / xi, n0, None)
        }
    };
    let n = match eps {
        None => None,
        Some(e) => {
            let mut n = sample_size_for_eps(1.0 - gap, e)?;
            while n > 1 && gap_est(n - 1, gap) <= e {
                n -= 1;
            }
            Some(n)
        }
    };
    Ok(Plan {
        delta: None,
        n0,
        n,
        gap_lower: gap,
        error_bound: n.map(|n| gap_est(n, gap)),
        est_bound: n.map(|n| gap_est(n, gap)),
        error_lower: n.and_then(|n| lower.map(|l| l(n as f64))),
        oracle_budget: n.map(|n| (n + n0) as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logconcave_unit_interval_burnin() {
        let p = plan_logconcave(&LogConcaveProblem { d: 1, r: 1.0, lip: 0.0, p: f64::INFINITY, eps: None }).unwrap();
        assert_eq!(p.n0, 98_508_800);
        assert_eq!(p.delta, Some(1.0 / 2f64.sqrt()));
    }

    #[test]
    fn convex_unit_ball_burnin() {
        let p = plan_convex_body(&ConvexBodyProblem { d: 1, r: 1.0, p: 4.0, eps: None }).unwrap();
        assert_eq!(p.n0, 18_761_600_000_000_000);
    }

    #[test]
    fn oversized_plans_are_rejected() {
        let e = plan_convex_body(&ConvexBodyProblem { d: 10, r: 10.0, p: 4.0, eps: Some(0.05) }).unwrap_err();
        assert!(matches!(e, Error::CountOverflow { .. }));
    }

    #[test]
    fn example2_burnin_is_13() {
        let p = plan_worked_example(&WorkedExample::Example2 { delta: 1e-3 }, None).unwrap();
        assert_eq!(p.n0, 13);
    }

    #[test]
    fn example1_large_delta_needs_no_burnin() {
        let p = plan_worked_example(&WorkedExample::Example1 { delta: 2.0 / 3.0 }, None).unwrap();
        assert_eq!(p.n0, 0);
    }

    #[test]
    fn worked_bounds_match_closed_forms() {
        let n = 1000.0f64;
        let e1 = gap_est(1000, 23.0 / 24.0).powi(2);
        assert!((e1 - (48.0 / (23.0 * n) + 1152.0 / (529.0 * n * n))).abs() < 1e-15);
        let e2 = gap_est(1000, 0.5).powi(2);
        assert!((e2 - (4.0 / n + 8.0 / (n * n))).abs() < 1e-15);
        let xi = 2.0;
        let e3 = gap_est(1000, 1.0 / xi).powi(2);
        assert!((e3 - (2.0 * xi / n + 2.0 * xi * xi / (n * n))).abs() < 1e-15);
    }

    #[test]
    fn gap_est_agrees_with_est_upper() {
        for (n, gap) in [(10u64, 0.5), (1000, 0.01), (12345, 1.0 / 24.0)] {
            let a = gap_est(n, gap);
            let b = crate::bound_calculus::est_upper(n, 0, 1.0 - gap, 1.0, f64::INFINITY);
            assert!((a - b).abs() <= 1e-12 * b);
        }
    }

    #[test]
    fn solved_sample_sizes_are_minimal() {
        let n = solve_root_display(2178.0, 3.352e6, 0.01).unwrap();
        let f = |n: u64| 2178.0 / (n as f64).sqrt() + 3.352e6 / n as f64;
        assert!(f(n) <= 0.01 && f(n - 1) > 0.01);
    }
}
