//! Subcommand bodies; each returns the CSV document it emits.

use mcmc_cert::bound_calculus::{est_upper, minimize_burnin, suggest_burnin_aggregate};
use mcmc_cert::finite_chain::{
    analytic_example_error, bounds_finite, bounds_from_gaps, exact_mse, initial_constant, lazy, make_example,
    spectral_decompose, suggest_burnin_finite, InitialDistribution, ReversibleChain, StochasticMatrix, ToySpec,
};
use mcmc_cert::mcmc_estimator::{certify, empirical_mse, Integrand, RunConfig, VERDICT_CSV_HEADER};
use mcmc_cert::planner::{
    plan_contracting_normals, plan_convex_body, plan_logconcave, plan_worked_example, Plan, WorkedExample,
    NORMALS_CSV_HEADER,
};
use mcmc_cert::sampler_core::{builtin_kernel, Initial, KernelSampler};
use nalgebra::DVector;
use sha2::{Digest, Sha256};

use crate::config::{
    to_json, BoundConfig, BurninTableConfig, Config, EstimateConfig, Figure, FigureConfig, MatrixConfig,
    NormalsTableConfig, PlanConfig, Problem, ToyConfig,
};
use crate::csv::{float, int, opt_float, opt_int, Table};
use crate::CliError;

/// Flags that override configuration values.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub replications: Option<u64>,
}

/// About `count` log-spaced integers in `[lo, hi]`, deduplicated.
pub fn log_grid(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    let (a, b) = ((lo.max(1) as f64).ln(), (hi.max(lo) as f64).ln());
    let mut v: Vec<u64> = (0..count)
        .map(|i| {
            let t = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.0 };
            ((a + t * (b - a)).exp().round() as u64).clamp(lo, hi.max(lo))
        })
        .collect();
    v.dedup();
    v
}

const DEFAULT_N_GRID: (u64, u64, usize) = (1, 1_000_000, 30);

fn default_grid(n: &Option<Vec<u64>>) -> Vec<u64> {
    n.clone().unwrap_or_else(|| log_grid(DEFAULT_N_GRID.0, DEFAULT_N_GRID.1, DEFAULT_N_GRID.2))
}

struct FiniteInput {
    chain: ReversibleChain,
    f: DVector<f64>,
    nu: InitialDistribution,
    grid: Vec<u64>,
    n0: Option<u64>,
}

fn matrix_input(m: &MatrixConfig) -> Result<FiniteInput, CliError> {
    let mut matrix = StochasticMatrix::from_rows(&m.rows)?;
    if m.lazy {
        matrix = lazy(&matrix);
    }
    let chain = ReversibleChain::new(matrix)?;
    let size = chain.size();
    if m.f.len() != size {
        return Err(CliError::Schema(format!("key `f`: expected {size} values, got {}", m.f.len())));
    }
    let nu = match &m.nu {
        Some(nu) if nu.len() != size => {
            return Err(CliError::Schema(format!("key `nu`: expected {size} values, got {}", nu.len())))
        }
        Some(nu) => InitialDistribution::new(DVector::from_vec(nu.clone()), chain.pi())?,
        None if m.start >= size => return Err(CliError::Schema(format!("key `start`: {} out of range", m.start))),
        None => InitialDistribution::point_mass(m.start, chain.pi())?,
    };
    Ok(FiniteInput { f: DVector::from_vec(m.f.clone()), nu, grid: default_grid(&m.n), n0: m.n0, chain })
}

fn toy_input(t: &ToyConfig) -> Result<FiniteInput, CliError> {
    let ex = make_example(&t.spec()?)?;
    Ok(FiniteInput { chain: ex.chain, f: ex.f, nu: ex.nu, grid: default_grid(&t.n), n0: t.n0 })
}

fn finite_input(cfg: &Config) -> Result<FiniteInput, CliError> {
    match cfg {
        Config::Toy(t) => toy_input(t),
        Config::Matrix(m) => matrix_input(m),
        other => Err(wrong_kind(other, "toy or matrix")),
    }
}

pub fn wrong_kind(cfg: &Config, want: &str) -> CliError {
    CliError::Schema(format!("key `kind`: `{}` does not fit this subcommand (expected {want})", cfg.kind()))
}

pub fn finite_spectrum(cfg: &Config) -> Result<String, CliError> {
    let input = finite_input(cfg)?;
    let s = spectral_decompose(&input.chain)?;
    let coef = s.coefficients(&input.f);
    let mut t = Table::new("finite_spectrum", "k,eigenvalue,f_coefficient");
    for (k, (lambda, a)) in s.eigenvalues.iter().zip(&coef).enumerate() {
        t.row(&[int(k as u64), float(*lambda), float(*a)]);
    }
    Ok(t.into_string())
}

pub fn finite_burnin(cfg: &Config) -> Result<String, CliError> {
    let (beta1, beta, c) = match cfg {
        // the analytic spectrum also covers families too large to materialize
        Config::Toy(t) => {
            let spec = t.spec()?;
            let (b1, b) = spec.gaps();
            (b1, b, spec.initial_constant())
        }
        _ => {
            let input = finite_input(cfg)?;
            let s = spectral_decompose(&input.chain)?;
            (s.beta1, s.beta, initial_constant(&input.nu, input.chain.pi()))
        }
    };
    let n0 = suggest_burnin_finite(c, beta)?;
    let mut t = Table::new("finite_burnin", "beta1,beta,C,n0");
    t.row(&[float(beta1), float(beta), float(c), int(n0)]);
    Ok(t.into_string())
}

pub fn finite_error(cfg: &Config) -> Result<String, CliError> {
    let input = finite_input(cfg)?;
    let s = spectral_decompose(&input.chain)?;
    let c = initial_constant(&input.nu, input.chain.pi());
    let n0 = match input.n0 {
        Some(n0) => n0,
        None => suggest_burnin_finite(c, s.beta)?,
    };
    let mut t = Table::new("finite_error", "n,n0,exact_mse,lower_mse,upper_mse");
    for &n in &input.grid {
        let exact = exact_mse(&input.chain, &input.nu, &input.f, n, n0)?;
        let b = bounds_finite(&s, c, n, n0)?;
        t.row(&[int(n), int(n0), float(exact), float(b.lower), float(b.upper)]);
    }
    Ok(t.into_string())
}

pub fn finite_example(cfg: &Config) -> Result<String, CliError> {
    let Config::Toy(toy) = cfg else { return Err(wrong_kind(cfg, "toy")) };
    let spec = toy.spec()?;
    let (beta1, beta) = spec.gaps();
    let c = spec.initial_constant();
    let n0 = match toy.n0 {
        Some(n0) => n0,
        None => suggest_burnin_finite(c, beta)?,
    };
    let mut t = Table::new("finite_example", "n,n0,analytic_mse,lower_mse,upper_mse");
    for n in default_grid(&toy.n) {
        let exact = analytic_example_error(&spec, n, n0)?;
        let b = bounds_from_gaps(beta1, beta, c, n, n0)?;
        t.row(&[int(n), int(n0), float(exact), float(b.lower), float(b.upper)]);
    }
    Ok(t.into_string())
}

pub fn bound_eval(cfg: &BoundConfig) -> Result<String, CliError> {
    let n0 = match cfg.n0 {
        Some(n0) => n0,
        None => suggest_burnin_aggregate(cfg.c, cfg.beta, cfg.p)?,
    };
    let mut t = Table::new("bound_eval", "n,n0,beta,C,p,est_upper");
    for &n in &cfg.n {
        if n == 0 {
            return Err(CliError::Schema("key `n`: sample sizes must be positive".into()));
        }
        let est = est_upper(n, n0, cfg.beta, cfg.c, cfg.p);
        t.row(&[int(n), int(n0), float(cfg.beta), float(cfg.c), float(cfg.p), float(est)]);
    }
    Ok(t.into_string())
}

pub const BURNIN_TABLE_HEADER: &str =
    "N,beta,n_opt_2,suggested_2,n_opt_p,suggested_p,budget_constrained_2,budget_constrained_p";

pub fn burnin_table(cfg: &BurninTableConfig) -> Result<String, CliError> {
    let mut t = Table::new("burnin_table", BURNIN_TABLE_HEADER);
    for &beta in &cfg.beta {
        for &total in &cfg.totals {
            let s2 = minimize_burnin(total, beta, cfg.c, 2.0)?;
            let sp = minimize_burnin(total, beta, cfg.c, cfg.p)?;
            t.row(&[
                int(total),
                float(beta),
                int(s2.n_opt),
                int(s2.suggested),
                int(sp.n_opt),
                int(sp.suggested),
                s2.budget_constrained.to_string(),
                sp.budget_constrained.to_string(),
            ]);
        }
    }
    Ok(t.into_string())
}

pub fn normals_table(cfg: &NormalsTableConfig) -> Result<String, CliError> {
    let mut t = Table::new("normals_table", NORMALS_CSV_HEADER);
    for &theta in &cfg.theta {
        t.raw(&plan_contracting_normals(theta, cfg.x0, cfg.delta, cfg.p, Some(cfg.eps))?.csv_row());
    }
    Ok(t.into_string())
}

const PLAN_HEADER: &str = "delta,n0,n,gap_lower,error_bound,est_bound,error_lower,oracle_budget";

fn plan_row(p: &Plan) -> Vec<String> {
    vec![
        opt_float(p.delta),
        int(p.n0),
        opt_int(p.n),
        float(p.gap_lower),
        opt_float(p.error_bound),
        opt_float(p.est_bound),
        opt_float(p.error_lower),
        opt_float(p.oracle_budget),
    ]
}

pub fn plan(cfg: &PlanConfig) -> Result<String, CliError> {
    let worked = |w: WorkedExample, eps| plan_worked_example(&w, eps);
    let p = match cfg.problem {
        Problem::Logconcave(prob) => plan_logconcave(&prob)?,
        Problem::ConvexBody(prob) => plan_convex_body(&prob)?,
        Problem::ContractingNormals(prob) => {
            let plan = plan_contracting_normals(prob.theta, prob.x0, prob.delta, prob.p, prob.eps)?;
            let mut t = Table::new("normals_table", NORMALS_CSV_HEADER);
            t.raw(&plan.csv_row());
            return Ok(t.into_string());
        }
        Problem::Example1(s) => worked(WorkedExample::Example1 { delta: s.delta }, s.eps)?,
        Problem::Example2(s) => worked(WorkedExample::Example2 { delta: s.delta }, s.eps)?,
        Problem::IndependenceNormal(s) => {
            worked(WorkedExample::IndependenceNormal { xi: s.xi, x0: s.x0, delta: s.delta }, s.eps)?
        }
    };
    let mut t = Table::new("plan", PLAN_HEADER);
    t.row(&plan_row(&p));
    Ok(t.into_string())
}

/// First 16 hex digits of the SHA-256 of the canonical configuration.
pub fn config_hash(cfg: &Config) -> String {
    let digest = Sha256::digest(to_json(cfg).as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

const ESTIMATE_HEADER: &str =
    "config_hash,n,n0,replications,mean_estimate,empirical_mse,std_error,true_value,f_calls,rho_calls,membership_calls,seed";

/// Runs the configured estimator; returns the CSV and the seed actually used.
pub fn estimate(cfg: &EstimateConfig, overrides: Overrides) -> Result<(String, u64), CliError> {
    let mut cfg = cfg.clone();
    if let Some(r) = overrides.replications {
        cfg.replications = r;
    }
    let seed = overrides.seed.or(cfg.seed).unwrap_or_else(rand::random);
    cfg.seed = Some(seed);

    let (kernel, initial, f, true_value, n0, bracket): (
        KernelSampler,
        Initial,
        Integrand,
        f64,
        u64,
        Option<(f64, f64)>,
    ) = match (&cfg.kernel, &cfg.toy) {
        (Some(_), Some(_)) => return Err(CliError::Schema("keys `kernel` and `toy` are mutually exclusive".into())),
        (None, None) => return Err(CliError::Schema("missing key `kernel` (or `toy`)".into())),
        (Some(kind), None) => {
            let kernel = builtin_kernel(kind, cfg.lazy)?;
            let initial = cfg.initial.clone().ok_or_else(|| CliError::Schema("missing key `initial`".into()))?;
            let f = cfg.f.as_ref().ok_or_else(|| CliError::Schema("missing key `f`".into()))?.build();
            let truth = cfg.true_value.ok_or_else(|| CliError::Schema("missing key `true_value`".into()))?;
            (kernel, initial, f, truth, cfg.n0.unwrap_or(0), None)
        }
        (None, Some(spec)) => toy_run(spec, &cfg)?,
    };
    let run = RunConfig { kernel, initial, f, n: cfg.n, n0, replications: cfg.replications, seed };
    run.validate()?;
    let report = empirical_mse(&run, true_value)?;
    let hash = config_hash(&Config::Estimate(cfg.clone()));

    let lower = cfg.lower.or(bracket.map(|b| b.0));
    let upper = cfg.upper.or(bracket.map(|b| b.1));
    let text = if lower.is_some() || upper.is_some() {
        let v = certify(&report, lower.unwrap_or(0.0), upper.unwrap_or(f64::INFINITY));
        let mut t = Table::new("certify", VERDICT_CSV_HEADER);
        t.raw(&v.csv_row(&hash));
        t.into_string()
    } else {
        let mut t = Table::new("estimate", ESTIMATE_HEADER);
        let c = &report.oracle_calls;
        t.row(&[
            hash,
            int(report.n),
            int(report.n0),
            int(report.replications),
            float(report.mean_estimate),
            float(report.empirical_mse),
            float(report.mse_std_error),
            float(true_value),
            int(c.f),
            int(c.rho),
            int(c.membership),
            int(seed),
        ]);
        t.into_string()
    };
    Ok((text, seed))
}

type ToyRun = (KernelSampler, Initial, Integrand, f64, u64, Option<(f64, f64)>);

/// Toy chains default to the canonical start and integrand and certify against the finite
/// bounds.
fn toy_run(spec: &ToySpec, cfg: &EstimateConfig) -> Result<ToyRun, CliError> {
    spec.validate()?;
    let ex = make_example(spec)?;
    let matrix = if cfg.lazy { lazy(ex.chain.matrix()) } else { ex.chain.matrix().clone() };
    let kernel = KernelSampler::finite(&matrix, false);
    let initial =
        cfg.initial.clone().unwrap_or_else(|| Initial::Discrete { probs: ex.nu.nu().iter().copied().collect() });
    let f = match &cfg.f {
        Some(named) => named.build(),
        None => Integrand::table(ex.f.iter().copied().collect()),
    };
    let truth = match (cfg.true_value, &cfg.f) {
        (Some(v), _) => v,
        (None, None) => ex.chain.mean(&ex.f),
        (None, Some(_)) => return Err(CliError::Schema("missing key `true_value`".into())),
    };
    let (beta1, beta) = if cfg.lazy {
        let s = spectral_decompose(&ReversibleChain::with_pi(matrix.clone(), ex.chain.pi().clone())?)?;
        (s.beta1, s.beta)
    } else {
        spec.gaps()
    };
    let c = spec.initial_constant();
    let n0 = match cfg.n0 {
        Some(n0) => n0,
        None => suggest_burnin_finite(c, beta)?,
    };
    // the finite bounds hold for the canonical start and the unit-norm integrand only
    let bracket = if cfg.initial.is_none() && cfg.f.is_none() && cfg.n > 0 {
        let b = bounds_from_gaps(beta1, beta, c, cfg.n, n0)?;
        Some((b.lower.sqrt(), b.upper.sqrt()))
    } else {
        None
    };
    Ok((kernel, initial, f, truth, n0, bracket))
}

pub const FIGURE_HEADER: &str = "N,n0,exact_error,lower_bound,upper_bound";

/// Squared exact error and bounds at sample size `n` for a figure instance.
type Curve = Box<dyn Fn(u64) -> Result<(f64, f64, f64), CliError>>;

pub fn figure_data(cfg: &FigureConfig) -> Result<String, CliError> {
    if cfg.which == Figure::FigEstCurves {
        return est_curves(cfg);
    }
    if cfg.n0.is_some() {
        return Err(CliError::Schema("key `n0`: only applies to `fig_est_curves`".into()));
    }
    let toy = |spec: ToySpec, beta_upper: bool| -> Result<(u64, Curve), CliError> {
        let (beta1, beta) = spec.gaps();
        let n0 = suggest_burnin_finite(spec.initial_constant(), beta)?;
        let curve: Curve = Box::new(move |n| {
            // at the suggested burn-in C·β^{n0} ≤ 1, which turns the bias term into 2/(n(1−β))²
            let b = bounds_from_gaps(beta1, beta, 1.0, n, 0)?;
            let upper = if beta_upper { b.upper_uniform } else { b.upper };
            Ok((analytic_example_error(&spec, n, n0)?, b.lower_uniform, upper))
        });
        Ok((n0, curve))
    };
    let (n0, hi, curve) = match cfg.which {
        Figure::Fig2Circle => {
            let (n0, c) = toy(ToySpec::Circle { t: 999 }, false)?;
            (n0, 100_000_000, c)
        }
        Figure::Fig3Hypercube => {
            let (n0, c) = toy(ToySpec::Hypercube { d: 50 }, true)?;
            (n0, 1_000_000, c)
        }
        Figure::Fig4Star => {
            let (n0, c) = toy(ToySpec::Star { t: 100_000, theta: 0.1 }, true)?;
            (n0, 1_000_000, c)
        }
        Figure::Fig5Example2 => {
            let n0 = plan_worked_example(&WorkedExample::Example2 { delta: 1e-3 }, None)?.n0;
            let curve: Curve = Box::new(|n| {
                let nf = n as f64;
                let exact = 3.0 / nf - 4.0 * (1.0 - 0.5f64.powf(nf)) / (nf * nf);
                Ok((exact, (3.0 / nf - 16.0 / (nf * nf)).max(0.0), 4.0 / nf + 8.0 / (nf * nf)))
            });
            (n0, 10_000, curve)
        }
        Figure::FigEstCurves => unreachable!(),
    };
    let totals = cfg.totals.clone().unwrap_or_else(|| log_grid(n0 + 1, n0 + hi, 40));
    let mut t = Table::new(figure_name(cfg.which), FIGURE_HEADER);
    for total in totals {
        if total <= n0 {
            continue;
        }
        let (exact, lower, upper) = curve(total - n0)?;
        t.row(&[int(total), int(n0), float(exact.sqrt()), float(lower.sqrt()), float(upper.sqrt())]);
    }
    Ok(t.into_string())
}

fn figure_name(f: Figure) -> &'static str {
    match f {
        Figure::Fig2Circle => "fig2_circle",
        Figure::Fig3Hypercube => "fig3_hypercube",
        Figure::Fig4Star => "fig4_star",
        Figure::Fig5Example2 => "fig5_example2",
        Figure::FigEstCurves => "fig_est_curves",
    }
}

const EST_CURVE_BETA: f64 = 0.99;
const EST_CURVE_C: f64 = 1e30;

/// `N ↦ est(N − n0, n0)` for several burn-ins, next to the stationary worst-case error.
fn est_curves(cfg: &FigureConfig) -> Result<String, CliError> {
    let (beta, c) = (EST_CURVE_BETA, EST_CURVE_C);
    let suggested = suggest_burnin_aggregate(c, beta, 2.0)?;
    let burnins = cfg.n0.clone().unwrap_or_else(|| vec![suggested / 2, suggested, 2 * suggested]);
    let totals = cfg.totals.clone().unwrap_or_else(|| log_grid(10_000, 100_000, 40));
    let mut t = Table::new("fig_est_curves", "N,n0,est_bound,stationary_error");
    let g = 1.0 - beta;
    for &n0 in &burnins {
        for &total in &totals {
            if total <= n0 {
                continue;
            }
            let nf = total as f64;
            let stationary = ((1.0 + beta) / (nf * g) - 2.0 * beta * (1.0 - beta.powf(nf)) / (nf * nf * g * g)).sqrt();
            t.row(&[int(total), int(n0), float(est_upper(total - n0, n0, beta, c, 2.0)), float(stationary)]);
        }
    }
    Ok(t.into_string())
}
