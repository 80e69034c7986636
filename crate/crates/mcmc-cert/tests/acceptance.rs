//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use common::stats::{chi2_pvalue, ks_pvalue};
use common::{brute_force_mse, random_reversible, seeded};
use mcmc_cert::bound_calculus::*;
use mcmc_cert::finite_chain::*;
use mcmc_cert::mcmc_estimator::{empirical_mse, example2_eigen, Integrand, RunConfig};
use mcmc_cert::numeric::normal_cdf;
use mcmc_cert::planner::*;
use mcmc_cert::sampler_core::*;
use mcmc_cert::Error;
use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn burnin_grid(o: &mut Outcome) {
    let c = 1e30;
    // (N, β, n_opt for p ∈ {2}∪[4,∞], suggested, n_opt for p = 2.1, suggested)
    let rows: [(u64, f64, u64, u64, u64, u64); 6] = [
        (100_000, 0.9, 656, 656, 6655, 6885),
        (1_000_000, 0.9, 656, 656, 6655, 6885),
        (100_000, 0.99, 6873, 6874, 69642, 72169),
        (1_000_000, 0.99, 6874, 6874, 69715, 72169),
        (100_000, 0.999, 68977, 69043, 79011, 724952),
        (1_000_000, 0.999, 69041, 69043, 699520, 724952),
    ];
    for (total, beta, opt2, sug2, opt21, sug21) in rows {
        for (p, opt, sug) in [(2.0, opt2, sug2), (2.1, opt21, sug21)] {
            let s = minimize_burnin(total, beta, c, p).unwrap();
            o.check(s.n_opt.abs_diff(opt) <= 1, format!("N={total} β={beta} p={p}: n_opt {} vs {opt}", s.n_opt));
            let suggested = suggest_burnin_aggregate(c, beta, p).unwrap();
            o.check(suggested == sug, format!("N={total} β={beta} p={p}: suggested {suggested} vs {sug}"));
            if opt == 79011 {
                o.check(s.budget_constrained, "79011 cell not flagged budget-constrained");
            }
        }
    }
}

fn contracting_normals(o: &mut Outcome) {
    let (c, b) = optimize_beta_hat(0.5).unwrap();
    o.check((b - 0.8946).abs() <= 5e-4 && (c - 1.6041).abs() <= 1e-2, format!("θ=0.5: c={c}, β̂={b}"));
    let rows = [
        (0.91, 0.999664, 2.82241e5, 5.94614e7, 5.97437e7),
        (0.92, 0.999816, 5.16275e5, 1.08759e8, 1.09275e8),
        (0.93, 0.999912, 1.08257e6, 2.28043e8, 2.29126e8),
        (0.94, 0.999966, 2.76738e6, 5.82923e8, 5.85690e8),
        (0.95, 0.999990, 9.60536e6, 2.02337e9, 2.03297e9),
        (0.96, 0.999998, 5.58578e7, 1.17624e10, 1.18183e10),
    ];
    for (theta, beta, n0, n, total) in rows {
        let plan = plan_contracting_normals(theta, 0.0, 0.1, 2.1, Some(0.01)).unwrap();
        let got_n = plan.plan.n.unwrap() as f64;
        let got_total = plan.total().unwrap() as f64;
        o.check((plan.beta_hat - beta).abs() <= 5e-6, format!("θ={theta}: β̂ {} vs {beta}", plan.beta_hat));
        o.check(rel(plan.plan.n0 as f64, n0) <= 5e-3, format!("θ={theta}: n0 {} vs {n0}", plan.plan.n0));
        o.check(rel(got_n, n) <= 5e-3, format!("θ={theta}: n {got_n} vs {n}"));
        o.check(rel(got_total, total) <= 5e-3, format!("θ={theta}: N {got_total} vs {total}"));
    }
}

fn figure_burnins(o: &mut Outcome) {
    for (spec, want) in [
        (ToySpec::Circle { t: 999 }, 1_396_699u64),
        (ToySpec::Hypercube { d: 50 }, 1716),
        (ToySpec::Star { t: 100_000, theta: 0.1 }, 58),
    ] {
        let got = suggest_burnin_finite(spec.initial_constant(), spec.gaps().1).unwrap();
        o.check(got == want, format!("{spec:?}: n0 {got} vs {want}"));
    }
    let ex2 = plan_worked_example(&WorkedExample::Example2 { delta: 1e-3 }, None).unwrap();
    o.check(ex2.n0 == 13, format!("example2: n0 {} vs 13", ex2.n0));
}

fn brute_force(o: &mut Outcome) {
    let mut rng = seeded(2024);
    let mut worst: f64 = 0.0;
    for chain_index in 0..50 {
        let d = rng.random_range(2..=4);
        let c = random_reversible(&mut rng, d, 0.4);
        let f = DVector::from_fn(d, |_, _| rng.random::<f64>() * 4.0 - 2.0);
        let x = rng.random_range(0..d);
        let starts = [
            InitialDistribution::new(c.pi().clone(), c.pi()).unwrap(),
            InitialDistribution::point_mass(x, c.pi()).unwrap(),
        ];
        for nu in &starts {
            for n in 1..=6usize {
                for n0 in 0..=(6 - n) {
                    let exact = exact_mse(&c, nu, &f, n as u64, n0 as u64).unwrap();
                    let brute = brute_force_mse(&c, nu, &f, n, n0);
                    let err = (exact - brute).abs();
                    worst = worst.max(err);
                    o.check(err <= 1e-10, format!("chain {chain_index} n={n} n0={n0}: {exact} vs {brute}"));
                }
            }
        }
    }
    o.note(format!("max deviation {worst:.2e}"));
}

fn empirical_vs_analytic(o: &mut Outcome) {
    let ex = make_example(&ToySpec::Hypercube { d: 5 }).unwrap();
    let (n, reps) = (100u64, 100_000u64);
    let exact = exact_mse(&ex.chain, &ex.nu, &ex.f, n, 0).unwrap();
    let cfg = RunConfig {
        kernel: KernelSampler::finite(ex.chain.matrix(), false),
        initial: Initial::Discrete { probs: ex.nu.nu().iter().copied().collect() },
        f: Integrand::table(ex.f.iter().copied().collect()),
        n,
        n0: 0,
        replications: reps,
        seed: 5,
    };
    let rep = empirical_mse(&cfg, ex.chain.mean(&ex.f)).unwrap();
    let z = (rep.empirical_mse - exact) / rep.mse_std_error;
    o.check(z.abs() <= 3.0, format!("hypercube(5): empirical {} vs exact {exact}, z = {z:.2}", rep.empirical_mse));
    o.note(format!("hypercube z = {z:.2}"));

    let n = 100u64;
    let nf = n as f64;
    let exact = 3.0 / nf - 4.0 * (1.0 - 0.5f64.powi(n as i32)) / (nf * nf);
    let cfg = RunConfig {
        kernel: builtin_kernel(&BuiltinKind::Example2, true).unwrap(),
        initial: Initial::UniformInterval { lo: 0.0, hi: 1e-3 },
        f: Integrand::function(|x| example2_eigen(x[0])),
        n,
        n0: 13,
        replications: reps,
        seed: 6,
    };
    let rep = empirical_mse(&cfg, 0.0).unwrap();
    let z = (rep.empirical_mse - exact) / rep.mse_std_error;
    o.check(z.abs() <= 3.0, format!("example2: empirical {} vs exact {exact}, z = {z:.2}", rep.empirical_mse));
    o.note(format!("example2 z = {z:.2}"));
}

fn sandwich(o: &mut Outcome) {
    let specs = [ToySpec::Circle { t: 999 }, ToySpec::Hypercube { d: 50 }, ToySpec::Star { t: 100_000, theta: 0.1 }];
    for spec in specs {
        let (beta1, beta) = spec.gaps();
        let c = spec.initial_constant();
        let n0 = suggest_burnin_finite(c, beta).unwrap();
        for i in 0..30 {
            let n = 10f64.powf(6.0 * i as f64 / 29.0).round() as u64;
            let exact = analytic_example_error(&spec, n, n0).unwrap();
            let b = bounds_from_gaps(beta1, beta, c, n, n0).unwrap();
            o.check(
                b.lower <= exact && exact <= b.upper,
                format!("{spec:?} n={n}: {} <= {exact} <= {}", b.lower, b.upper),
            );
            o.check(
                b.lower_uniform <= exact && exact <= b.upper_uniform,
                format!("{spec:?} n={n} (β form): {} <= {exact} <= {}", b.lower_uniform, b.upper_uniform),
            );
        }
    }
}

fn cheeger(o: &mut Outcome) {
    let mut rng = seeded(77);
    for i in 0..200 {
        let d = rng.random_range(2..=10);
        let sparsity = rng.random::<f64>() * 0.8;
        let c = random_reversible(&mut rng, d, sparsity);
        let s = spectral_decompose(&c).unwrap();
        let phi = conductance_finite(&c).unwrap();
        o.check(phi.exhaustive, format!("chain {i}: conductance not exhaustive"));
        let gap = 1.0 - s.beta1;
        o.check(
            gap >= phi.phi * phi.phi / 2.0 - 1e-12,
            format!("chain {i}: gap {gap} < φ²/2 = {}", phi.phi.powi(2) / 2.0),
        );
    }
}

fn caps(o: &mut Outcome) {
    let mut rng = seeded(8);
    let mut violations = 0u64;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=1_000_000u64);
        let a1 = rng.random::<f64>() * 1.999 - 1.0;
        let a2 = a1 + (1.0 - a1) * rng.random::<f64>();
        let (w1, w2) = (w_factor(n, a1), w_factor(n, a2));
        if w1 > w2 || w2 > 2.0 * n as f64 / (1.0 - a2) {
            violations += 1;
            o.check(false, format!("W at n={n}: W({a1}) = {w1}, W({a2}) = {w2}"));
        }
    }
    for _ in 0..10_000 {
        let n = rng.random_range(1..=1_000_000u64);
        let a = rng.random::<f64>() * 0.9999;
        let u = u_factor(a, n);
        if u > 2.0 / ((1.0 - a) * (1.0 - a)) {
            violations += 1;
            o.check(false, format!("U({a}, {n}) = {u}"));
        }
    }
    for _ in 0..10_000 {
        let n = rng.random_range(1..=1_000_000u64);
        let b = rng.random::<f64>() * 0.9999;
        let p = if rng.random::<f64>() < 0.1 { f64::INFINITY } else { 2.0 + 1e-3 + rng.random::<f64>() * 8.0 };
        let v = v_factor(b, n, p).unwrap();
        let cap = if p.is_infinite() { 64.0 } else { 64.0 * p / (p - 2.0) } / ((1.0 - b) * (1.0 - b));
        if v > cap {
            violations += 1;
            o.check(false, format!("V({b}, {n}, {p}) = {v} > {cap}"));
        }
    }
    o.note(format!("{violations} violations over 3 x 10^4 points"));
}

fn l1_quadrature(o: &mut Outcome) {
    let k = |x: f64, y: f64| (1.0 + x + y) / (x + 1.5);
    let rho = |x: f64| x + 1.5;
    let a = l1_contraction_1d(&k, &rho, (0.0, 1.0), 65).unwrap();
    o.check((a - 1.0 / 24.0).abs() <= 1e-4, format!("α̂ = {a}"));
    o.note(format!("α̂ = {a:.8}"));
}

fn final_states(kernel: &KernelSampler, initial: &Initial, steps: u64, reps: u64, seed: u64) -> Vec<Vec<f64>> {
    (0..reps)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i).rng();
            let mut calls = OracleCalls::default();
            let mut s = kernel.init(initial, &mut rng).unwrap();
            for _ in 0..steps {
                kernel.step(&mut s, &mut rng, &mut calls).unwrap();
            }
            s.x
        })
        .collect()
}

fn stationarity(o: &mut Outcome) {
    let har = builtin_kernel(&BuiltinKind::HitAndRunBall { d: 2, r: 1.0, eps0: None }, true).unwrap();
    let pts = final_states(&har, &Initial::PointMass { x: vec![0.0, 0.0] }, 60, 20_000, 10);
    let rings = 10;
    let mut annuli = vec![0u64; rings];
    let mut sectors = vec![0u64; 8];
    for p in &pts {
        let r2 = p[0] * p[0] + p[1] * p[1];
        annuli[((r2 * rings as f64) as usize).min(rings - 1)] += 1;
        let ang = p[1].atan2(p[0]) + std::f64::consts::PI;
        sectors[((ang / (2.0 * std::f64::consts::PI) * 8.0) as usize).min(7)] += 1;
    }
    let pa = chi2_pvalue(&annuli, &vec![1.0 / rings as f64; rings]);
    let ps = chi2_pvalue(&sectors, &[0.125; 8]);
    o.check(pa >= 1e-3, format!("hit-and-run annuli χ² p = {pa:.2e}"));
    o.check(ps >= 1e-3, format!("hit-and-run sectors χ² p = {ps:.2e}"));

    let mh = builtin_kernel(&BuiltinKind::GaussianBallMetropolis { d: 1, r: 3.0, delta: None }, true).unwrap();
    let mut xs: Vec<f64> =
        final_states(&mh, &Initial::PointMass { x: vec![0.0] }, 3000, 20_000, 11).into_iter().map(|v| v[0]).collect();
    let z = normal_cdf(3.0) - normal_cdf(-3.0);
    let pk = ks_pvalue(&mut xs, |x| (normal_cdf(x) - normal_cdf(-3.0)) / z);
    o.check(pk >= 1e-3, format!("ball-walk Metropolis KS p = {pk:.2e}"));
    o.note(format!("p-values: annuli {pa:.3}, sectors {ps:.3}, KS {pk:.3}"));
}

fn plan_arithmetic(o: &mut Outcome) {
    let lc = plan_logconcave(&LogConcaveProblem { d: 1, r: 1.0, lip: 0.0, p: f64::INFINITY, eps: None }).unwrap();
    o.check(lc.n0 == 98_508_800, format!("log-concave n0 {}", lc.n0));
    let cb = plan_convex_body(&ConvexBodyProblem { d: 1, r: 1.0, p: 4.0, eps: None }).unwrap();
    o.check(cb.n0 == 18_761_600_000_000_000, format!("convex n0 {}", cb.n0));
    o.check(lc.delta == Some(1.0 / 2f64.sqrt()), "δ* for L = 0");

    // independent evaluation of the displays on a parameter grid
    for d in [1usize, 2, 5, 20] {
        for r in [1.0f64, 2.0, 7.5] {
            for lip in [0.0f64, 0.5, 3.0] {
                for p in [2.5f64, 4.0, f64::INFINITY] {
                    let eps = Some(0.01);
                    let plan = plan_logconcave(&LogConcaveProblem { d, r, lip, p, eps }).unwrap();
                    let d1 = (d + 1) as f64;
                    let scale = d1 * (r * r * lip * lip).max(d1);
                    let branch = if p < 4.0 {
                        p / (p - 2.0) * (lip * r + 0.5 * (32.0 * p / (p - 2.0)).ln())
                    } else {
                        2.0 * lip * r + 4.16
                    };
                    let raw = 5.92e6 * scale * branch;
                    o.check(
                        plan.n0 as f64 >= raw * (1.0 - 1e-12) && (plan.n0 as f64) < raw + 1.0,
                        format!("log-concave d={d} r={r} L={lip} p={p}: n0 {} vs {raw}", plan.n0),
                    );
                    let n = plan.n.unwrap() as f64;
                    let bound = 1089.0 * d1.sqrt() * (r * lip).max(d1.sqrt()) / n.sqrt() + 8.38e5 * scale / n;
                    o.check(rel(plan.error_bound.unwrap(), bound) <= 1e-12, "log-concave error display");
                    o.check(plan.error_bound.unwrap() <= 0.01, "log-concave n misses the target");
                    o.check(plan.est_bound.unwrap() <= plan.error_bound.unwrap(), "log-concave est above display");
                }
            }
        }
    }
    for d in [1usize, 2, 3] {
        for r in [1.0f64, 2.0, 5.0] {
            for p in [3.0f64, 4.0, f64::INFINITY] {
                let plan = plan_convex_body(&ConvexBodyProblem { d, r, p, eps: None }).unwrap();
                let dr = d as f64 * r;
                let branch = if p < 4.0 {
                    p / (2.0 * (p - 2.0)) * (d as f64 * r.ln() + (32.0 * p / (p - 2.0)).ln())
                } else {
                    d as f64 * r.ln() + 4.16
                };
                let raw = 4.51e15 * dr * dr * branch;
                o.check(
                    rel(plan.n0 as f64, raw) <= 1e-12 || (plan.n0 as f64 >= raw && (plan.n0 as f64) < raw + 1.0),
                    format!("convex d={d} r={r} p={p}: n0 {} vs {raw}", plan.n0),
                );
                let (a, b) = (9.5e7 * dr, 6.4e15 * dr * dr);
                match plan_convex_body(&ConvexBodyProblem { d, r, p, eps: Some(0.05) }) {
                    Ok(plan) => {
                        let n = plan.n.unwrap() as f64;
                        let bound = a / n.sqrt() + b / n;
                        o.check(rel(plan.error_bound.unwrap(), bound) <= 1e-12, "convex error display");
                        o.check(bound <= 0.05, "convex n misses the target");
                        o.check(plan.est_bound.unwrap() <= plan.error_bound.unwrap(), "convex est above display");
                    }
                    Err(Error::CountOverflow { .. }) => {
                        o.check(
                            (a / 0.05).powi(2) >= u64::MAX as f64,
                            format!("convex d={d} r={r}: spurious overflow"),
                        );
                    }
                    Err(e) => o.check(false, format!("convex d={d} r={r} p={p}: {e}")),
                }
            }
        }
    }
}

fn main() {
    type Criterion = (u32, &'static str, Duration, fn(&mut Outcome));
    let criteria: [Criterion; 11] = [
        (1, "burn-in minimisation grid", Duration::from_secs(5), burnin_grid),
        (2, "contracting normals plans", Duration::from_secs(10), contracting_normals),
        (3, "figure burn-ins", Duration::from_secs(1), figure_burnins),
        (4, "exact MSE vs path enumeration", Duration::from_secs(60), brute_force),
        (5, "empirical vs analytic MSE", Duration::from_secs(120), empirical_vs_analytic),
        (6, "bound sandwich", Duration::from_secs(60), sandwich),
        (7, "Cheeger inequality", Duration::from_secs(60), cheeger),
        (8, "formula caps", Duration::from_secs(60), caps),
        (9, "L1 contraction quadrature", Duration::from_secs(10), l1_quadrature),
        (10, "sampler stationarity", Duration::from_secs(120), stationarity),
        (11, "log-concave and convex-body plans", Duration::from_secs(10), plan_arithmetic),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let mut o = Outcome::new();
        let start = Instant::now();
        run(&mut o);
        let took = start.elapsed();
        o.check(took <= limit, format!("runtime {took:?} exceeds {limit:?}"));
        let verdict = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        let notes = if o.notes.is_empty() { String::new() } else { format!(" [{}]", o.notes.join("; ")) };
        println!("criterion {id:>2} {verdict} {name} ({:.2} s){notes}", took.as_secs_f64());
        for f in o.failures.iter().take(10) {
            println!("    - {f}");
        }
        if o.failures.len() > 10 {
            println!("    ... {} more", o.failures.len() - 10);
        }
        if !o.failures.is_empty() {
            failed += 1;
        }
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
