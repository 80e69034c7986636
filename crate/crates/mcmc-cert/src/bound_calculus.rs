//! Scalar formula library: error factors, burn-in recipes, optimal burn-in search,
//! norm decay, spectral-gap lower bounds and literature comparison bounds.
//!
//! Integrand norm indices `p` are plain `f64`; `f64::INFINITY` selects the `p = ∞` limits.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numeric::{argmin_range, ceil_count, cross_geom, geom, golden_min, golden_min_int, normal_sf};

/// Rates at or above this are treated as having no usable gap.
pub const GAP_EPS: f64 = 1e-12;

fn check_rate(rate: f64) -> Result<()> {
    if !(rate < 1.0 - GAP_EPS) || rate.is_nan() {
        return Err(Error::GapExhausted { rate });
    }
    Ok(())
}

/// Bound inputs describing the convergence of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapParams {
    /// Norm of `P` on mean-zero `L2`.
    pub beta: f64,
    /// Supremum of the spectrum of `P` on mean-zero `L2`.
    pub lambda_max: f64,
    /// `L1`-exponential convergence pair `(alpha, M)`.
    pub alpha: Option<f64>,
    pub m: Option<f64>,
}

impl GapParams {
    pub fn new(beta: f64, lambda_max: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&beta) {
            return domain(format!("beta = {beta} outside [0,1)"));
        }
        if !(-1.0..1.0).contains(&lambda_max) || lambda_max > beta + 1e-12 {
            return domain(format!("lambda_max = {lambda_max} must lie in [-1, beta]"));
        }
        Ok(GapParams { beta, lambda_max, alpha: None, m: None })
    }

    /// Attaches `(alpha, M)`; for a reversible chain `beta <= alpha` is enforced.
    pub fn with_l1(mut self, alpha: f64, m: f64, reversible: bool) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) || !(m >= 0.0) {
            return domain(format!("(alpha, M) = ({alpha}, {m}) invalid"));
        }
        if reversible && self.beta > alpha + 1e-12 {
            return domain(format!("reversible chain needs beta <= alpha, got {} > {alpha}", self.beta));
        }
        self.alpha = Some(alpha);
        self.m = Some(m);
        Ok(self)
    }
}

/// Inputs of the general burn-in recipe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurninInputs {
    /// Aggregate initial-bias constant.
    pub c: f64,
    /// Integrand norm index: exactly 2, or in `(2, ∞]`.
    pub p: f64,
    /// Norm of `dν/dπ - 1` in the index matching `p`.
    pub density_norm: f64,
    /// Normal but non-reversible operator: the rate `alpha` is replaced by `sqrt(alpha)`.
    pub normal_op: bool,
}

/// One evaluated point on a burn-in trade-off curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanRow {
    pub n0: u64,
    pub n: u64,
    pub est: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanCurve {
    pub total: u64,
    pub rows: Vec<PlanRow>,
}

/// Outcome of [`minimize_burnin`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurninSearch {
    pub n_opt: u64,
    pub est_opt: f64,
    pub curve: PlanCurve,
    /// Burn-in that makes the bias term collapse, for the same rate.
    pub suggested: u64,
    /// The suggested burn-in does not fit into the budget.
    pub budget_constrained: bool,
    /// Whether the unimodality conditions on `C` and `N` hold for `eta = 1e-3`.
    pub conditions_hold: bool,
    /// Real bracket `[log C / log r⁻¹, (1 + eta) log C / log r⁻¹]`.
    pub bracket: (f64, f64),
    pub in_bracket: bool,
}

pub const BRACKET_ETA: f64 = 1e-3;

/// `W(n, a) = (n(1 - a²) - 2a(1 - aⁿ)) / (1 - a)²`.
pub fn w_factor(n: u64, a: f64) -> f64 {
    let nf = n as f64;
    if a > 0.0 && nf * (1.0 - a) < 0.1 && n <= 1_000_000 {
        // closed form cancels badly here; W = n + 2 Σ_{k<n} (n - k) a^k
        let mut s = 0.0;
        let mut ak = 1.0;
        for k in 1..n {
            ak *= a;
            s += (nf - k as f64) * ak;
        }
        return nf + 2.0 * s;
    }
    let an = a.powf(nf);
    (nf * (1.0 - a * a) - 2.0 * a * (1.0 - an)) / ((1.0 - a) * (1.0 - a))
}

/// `U(a, n) = Σ_{j=1}^n a^j + 2 Σ_{j=1}^{n-1} Σ_{k=j+1}^n a^k`, in closed form.
pub fn u_factor(a: f64, n: u64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let single = geom(a, n);
    // Σ_j Σ_{k>j} a^k = Σ_{j=1}^{n-1} (a^{j+1} - a^{n+1}) / (1 - a)
    let double = if a == 1.0 {
        let nf = n as f64;
        nf * (nf - 1.0) / 2.0
    } else {
        (a * geom(a, n.saturating_sub(1)) - (n.saturating_sub(1)) as f64 * a.powf(n as f64 + 1.0)) / (1.0 - a)
    };
    single + 2.0 * double
}

/// The two-branch `V(beta, n, p)` factor for `p > 2`.
pub fn v_factor(beta: f64, n: u64, p: f64) -> Result<f64> {
    if !(p > 2.0) {
        return domain(format!("v_factor needs p > 2, got {p}"));
    }
    if !(0.0..1.0).contains(&beta) {
        return domain(format!("beta = {beta} outside [0,1)"));
    }
    if beta == 0.0 || n == 0 {
        return Ok(0.0);
    }
    let lb = beta.ln();
    let lead = if p.is_infinite() { 8.0 } else { 2f64.powf((3.0 * p + 2.0) / p) };
    let quarter = if p < 4.0 {
        let q = (2.0 * (p - 2.0) / p * lb).exp();
        let s = (2.0 / p * lb).exp();
        // Σ_{j<n} β^{2j(p-3)/p} Σ_{k>j} β^{2k/p} = s [G(q, n-1) - H(q, s, n)] / (1 - s)
        let inner = s * (geom(q, n - 1) - cross_geom(q, s, n)) / (1.0 - s);
        2f64.powf(4.0 / p) * geom(q, n) + lead * inner
    } else {
        let b = if p.is_infinite() { beta } else { ((p - 2.0) / p * lb).exp() };
        // Σ_{j<n} β^{2j/p} Σ_{k>j} β^{k(p-2)/p} = b [G(β, n-1) - H(β, b, n)] / (1 - b)
        let inner = b * (geom(beta, n - 1) - cross_geom(beta, b, n)) / (1.0 - b);
        2.0 * geom(beta, n) + lead * inner
    };
    Ok(4.0 * quarter)
}

/// Direct double-sum evaluation of [`v_factor`], kept as a reference.
pub fn v_factor_direct(beta: f64, n: u64, p: f64) -> f64 {
    let pw = |e: f64| if e == 0.0 { 1.0 } else { beta.powf(e) };
    let lead = if p.is_infinite() { 8.0 } else { 2f64.powf((3.0 * p + 2.0) / p) };
    let mut total = 0.0;
    if p < 4.0 {
        for j in 1..=n {
            total += 2f64.powf(4.0 / p) * pw(2.0 * j as f64 * (p - 2.0) / p);
        }
        for j in 1..n {
            for k in j + 1..=n {
                total += lead * pw(2.0 * j as f64 * (p - 3.0) / p + 2.0 * k as f64 / p);
            }
        }
    } else {
        let (ej, ek) = if p.is_infinite() { (0.0, 1.0) } else { (2.0 / p, (p - 2.0) / p) };
        for j in 1..=n {
            total += 2.0 * pw(j as f64);
        }
        for j in 1..n {
            for k in j + 1..=n {
                total += lead * pw(j as f64 * ej + k as f64 * ek);
            }
        }
    }
    4.0 * total
}

/// Cap `64p / ((p - 2)(1 - beta)²)` of [`v_factor`]; `64 / (1 - beta)²` at `p = ∞`.
pub fn v_factor_cap(beta: f64, p: f64) -> f64 {
    let pf = if p.is_infinite() { 1.0 } else { p / (p - 2.0) };
    64.0 * pf / ((1.0 - beta) * (1.0 - beta))
}

/// Interpolated bound on `‖Pⁿ - S‖` as an operator on `L_p`.
pub fn lp_norm_decay(beta: f64, n: u64, p: f64) -> Result<f64> {
    if !(p > 1.0) || p.is_infinite() {
        return domain(format!("lp_norm_decay needs p in (1, ∞), got {p}"));
    }
    if !(0.0..1.0).contains(&beta) {
        return domain(format!("beta = {beta} outside [0,1)"));
    }
    let nf = n as f64;
    Ok(if p < 2.0 {
        2f64.powf(2.0 / p) * beta.powf(2.0 * nf * (p - 1.0) / p)
    } else {
        2f64.powf(2.0 * (p - 1.0) / p) * beta.powf(2.0 * nf / p)
    })
}

fn log_over_rate(x: f64, rate: f64) -> Result<u64> {
    check_rate(rate)?;
    if !(x > 1.0) {
        return Ok(0);
    }
    if rate <= 0.0 {
        return Ok(1);
    }
    Ok(ceil_count(x.ln() / (1.0 / rate).ln()))
}

/// Burn-in of the general-state recipe for `p = 2` (via `(alpha, M)`) or `p > 2` (via `beta`).
pub fn suggest_burnin_general(inputs: &BurninInputs, g: &GapParams) -> Result<u64> {
    let BurninInputs { p, density_norm, normal_op, .. } = *inputs;
    if !(density_norm >= 0.0) {
        return domain(format!("density_norm = {density_norm} must be >= 0"));
    }
    if p == 2.0 {
        let (alpha, m) = match (g.alpha, g.m) {
            (Some(a), Some(m)) => (a, m),
            _ => return domain("p = 2 needs (alpha, M)"),
        };
        let rate = if normal_op { alpha.sqrt() } else { alpha };
        log_over_rate(m * density_norm, rate)
    } else if p > 2.0 && p < 4.0 {
        check_rate(g.beta)?;
        let arg = 32.0 * p / (p - 2.0) * density_norm;
        if !(arg > 1.0) {
            return Ok(0);
        }
        if g.beta <= 0.0 {
            return Ok(1);
        }
        Ok(ceil_count(p / (2.0 * (p - 2.0)) * arg.ln() / (1.0 / g.beta).ln()))
    } else if p >= 4.0 {
        log_over_rate(64.0 * density_norm, g.beta)
    } else {
        domain(format!("p = {p} must be 2 or in (2, ∞]"))
    }
}

/// Bias-decay rate entering `est` for norm index `p`.
pub fn est_rate(beta: f64, p: f64) -> f64 {
    if p > 2.0 && p < 4.0 {
        beta.powf(2.0 * (p - 2.0) / p)
    } else {
        beta
    }
}

/// `sqrt(2/(n(1-β)) + 2 C r^{n0} / (n²(1-β)²))` with the rate `r` of [`est_rate`].
pub fn est_upper(n: u64, n0: u64, beta: f64, c: f64, p: f64) -> f64 {
    let nf = n as f64;
    let gap = 1.0 - beta;
    let r = est_rate(beta, p);
    let bias = if c <= 0.0 {
        0.0
    } else if r <= 0.0 {
        if n0 == 0 {
            c
        } else {
            0.0
        }
    } else {
        (c.ln() + n0 as f64 * r.ln()).exp()
    };
    (2.0 / (nf * gap) + 2.0 * bias / (nf * nf * gap * gap)).sqrt()
}

/// `⌈log C / log r⁻¹⌉` for the aggregate constant `C` and the rate of [`est_rate`].
pub fn suggest_burnin_aggregate(c: f64, beta: f64, p: f64) -> Result<u64> {
    log_over_rate(c, est_rate(beta, p))
}

/// Unimodality conditions for the burn-in trade-off at rate `r`.
pub fn bracket_conditions(total: u64, r: f64, c: f64, eta: f64) -> bool {
    if !(c > 1.0) || !(r > 0.0) || r >= 1.0 {
        return false;
    }
    let lr = (1.0 / r).ln();
    let reasonable_c = eta * c.ln() > (lr / (1.0 - r)).ln();
    let excess = lr - (1.0 - r);
    let reasonable_n = excess > 0.0 && (total as f64) > (1.0 + eta) * c.ln() / lr + 2.0 / excess;
    reasonable_c && reasonable_n
}

/// Integer burn-in minimizing `est_upper(N - n0, n0, ...)` over `n0 ∈ [0, N-1]`.
pub fn minimize_burnin(total: u64, beta: f64, c: f64, p: f64) -> Result<BurninSearch> {
    if total < 2 {
        return domain(format!("budget N = {total} must be >= 2"));
    }
    check_rate(beta)?;
    let f = |n0: u64| est_upper(total - n0, n0, beta, c, p);
    let last = total - 1;
    let r = est_rate(beta, p);
    let (lo_b, hi_b) = if c > 1.0 && r > 0.0 {
        let base = c.ln() / (1.0 / r).ln();
        (base, (1.0 + BRACKET_ETA) * base)
    } else {
        (0.0, 0.0)
    };
    let conditions_hold = bracket_conditions(total, r, c, BRACKET_ETA);

    let scan = scan_grid(last, 1024);
    let n_opt = if c <= 0.0 {
        0
    } else if conditions_hold {
        golden_min_int(&f, 0, last)
    } else {
        let (mut best, mut fb) = (0, f(0));
        for &k in &scan {
            let v = f(k);
            if v < fb {
                best = k;
                fb = v;
            }
        }
        let i = scan.iter().position(|&k| k == best).unwrap_or(0);
        let lo = if i == 0 { 0 } else { scan[i - 1] };
        let hi = scan.get(i + 1).copied().unwrap_or(last);
        golden_min_int(&f, lo, hi)
    };
    // local guard against a non-unimodal neighborhood
    let n_opt = argmin_range(&f, n_opt.saturating_sub(2), (n_opt + 2).min(last));

    let mut rows: Vec<PlanRow> = scan.iter().map(|&n0| PlanRow { n0, n: total - n0, est: f(n0) }).collect();
    if let Err(i) = rows.binary_search_by_key(&n_opt, |r| r.n0) {
        rows.insert(i, PlanRow { n0: n_opt, n: total - n_opt, est: f(n_opt) });
    }
    let suggested = suggest_burnin_aggregate(c, beta, p)?;
    let in_bracket = c > 1.0 && (n_opt as f64) >= lo_b.floor() && (n_opt as f64) <= hi_b.ceil();
    Ok(BurninSearch {
        n_opt,
        est_opt: f(n_opt),
        curve: PlanCurve { total, rows },
        suggested,
        budget_constrained: suggested > last,
        conditions_hold,
        bracket: (lo_b, hi_b),
        in_bracket,
    })
}

/// Sorted, deduplicated mix of linear and logarithmic points in `[0, last]`.
fn scan_grid(last: u64, points: usize) -> Vec<u64> {
    let mut v: Vec<u64> = Vec::with_capacity(2 * points + 2);
    let lf = last as f64;
    for i in 0..=points {
        let t = i as f64 / points as f64;
        v.push((t * lf).round() as u64);
        v.push(((lf + 1.0).powf(t) - 1.0).round() as u64);
    }
    v.push(last);
    v.sort_unstable();
    v.dedup();
    v.retain(|&k| k <= last);
    v
}

/// Smallest `n` with `n >= (1 + sqrt(1 + 4ε²)) / ((1 - β) ε²)`.
pub fn sample_size_for_eps(beta: f64, eps: f64) -> Result<u64> {
    check_rate(beta)?;
    if !(eps > 0.0) {
        return domain(format!("eps = {eps} must be positive"));
    }
    let e2 = eps * eps;
    Ok(ceil_count((1.0 + (1.0 + 4.0 * e2).sqrt()) / ((1.0 - beta) * e2)).max(1))
}

/// Spectral-gap estimate for the contracting normal kernel `N(θx, 1 - θ²)` with drift
/// function parameter `c`.
pub fn baxendale_beta_hat(theta: f64, c: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return domain(format!("theta = {theta} outside (0,1)"));
    }
    if !(c > 1.0) || !c.is_finite() {
        return domain(format!("c = {c} must exceed 1"));
    }
    let t2 = theta * theta;
    let lambda = t2 + 2.0 * (1.0 - t2) / (1.0 + c * c);
    let k = 2.0 + t2 * (c * c - 1.0);
    let sd = (1.0 - t2).sqrt();
    // upper-tail difference keeps precision once θc/sd is large
    let b = 2.0 * (normal_sf(theta * c / sd) - normal_sf((1.0 + theta) * c / sd));
    if !(b > 0.0) {
        return Ok(1.0);
    }
    let a = 1.0 + ((k - b) / (1.0 - b)).ln() / (1.0 / lambda).ln();
    Ok(lambda.max(((-b).ln_1p() / a).exp()))
}

/// Minimizes [`baxendale_beta_hat`] over `c ∈ [1.01, 1000]`; returns `(c*, β̂*)`.
pub fn optimize_beta_hat(theta: f64) -> Result<(f64, f64)> {
    baxendale_beta_hat(theta, 2.0)?;
    let (lo, hi) = (1.01f64, 1000f64);
    let f = |c: f64| baxendale_beta_hat(theta, c).unwrap_or(f64::INFINITY);
    let m = 1024;
    let grid: Vec<f64> = (0..=m).map(|i| lo * (hi / lo).powf(i as f64 / m as f64)).collect();
    let mut best = 0;
    for i in 1..=m {
        if f(grid[i]) < f(grid[best]) {
            best = i;
        }
    }
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(m)];
    let c = golden_min(f, a, b, 1e-8);
    let c = if f(c) <= f(grid[best]) { c } else { grid[best] };
    Ok((c, f(c)))
}

/// Cheeger lower bound `φ²/2` on the gap `1 - Λ`.
pub fn gap_from_conductance(phi: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&phi) {
        return domain(format!("conductance {phi} outside [0,1]"));
    }
    Ok(phi * phi / 2.0)
}

/// Gap lower bound `φ²/4` for the lazy version of a kernel with conductance `φ`.
pub fn gap_from_conductance_lazy(phi: f64) -> Result<f64> {
    Ok(gap_from_conductance(phi)? / 2.0)
}

/// Local-conductance lower bound of the ball walk on an `r`-ball when `δ <= r/sqrt(d+1)`.
pub const LOCAL_CONDUCTANCE: f64 = 0.3;

/// Lower bound on the gap of the lazy ball-walk Metropolis kernel on `rB`.
///
/// With `delta = None` the step `δ* = min{1/L, r/sqrt(d+1)}` is used and the rounded
/// closed form `1.69e-6/(d+1) · min{1/(r²L²), 1/(d+1)}` is returned. With `Some(δ)` the
/// general conductance form with `l = 0.3` is evaluated.
pub fn metro_gap_lower(d: usize, r: f64, lip: f64, delta: Option<f64>) -> Result<f64> {
    if d == 0 || !(r > 0.0) || !(lip >= 0.0) {
        return domain(format!("invalid (d, r, L) = ({d}, {r}, {lip})"));
    }
    let d1 = (d + 1) as f64;
    match delta {
        None => {
            let target = if lip == 0.0 { 1.0 / d1 } else { (1.0 / (r * r * lip * lip)).min(1.0 / d1) };
            Ok(1.69e-6 / d1 * target)
        }
        Some(delta) => {
            if !(delta > 0.0) || delta > r / d1.sqrt() * (1.0 + 1e-12) {
                return domain(format!("delta = {delta} must lie in (0, r/sqrt(d+1)] for l = 0.3"));
            }
            let l = LOCAL_CONDUCTANCE;
            let inner = (std::f64::consts::PI / 8.0 * l * l * delta * delta / (r * r * d1)).min(1.0);
            Ok(l * l * (-2.0 * lip * delta).exp() / 256.0 * inner)
        }
    }
}

/// Step size `δ* = min{1/L, r/sqrt(d+1)}`.
pub fn metro_delta_star(d: usize, r: f64, lip: f64) -> f64 {
    let ball = r / ((d + 1) as f64).sqrt();
    if lip > 0.0 {
        ball.min(1.0 / lip)
    } else {
        ball
    }
}

/// Comparison bounds from the literature, all on the mean square error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LiteratureBound {
    /// Doeblin condition with `(M, γ)`.
    Doeblin { m: f64, gamma: f64, f_sup: f64, n: u64 },
    /// Stationary-start bound requiring `β₁ >= 0`.
    AldousStationary { beta1: f64, f_two: f64, n: u64 },
    /// Bound via the multiplicative reversibilization.
    NiemiroPokarowska { beta: f64, chi: f64, f_sup: f64, f_two: f64, n: u64, n0: u64 },
    /// Conductance bound with an `R`-warm start.
    Belloni { phi: f64, warm: f64, f_sup: f64, f_two: f64, n: u64, n0: u64 },
}

pub fn literature_bound(kind: &LiteratureBound) -> Result<f64> {
    match *kind {
        LiteratureBound::Doeblin { m, gamma, f_sup, n } => {
            if !(m >= 2.0) || !(gamma > 0.0) || n == 0 {
                return domain("doeblin needs M >= 2, gamma > 0, n >= 1");
            }
            Ok(8.0 * (m - 1.0) * f_sup * f_sup / (n as f64 * gamma))
        }
        LiteratureBound::AldousStationary { beta1, f_two, n } => {
            if !(0.0..1.0).contains(&beta1) || n == 0 {
                return domain("aldous bound needs beta1 in [0,1), n >= 1");
            }
            let nf = n as f64;
            let g = 1.0 - beta1;
            Ok((2.0 / (nf * g) + 2.0 * (-nf * g).exp() / (nf * nf * g * g)) * f_two * f_two)
        }
        LiteratureBound::NiemiroPokarowska { beta, chi, f_sup, f_two, n, n0 } => {
            if !(0.0..1.0).contains(&beta) || !(chi >= 0.0) || n == 0 {
                return domain("niemiro-pokarowska needs beta in [0,1), chi >= 0, n >= 1");
            }
            let nf = n as f64;
            let g = 1.0 - beta;
            let lead = (1.0 + beta) / (nf * g) + 2.0 * beta / (g * g * nf * nf);
            let bias = 2.0 * (1.0 + beta) * beta.powf(n0 as f64) * chi / (g * nf * nf);
            Ok(lead * f_two * f_two + bias * f_sup * f_two)
        }
        LiteratureBound::Belloni { phi, warm, f_sup, f_two, n, n0 } => {
            if !(phi > 0.0 && phi <= 1.0) || !(warm >= 1.0) || n == 0 {
                return domain("belloni needs phi in (0,1], R >= 1, n >= 1");
            }
            let decay = (1.0 - phi * phi / 2.0).powf(n0 as f64);
            Ok(4.0 / (phi * phi * n as f64) * f_two * f_two + 8.0 * warm.sqrt() * decay * f_sup * f_sup)
        }
    }
}

/// Tail-probability bounds for `P(|S_{n,n0}(f) - S(f)| >= ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConfidenceBound {
    /// Markov inequality applied to a mean square error.
    Markov { mse: f64, eps: f64 },
    /// Chernoff-type bound for `‖f‖∞ <= 1`; `chi_term` is `‖νP^{n0}/π‖₂`.
    Lezaud { chi_term: f64, beta1: f64, n: u64, eps: f64 },
}

pub fn confidence_bound(kind: &ConfidenceBound) -> Result<f64> {
    match *kind {
        ConfidenceBound::Markov { mse, eps } => {
            if !(eps > 0.0 && eps < 1.0) || !(mse >= 0.0) {
                return domain("markov bound needs eps in (0,1), mse >= 0");
            }
            Ok((mse / (eps * eps)).min(1.0))
        }
        ConfidenceBound::Lezaud { chi_term, beta1, n, eps } => {
            if !(eps > 0.0 && eps < 1.0) || !(chi_term >= 0.0) || !(beta1 < 1.0) {
                return domain("lezaud bound needs eps in (0,1), chi >= 0, beta1 < 1");
            }
            let v = 3.0 * chi_term * (-(n as f64) * (1.0 - beta1) * eps * eps / 12.0).exp();
            Ok(v.clamp(0.0, 1.0))
        }
    }
}

/// `τ = (1 + β₁)/(1 - β₁)`.
pub fn autocorrelation_time(beta1: f64) -> Result<f64> {
    if !(-1.0..1.0).contains(&beta1) {
        return domain(format!("beta1 = {beta1} outside [-1,1)"));
    }
    Ok((1.0 + beta1) / (1.0 - beta1))
}
