//! Small numerical helpers shared by the modules.

use libm::erfc;

/// Standard normal CDF evaluated through the complementary error function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal upper tail `1 - Φ(x)`.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Ceiling that treats values within a relative 1e-12 of an integer as that integer.
///
/// Products of decimal constants such as `5.92e6 * 4 * 4.16` are integers in exact arithmetic but
/// can land a few ulps above one in binary floating point.
pub fn ceil_snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * r.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// `max(ceil_snap(x), 0)` as an integer count.
///
/// Above 2^53 the binary grid is coarser than one, so a value within a few ulps of a
/// 12-significant-digit decimal is read as that decimal and converted exactly.
pub fn ceil_count(x: f64) -> u64 {
    let c = ceil_snap(x);
    if c <= 0.0 {
        return 0;
    }
    if c < 9_007_199_254_740_992.0 || c >= u64::MAX as f64 {
        return c as u64;
    }
    let k = c.log10().floor() as i32 - 11;
    let scale = 10f64.powi(k);
    let m = (x / scale).round();
    if ((x / scale) - m).abs() <= 1e-3 {
        (m as u64) * 10u64.pow(k as u32)
    } else {
        c as u64
    }
}

/// Pairwise summation; the result does not depend on how the slice was produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `sum_{j=1}^{m} q^j`.
pub fn geom(q: f64, m: u64) -> f64 {
    if m == 0 || q == 0.0 {
        return 0.0;
    }
    if q == 1.0 {
        return m as f64;
    }
    let qm = q.powf(m as f64);
    q * (1.0 - qm) / (1.0 - q)
}

/// `sum_{j=1}^{n-1} q^j s^{n-j}` for `q, s >= 0`, stable when `q` is close to `s`.
pub fn cross_geom(q: f64, s: f64, n: u64) -> f64 {
    if n < 2 || q == 0.0 || s == 0.0 {
        return 0.0;
    }
    let m = (n - 1) as f64;
    // q s (q^{n-1} - s^{n-1}) / (q - s) written with t = ln(q/s)
    let (hi, lo) = if q >= s { (q, s) } else { (s, q) };
    let t = (hi / lo).ln();
    if t == 0.0 {
        return m * lo.powf(n as f64);
    }
    // hi^{n-1} - lo^{n-1} = lo^{n-1} expm1(m t); hi - lo = lo expm1(t)
    let ratio = (m * t).exp_m1() / t.exp_m1();
    let v = q * s * lo.powf(m - 1.0) * ratio;
    if v.is_finite() {
        v
    } else {
        q * s * (hi.powf(m) - lo.powf(m)) / (hi - lo)
    }
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Golden-section search over the integers in `[lo, hi]`; returns the best integer found
/// after a final exhaustive pass over the remaining small bracket.
pub fn golden_min_int<F: Fn(u64) -> f64>(f: &F, mut lo: u64, mut hi: u64) -> u64 {
    while hi - lo > 4 {
        let span = (hi - lo) as f64;
        let c = lo + (0.381_966_011_250_105 * span).round() as u64;
        let d = hi - (0.381_966_011_250_105 * span).round() as u64;
        let (c, d) = if c < d { (c, d) } else { (c, c + 1) };
        if f(c) <= f(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    argmin_range(f, lo, hi)
}

/// Exhaustive argmin over `[lo, hi]`, ties resolved toward the smaller argument.
pub fn argmin_range<F: Fn(u64) -> f64>(f: &F, lo: u64, hi: u64) -> u64 {
    let mut best = lo;
    let mut fb = f(lo);
    for k in lo + 1..=hi {
        let v = f(k);
        if v < fb {
            best = k;
            fb = v;
        }
    }
    best
}
