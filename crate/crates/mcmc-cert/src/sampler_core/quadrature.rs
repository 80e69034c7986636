use crate::error::{domain, Error, Result};

const TOLERANCE: f64 = 1e-4;
const MAX_DOUBLINGS: usize = 20;

fn estimate(k: &dyn Fn(f64, f64) -> f64, rho: &dyn Fn(f64) -> f64, a: f64, b: f64, points: usize) -> f64 {
    let h = (b - a) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points).map(|i| if i + 1 == points { b } else { a + h * i as f64 }).collect();
    let dens: Vec<f64> = grid.iter().map(|&x| rho(x)).collect();
    let trap = |v: &[f64]| h * (v.iter().sum::<f64>() - 0.5 * (v[0] + v[points - 1]));
    let mass = trap(&dens);
    let sup: Vec<f64> = grid
        .iter()
        .zip(&dens)
        .map(|(&x, &rx)| {
            let s = grid
                .iter()
                .zip(&dens)
                .filter(|(_, &ry)| ry > 0.0)
                .map(|(&y, &ry)| (k(x, y) / (ry / mass) - 1.0).abs())
                .fold(0.0f64, f64::max);
            s * rx / mass
        })
        .collect();
    trap(&sup)
}

/// `∫ sup_y |k(x,y)/ρ(y) − 1| ρ(x) dx` on `[a, b]`, with `ρ` normalized internally.
/// The grid starts at `grid_points` and doubles until two successive values agree to 1e-4.
pub fn l1_contraction_1d(
    kernel_density: &dyn Fn(f64, f64) -> f64,
    rho: &dyn Fn(f64) -> f64,
    domain_interval: (f64, f64),
    grid_points: usize,
) -> Result<f64> {
    let (a, b) = domain_interval;
    if !(a < b && a.is_finite() && b.is_finite()) {
        return domain(format!("need a bounded interval, got [{a}, {b}]"));
    }
    if grid_points < 2 {
        return domain("need at least two grid points");
    }
    let mut points = grid_points;
    let mut prev = estimate(kernel_density, rho, a, b, points);
    for _ in 0..MAX_DOUBLINGS {
        points = 2 * points - 1;
        let next = estimate(kernel_density, rho, a, b, points);
        if (next - prev).abs() < TOLERANCE {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergent { doublings: MAX_DOUBLINGS })
}
