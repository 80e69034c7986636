use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::oracle::{LogDensityOracle, MembershipOracle};
use crate::error::{Error, Result};

/// Limit on acceptance-rejection attempts inside a chord before giving up.
const MAX_CHORD_ATTEMPTS: u32 = 100_000;

/// Uniform point on the unit sphere in `ℝ^d`.
pub fn sample_direction<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    assert!(d >= 1, "dimension must be positive");
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-300 && n.is_finite() {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

/// Uniform point in the ball `B(x, delta)`.
pub fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, x: &[f64], delta: f64) -> Vec<f64> {
    let d = x.len();
    let dir = sample_direction(rng, d);
    let rad = delta * rng.random::<f64>().powf(1.0 / d as f64);
    x.iter().zip(dir).map(|(a, u)| a + rad * u).collect()
}

/// One δ-ball walk step on the body described by `membership`.
pub fn ball_walk_step<R: Rng + ?Sized>(x: &[f64], delta: f64, membership: &MembershipOracle, rng: &mut R) -> Vec<f64> {
    let y = uniform_in_ball(rng, x, delta);
    if membership.contains(&y) {
        y
    } else {
        x.to_vec()
    }
}

/// Metropolis filter for a symmetric proposal. `log_rho_x` is the cached value at `x`;
/// returns the new point and its log density.
pub fn metropolis_step<R: Rng + ?Sized>(
    x: &[f64],
    log_rho_x: f64,
    propose: impl FnOnce(&mut R) -> Vec<f64>,
    log_rho: &LogDensityOracle,
    rng: &mut R,
) -> (Vec<f64>, f64) {
    let y = propose(rng);
    let ly = log_rho.eval(&y);
    if accept_log(ly - log_rho_x, rng) {
        (y, ly)
    } else {
        (x.to_vec(), log_rho_x)
    }
}

/// Accepts with probability `exp(min(0, log_ratio))`.
pub(crate) fn accept_log<R: Rng + ?Sized>(log_ratio: f64, rng: &mut R) -> bool {
    if log_ratio.is_nan() {
        return false;
    }
    if log_ratio >= 0.0 {
        return true;
    }
    let u: f64 = rng.random();
    u < log_ratio.exp()
}

/// Holds with probability 1/2, otherwise delegates to `inner`.
pub fn lazy_step<R: Rng + ?Sized, T>(current: T, inner: impl FnOnce(T, &mut R) -> T, rng: &mut R) -> T {
    if rng.random::<f64>() > 0.5 {
        current
    } else {
        inner(current, rng)
    }
}

/// Parameters of the line through an interior point: the chord is contained in
/// `[lambda1, lambda2]` and each true endpoint lies within `eps0 / 4` of the bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chord {
    pub lambda1: f64,
    pub lambda2: f64,
    /// Membership calls spent locating the endpoints.
    pub oracle_calls: u64,
}

impl Chord {
    pub fn length(&self) -> f64 {
        self.lambda2 - self.lambda1
    }
}

fn along(x: &[f64], dir: &[f64], t: f64) -> Vec<f64> {
    x.iter().zip(dir).map(|(a, u)| a + t * u).collect()
}

/// Brackets the chord of `membership` through `x` along the unit vector `dir` by bisection.
pub fn chord_bisect(membership: &MembershipOracle, x: &[f64], dir: &[f64], eps0: f64) -> Result<Chord> {
    if !(eps0 > 0.0) {
        return crate::error::domain(format!("eps0 must be positive, got {eps0}"));
    }
    let r = membership.outer_radius;
    // |t| > 2r leaves rB from any point of rB
    let far = 2.0 * r + eps0;
    let target = eps0 / 4.0;
    let mut calls = 0u64;
    let mut end = |sign: f64| {
        let (mut inside, mut outside) = (0.0f64, far);
        while outside - inside > target {
            let mid = 0.5 * (inside + outside);
            calls += 1;
            if membership.contains(&along(x, dir, sign * mid)) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        outside
    };
    let hi = end(1.0);
    let lo = end(-1.0);
    let chord = Chord { lambda1: -lo, lambda2: hi, oracle_calls: calls };
    if chord.length() < eps0 {
        return Err(Error::DegenerateChord { length: chord.length(), eps0 });
    }
    Ok(chord)
}

/// One hit-and-run step; returns the new point and the membership calls spent.
pub fn hit_and_run_step<R: Rng + ?Sized>(
    x: &[f64],
    membership: &MembershipOracle,
    rng: &mut R,
    eps0: f64,
) -> Result<(Vec<f64>, u64)> {
    let dir = sample_direction(rng, x.len());
    let chord = chord_bisect(membership, x, &dir, eps0)?;
    let mut calls = chord.oracle_calls;
    for _ in 0..MAX_CHORD_ATTEMPTS {
        let t = chord.lambda1 + chord.length() * rng.random::<f64>();
        let y = along(x, &dir, t);
        calls += 1;
        if membership.contains(&y) {
            return Ok((y, calls));
        }
    }
    Err(Error::NumericalFailure(format!("no point of the body found on a chord of length {}", chord.length())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler_core::RngStream;

    #[test]
    fn unit_ball_chord_from_centre() {
        let m = MembershipOracle::ball(3, 1.0, vec![0.0; 3]);
        let dir = [0.6, 0.0, 0.8];
        let c = chord_bisect(&m, &[0.0; 3], &dir, 1e-9).unwrap();
        assert!((c.lambda1 + 1.0).abs() < 1e-9 && (c.lambda2 - 1.0).abs() < 1e-9, "{c:?}");
        assert!(c.lambda1 <= -1.0 && c.lambda2 >= 1.0);
    }

    #[test]
    fn box_chord() {
        let m = MembershipOracle::cube(2, 1.0);
        let c = chord_bisect(&m, &[0.0, 0.0], &[1.0, 0.0], 1e-9).unwrap();
        assert!((c.lambda1 + 1.0).abs() < 1e-9 && (c.lambda2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn off_centre_ball_chord() {
        let (r, a) = (2.0, 0.7);
        let m = MembershipOracle::ball(2, r, vec![0.0, 0.0]);
        // point at distance a, direction pointing back through the centre
        let c = chord_bisect(&m, &[a, 0.0], &[-1.0, 0.0], 1e-9 * r).unwrap();
        assert!((c.lambda1 - (-(r - a))).abs() < 1e-9 * r);
        assert!((c.lambda2 - (r + a)).abs() < 1e-9 * r);
    }

    #[test]
    fn thin_chord_is_degenerate() {
        let m = MembershipOracle::new(2, 1.0, 0.0, |x: &[f64]| x[0].abs() <= 1e-6 && x[1].abs() <= 1.0);
        let e = chord_bisect(&m, &[0.0, 0.0], &[1.0, 0.0], 1e-3).unwrap_err();
        assert!(matches!(e, Error::DegenerateChord { .. }));
    }

    #[test]
    fn directions_have_unit_norm() {
        let mut rng = RngStream::new(1, 0).rng();
        for d in 1..6 {
            let v = sample_direction(&mut rng, d);
            let n: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_walk_inside_large_ball_always_moves() {
        let mut rng = RngStream::new(2, 0).rng();
        let m = MembershipOracle::ball(4, 3.0, vec![0.0; 4]);
        for _ in 0..1000 {
            let y = ball_walk_step(&[0.0; 4], 1.0, &m, &mut rng);
            assert_ne!(y, vec![0.0; 4]);
            assert!(y.iter().map(|a| a * a).sum::<f64>().sqrt() <= 1.0);
        }
    }

    #[test]
    fn lazy_identity_is_identity() {
        let mut rng = RngStream::new(3, 0).rng();
        for i in 0..100 {
            assert_eq!(lazy_step(i, |v, _: &mut _| v, &mut rng), i);
        }
    }
}
