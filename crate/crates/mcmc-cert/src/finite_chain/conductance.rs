use nalgebra::DVector;

use super::ReversibleChain;
use crate::error::{Error, Result};

/// Largest state space handled by exhaustive subset enumeration.
pub const EXHAUSTIVE_CAP: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conductance {
    pub phi: f64,
    /// `false` when only a candidate family was searched; `phi` is then an upper bound.
    pub exhaustive: bool,
}

const HALF_TOL: f64 = 1e-12;

/// Exact conductance by Gray-code enumeration of all subsets.
pub fn conductance_finite(c: &ReversibleChain) -> Result<Conductance> {
    let n = c.size();
    if n > EXHAUSTIVE_CAP {
        return Err(Error::TooLarge { size: n, cap: EXHAUSTIVE_CAP });
    }
    let p = c.p();
    let pi = c.pi();
    let mut in_a = vec![false; n];
    let (mut mass, mut flow) = (0.0f64, 0.0f64);
    let mut best = f64::INFINITY;
    for i in 1u64..(1u64 << n) {
        let x = i.trailing_zeros() as usize;
        let mut out = 0.0;
        let mut into = 0.0;
        for y in 0..n {
            if y == x {
                continue;
            }
            if in_a[y] {
                into += pi[y] * p[(y, x)];
            } else {
                out += pi[x] * p[(x, y)];
            }
        }
        if in_a[x] {
            in_a[x] = false;
            mass -= pi[x];
            flow += into - out;
        } else {
            in_a[x] = true;
            mass += pi[x];
            flow += out - into;
        }
        if mass > 0.0 && mass <= 0.5 + HALF_TOL {
            best = best.min(flow.max(0.0) / mass);
        }
    }
    Ok(Conductance { phi: best.min(1.0), exhaustive: true })
}

/// Conductance restricted to a candidate family of sets; an upper bound on the true value.
pub fn conductance_candidates(c: &ReversibleChain, sets: &[Vec<usize>]) -> Conductance {
    let p = c.p();
    let pi = c.pi();
    let n = c.size();
    let mut best = f64::INFINITY;
    for set in sets {
        let mut in_a = vec![false; n];
        for &x in set {
            if x < n {
                in_a[x] = true;
            }
        }
        let mass: f64 = (0..n).filter(|&x| in_a[x]).map(|x| pi[x]).sum();
        if !(mass > 0.0 && mass <= 0.5 + HALF_TOL) {
            continue;
        }
        let mut flow = 0.0;
        for x in (0..n).filter(|&x| in_a[x]) {
            for y in (0..n).filter(|&y| !in_a[y]) {
                flow += pi[x] * p[(x, y)];
            }
        }
        best = best.min(flow / mass);
    }
    Conductance { phi: best.min(1.0), exhaustive: false }
}

/// Sublevel and superlevel sets `{u <= t}`, `{u >= t}` of a vector, e.g. an eigenvector.
pub fn sublevel_candidates(u: &DVector<f64>) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..u.len()).collect();
    order.sort_by(|&a, &b| u[a].total_cmp(&u[b]));
    let mut sets = Vec::with_capacity(2 * u.len());
    for k in 1..u.len() {
        sets.push(order[..k].to_vec());
        sets.push(order[u.len() - k..].to_vec());
    }
    sets
}
