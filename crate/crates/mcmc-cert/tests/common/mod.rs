#![allow(dead_code)]

pub mod stats;

use mcmc_cert::finite_chain::{InitialDistribution, ReversibleChain, StochasticMatrix};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reversible chain from random symmetric edge weights; zero weights drop edges.
pub fn random_reversible(rng: &mut ChaCha8Rng, n: usize, sparsity: f64) -> ReversibleChain {
    loop {
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = if rng.random::<f64>() < sparsity { 0.0 } else { rng.random::<f64>() };
                w[(i, j)] = v;
                w[(j, i)] = v;
            }
        }
        for i in 0..n.saturating_sub(1) {
            // path edges keep the chain irreducible
            let v = 0.05 + rng.random::<f64>();
            w[(i, i + 1)] = v;
            w[(i + 1, i)] = v;
        }
        let rows: Vec<f64> = (0..n).map(|i| w.row(i).sum()).collect();
        let total: f64 = rows.iter().sum();
        let mut p = DMatrix::from_fn(n, n, |i, j| w[(i, j)] / rows[i]);
        for i in 0..n {
            let s: f64 = p.row(i).sum();
            p[(i, i)] += 1.0 - s;
        }
        let pi = DVector::from_fn(n, |i, _| rows[i] / total);
        let pi = &pi / pi.sum();
        if let Ok(m) = StochasticMatrix::new(p) {
            if let Ok(c) = ReversibleChain::with_pi(m, pi) {
                return c;
            }
        }
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mean square error of `S_{n,n0}` by summing over every path `X_0, ..., X_{n0+n}`.
pub fn brute_force_mse(c: &ReversibleChain, nu: &InitialDistribution, f: &DVector<f64>, n: usize, n0: usize) -> f64 {
    let d = c.size();
    let p = c.p();
    let mean = c.mean(f);
    let len = n0 + n;
    let mut total = 0.0;
    let mut path = vec![0usize; len + 1];
    let paths = d.pow((len + 1) as u32);
    for code in 0..paths {
        let mut k = code;
        for slot in path.iter_mut() {
            *slot = k % d;
            k /= d;
        }
        let mut prob = nu.nu()[path[0]];
        for t in 1..=len {
            if prob == 0.0 {
                break;
            }
            prob *= p[(path[t - 1], path[t])];
        }
        if prob == 0.0 {
            continue;
        }
        let est: f64 = (n0 + 1..=len).map(|t| f[path[t]]).sum::<f64>() / n as f64;
        total += prob * (est - mean) * (est - mean);
    }
    total
}
