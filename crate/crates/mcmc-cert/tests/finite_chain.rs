mod common;

use common::{brute_force_mse, random_reversible, seeded};
use mcmc_cert::finite_chain::*;
use nalgebra::DVector;
use rand::Rng;

#[test]
fn analytic_errors_match_dense_evaluation() {
    let specs = [
        ToySpec::Circle { t: 3 },
        ToySpec::Circle { t: 9 },
        ToySpec::Hypercube { d: 1 },
        ToySpec::Hypercube { d: 4 },
        ToySpec::Star { t: 2, theta: 0.5 },
        ToySpec::Star { t: 6, theta: 0.1 },
    ];
    for spec in specs {
        let ex = make_example(&spec).unwrap();
        for &(n, n0) in &[(1u64, 0u64), (2, 0), (5, 3), (40, 7), (200, 0)] {
            let dense = exact_mse(&ex.chain, &ex.nu, &ex.f, n, n0).unwrap();
            let closed = analytic_example_error(&spec, n, n0).unwrap();
            assert!((dense - closed).abs() < 1e-9, "{spec:?} n={n} n0={n0}: {dense} vs {closed}");
        }
    }
}

#[test]
fn exact_mse_matches_path_enumeration() {
    let mut rng = seeded(11);
    for _ in 0..6 {
        let d = rng.random_range(2..=3);
        let c = random_reversible(&mut rng, d, 0.3);
        let f = DVector::from_fn(d, |_, _| rng.random::<f64>() * 2.0 - 1.0);
        let nu = InitialDistribution::point_mass(0, c.pi()).unwrap();
        for &(n, n0) in &[(1usize, 0usize), (2, 1), (3, 2)] {
            let a = exact_mse(&c, &nu, &f, n as u64, n0 as u64).unwrap();
            let b = brute_force_mse(&c, &nu, &f, n, n0);
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }
}
