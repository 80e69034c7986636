use std::fmt;
use std::sync::Arc;

type LogFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type MemberFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Counters for the function, density and membership oracles.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleCalls {
    pub f: u64,
    pub rho: u64,
    pub membership: u64,
}

impl OracleCalls {
    pub fn add(&mut self, o: &OracleCalls) {
        self.f += o.f;
        self.rho += o.rho;
        self.membership += o.membership;
    }
}

/// `x ↦ log ρ(x)`, `-∞` outside the support.
#[derive(Clone)]
pub struct LogDensityOracle {
    eval: LogFn,
    pub dim: usize,
    pub lipschitz: Option<f64>,
}

impl fmt::Debug for LogDensityOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LogDensityOracle").field("dim", &self.dim).field("lipschitz", &self.lipschitz).finish()
    }
}

impl LogDensityOracle {
    pub fn new(dim: usize, lipschitz: Option<f64>, eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        LogDensityOracle { eval: Arc::new(eval), dim, lipschitz }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    /// Restricts the density to the closed ball of radius `r` around the origin.
    pub fn restrict_to_ball(self, r: f64) -> Self {
        let inner = self.eval.clone();
        LogDensityOracle {
            eval: Arc::new(move |x: &[f64]| if norm(x) <= r { inner(x) } else { f64::NEG_INFINITY }),
            ..self
        }
    }

    /// Standard Gaussian restricted to the ball `rB` in dimension `d`; Lipschitz constant `r`.
    pub fn gaussian_on_ball(d: usize, r: f64) -> Self {
        LogDensityOracle::new(d, Some(r), |x| -0.5 * x.iter().map(|v| v * v).sum::<f64>()).restrict_to_ball(r)
    }

    /// Uniform density on `rB`.
    pub fn uniform_on_ball(d: usize, r: f64) -> Self {
        LogDensityOracle::new(d, Some(0.0), |_| 0.0).restrict_to_ball(r)
    }
}

/// Membership oracle of a body `A` with `B ⊂ A ⊂ rB`.
#[derive(Clone)]
pub struct MembershipOracle {
    contains: MemberFn,
    pub dim: usize,
    pub outer_radius: f64,
    pub inner_radius: f64,
}

impl fmt::Debug for MembershipOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MembershipOracle")
            .field("dim", &self.dim)
            .field("outer_radius", &self.outer_radius)
            .field("inner_radius", &self.inner_radius)
            .finish()
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl MembershipOracle {
    pub fn new(
        dim: usize,
        outer_radius: f64,
        inner_radius: f64,
        contains: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
    ) -> Self {
        MembershipOracle { contains: Arc::new(contains), dim, outer_radius, inner_radius }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (self.contains)(x)
    }

    /// Ball of radius `r` centred at `center`.
    pub fn ball(dim: usize, r: f64, center: Vec<f64>) -> Self {
        let reach = r + norm(&center);
        MembershipOracle::new(dim, reach, r - norm(&center), move |x| {
            x.iter().zip(&center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>() <= r * r
        })
    }

    /// Cube `[-h, h]^d`.
    pub fn cube(dim: usize, h: f64) -> Self {
        MembershipOracle::new(dim, h * (dim as f64).sqrt(), h, move |x| x.iter().all(|v| v.abs() <= h))
    }

    /// Intersection of two bodies.
    pub fn intersect(&self, other: &MembershipOracle) -> Self {
        let (a, b) = (self.contains.clone(), other.contains.clone());
        MembershipOracle::new(
            self.dim,
            self.outer_radius.min(other.outer_radius),
            self.inner_radius.min(other.inner_radius),
            move |x| a(x) && b(x),
        )
    }
}
