//! Seeded general state space transition samplers: ball-walk Metropolis, hit-and-run with
//! a membership oracle, lazy wrappers and the analytic benchmark kernels.

mod kernel;
mod oracle;
mod quadrature;
mod rng;
mod steps;

pub use kernel::{builtin_kernel, BuiltinKind, Initial, KernelKind, KernelSampler, State};
pub use oracle::{LogDensityOracle, MembershipOracle, OracleCalls};
pub use quadrature::l1_contraction_1d;
pub use rng::{RngStream, StreamRng};
pub use steps::{
    ball_walk_step, chord_bisect, hit_and_run_step, lazy_step, metropolis_step, sample_direction, uniform_in_ball,
    Chord,
};
