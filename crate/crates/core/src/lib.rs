//! Random-matrix model of quantum thermalization.
//!
//! An isolated system governed by a GOE or GUE Hamiltonian of dimension `N`
//! carries the test function `Tr(A rho(t))`, where `rho(t) = U(t) Pi U(t)^dag`
//! for a fixed statistical operator `Pi` and observable `A`. This crate
//! samples such Hamiltonians, evolves the test function exactly in the
//! sampled eigenbasis, and provides the analytic predictions for the ensemble
//! mean and fluctuations together with Monte Carlo estimators that verify
//! them.
//!
//! Module map:
//! - [`ensemble`]: GOE/GUE sampling, diagonalization, spectral statistics.
//! - [`states`]: statistical operators `Pi` and test observables `A`.
//! - [`evolution`]: `f(t)`, `U(t)`, trajectories of `Tr(A rho(t))`, long-time
//!   averages.
//! - [`analytics`]: semicircle density, `g(t/tau_lambda)`, two-level cluster
//!   functions, correlated form-factor terms, mean predictions, time scales,
//!   ETH comparison curves.
//! - [`moments`]: Monte Carlo estimators for the low moments of `U(t)` and
//!   for the mean/variance of the trace across realizations.
//! - [`oracles`]: independent verification routes (Bessel series, closed-form
//!   Fourier transforms) used by the test suites; kept separate from the
//!   implementation paths they check.
//!
//! Units: `hbar = 1` throughout; times are reported in units of
//! `tau_lambda = 1/(2 lambda)`.

pub mod analytics;
pub mod ensemble;
mod error;
pub mod evolution;
pub mod moments;
pub mod oracles;
pub mod quad;
pub mod states;

pub use error::RmtError;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, RmtError>;

/// Pin faer's internal parallelism to sequential.
///
/// Parallelism in this crate lives in the realization loop (rayon); the
/// linear-algebra kernels run single-threaded inside each worker so results
/// do not depend on the worker count.
pub fn init_linalg() {
    use std::sync::Once;
    static ONCE: Once = Once::new();
    ONCE.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
}
