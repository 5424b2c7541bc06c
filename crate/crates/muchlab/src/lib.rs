//! # muchlab
//!
//! A periodic pseudospectral solver and verification laboratory for the
//! μ-Camassa–Holm equation
//!
//! ```text
//! μ(u_t) - u_xxt = -2μ(u)u_x + 2u_x u_xx + u u_xxx,    x ∈ S¹ = ℝ/ℤ,
//! ```
//!
//! built around its peaked traveling waves `u(x,t) = cφ(x - ct)` with
//! `φ(x) = (12x² + 23)/26` on `[-1/2, 1/2]`. The crate constructs exact
//! peakons, evolves perturbed initial data with a dealiased Fourier
//! collocation / RK4 scheme, and numerically certifies the conservation
//! laws, the Lyapunov surface `F_u(M, m)`, the sharp maximum inequality,
//! the norm equivalence, and the orbital-stability estimate at desk scale.
//!
//! ## Modules
//!
//! - [`field`] — grid, FFT transforms, spectral calculus, `H¹` and μ norms.
//! - [`muop`] — the inertia operator `A = μ - ∂ₓ²`, its inverse, and the
//!   peakon's reproducing-kernel identity.
//! - [`peakon`] — closed-form peakons, exact invariants, distributional
//!   second derivative.
//! - [`functionals`] — conservation laws `H₀, H₁, H₂`, the branch function
//!   `g`, and the Lyapunov surface with closed-form derivatives.
//! - [`solver`] — method-of-lines RK4 with 2/3 dealiasing, exponential
//!   filtering, breaking detection, and the momentum-form residual.
//! - [`lab`] — orbital distance, verification suites, F-surface tabulation,
//!   stability sweeps, and the CSV/JSON/config plumbing behind the CLI.
//! - [`quad`] — composite Gauss–Legendre quadrature with breakpoints.
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release -p muchlab --example traveling_peakon
//! cargo run --release -p muchlab --example conservation_drift
//! cargo run --release -p muchlab --example verify_suites
//! cargo run --release -p muchlab --example lyapunov_surface
//! cargo run --release -p muchlab --example stability_sweep
//! cargo run --release -p muchlab --example reproducing_kernel
//! ```
//!
//! The `muchlab` binary exposes the same machinery as the subcommands
//! `simulate`, `verify`, `fsurface`, and `stability-sweep`; see the README.

pub mod field;
pub mod functionals;
pub mod lab;
pub mod muop;
pub mod peakon;
pub mod quad;
pub mod solver;

pub use field::{ExtremaRecord, FieldError, Grid, PeriodicField, Spectrum};
pub use functionals::{
    conserved, f_eval, f_grad, f_hess, fstats, g_field, h1_expansion, max_mu_inequality,
    ConservedTriple, FPoint, FStats, FunctionalsError,
};
pub use lab::{orbital_distance, CheckResult, DistanceMode, LabError};
pub use muop::{apply_a, invert_a, kernel_reproduce, MuOperator};
pub use peakon::{
    exact_invariants, peakon_field, peakon_spectrum, phi, phi_x, phi_xx_pairing, Peakon,
};
pub use solver::{
    evolve, m_form_residual, rhs, step, RunStatus, SolverConfig, SolverError, TrajectoryRecord,
};
