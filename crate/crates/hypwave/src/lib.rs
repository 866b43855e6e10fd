//! # hypwave
//!
//! A numerical laboratory for the semilinear shifted wave equation
//! `u_tt - (Delta_{H^n} + rho^2) u = zeta |u|^{p-1} u` on hyperbolic spaces
//! H^n (n = 2..6) and its conformal link to the defocusing quintic wave
//! equation on the plane.
//!
//! The crate bundles:
//!
//! - [`geometry`]: radial measure, quadrature and the convex weight a(r)
//!   with `Delta a = 1` and `|a'| <= 1/(n-1)`;
//! - [`operators`]: spectral calculus on the discrete radial
//!   Laplace-Beltrami operator (H^{sigma,tau} norms, the linear group S(t),
//!   the Plancherel density from the Harish-Chandra c-function);
//! - [`solver`]: leapfrog method-of-lines solvers for both equations with
//!   energy, Morawetz, virial and scattering diagnostics, plus the exact
//!   d'Alembert reference for linear H^3 waves;
//! - [`cone`]: the change of variables between the forward light cone of
//!   R^2 x R and H^2 x R, with the local energies of the transformed wave;
//! - [`admissibility`]: exact-arithmetic Strichartz admissibility calculus
//!   (sigma-admissible / control / compatible pairs, minimal regularity,
//!   region polygons, critical exponents);
//! - [`inequalities`]: brute-force verification of the weighted integral
//!   lemmas with their explicit constants;
//! - [`experiments`]: reproducible named experiments with CSV/JSON outputs,
//!   also reachable through the `hypwave` binary.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod admissibility;
pub mod cone;
pub mod csvio;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod inequalities;
pub mod interp;
pub mod operators;
pub mod quad;
pub mod solver;

pub use error::{Error, Result};
