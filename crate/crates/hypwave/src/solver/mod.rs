//! Time-domain method-of-lines solvers.
//!
//! Both equations (shifted wave on H^n, quintic wave on the plane) are
//! radial Sturm-Liouville systems `u_tt = div(w grad u)/w + shift u + f(u)`
//! for a measure density w(r), so they share one finite-volume core and one
//! time loop. The spatial operator matches `operators::build_spectral`
//! exactly on the interior nodes; the center value r = 0 carries no measure
//! and is advanced by its own regularized ODE purely for output.

pub mod euclidean;
pub mod hyperbolic;

use crate::error::{Error, Result};

pub(crate) const BLOWUP_THRESHOLD: f64 = 1e8;
pub(crate) const BOUNDARY_TOL: f64 = 1e-6;
pub(crate) const MAX_CFL: f64 = 0.5;

/// Termination state of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Status {
    Completed,
    /// max |u| crossed the overflow threshold (or went non-finite); carries
    /// the last stable time.
    BlowupDetected(f64),
    /// the solution reached the truncation radius; carries the first
    /// contaminated time.
    BoundaryContamination(f64),
}

impl Status {
    pub fn is_completed(&self) -> bool {
        matches!(self, Status::Completed)
    }
}

/// How many state snapshots a run keeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SnapshotPolicy {
    /// Aim for roughly this many evenly spaced snapshots (default 64).
    Count(usize),
    /// Keep every k-th step; ties the snapshot spacing to dt, which
    /// refinement studies need.
    EveryKSteps(usize),
}

impl Default for SnapshotPolicy {
    fn default() -> Self {
        SnapshotPolicy::Count(64)
    }
}

/// Sign of the nonlinearity: defocusing -1, focusing +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zeta {
    Defocusing,
    Focusing,
}

impl Zeta {
    pub fn sign(&self) -> f64 {
        match self {
            Zeta::Defocusing => -1.0,
            Zeta::Focusing => 1.0,
        }
    }
}

/// `sign(u) |u|^p` with the u = 0 guard.
#[inline]
pub(crate) fn signed_power(u: f64, p: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u.signum() * u.abs().powf(p)
    }
}

/// Finite-volume radial wave operator shared by both solvers.
pub(crate) struct WaveCore {
    pub h: f64,
    pub num_points: usize,
    /// measure density at faces r_{i+1/2}, index i in 0..N-1
    pub face_density: Vec<f64>,
    /// measure density at nodes
    pub node_density: Vec<f64>,
    /// full quadrature weights (sphere factor included); weight[0] = 0
    pub quad_weights: Vec<f64>,
    pub sphere: f64,
    /// zeroth-order shift (rho^2 on H^n, 0 on the plane)
    pub shift: f64,
    /// regularized center Laplacian: u_tt(0) ~ coef * 2 (u_1 - u_0)/h^2
    pub center_coef: f64,
}

impl WaveCore {
    /// The acceleration `div(w grad u)/w + shift u + zeta g |u|^{p-1} u`.
    /// `g` = 0 switches the nonlinearity off.
    pub fn acceleration(&self, u: &[f64], p: f64, zeta_g: f64, out: &mut [f64]) {
        let n = self.num_points;
        let h2 = self.h * self.h;
        out[0] = self.center_coef * 2.0 * (u[1] - u[0]) / h2 + self.shift * u[0];
        for i in 1..n - 1 {
            let flux_right = self.face_density[i] * (u[i + 1] - u[i]);
            let flux_left = if i == 1 {
                0.0
            } else {
                self.face_density[i - 1] * (u[i] - u[i - 1])
            };
            out[i] = (flux_right - flux_left) / (h2 * self.node_density[i]) + self.shift * u[i];
        }
        out[n - 1] = 0.0; // Dirichlet truncation
        if zeta_g != 0.0 {
            for i in 0..n - 1 {
                out[i] += zeta_g * signed_power(u[i], p);
            }
        }
    }

    /// Quadratic form of the discrete `-Delta` (gradient energy):
    /// `integral |grad u|^2 dmu` with the Dirichlet edge included. The
    /// boundary value u[n-1] is taken as stored (zero along trajectories).
    pub fn gradient_quadratic(&self, u: &[f64]) -> f64 {
        let n = self.num_points;
        let mut acc = 0.0;
        for i in 1..n - 1 {
            let du = u[i + 1] - u[i];
            acc += self.face_density[i] * du * du;
        }
        self.sphere * acc / self.h
    }

    /// `integral f(u) dmu` against the quadrature weights.
    pub fn weighted_sum<F: Fn(f64) -> f64>(&self, u: &[f64], f: F) -> f64 {
        u.iter()
            .zip(self.quad_weights.iter())
            .map(|(&v, &w)| f(v) * w)
            .sum()
    }

    pub fn weighted_dot(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b.iter())
            .zip(self.quad_weights.iter())
            .map(|((&x, &y), &w)| x * y * w)
            .sum()
    }
}

/// Explicit time integrator choice. Leapfrog (velocity Verlet) is the
/// default for its long-time energy behavior; RK4 is kept for cross-checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeIntegrator {
    #[default]
    Leapfrog,
    Rk4,
}

pub(crate) struct StepOutcome {
    pub max_abs: f64,
    pub finite: bool,
}

/// One velocity-Verlet step; `a_cur` holds acceleration(u) on entry and
/// acceleration of the updated u on exit.
pub(crate) fn leapfrog_step(
    core: &WaveCore,
    u: &mut [f64],
    ut: &mut [f64],
    a_cur: &mut [f64],
    scratch: &mut [f64],
    dt: f64,
    p: f64,
    zeta_g: f64,
) -> StepOutcome {
    let n = u.len();
    let mut max_abs = 0.0f64;
    let mut finite = true;
    for i in 0..n {
        ut[i] += 0.5 * dt * a_cur[i];
        u[i] += dt * ut[i];
    }
    u[n - 1] = 0.0;
    core.acceleration(u, p, zeta_g, scratch);
    for i in 0..n {
        ut[i] += 0.5 * dt * scratch[i];
        a_cur[i] = scratch[i];
        let a = u[i].abs();
        if a > max_abs {
            max_abs = a;
        }
        if !u[i].is_finite() || !ut[i].is_finite() {
            finite = false;
        }
    }
    StepOutcome { max_abs, finite }
}

pub(crate) fn rk4_step(
    core: &WaveCore,
    u: &mut Vec<f64>,
    ut: &mut Vec<f64>,
    dt: f64,
    p: f64,
    zeta_g: f64,
) -> StepOutcome {
    let n = u.len();
    let mut k = vec![vec![0.0; n]; 4]; // accelerations
    let mut v = vec![vec![0.0; n]; 4]; // velocities
    let mut tmp = vec![0.0; n];

    core.acceleration(u, p, zeta_g, &mut k[0]);
    v[0].copy_from_slice(ut);

    for i in 0..n {
        tmp[i] = u[i] + 0.5 * dt * v[0][i];
    }
    core.acceleration(&tmp, p, zeta_g, &mut k[1]);
    for i in 0..n {
        v[1][i] = ut[i] + 0.5 * dt * k[0][i];
    }

    for i in 0..n {
        tmp[i] = u[i] + 0.5 * dt * v[1][i];
    }
    core.acceleration(&tmp, p, zeta_g, &mut k[2]);
    for i in 0..n {
        v[2][i] = ut[i] + 0.5 * dt * k[1][i];
    }

    for i in 0..n {
        tmp[i] = u[i] + dt * v[2][i];
    }
    core.acceleration(&tmp, p, zeta_g, &mut k[3]);
    for i in 0..n {
        v[3][i] = ut[i] + dt * k[2][i];
    }

    let mut max_abs = 0.0f64;
    let mut finite = true;
    for i in 0..n {
        u[i] += dt / 6.0 * (v[0][i] + 2.0 * v[1][i] + 2.0 * v[2][i] + v[3][i]);
        ut[i] += dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
        let a = u[i].abs();
        if a > max_abs {
            max_abs = a;
        }
        if !u[i].is_finite() || !ut[i].is_finite() {
            finite = false;
        }
    }
    u[n - 1] = 0.0;
    StepOutcome { max_abs, finite }
}

pub(crate) fn validate_cfl(dt: f64, h: f64) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    if dt > MAX_CFL * h * (1.0 + 1e-12) {
        return Err(Error::Config(format!(
            "CFL violation: dt = {dt} exceeds 0.5 h = {}",
            MAX_CFL * h
        )));
    }
    Ok(())
}
