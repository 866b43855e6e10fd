//! Radial solver and analysis toolkit for the defocusing quintic wave
//! equation `u_tt - Delta u = -|u|^4 u` on R^2: conserved energy, the
//! explicit linear representation kernel (the trusted oracle of this
//! module), exterior decay estimates `|u| <~ r^{-1/2}(r-t)^{-delta}` with
//! their derivative companions, and the reduction of `sqrt(r) u` to a
//! one-dimensional wave equation.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::{adaptive_simpson, periodic_trapezoid};
use crate::solver::{
    leapfrog_step, rk4_step, validate_cfl, SnapshotPolicy, Status, TimeIntegrator, WaveCore,
    BLOWUP_THRESHOLD, BOUNDARY_TOL,
};

const QUINTIC_P: f64 = 5.0;

/// Uniform radial grid on [0, r_max] with the flat-plane measure 2 pi r dr.
#[derive(Debug, Clone)]
pub struct PlanarGrid {
    pub r_max: f64,
    pub num_points: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    h: f64,
}

impl PlanarGrid {
    pub fn new(r_max: f64, num_points: usize) -> Result<Arc<Self>> {
        if !(r_max > 0.0) || num_points < 16 {
            return Err(Error::InvalidGrid(format!(
                "planar grid needs positive r_max and at least 16 points, got {r_max}, {num_points}"
            )));
        }
        let h = r_max / (num_points - 1) as f64;
        let points: Vec<f64> = (0..num_points)
            .map(|i| if i == num_points - 1 { r_max } else { i as f64 * h })
            .collect();
        let weights = points
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let c = if i == 0 || i == num_points - 1 { 0.5 } else { 1.0 };
                std::f64::consts::TAU * h * c * r
            })
            .collect();
        Ok(Arc::new(Self {
            r_max,
            num_points,
            points,
            weights,
            h,
        }))
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }
}

/// (u, u_t) on a planar grid at one instant.
#[derive(Debug, Clone)]
pub struct EuclideanState {
    pub grid: Arc<PlanarGrid>,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
    pub time: f64,
}

impl EuclideanState {
    pub fn new(grid: Arc<PlanarGrid>, u: Vec<f64>, ut: Vec<f64>, time: f64) -> Result<Self> {
        if u.len() != grid.num_points || ut.len() != grid.num_points {
            return Err(Error::InvalidGrid("state length does not match grid".into()));
        }
        if u.iter().chain(ut.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("euclidean state".into()));
        }
        Ok(Self { grid, u, ut, time })
    }
}

/// Decay class of the admissible data:
/// `|grad u0|, |u1| <= A (1+r)^{-3/2-eps}` and `|u0| <= A (1+r)^{-1/2-eps}`
/// beyond the threshold radius, with the exterior-estimate exponent delta
/// strictly inside (0, min{eps, 1/10}).
#[derive(Debug, Clone, Copy)]
pub struct DecayProfile {
    pub a: f64,
    pub eps: f64,
    pub r_threshold: f64,
    pub delta: f64,
}

impl DecayProfile {
    pub fn new(a: f64, eps: f64, r_threshold: f64, delta: f64) -> Result<Self> {
        if !(a > 0.0 && eps > 0.0 && r_threshold >= 0.0) {
            return Err(Error::InvalidParameter("profile constants must be positive".into()));
        }
        if !(delta > 0.0 && delta < eps.min(0.1)) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0, min(eps, 1/10)) = (0, {}), got {delta}",
                eps.min(0.1)
            )));
        }
        Ok(Self {
            a,
            eps,
            r_threshold,
            delta,
        })
    }

    /// Default delta: half of the open ceiling.
    pub fn with_default_delta(a: f64, eps: f64, r_threshold: f64) -> Result<Self> {
        Self::new(a, eps, r_threshold, eps.min(0.1) / 2.0)
    }
}

/// Named planar initial data.
#[derive(Debug, Clone)]
pub enum InitialData2d {
    Zero,
    Gaussian {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// Polynomially decaying pair inside the decay class of [`DecayProfile`],
    /// tapered to compact support on [taper_start, taper_end] so that the
    /// Dirichlet truncation stays exact. Tapering only lowers the data, so
    /// the class bounds are preserved.
    PowerLaw {
        amplitude: f64,
        eps: f64,
        taper_start: f64,
        taper_end: f64,
    },
    Fields {
        u0: Vec<f64>,
        u1: Vec<f64>,
    },
}

/// C^infinity cutoff: 1 on [0, a], 0 on [b, oo); the classic bump blend
/// f(1-s)/(f(s)+f(1-s)) with f(x) = exp(-1/x). Full smoothness keeps the
/// solver's dispersive error spectrally small, which the residual-based
/// audits rely on.
pub fn smooth_taper(r: f64, a: f64, b: f64) -> f64 {
    if r <= a {
        1.0
    } else if r >= b {
        0.0
    } else {
        let s = (r - a) / (b - a);
        let f = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
        f(1.0 - s) / (f(s) + f(1.0 - s))
    }
}

/// The power-law pair evaluated pointwise; exposed so data can be validated
/// or sampled without a solver run.
pub fn power_law_data(amplitude: f64, eps: f64, taper_start: f64, taper_end: f64, r: f64) -> (f64, f64) {
    let g0 = 0.5 + eps;
    let g1 = 1.5 + eps;
    let c0 = 0.1 * 2f64.powf(-g0 / 2.0) / g0.max(1.0);
    let c1 = 0.1 * 2f64.powf(-g1 / 2.0);
    let t = smooth_taper(r, taper_start, taper_end);
    let base = 1.0 + r * r;
    (
        amplitude * c0 * base.powf(-g0 / 2.0) * t,
        amplitude * c1 * base.powf(-g1 / 2.0) * t,
    )
}

#[derive(Debug, Clone)]
pub struct SimConfig2d {
    pub r_max: f64,
    pub num_points: usize,
    pub t_final: f64,
    pub dt: f64,
    pub initial: InitialData2d,
    /// false switches the quintic term off (linear wave equation)
    pub nonlinear: bool,
    pub snapshots: SnapshotPolicy,
    pub integrator: TimeIntegrator,
    pub allow_boundary_proximity: bool,
}

impl SimConfig2d {
    pub fn defaults(r_max: f64, num_points: usize, t_final: f64) -> Self {
        let h = r_max / (num_points - 1) as f64;
        Self {
            r_max,
            num_points,
            t_final,
            dt: 0.4 * h,
            initial: InitialData2d::Gaussian {
                amplitude: 1.0,
                center: 0.0,
                width: 1.0,
            },
            nonlinear: true,
            snapshots: SnapshotPolicy::default(),
            integrator: TimeIntegrator::Leapfrog,
            allow_boundary_proximity: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Snapshot2d {
    pub time: f64,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Trajectory2d {
    pub grid: Arc<PlanarGrid>,
    pub nonlinear: bool,
    pub dt: f64,
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    /// running integral of |u|^6 dx dt (the L^6 L^6 mass to the sixth power)
    pub l6_acc: Vec<f64>,
    pub virial_m: Vec<f64>,
    pub virial_mprime: Vec<f64>,
    pub max_abs: Vec<f64>,
    pub snapshots: Vec<Snapshot2d>,
    pub status: Status,
}

impl Trajectory2d {
    pub fn final_state(&self) -> Result<EuclideanState> {
        let last = self
            .snapshots
            .last()
            .ok_or_else(|| Error::InsufficientData("trajectory has no snapshots".into()))?;
        EuclideanState::new(self.grid.clone(), last.u.clone(), last.ut.clone(), last.time)
    }

    pub fn initial_energy(&self) -> f64 {
        self.energy.first().copied().unwrap_or(0.0)
    }
}

fn build_core(grid: &PlanarGrid) -> WaveCore {
    let h = grid.spacing();
    WaveCore {
        h,
        num_points: grid.num_points,
        face_density: (0..grid.num_points - 1).map(|i| (i as f64 + 0.5) * h).collect(),
        node_density: grid.points.clone(),
        quad_weights: grid.weights.clone(),
        sphere: std::f64::consts::TAU,
        shift: 0.0,
        center_coef: 2.0,
    }
}

fn initial_fields_2d(cfg: &SimConfig2d, grid: &PlanarGrid) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = grid.num_points;
    match &cfg.initial {
        InitialData2d::Zero => Ok((vec![0.0; n], vec![0.0; n])),
        InitialData2d::Gaussian {
            amplitude,
            center,
            width,
        } => {
            if !(*width > 0.0) {
                return Err(Error::Config("gaussian width must be positive".into()));
            }
            let u0 = grid
                .points
                .iter()
                .map(|&r| amplitude * (-((r - center) * (r - center)) / (width * width)).exp())
                .collect();
            Ok((u0, vec![0.0; n]))
        }
        InitialData2d::PowerLaw {
            amplitude,
            eps,
            taper_start,
            taper_end,
        } => {
            if !(*taper_start > 0.0 && taper_end > taper_start) {
                return Err(Error::Config("taper interval must be ordered and positive".into()));
            }
            let mut u0 = Vec::with_capacity(n);
            let mut u1 = Vec::with_capacity(n);
            for &r in &grid.points {
                let (a, b) = power_law_data(*amplitude, *eps, *taper_start, *taper_end, r);
                u0.push(a);
                u1.push(b);
            }
            Ok((u0, u1))
        }
        InitialData2d::Fields { u0, u1 } => {
            if u0.len() != n || u1.len() != n {
                return Err(Error::Config("field data does not match the grid".into()));
            }
            if u0.iter().chain(u1.iter()).any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("initial data".into()));
            }
            Ok((u0.clone(), u1.clone()))
        }
    }
}

/// Energy `integral (1/2 |u_t|^2 + 1/2 |grad u|^2 + 1/6 |u|^6) dx`.
pub fn energy_2d(state: &EuclideanState) -> f64 {
    let core = build_core(&state.grid);
    let kin = core.weighted_sum(&state.ut, |v| v * v);
    let grad = core.gradient_quadratic(&state.u);
    let pot = core.weighted_sum(&state.u, |v| v.powi(2).powi(3));
    0.5 * kin + 0.5 * grad + pot / 6.0
}

/// Runs the quintic Cauchy problem (or the linear wave equation when the
/// nonlinearity is off).
pub fn simulate_quintic(cfg: &SimConfig2d) -> Result<Trajectory2d> {
    let grid = PlanarGrid::new(cfg.r_max, cfg.num_points)?;
    let (mut u, mut ut) = initial_fields_2d(cfg, &grid)?;
    validate_cfl(cfg.dt, grid.spacing())?;
    if !(cfg.t_final > 0.0) {
        return Err(Error::Config("t_final must be positive".into()));
    }
    let core = build_core(&grid);
    let zeta_g = if cfg.nonlinear { -1.0 } else { 0.0 };
    let raw_steps = (cfg.t_final / cfg.dt).ceil().max(1.0) as usize;
    let stride = match cfg.snapshots {
        SnapshotPolicy::Count(c) => (raw_steps / c.max(1)).max(1),
        SnapshotPolicy::EveryKSteps(k) => k.max(1),
    };
    // keep dt as configured and snapshots uniformly spaced: run to the first
    // snapshot boundary at or past t_final
    let steps = raw_steps.div_ceil(stride) * stride;
    let dt = cfg.dt;
    if !cfg.allow_boundary_proximity {
        let amp = u.iter().chain(ut.iter()).fold(0.0f64, |m, &v| m.max(v.abs()));
        if amp > 0.0 {
            let thresh = 1e-12 * amp;
            let support = grid
                .points
                .iter()
                .zip(u.iter().zip(ut.iter()))
                .rev()
                .find(|(_, (a, b))| a.abs() > thresh || b.abs() > thresh)
                .map(|(&r, _)| r)
                .unwrap_or(0.0);
            let t_end = steps as f64 * dt;
            if support + t_end > grid.r_max {
                return Err(Error::Config(format!(
                    "light cone from the data support (radius {support:.3}) reaches r_max = {} before t = {t_end}",
                    grid.r_max
                )));
            }
        }
    }

    let mut traj = Trajectory2d {
        grid: grid.clone(),
        nonlinear: cfg.nonlinear,
        dt,
        times: Vec::with_capacity(steps + 1),
        energy: Vec::with_capacity(steps + 1),
        l6_acc: Vec::with_capacity(steps + 1),
        virial_m: Vec::with_capacity(steps + 1),
        virial_mprime: Vec::with_capacity(steps + 1),
        max_abs: Vec::with_capacity(steps + 1),
        snapshots: Vec::new(),
        status: Status::Completed,
    };

    let record = |traj: &mut Trajectory2d, core: &WaveCore, u: &[f64], ut: &[f64], t: f64, prev_l6: Option<f64>, dt: f64| -> f64 {
        let kin = core.weighted_sum(ut, |v| v * v);
        let grad = core.gradient_quadratic(u);
        let l6 = core.weighted_sum(u, |v| v.powi(2).powi(3));
        let energy = 0.5 * kin + 0.5 * grad + if cfg.nonlinear { l6 / 6.0 } else { 0.0 };
        let acc_prev = traj.l6_acc.last().copied().unwrap_or(0.0);
        let acc = match prev_l6 {
            Some(pl) => acc_prev + 0.5 * (pl + l6) * dt,
            None => acc_prev,
        };
        traj.times.push(t);
        traj.energy.push(energy);
        traj.l6_acc.push(acc);
        traj.virial_m.push(core.weighted_sum(u, |v| v * v));
        traj.virial_mprime.push(2.0 * core.weighted_dot(u, ut));
        traj.max_abs.push(u.iter().fold(0.0f64, |m, &v| m.max(v.abs())));
        l6
    };

    let mut prev_l6 = record(&mut traj, &core, &u, &ut, 0.0, None, dt);
    traj.snapshots.push(Snapshot2d {
        time: 0.0,
        u: u.clone(),
        ut: ut.clone(),
    });

    let n_pts = grid.num_points;
    let mut a_cur = vec![0.0; n_pts];
    let mut scratch = vec![0.0; n_pts];
    core.acceleration(&u, QUINTIC_P, zeta_g, &mut a_cur);
    let boundary_idx = n_pts - 2;
    let mut last_good_t = 0.0;

    for step in 1..=steps {
        let t = step as f64 * dt;
        let outcome = match cfg.integrator {
            TimeIntegrator::Leapfrog => leapfrog_step(
                &core, &mut u, &mut ut, &mut a_cur, &mut scratch, dt, QUINTIC_P, zeta_g,
            ),
            TimeIntegrator::Rk4 => rk4_step(&core, &mut u, &mut ut, dt, QUINTIC_P, zeta_g),
        };
        if !outcome.finite || outcome.max_abs > BLOWUP_THRESHOLD {
            traj.status = Status::BlowupDetected(last_good_t);
            break;
        }
        last_good_t = t;
        prev_l6 = record(&mut traj, &core, &u, &ut, t, Some(prev_l6), dt);
        if step % stride == 0 || step == steps {
            traj.snapshots.push(Snapshot2d {
                time: t,
                u: u.clone(),
                ut: ut.clone(),
            });
        }
        if u[boundary_idx].abs() > BOUNDARY_TOL {
            traj.status = Status::BoundaryContamination(t);
            break;
        }
    }

    Ok(traj)
}

// ---------------------------------------------------------------------------
// The explicit linear representation
// ---------------------------------------------------------------------------

/// Value of the linear solution at (|x|, t) for radial data, by direct
/// quadrature of the plane-wave kernel
/// `(1/2 pi t^2) integral_{B(x,t)} (t u0 + t^2 u1 + t grad u0 . (y-x)) /
/// sqrt(t^2 - |y-x|^2) dy` plus the Duhamel term. The inverse-square-root
/// edge is removed by the substitution |y-x| = t sin(phi).
pub fn linear_representation(
    u0: &dyn Fn(f64) -> f64,
    du0: &dyn Fn(f64) -> f64,
    u1: &dyn Fn(f64) -> f64,
    source: Option<&dyn Fn(f64, f64) -> f64>,
    x_abs: f64,
    t: f64,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("kernel evaluation needs t > 0, got {t}")));
    }
    if x_abs < 0.0 {
        return Err(Error::InvalidParameter("negative radius".into()));
    }
    let disk_average = |radius: f64, f: &dyn Fn(f64, f64) -> f64| -> Result<f64> {
        // integral over B(x, radius) of f(|y|, rho)/sqrt(radius^2-rho^2) dy
        // = radius * int_0^{pi/2} int_0^{2pi} f sin(phi) dtheta dphi
        let outer = adaptive_simpson(
            |phi| {
                let rho = radius * phi.sin();
                let inner = periodic_trapezoid(
                    |theta| {
                        let y = (x_abs * x_abs + rho * rho + 2.0 * x_abs * rho * theta.cos())
                            .max(0.0)
                            .sqrt();
                        f(y, rho * theta.cos())
                    },
                    std::f64::consts::TAU,
                    1e-10,
                )
                .unwrap_or(f64::NAN);
                inner * phi.sin()
            },
            0.0,
            std::f64::consts::FRAC_PI_2,
            1e-9,
        )?;
        if !outer.is_finite() {
            return Err(Error::QuadratureNonConvergence("kernel inner integral".into()));
        }
        Ok(radius * outer)
    };

    // main term: (1/2 pi) [ <u0 + t u1 + du0 (rho^2 + x rho cos)/|y|> ]
    let main_integrand = |y: f64, rho_cos: f64, rho: f64| -> f64 {
        let gradient_term = if y < 1e-14 {
            0.0
        } else {
            du0(y) * (rho * rho + x_abs * rho_cos) / y
        };
        u0(y) + t * u1(y) + gradient_term
    };
    // disk_average passes (y, rho cos theta); recover rho from closure state
    // by integrating in two pieces to keep the signature simple
    let mut value = 0.0;
    {
        let radius = t;
        let outer = adaptive_simpson(
            |phi| {
                let rho = radius * phi.sin();
                let inner = periodic_trapezoid(
                    |theta| {
                        let rho_cos = rho * theta.cos();
                        let y = (x_abs * x_abs + rho * rho + 2.0 * x_abs * rho_cos)
                            .max(0.0)
                            .sqrt();
                        main_integrand(y, rho_cos, rho)
                    },
                    std::f64::consts::TAU,
                    1e-10,
                )
                .unwrap_or(f64::NAN);
                inner * phi.sin()
            },
            0.0,
            std::f64::consts::FRAC_PI_2,
            1e-9,
        )?;
        if !outer.is_finite() {
            return Err(Error::QuadratureNonConvergence("kernel main integral".into()));
        }
        value += radius * outer / (std::f64::consts::TAU * radius);
    }

    if let Some(f_src) = source {
        // Duhamel: (1/2 pi) int_0^t int_{B(x,t-s)} F / sqrt((t-s)^2-rho^2)
        let duhamel = adaptive_simpson(
            |s| {
                let radius = t - s;
                if radius <= 1e-14 {
                    return 0.0;
                }
                disk_average(radius, &|y, _| f_src(y, s)).unwrap_or(f64::NAN)
            },
            0.0,
            t,
            1e-8,
        )?;
        if !duhamel.is_finite() {
            return Err(Error::QuadratureNonConvergence("Duhamel integral".into()));
        }
        value += duhamel / std::f64::consts::TAU;
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// Decay reports
// ---------------------------------------------------------------------------

/// Checks configured data against the decay class of a profile.
pub fn validate_profile_data(
    grid: &PlanarGrid,
    u0: &[f64],
    u1: &[f64],
    prof: &DecayProfile,
) -> Result<()> {
    let h = grid.spacing();
    for i in 1..grid.num_points - 1 {
        let r = grid.points[i];
        if r <= prof.r_threshold {
            continue;
        }
        let bound0 = prof.a * (1.0 + r).powf(-0.5 - prof.eps);
        let bound1 = prof.a * (1.0 + r).powf(-1.5 - prof.eps);
        let du0 = (u0[i + 1] - u0[i - 1]) / (2.0 * h);
        if u0[i].abs() > bound0 * (1.0 + 1e-9) {
            return Err(Error::InvalidParameter(format!(
                "u0 violates the decay class at r = {r}: |{}| > {bound0}",
                u0[i]
            )));
        }
        if u1[i].abs() > bound1 * (1.0 + 1e-9) || du0.abs() > bound1 * (1.0 + 1e-6) + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "u1 or u0' violates the decay class at r = {r}"
            )));
        }
    }
    Ok(())
}

/// Exterior-region samples of one snapshot set: (r, t, u, u_r, u_t) with
/// r > t + R.
fn exterior_samples<'a>(
    traj: &'a Trajectory2d,
    r_threshold: f64,
) -> impl Iterator<Item = (f64, f64, f64, f64, f64)> + 'a {
    let h = traj.grid.spacing();
    traj.snapshots.iter().flat_map(move |snap| {
        let t = snap.time;
        (1..traj.grid.num_points - 1).filter_map(move |i| {
            let r = traj.grid.points[i];
            if r > t + r_threshold {
                let ur = (snap.u[i + 1] - snap.u[i - 1]) / (2.0 * h);
                Some((r, t, snap.u[i], ur, snap.ut[i]))
            } else {
                None
            }
        })
    })
}

#[derive(Debug, Clone)]
pub struct DecayReport {
    /// sup of |u| r^{1/2} (r-t)^{delta} over the exterior region
    pub fitted_b1: f64,
    pub samples: usize,
    pub argmax: (f64, f64),
}

/// Fits the pointwise-decay constant over all stored exterior samples.
pub fn decay_check(traj: &Trajectory2d, prof: &DecayProfile) -> Result<DecayReport> {
    let mut fitted = 0.0f64;
    let mut arg = (0.0, 0.0);
    let mut count = 0usize;
    for (r, t, u, _, _) in exterior_samples(traj, prof.r_threshold) {
        let weight = r.sqrt() * (r - t).powf(prof.delta);
        let val = u.abs() * weight;
        if val > fitted {
            fitted = val;
            arg = (r, t);
        }
        count += 1;
    }
    if count == 0 {
        return Err(Error::InsufficientData(
            "no stored samples in the exterior region r > t + R".into(),
        ));
    }
    Ok(DecayReport {
        fitted_b1: fitted,
        samples: count,
        argmax: arg,
    })
}

#[derive(Debug, Clone)]
pub struct DerivativeDecayReport {
    /// sup |(sqrt(r) u)_t + (sqrt(r) u)_r| r^{1+delta}
    pub fitted_outgoing: f64,
    /// sup |u_t + u_r| r^{3/2}
    pub fitted_sum: f64,
    /// sup |u_t - u_r| r^{1/2}
    pub fitted_diff: f64,
    pub samples: usize,
}

/// Fits the three derivative-decay constants over the exterior region.
pub fn derivative_decay_check(
    traj: &Trajectory2d,
    prof: &DecayProfile,
) -> Result<DerivativeDecayReport> {
    let mut c_out = 0.0f64;
    let mut c_sum = 0.0f64;
    let mut c_diff = 0.0f64;
    let mut count = 0usize;
    for (r, _t, u, ur, ut) in exterior_samples(traj, prof.r_threshold) {
        let sqrt_r = r.sqrt();
        // (sqrt(r) u)_t + (sqrt(r) u)_r = sqrt(r)(u_t + u_r) + u/(2 sqrt(r))
        let outgoing = sqrt_r * (ut + ur) + u / (2.0 * sqrt_r);
        c_out = c_out.max(outgoing.abs() * r.powf(1.0 + prof.delta));
        c_sum = c_sum.max((ut + ur).abs() * r.powf(1.5));
        c_diff = c_diff.max((ut - ur).abs() * r.sqrt());
        count += 1;
    }
    if count == 0 {
        return Err(Error::InsufficientData(
            "no stored samples in the exterior region r > t + R".into(),
        ));
    }
    Ok(DerivativeDecayReport {
        fitted_outgoing: c_out,
        fitted_sum: c_sum,
        fitted_diff: c_diff,
        samples: count,
    })
}

#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub mean_residual: f64,
    pub points: usize,
}

/// Residual of `(d_tt - d_rr)(sqrt(r) u) = -sqrt(r)|u|^4 u + (1/4) r^{-3/2} u`
/// over triples of consecutive snapshots, restricted to r >= r_min where the
/// centered stencils are meaningful.
pub fn reduction_residual(traj: &Trajectory2d, r_min: f64) -> Result<ResidualReport> {
    if traj.snapshots.len() < 3 {
        return Err(Error::InsufficientData(
            "reduction residual needs at least 3 consecutive snapshots".into(),
        ));
    }
    let dt_snap = traj.snapshots[1].time - traj.snapshots[0].time;
    for w in traj.snapshots.windows(2) {
        if ((w[1].time - w[0].time) - dt_snap).abs() > 1e-9 * dt_snap {
            return Err(Error::InvalidParameter(
                "snapshots are not uniformly spaced in time".into(),
            ));
        }
    }
    let h = traj.grid.spacing();
    let n = traj.grid.num_points;
    let sqrt_r: Vec<f64> = traj.grid.points.iter().map(|r| r.sqrt()).collect();
    let mut max_res = 0.0f64;
    let mut sum_res = 0.0f64;
    let mut count = 0usize;
    for w in traj.snapshots.windows(3) {
        let (prev, cur, next) = (&w[0], &w[1], &w[2]);
        for i in 2..n - 2 {
            let r = traj.grid.points[i];
            if r < r_min {
                continue;
            }
            let v = |snap: &Snapshot2d, j: usize| sqrt_r[j] * snap.u[j];
            let v_tt = (v(next, i) - 2.0 * v(cur, i) + v(prev, i)) / (dt_snap * dt_snap);
            let v_rr = (v(cur, i + 1) - 2.0 * v(cur, i) + v(cur, i - 1)) / (h * h);
            let u = cur.u[i];
            let g = if traj.nonlinear {
                -sqrt_r[i] * u.powi(2).powi(2) * u + 0.25 * r.powf(-1.5) * u
            } else {
                0.25 * r.powf(-1.5) * u
            };
            let res = (v_tt - v_rr - g).abs();
            max_res = max_res.max(res);
            sum_res += res;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InsufficientData("no points beyond r_min".into()));
    }
    Ok(ResidualReport {
        max_residual: max_res,
        mean_residual: sum_res / count as f64,
        points: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_state_zero_energy() {
        let grid = PlanarGrid::new(10.0, 64).unwrap();
        let s = EuclideanState::new(grid.clone(), vec![0.0; 64], vec![0.0; 64], 0.0).unwrap();
        assert_eq!(energy_2d(&s), 0.0);
    }

    #[test]
    fn energy_matches_cartesian_quadrature_oracle() {
        // gaussian(1, 0, 1): closed-form integrals over the plane
        // |grad u|^2 = 4 r^2 e^{-2 r^2}: integral = pi; u^6 = e^{-6 r^2}: integral = pi/3... wait:
        // int |grad u0|^2 dx = int_0^oo (2 r e^{-r^2})^2 2 pi r dr = 8 pi int r^3 e^{-2 r^2} dr = pi
        // int u0^6 dx = 2 pi int r e^{-6 r^2} dr = pi/6
        let grid = PlanarGrid::new(12.0, 4001).unwrap();
        let u0: Vec<f64> = grid.points.iter().map(|&r| (-r * r).exp()).collect();
        let s = EuclideanState::new(grid.clone(), u0, vec![0.0; 4001], 0.0).unwrap();
        let expect = 0.5 * std::f64::consts::PI + std::f64::consts::PI / 36.0;
        assert_relative_eq!(energy_2d(&s), expect, max_relative = 1e-5);
    }

    #[test]
    fn quintic_energy_conserved_at_desk_scale() {
        let mut cfg = SimConfig2d::defaults(14.0, 1401, 6.0);
        cfg.snapshots = SnapshotPolicy::Count(16);
        let traj = simulate_quintic(&cfg).unwrap();
        assert_eq!(traj.status, Status::Completed);
        let e0 = traj.initial_energy();
        assert!(e0 > 0.0);
        let drift = traj.energy.iter().fold(0.0f64, |m, &e| m.max((e - e0).abs())) / e0;
        assert!(drift < 1e-3, "drift {drift}");
        for w in traj.l6_acc.windows(2) {
            assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn kernel_constant_and_linear_time() {
        let one = |_: f64| 1.0;
        let zero = |_: f64| 0.0;
        // u0 = 1 -> u = 1
        let v = linear_representation(&one, &zero, &zero, None, 1.3, 0.7).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-8);
        // u1 = 1 -> u = t
        let v2 = linear_representation(&zero, &zero, &one, None, 0.9, 1.7).unwrap();
        assert_relative_eq!(v2, 1.7, max_relative = 1e-8);
        // zero data -> zero
        let v3 = linear_representation(&zero, &zero, &zero, None, 1.0, 1.0).unwrap();
        assert_eq!(v3, 0.0);
        assert!(linear_representation(&one, &zero, &zero, None, 1.0, 0.0).is_err());
    }

    #[test]
    fn kernel_finite_propagation_speed() {
        // data supported outside the backward cone do not influence (x, t)
        let (x, t) = (3.0, 1.0);
        let inner = move |r: f64| (-(r - 1.0) * (r - 1.0)).exp();
        let diner = move |r: f64| -2.0 * (r - 1.0) * (-(r - 1.0) * (r - 1.0)).exp();
        let cut = move |r: f64| if r <= x + t + 0.1 { inner(r) } else { 0.0 };
        let dcut = move |r: f64| if r <= x + t + 0.1 { diner(r) } else { 0.0 };
        let zero = |_: f64| 0.0;
        let a = linear_representation(&inner, &diner, &zero, None, x, t).unwrap();
        let b = linear_representation(&cut, &dcut, &zero, None, x, t).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-10);
    }

    #[test]
    fn kernel_matches_linear_solver() {
        // the kernel is the trusted oracle: the solver converges to it at
        // second order
        let u0 = |r: f64| (-r * r).exp();
        let du0 = |r: f64| -2.0 * r * (-r * r).exp();
        let zero = |_: f64| 0.0;
        let max_err = |n: usize| -> f64 {
            let mut cfg = SimConfig2d::defaults(12.0, n, 2.0);
            cfg.nonlinear = false;
            cfg.dt = 0.25 * 12.0 / (n - 1) as f64;
            cfg.initial = InitialData2d::Gaussian {
                amplitude: 1.0,
                center: 0.0,
                width: 1.0,
            };
            let traj = simulate_quintic(&cfg).unwrap();
            let state = traj.final_state().unwrap();
            let t = state.time;
            [1.0f64, 2.0, 3.5, 5.0]
                .iter()
                .map(|&r| {
                    let idx = (r / traj.grid.spacing()).round() as usize;
                    let exact =
                        linear_representation(&u0, &du0, &zero, None, traj.grid.points[idx], t)
                            .unwrap();
                    (state.u[idx] - exact).abs()
                })
                .fold(0.0, f64::max)
        };
        let coarse = max_err(1201);
        let fine = max_err(2401);
        assert!(fine < 2.5e-3, "fine-grid error {fine}");
        let ratio = coarse / fine;
        assert!(ratio > 2.5 && ratio < 7.0, "convergence ratio {ratio} ({coarse} -> {fine})");
    }

    #[test]
    fn decay_profile_validation() {
        assert!(DecayProfile::new(1.0, 0.5, 1.0, 0.09).is_ok());
        assert!(DecayProfile::new(1.0, 0.5, 1.0, 0.11).is_err());
        assert!(DecayProfile::new(1.0, 0.05, 1.0, 0.06).is_err());
    }

    #[test]
    fn power_law_data_in_class() {
        let grid = PlanarGrid::new(24.0, 2401).unwrap();
        let mut cfg = SimConfig2d::defaults(24.0, 2401, 1.0);
        cfg.initial = InitialData2d::PowerLaw {
            amplitude: 1.0,
            eps: 0.5,
            taper_start: 8.0,
            taper_end: 12.0,
        };
        let (u0, u1) = initial_fields_2d(&cfg, &grid).unwrap();
        let prof = DecayProfile::new(1.0, 0.5, 1.0, 0.09).unwrap();
        validate_profile_data(&grid, &u0, &u1, &prof).unwrap();
    }

    #[test]
    fn decay_checks_on_quintic_run() {
        let mut cfg = SimConfig2d::defaults(22.0, 2201, 6.0);
        cfg.initial = InitialData2d::PowerLaw {
            amplitude: 1.0,
            eps: 0.5,
            taper_start: 6.0,
            taper_end: 10.0,
        };
        cfg.snapshots = SnapshotPolicy::Count(24);
        let traj = simulate_quintic(&cfg).unwrap();
        assert_eq!(traj.status, Status::Completed);
        let prof = DecayProfile::new(1.0, 0.5, 1.0, 0.09).unwrap();
        let rep = decay_check(&traj, &prof).unwrap();
        assert!(rep.fitted_b1.is_finite() && rep.fitted_b1 > 0.0);
        let drep = derivative_decay_check(&traj, &prof).unwrap();
        assert!(drep.fitted_outgoing.is_finite());
        assert!(drep.fitted_sum.is_finite());
        assert!(drep.fitted_diff.is_finite());
        // outgoing pulse: |u_t + u_r| decays one order faster than |u_t - u_r|
        assert!(drep.fitted_sum < 10.0 * drep.fitted_diff.max(1e-12) * traj.grid.r_max);
    }

    #[test]
    fn zero_solution_zero_decay_constants() {
        let mut cfg = SimConfig2d::defaults(10.0, 501, 2.0);
        cfg.initial = InitialData2d::Zero;
        let traj = simulate_quintic(&cfg).unwrap();
        let prof = DecayProfile::new(1.0, 0.5, 1.0, 0.09).unwrap();
        assert_eq!(decay_check(&traj, &prof).unwrap().fitted_b1, 0.0);
        let d = derivative_decay_check(&traj, &prof).unwrap();
        assert_eq!(d.fitted_outgoing, 0.0);
        assert_eq!(d.fitted_sum, 0.0);
        assert_eq!(d.fitted_diff, 0.0);
        let res = reduction_residual(&traj, 1.0).unwrap();
        assert_eq!(res.max_residual, 0.0);
    }

    #[test]
    fn reduction_residual_converges_second_order() {
        let run = |n: usize| {
            let mut cfg = SimConfig2d::defaults(12.0, n, 3.0);
            cfg.initial = InitialData2d::Gaussian {
                amplitude: 0.5,
                center: 3.0,
                width: 1.0,
            };
            let h = 12.0 / (n - 1) as f64;
            cfg.dt = 0.25 * h;
            cfg.snapshots = SnapshotPolicy::EveryKSteps(8);
            let traj = simulate_quintic(&cfg).unwrap();
            reduction_residual(&traj, 1.5).unwrap().max_residual
        };
        let coarse = run(601);
        let fine = run(1201);
        let ratio = coarse / fine;
        assert!(
            ratio > 2.5 && ratio < 7.0,
            "expected about 4x residual reduction, got {ratio} ({coarse} -> {fine})"
        );
    }

    #[test]
    fn reduction_residual_needs_three_snapshots() {
        let mut cfg = SimConfig2d::defaults(10.0, 501, 1.0);
        cfg.snapshots = SnapshotPolicy::Count(1);
        let traj = simulate_quintic(&cfg).unwrap();
        if traj.snapshots.len() < 3 {
            assert!(reduction_residual(&traj, 1.0).is_err());
        }
    }
}
