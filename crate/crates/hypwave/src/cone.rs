//! Conformal correspondence between the forward light cone
//! `{t - t0 > |x|}` of R^2 x R and the cylinder H^2 x R:
//!
//! ```text
//! x = Theta e^tau sinh s,   t = t0 + e^tau cosh s,
//! v(s, Theta, tau) = e^{rho tau} u(x, t),      rho = 1/2,
//! ```
//!
//! which turns radial solutions of the quintic wave equation into solutions
//! of the shifted wave equation on H^2. The module carries the coordinate
//! maps, the conjugation identity
//! `e^{rho tau}(-d_tt + Delta_x) e^{-rho tau} = e^{-2 tau}(-d_tautau + Delta_H + rho^2)`,
//! the push-forward of simulated trajectories onto hyperboloid slices, and
//! the local energies J1 (center disk) and J2 (large rings) of the
//! transformed wave, with the volume element `dx dt = e^{3 tau} dmu dtau`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{RadialField, RadialGrid};
use crate::interp::SpaceTimeTable;
use crate::operators::StatePair;
use crate::quad::adaptive_simpson;
use crate::solver::euclidean::Trajectory2d;

pub const RHO_2D: f64 = 0.5;

/// Hyperboloid coordinates of a cone point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeCoords {
    pub tau: f64,
    pub s: f64,
}

/// (|x|, t) -> (tau, s); requires t - t0 > |x| >= 0.
pub fn cone_to_hyperbolic(x_abs: f64, t: f64, t0: f64) -> Result<ConeCoords> {
    let t_rel = t - t0;
    if !(x_abs >= 0.0) || t_rel <= x_abs {
        return Err(Error::OutsideCone { t_rel, x_abs });
    }
    Ok(ConeCoords {
        tau: 0.5 * (t_rel * t_rel - x_abs * x_abs).ln(),
        s: (x_abs / t_rel).atanh(),
    })
}

/// (tau, s) -> (|x|, t); inverse of [`cone_to_hyperbolic`].
pub fn hyperbolic_to_cone(c: ConeCoords, t0: f64) -> (f64, f64) {
    let e = c.tau.exp();
    (e * c.s.sinh(), t0 + e * c.s.cosh())
}

/// The s-coordinate where the hyperboloid slice tau crosses t = 0:
/// `s_tau = arccosh(-e^{-tau} t0)`.
pub fn s_tau_boundary(tau: f64, t0: f64) -> Result<f64> {
    let a = -t0 * (-tau).exp();
    if a < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "slice tau = {tau} does not reach t = 0 for t0 = {t0}"
        )));
    }
    Ok(a.acosh())
}

// ---------------------------------------------------------------------------
// Owned space-time solution table
// ---------------------------------------------------------------------------

/// An owned (r, t) table of u built from solver snapshots, covering negative
/// times through a time-reflected companion run when provided.
pub struct CartesianSolution {
    rows: Vec<Vec<f64>>,
    times: Vec<f64>,
    r0: f64,
    dr: f64,
}

impl CartesianSolution {
    /// Builds a table directly from uniformly spaced rows (one per time
    /// level); useful for synthetic closed-form solutions.
    pub fn from_rows(rows: Vec<Vec<f64>>, times: Vec<f64>, r0: f64, dr: f64) -> Result<Self> {
        if rows.len() < 4 || rows.len() != times.len() {
            return Err(Error::InsufficientData("need at least 4 aligned rows".into()));
        }
        Ok(Self { rows, times, r0, dr })
    }

    /// Merges snapshots of a forward run (t >= 0) and an optional backward
    /// run (same data with negated velocity; its snapshots represent
    /// u(-t)). Snapshot spacings must agree.
    pub fn from_trajectories(
        forward: &Trajectory2d,
        backward: Option<&Trajectory2d>,
    ) -> Result<Self> {
        let dr = forward.grid.spacing();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut times: Vec<f64> = Vec::new();
        if let Some(back) = backward {
            if back.grid.num_points != forward.grid.num_points
                || (back.grid.spacing() - dr).abs() > 1e-12
            {
                return Err(Error::InvalidParameter(
                    "forward/backward runs use different grids".into(),
                ));
            }
            for snap in back.snapshots.iter().skip(1).rev() {
                rows.push(snap.u.clone());
                times.push(-snap.time);
            }
        }
        for snap in &forward.snapshots {
            rows.push(snap.u.clone());
            times.push(snap.time);
        }
        if rows.len() < 4 {
            return Err(Error::InsufficientData("not enough snapshots".into()));
        }
        Ok(Self {
            rows,
            times,
            r0: 0.0,
            dr,
        })
    }

    pub fn table(&self) -> Result<SpaceTimeTable<'_>> {
        let refs: Vec<&[f64]> = self.rows.iter().map(|r| r.as_slice()).collect();
        SpaceTimeTable::new(refs, &self.times, self.r0, self.dr)
    }
}

// ---------------------------------------------------------------------------
// Push-forward onto hyperboloid slices
// ---------------------------------------------------------------------------

/// Samples `v = e^{rho tau} u` and
/// `d_tau v = e^{rho tau}(rho u + u_r e^tau sinh s + u_t e^tau cosh s)`
/// on the slice tau over an H^2 grid in the s coordinate.
pub fn pushforward(
    solution: &CartesianSolution,
    t0: f64,
    tau: f64,
    h2_grid: &Arc<RadialGrid>,
) -> Result<StatePair> {
    if h2_grid.n != 2 {
        return Err(Error::InvalidParameter(
            "push-forward targets an H^2 grid (n = 2)".into(),
        ));
    }
    let table = solution.table()?;
    let e_tau = tau.exp();
    let amp = (RHO_2D * tau).exp();
    let mut v = Vec::with_capacity(h2_grid.num_points);
    let mut vt = Vec::with_capacity(h2_grid.num_points);
    for &s in &h2_grid.points {
        let r = e_tau * s.sinh();
        let t = t0 + e_tau * s.cosh();
        if !table.contains(r, t) {
            return Err(Error::SliceOutOfRange(format!(
                "hyperboloid point (s = {s}, tau = {tau}) maps to (r = {r}, t = {t}) outside the simulated region"
            )));
        }
        let sample = table.sample(r, t)?;
        v.push(amp * sample.u);
        vt.push(amp * (RHO_2D * sample.u + sample.u_r * e_tau * s.sinh() + sample.u_t * e_tau * s.cosh()));
    }
    StatePair::new(
        RadialField::new(h2_grid.clone(), v)?,
        RadialField::new(h2_grid.clone(), vt)?,
        tau,
    )
}

// ---------------------------------------------------------------------------
// Conjugation identity audit
// ---------------------------------------------------------------------------

/// Max deviation between the two sides of the conjugation identity applied
/// to a closed-form test function u(|x|, t), with all derivatives taken by
/// centered differences of step `fd_step` (Cartesian side) and the matched
/// steps in (tau, s).
pub fn conjugation_residual<F: Fn(f64, f64) -> f64>(
    test_u: F,
    t0: f64,
    samples: &[ConeCoords],
    fd_step: f64,
) -> Result<f64> {
    if !(fd_step > 0.0) {
        return Err(Error::InvalidParameter("fd_step must be positive".into()));
    }
    let wave_op = |r: f64, t: f64| -> f64 {
        // (-d_tt + Delta_x) u for radial u: Delta_x = d_rr + (1/r) d_r
        let h = fd_step;
        let u_tt = (test_u(r, t + h) - 2.0 * test_u(r, t) + test_u(r, t - h)) / (h * h);
        let u_rr = (test_u(r + h, t) - 2.0 * test_u(r, t) + test_u(r - h, t)) / (h * h);
        let u_r = (test_u(r + h, t) - test_u(r - h, t)) / (2.0 * h);
        -u_tt + u_rr + u_r / r
    };
    let v = |tau: f64, s: f64| -> f64 {
        let (r, t) = hyperbolic_to_cone(ConeCoords { tau, s }, t0);
        (RHO_2D * tau).exp() * test_u(r, t)
    };
    let mut max_res = 0.0f64;
    for &c in samples {
        let (r, t) = hyperbolic_to_cone(c, t0);
        if c.s < 2.0 * fd_step || r < 2.0 * fd_step {
            return Err(Error::InvalidParameter(format!(
                "sample s = {} too close to the axis for the stencil",
                c.s
            )));
        }
        // LHS: e^{rho tau} (-d_tt + Delta_x) u at the mapped point
        let lhs = (RHO_2D * c.tau).exp() * wave_op(r, t);
        // RHS: e^{-2 tau} (-d_tautau + Delta_H + rho^2) v
        let h = fd_step;
        let v_tt = (v(c.tau + h, c.s) - 2.0 * v(c.tau, c.s) + v(c.tau - h, c.s)) / (h * h);
        let v_ss = (v(c.tau, c.s + h) - 2.0 * v(c.tau, c.s) + v(c.tau, c.s - h)) / (h * h);
        let v_s = (v(c.tau, c.s + h) - v(c.tau, c.s - h)) / (2.0 * h);
        let lap_h = v_ss + v_s / c.s.tanh();
        let rhs = (-2.0 * c.tau).exp() * (-v_tt + lap_h + RHO_2D * RHO_2D * v(c.tau, c.s));
        max_res = max_res.max((lhs - rhs).abs());
    }
    Ok(max_res)
}

// ---------------------------------------------------------------------------
// Local energies
// ---------------------------------------------------------------------------

/// Center-disk local energy
/// `J1(tau) = 1/2 integral_{s < s_tau} (|d_tau v|^2 + |d_s v|^2 - rho^2 v^2
/// + (1/3)|v|^6) dmu`, with `s_tau = arccosh(-e^{-tau} t0)`. The slice time
/// is read from the state; tau must lie in [-1, 0].
pub fn local_energy_j1(v_state: &StatePair, t0: f64) -> Result<f64> {
    let tau = v_state.time;
    if !(-1.0..=0.0).contains(&tau) {
        return Err(Error::InvalidParameter(format!(
            "tau must lie in [-1, 0], got {tau}"
        )));
    }
    let s_tau = s_tau_boundary(tau, t0)?;
    let grid = &v_state.u.grid;
    if s_tau > grid.r_max {
        return Err(Error::SliceOutOfRange(format!(
            "s_tau = {s_tau} exceeds the H^2 grid radius {}",
            grid.r_max
        )));
    }
    let h = grid.spacing();
    let v = &v_state.u.values;
    let vt = &v_state.ut.values;
    let n = grid.num_points;
    let mut acc = 0.0;
    for i in 0..n {
        let s = grid.points[i];
        if s > s_tau {
            break;
        }
        // centered d_s v, one-sided at the ends
        let vs = if i == 0 {
            0.0
        } else if i + 1 < n {
            (v[i + 1] - v[i - 1]) / (2.0 * h)
        } else {
            (v[i] - v[i - 1]) / h
        };
        let density = vt[i] * vt[i] + vs * vs - RHO_2D * RHO_2D * v[i] * v[i]
            + v[i].powi(6) / 3.0;
        // trapezoid weight truncated at s_tau
        let mut w = if i == 0 { 0.5 * h } else { h };
        if s + h > s_tau {
            w = w.min(0.5 * h + (s_tau - s)).max(0.0);
        }
        acc += density * std::f64::consts::TAU * s.sinh() * w;
    }
    Ok(0.5 * acc)
}

/// Range of ring radii s0 for which J2(tau, s0) is defined and stays inside
/// a table covering t <= t_table_max, r <= r_table_max: the ring starts
/// where the slice crosses t = 0 and must not leave the table.
pub fn ring_s0_range(
    tau: f64,
    t0: f64,
    t_table_max: f64,
    r_table_max: f64,
) -> Result<(f64, f64)> {
    let e2 = (2.0 * tau).exp();
    if t0 * t0 <= e2 {
        return Err(Error::InvalidParameter(
            "slice does not intersect t = 0".into(),
        ));
    }
    let e_tau = tau.exp();
    let r_lo = (t0 * t0 - e2).sqrt();
    let r_hi = ((t_table_max - t0) * (t_table_max - t0) - e2)
        .max(0.0)
        .sqrt()
        .min(r_table_max);
    if r_hi <= r_lo {
        return Err(Error::SliceOutOfRange(
            "table too small for any ring at this slice".into(),
        ));
    }
    Ok(((r_lo / e_tau).asinh() + 0.2, (r_hi / e_tau).asinh()))
}

/// Integrand profile of the ring energy J2 after the change of variables
/// r = e^tau sinh s, with its four-term split.
#[derive(Debug, Clone)]
pub struct RingProfile {
    pub r: Vec<f64>,
    pub g: Vec<f64>,
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
    pub g3: Vec<f64>,
    pub g4: Vec<f64>,
    /// sup |g| r^{1+delta} over the sampled range
    pub g_bound_constant: f64,
    /// fitted sups of |g1| r^{1+delta}, |g2| r^3, |g3| r^3, |g4| r^2
    pub term_constants: [f64; 4],
}

/// Ring local energy `J2(tau, s0) = pi * integral g(tau, r) dr` over
/// `r in [sqrt(t0^2 - e^{2 tau}), e^tau sinh s0]` (the full angular measure
/// supplies the factor 2 pi, halved by the energy's 1/2):
///
/// ```text
/// g = (r/t_+)[(u_r^2+u_t^2)(t_+^2+r^2) + 4 u_r u_t t_+ r
///     + 2 rho u u_r r + 2 rho u u_t t_+ + (1/3) e^{2 tau} u^6],
/// t_+ = sqrt(r^2 + e^{2 tau}).
/// ```
pub fn local_energy_j2(
    solution: &CartesianSolution,
    tau: f64,
    s0: f64,
    t0: f64,
    delta: f64,
    panels: usize,
) -> Result<(f64, RingProfile)> {
    if !(-1.0..=0.0).contains(&tau) {
        return Err(Error::InvalidParameter(format!(
            "tau must lie in [-1, 0], got {tau}"
        )));
    }
    let e2 = (2.0 * tau).exp();
    if t0 * t0 <= e2 {
        return Err(Error::InvalidParameter(
            "slice does not intersect t = 0: need t0^2 > e^{2 tau}".into(),
        ));
    }
    let r_lo = (t0 * t0 - e2).sqrt();
    let r_hi = tau.exp() * s0.sinh();
    if r_hi <= r_lo {
        return Err(Error::InvalidParameter(format!(
            "s0 = {s0} gives an empty ring: r_hi = {r_hi} <= r_lo = {r_lo}"
        )));
    }
    let table = solution.table()?;
    let m = panels.max(64);
    let dr = (r_hi - r_lo) / m as f64;
    let mut rs = Vec::with_capacity(m + 1);
    let mut g = Vec::with_capacity(m + 1);
    let mut g1v = Vec::with_capacity(m + 1);
    let mut g2v = Vec::with_capacity(m + 1);
    let mut g3v = Vec::with_capacity(m + 1);
    let mut g4v = Vec::with_capacity(m + 1);
    let mut sup_g = 0.0f64;
    let mut sup_terms = [0.0f64; 4];
    for i in 0..=m {
        let r = r_lo + i as f64 * dr;
        let t_plus = (r * r + e2).sqrt();
        let t = t0 + t_plus;
        if !table.contains(r, t) {
            return Err(Error::SliceOutOfRange(format!(
                "ring point (r = {r}, t = {t}) leaves the simulated region"
            )));
        }
        let smp = table.sample(r, t)?;
        let (u, ur, ut) = (smp.u, smp.u_r, smp.u_t);
        let grad_sq = ur * ur + ut * ut;
        let t1 = 2.0 * r * r * grad_sq + 4.0 * r * r * ur * ut + 2.0 * RHO_2D * r * u * (ur + ut);
        let t2 = e2 / 3.0 * (r / t_plus) * u.powi(6);
        let t3 = (r * (r * r + t_plus * t_plus) / t_plus - 2.0 * r * r) * grad_sq;
        let t4 = (r * r / t_plus - r) * 2.0 * RHO_2D * u * ur;
        let total = t1 + t2 + t3 + t4;
        rs.push(r);
        g.push(total);
        g1v.push(t1);
        g2v.push(t2);
        g3v.push(t3);
        g4v.push(t4);
        sup_g = sup_g.max(total.abs() * r.powf(1.0 + delta));
        sup_terms[0] = sup_terms[0].max(t1.abs() * r.powf(1.0 + delta));
        sup_terms[1] = sup_terms[1].max(t2.abs() * r.powi(3));
        sup_terms[2] = sup_terms[2].max(t3.abs() * r.powi(3));
        sup_terms[3] = sup_terms[3].max(t4.abs() * r.powi(2));
    }
    // trapezoid; 2 J2 = 2 pi int g dr
    let mut integral = 0.0;
    for i in 0..m {
        integral += 0.5 * (g[i] + g[i + 1]) * dr;
    }
    let j2 = std::f64::consts::PI * integral;
    Ok((
        j2,
        RingProfile {
            r: rs,
            g,
            g1: g1v,
            g2: g2v,
            g3: g3v,
            g4: g4v,
            g_bound_constant: sup_g,
            term_constants: sup_terms,
        },
    ))
}

// ---------------------------------------------------------------------------
// Shifted-wave residual and the L^6 volume identity
// ---------------------------------------------------------------------------

/// Discrete residual of `v_tautau - Delta_{H^2} v - rho^2 v + |v|^4 v = 0`
/// on pushed-forward slices around tau, using steps (d_tau, d_s).
pub fn shifted_wave_residual(
    solution: &CartesianSolution,
    t0: f64,
    tau: f64,
    d_tau: f64,
    h2_grid: &Arc<RadialGrid>,
    s_min: f64,
    s_max: f64,
    nonlinear: bool,
) -> Result<f64> {
    let minus = pushforward(solution, t0, tau - d_tau, h2_grid)?;
    let center = pushforward(solution, t0, tau, h2_grid)?;
    let plus = pushforward(solution, t0, tau + d_tau, h2_grid)?;
    let h = h2_grid.spacing();
    let n = h2_grid.num_points;
    let mut max_res = 0.0f64;
    for i in 1..n - 1 {
        let s = h2_grid.points[i];
        if s < s_min || s > s_max {
            continue;
        }
        let v = center.u.values[i];
        let v_tt = (plus.u.values[i] - 2.0 * v + minus.u.values[i]) / (d_tau * d_tau);
        let v_ss =
            (center.u.values[i + 1] - 2.0 * v + center.u.values[i - 1]) / (h * h);
        let v_s = (center.u.values[i + 1] - center.u.values[i - 1]) / (2.0 * h);
        let lap = v_ss + v_s / s.tanh();
        let nl = if nonlinear { v.powi(4) * v } else { 0.0 };
        let res = (v_tt - lap - RHO_2D * RHO_2D * v + nl).abs();
        max_res = max_res.max(res);
    }
    Ok(max_res)
}

/// Both sides of the L^6 volume identity over the slab
/// `tau in [tau_a, tau_b], s in [0, s1]`:
/// `integral |v|^6 dmu dtau` in hyperboloid coordinates vs
/// `integral |u|^6 dx dt` over the preimage (between two hyperboloids and
/// inside the cone direction s <= s1).
pub fn l6_volume_identity(
    solution: &CartesianSolution,
    t0: f64,
    tau_a: f64,
    tau_b: f64,
    s1: f64,
    panels: usize,
) -> Result<(f64, f64)> {
    if !(tau_a < tau_b && s1 > 0.0) {
        return Err(Error::InvalidParameter("need tau_a < tau_b and s1 > 0".into()));
    }
    let table = solution.table()?;
    let m = (panels.max(32) + 1) & !1; // even, for composite Simpson

    // hyperboloid side: |v|^6 = e^{3 tau} |u|^6, dmu = 2 pi sinh s ds;
    // composite Simpson in both directions
    let simpson_w = |i: usize| -> f64 {
        if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let d_tau = (tau_b - tau_a) / m as f64;
    let ds = s1 / m as f64;
    let mut lhs = 0.0;
    for i in 0..=m {
        let tau = tau_a + i as f64 * d_tau;
        let e_tau = tau.exp();
        let mut slice = 0.0;
        for j in 0..=m {
            let s = j as f64 * ds;
            let r = e_tau * s.sinh();
            let t = t0 + e_tau * s.cosh();
            let u = table.sample(r, t)?.u;
            slice += simpson_w(j) * u.powi(6) * s.sinh();
        }
        lhs += simpson_w(i) * (3.0 * tau).exp() * slice * (ds / 3.0);
    }
    lhs *= std::f64::consts::TAU * d_tau / 3.0;

    // Cartesian side: piecewise-smooth t-integral with r-limits
    // r_lo(t) = sqrt(max((t-t0)^2 - e^{2 tau_b}, 0)),
    // r_hi(t) = min(sqrt((t-t0)^2 - e^{2 tau_a}), tanh(s1) (t-t0))
    let e2a = (2.0 * tau_a).exp();
    let e2b = (2.0 * tau_b).exp();
    let tanh_s1 = s1.tanh();
    let slice_mass = |t: f64| -> f64 {
        let t_rel = t - t0;
        if t_rel * t_rel <= e2a {
            return 0.0;
        }
        let r_lo = (t_rel * t_rel - e2b).max(0.0).sqrt();
        let r_hi = (t_rel * t_rel - e2a).sqrt().min(tanh_s1 * t_rel);
        if r_hi <= r_lo {
            return 0.0;
        }
        adaptive_simpson(
            |r| {
                let u = table.sample(r, t).map(|s| s.u).unwrap_or(f64::NAN);
                u.powi(6) * r
            },
            r_lo,
            r_hi,
            1e-9,
        )
        .unwrap_or(f64::NAN)
    };
    let mut breaks = vec![
        t0 + tau_a.exp(),
        t0 + tau_b.exp(),
        t0 + tau_a.exp() * s1.cosh(),
        t0 + tau_b.exp() * s1.cosh(),
    ];
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut rhs = 0.0;
    for w in breaks.windows(2) {
        if w[1] - w[0] > 1e-12 {
            rhs += adaptive_simpson(&slice_mass, w[0], w[1], 1e-8)?;
        }
    }
    rhs *= std::f64::consts::TAU;
    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(Error::QuadratureNonConvergence("volume identity".into()));
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::euclidean::{InitialData2d, SimConfig2d, simulate_quintic};
    use crate::solver::SnapshotPolicy;
    use approx::assert_relative_eq;

    #[test]
    fn coordinate_map_basics() {
        // (x=0, t=-1, t0=-2) -> (tau=0, s=0)
        let c = cone_to_hyperbolic(0.0, -1.0, -2.0).unwrap();
        assert_relative_eq!(c.tau, 0.0, epsilon = 1e-15);
        assert_relative_eq!(c.s, 0.0, epsilon = 1e-15);
        // boundary value s_tau = arccosh(2) at tau = 0, t0 = -2
        assert_relative_eq!(s_tau_boundary(0.0, -2.0).unwrap(), 2.0f64.acosh(), epsilon = 1e-12);
        assert_relative_eq!(2.0f64.acosh(), 1.316958, max_relative = 1e-6);
        // outside the cone
        assert!(cone_to_hyperbolic(2.0, -1.0, -2.0).is_err());
    }

    #[test]
    fn round_trip_exact() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t0 = -2.0;
        for _ in 0..200 {
            let tau = rng.gen_range(-1.5..1.0);
            let s = rng.gen_range(0.0..4.0);
            let (x, t) = hyperbolic_to_cone(ConeCoords { tau, s }, t0);
            let back = cone_to_hyperbolic(x, t, t0).unwrap();
            assert!((back.tau - tau).abs() < 1e-12);
            assert!((back.s - s).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugation_identity_on_wave_harmonic_functions() {
        let t0 = -2.0;
        let samples: Vec<ConeCoords> = (1..=6)
            .flat_map(|i| {
                (0..3).map(move |j| ConeCoords {
                    tau: -0.6 + 0.2 * j as f64,
                    s: 0.3 * i as f64,
                })
            })
            .collect();
        // u = t solves the wave equation; residual is pure stencil error
        let coarse = conjugation_residual(|_, t| t, t0, &samples, 1e-2).unwrap();
        let fine = conjugation_residual(|_, t| t, t0, &samples, 5e-3).unwrap();
        assert!(coarse < 1e-3, "coarse residual {coarse}");
        assert!(fine < coarse + 1e-12);

        // constants map through both sides
        let c_res = conjugation_residual(|_, _| 1.0, t0, &samples, 1e-2).unwrap();
        assert!(c_res < 1e-4, "constant residual {c_res}");

        // generic smooth function: order-2 decay of the residual
        let g = |r: f64, t: f64| (-(r * r) - (t + 1.5) * (t + 1.5)).exp();
        let res_h = conjugation_residual(g, t0, &samples, 2e-2).unwrap();
        let res_h2 = conjugation_residual(g, t0, &samples, 1e-2).unwrap();
        let ratio = res_h / res_h2;
        assert!(ratio > 2.5 && ratio < 6.0, "ratio {ratio}");
    }

    fn small_solution() -> CartesianSolution {
        let mut cfg = SimConfig2d::defaults(14.0, 1401, 5.0);
        cfg.initial = InitialData2d::PowerLaw {
            amplitude: 1.0,
            eps: 0.5,
            taper_start: 4.0,
            taper_end: 7.0,
        };
        cfg.snapshots = SnapshotPolicy::EveryKSteps(4);
        let fwd = simulate_quintic(&cfg).unwrap();
        let mut bcfg = cfg.clone();
        bcfg.t_final = 3.0;
        bcfg.initial = InitialData2d::Fields {
            u0: fwd.snapshots[0].u.clone(),
            u1: fwd.snapshots[0].ut.iter().map(|v| -v).collect(),
        };
        let bwd = simulate_quintic(&bcfg).unwrap();
        CartesianSolution::from_trajectories(&fwd, Some(&bwd)).unwrap()
    }

    #[test]
    fn pushforward_zero_is_zero() {
        let mut cfg = SimConfig2d::defaults(12.0, 601, 4.0);
        cfg.initial = InitialData2d::Zero;
        cfg.snapshots = SnapshotPolicy::EveryKSteps(4);
        let fwd = simulate_quintic(&cfg).unwrap();
        let bwd = simulate_quintic(&cfg).unwrap();
        let sol = CartesianSolution::from_trajectories(&fwd, Some(&bwd)).unwrap();
        let grid = RadialGrid::new(2, 2.0, 128).unwrap();
        let state = pushforward(&sol, -2.0, -0.3, &grid).unwrap();
        assert!(state.u.values.iter().all(|&v| v == 0.0));
        assert!(state.ut.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn j1_and_j2_finite_on_quintic_run() {
        let sol = small_solution();
        let t0 = -2.0;
        let grid = RadialGrid::new(2, 2.2, 256).unwrap();
        let tau = -0.5;
        let state = pushforward(&sol, t0, tau, &grid).unwrap();
        let j1 = local_energy_j1(&state, t0).unwrap();
        assert!(j1.is_finite());
        let (j2, profile) = local_energy_j2(&sol, tau, 2.2, t0, 0.09, 256).unwrap();
        assert!(j2.is_finite());
        assert!(profile.g_bound_constant.is_finite());
        // tau outside [-1, 0] rejected
        assert!(local_energy_j2(&sol, 0.3, 2.2, t0, 0.09, 128).is_err());
        let bad_state = StatePair::new(state.u.clone(), state.ut.clone(), 0.4).unwrap();
        assert!(local_energy_j1(&bad_state, t0).is_err());
    }

    #[test]
    fn j1_and_j2_zero_for_zero_solution() {
        let mut cfg = SimConfig2d::defaults(12.0, 601, 4.0);
        cfg.initial = InitialData2d::Zero;
        cfg.snapshots = SnapshotPolicy::EveryKSteps(4);
        let fwd = simulate_quintic(&cfg).unwrap();
        let bwd = simulate_quintic(&cfg).unwrap();
        let sol = CartesianSolution::from_trajectories(&fwd, Some(&bwd)).unwrap();
        let grid = RadialGrid::new(2, 1.7, 64).unwrap();
        let state = pushforward(&sol, -2.0, -0.2, &grid).unwrap();
        assert_eq!(local_energy_j1(&state, -2.0).unwrap(), 0.0);
        let (j2, profile) = local_energy_j2(&sol, -0.2, 2.2, -2.0, 0.09, 128).unwrap();
        assert_eq!(j2, 0.0);
        assert!(profile.g.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn g_term_constants_refinement_stable() {
        let fits = |num_points: usize| -> [f64; 4] {
            let mut cfg = SimConfig2d::defaults(14.0, num_points, 5.0);
            cfg.dt = 0.4 * 14.0 / (num_points - 1) as f64;
            cfg.initial = InitialData2d::PowerLaw {
                amplitude: 1.0,
                eps: 0.5,
                taper_start: 4.0,
                taper_end: 7.0,
            };
            cfg.snapshots = SnapshotPolicy::EveryKSteps(4);
            let fwd = simulate_quintic(&cfg).unwrap();
            let mut bcfg = cfg.clone();
            bcfg.t_final = 3.0;
            bcfg.initial = InitialData2d::Fields {
                u0: fwd.snapshots[0].u.clone(),
                u1: fwd.snapshots[0].ut.iter().map(|v| -v).collect(),
            };
            let bwd = simulate_quintic(&bcfg).unwrap();
            let sol = CartesianSolution::from_trajectories(&fwd, Some(&bwd)).unwrap();
            let (_, profile) = local_energy_j2(&sol, -0.5, 3.0, -2.0, 0.09, 256).unwrap();
            profile.term_constants
        };
        let coarse = fits(1401);
        let fine = fits(2801);
        for (i, (a, b)) in coarse.iter().zip(fine.iter()).enumerate() {
            assert!(a.is_finite() && *a >= 0.0);
            let rel = (a - b).abs() / a.abs().max(b.abs()).max(1e-300);
            assert!(rel < 0.2, "g{} constant unstable: {a} vs {b}", i + 1);
        }
    }

    #[test]
    fn volume_identity_on_quintic_run() {
        let sol = small_solution();
        let (lhs, rhs) = l6_volume_identity(&sol, -2.0, -0.8, -0.2, 1.8, 96).unwrap();
        assert!(lhs > 0.0);
        assert_relative_eq!(lhs, rhs, max_relative = 2e-4);
    }

    #[test]
    fn exact_linear_solution_satisfies_shifted_wave() {
        // u(x, t) = t: v = e^{tau/2}(t0 + e^tau cosh s) solves the shifted
        // wave equation; build a synthetic solution table for it
        let dr = 0.02;
        let dt = 0.02;
        let nr = 600;
        let nt = 400;
        let times: Vec<f64> = (0..nt).map(|j| -4.0 + j as f64 * dt).collect();
        let rows: Vec<Vec<f64>> = times
            .iter()
            .map(|&t| (0..nr).map(|_| t).collect())
            .collect();
        let sol = CartesianSolution::from_rows(rows, times, 0.0, dr).unwrap();
        // exact solution: the residual is pure stencil error, second order
        let grid_c = RadialGrid::new(2, 2.0, 201).unwrap();
        let grid_f = RadialGrid::new(2, 2.0, 401).unwrap();
        let res_c = shifted_wave_residual(&sol, -2.0, -0.4, 0.04, &grid_c, 0.1, 1.8, false).unwrap();
        let res_f = shifted_wave_residual(&sol, -2.0, -0.4, 0.02, &grid_f, 0.1, 1.8, false).unwrap();
        assert!(res_f < 5e-3, "residual {res_f}");
        let ratio = res_c / res_f;
        assert!(ratio > 2.5 && ratio < 6.5, "ratio {ratio} ({res_c} -> {res_f})");
    }
}
