//! Radial geometry of the hyperbolic space H^n: the measure
//! `dmu = |S^{n-1}| sinh^{n-1}(r) dr` on geodesic polar coordinates, radial
//! quadrature, and the weight function `a(r)` solving `Delta a = 1` whose
//! gradient drives the space-time estimates. Only `a'` and `a''` are ever
//! needed, so the additive constant of `a` is never fixed.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad;

pub const MIN_DIMENSION: usize = 2;
pub const MAX_DIMENSION: usize = 6;

/// Half-dimension constant rho = (n-1)/2.
pub fn rho(n: usize) -> Result<f64> {
    check_dimension(n)?;
    Ok((n as f64 - 1.0) / 2.0)
}

pub fn check_dimension(n: usize) -> Result<()> {
    if (MIN_DIMENSION..=MAX_DIMENSION).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(n))
    }
}

/// Dimension together with the spectral shift rho^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicParams {
    pub n: usize,
    pub rho: f64,
}

impl HyperbolicParams {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self { n, rho: rho(n)? })
    }

    pub fn rho_sq(&self) -> f64 {
        self.rho * self.rho
    }
}

/// Surface measure of the unit sphere S^{n-1} in R^n.
pub fn sphere_area(n: usize) -> Result<f64> {
    check_dimension(n)?;
    Ok(match n {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        5 => 8.0 * PI * PI / 3.0,
        6 => PI * PI * PI,
        _ => unreachable!(),
    })
}

/// sinh^{n-1}(r), the radial density of dmu up to the sphere factor.
pub fn measure_density(r: f64, n: usize) -> f64 {
    r.sinh().powi(n as i32 - 1)
}

/// Closed-form antiderivative: integral of sinh^{n-1}(s) ds over [0, r].
///
/// Elementary for n = 2..6. Below r = 1/2 the closed forms lose digits to
/// cancellation (every term is O(1), the value is O(r^n)), so small radii
/// are integrated directly.
pub fn sinh_power_integral(r: f64, n: usize) -> Result<f64> {
    check_dimension(n)?;
    if r < 0.0 {
        return Err(Error::InvalidParameter(format!("negative radius {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    if r < 0.5 {
        return quad::adaptive_simpson(|s| measure_density(s, n), 0.0, r, 1e-13);
    }
    let (sh, ch) = (r.sinh(), r.cosh());
    Ok(match n {
        2 => ch - 1.0,
        3 => (sh * ch - r) / 2.0,
        4 => ch * ch * ch / 3.0 - ch + 2.0 / 3.0,
        5 => sh * sh * sh * ch / 4.0 - 3.0 / 8.0 * (sh * ch - r),
        6 => ch.powi(5) / 5.0 - 2.0 * ch.powi(3) / 3.0 + ch - 8.0 / 15.0,
        _ => unreachable!(),
    })
}

/// a'(r) = sinh^{1-n}(r) * integral_0^r sinh^{n-1}(s) ds, the gradient of the
/// radial solution of Delta a = 1. Satisfies a'(0) = 0 and
/// 0 <= a'(r) <= 1/(2 rho) = 1/(n-1).
pub fn morawetz_weight_grad(r: f64, n: usize) -> Result<f64> {
    check_dimension(n)?;
    if r < 0.0 {
        return Err(Error::InvalidParameter(format!("negative radius {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    if r < 1e-4 {
        // a'(r) = r/n - (n-1) r^3 / (3 n (n+2)) + O(r^5)
        let nf = n as f64;
        return Ok(r / nf - (nf - 1.0) * r * r * r / (3.0 * nf * (nf + 2.0)));
    }
    Ok(sinh_power_integral(r, n)? / measure_density(r, n))
}

/// Same quantity by direct quadrature; kept as an independent cross-check of
/// the closed forms.
pub fn morawetz_weight_grad_quadrature(r: f64, n: usize) -> Result<f64> {
    check_dimension(n)?;
    if r < 0.0 {
        return Err(Error::InvalidParameter(format!("negative radius {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let integral = quad::adaptive_simpson(|s| measure_density(s, n), 0.0, r, 1e-12)?;
    Ok(integral / measure_density(r, n))
}

/// a''(r) from the defining ODE a'' + (n-1) coth(r) a' = 1.
pub fn morawetz_weight_second(r: f64, n: usize) -> Result<f64> {
    check_dimension(n)?;
    if r < 0.0 {
        return Err(Error::InvalidParameter(format!("negative radius {r}")));
    }
    let nf = n as f64;
    if r < 1e-4 {
        // a''(r) = 1/n - (n-1) r^2 / (n (n+2)) + O(r^4)
        return Ok(1.0 / nf - (nf - 1.0) * r * r / (nf * (nf + 2.0)));
    }
    Ok(1.0 - (nf - 1.0) / r.tanh() * morawetz_weight_grad(r, n)?)
}

/// Uniform radial grid on [0, r_max] with quadrature weights realizing
/// integral f dmu = |S^{n-1}| integral f(r) sinh^{n-1}(r) dr (trapezoid).
/// The weight at r = 0 vanishes since sinh^{n-1}(0) = 0.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub n: usize,
    pub r_max: f64,
    pub num_points: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    h: f64,
    sphere: f64,
}

impl RadialGrid {
    pub fn new(n: usize, r_max: f64, num_points: usize) -> Result<Arc<Self>> {
        check_dimension(n)?;
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::InvalidGrid(format!("r_max must be positive, got {r_max}")));
        }
        if num_points < 16 {
            return Err(Error::InvalidGrid(format!(
                "num_points must be at least 16, got {num_points}"
            )));
        }
        let h = r_max / (num_points - 1) as f64;
        let sphere = sphere_area(n)?;
        let points: Vec<f64> = (0..num_points)
            .map(|i| if i == num_points - 1 { r_max } else { i as f64 * h })
            .collect();
        let weights: Vec<f64> = points
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let c = if i == 0 || i == num_points - 1 { 0.5 } else { 1.0 };
                sphere * h * c * measure_density(r, n)
            })
            .collect();
        Ok(Arc::new(Self {
            n,
            r_max,
            num_points,
            points,
            weights,
            h,
            sphere,
        }))
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn sphere_area(&self) -> f64 {
        self.sphere
    }

    pub fn params(&self) -> HyperbolicParams {
        HyperbolicParams::new(self.n).expect("grid dimension already validated")
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.n == other.n && self.num_points == other.num_points && self.r_max == other.r_max
    }
}

/// Sampled radial function on a grid. Values are checked finite on entry.
#[derive(Debug, Clone)]
pub struct RadialField {
    pub grid: Arc<RadialGrid>,
    pub values: Vec<f64>,
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.num_points {
            return Err(Error::InvalidGrid(format!(
                "field has {} values but grid has {} points",
                values.len(),
                grid.num_points
            )));
        }
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "field value at index {idx} is {}",
                values[idx]
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zero(grid: Arc<RadialGrid>) -> Self {
        let values = vec![0.0; grid.num_points];
        Self { grid, values }
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: Arc<RadialGrid>, f: F) -> Result<Self> {
        let values = grid.points.iter().map(|&r| f(r)).collect();
        Self::new(grid, values)
    }
}

/// Quadrature realization of integral f dmu over H^n.
pub fn integrate_radial(f: &RadialField) -> f64 {
    f.values
        .iter()
        .zip(f.grid.weights.iter())
        .map(|(v, w)| v * w)
        .sum()
}

/// Pointwise convexity audit of the weight a on a grid: the radial Hessian
/// component a''(r) and the angular component a'(r) coth(r) are checked
/// nonnegative (up to `tol`) at every interior point, along with the
/// residual of the defining ODE.
#[derive(Debug, Clone)]
pub struct HessianReport {
    pub n: usize,
    pub points_checked: usize,
    pub max_radial_violation: f64,
    pub max_angular_violation: f64,
    pub max_ode_residual: f64,
    pub tol: f64,
}

impl HessianReport {
    pub fn passed(&self) -> bool {
        self.max_radial_violation <= self.tol && self.max_angular_violation <= self.tol
    }
}

pub const HESSIAN_DEFAULT_TOL: f64 = 1e-10;

pub fn morawetz_weight_hessian_check(grid: &RadialGrid, tol: f64) -> Result<HessianReport> {
    if grid.num_points < 3 {
        return Err(Error::InsufficientData(
            "hessian check needs at least 3 grid points".into(),
        ));
    }
    let n = grid.n;
    let nf = n as f64;
    let mut max_radial = 0.0f64;
    let mut max_angular = 0.0f64;
    let mut max_ode = 0.0f64;
    let mut checked = 0;
    for i in 1..grid.num_points - 1 {
        let r = grid.points[i];
        let ap = morawetz_weight_grad(r, n)?;
        let app = morawetz_weight_second(r, n)?;
        let angular = ap / r.tanh();
        max_radial = max_radial.max(-app);
        max_angular = max_angular.max(-angular);
        max_ode = max_ode.max((app + (nf - 1.0) / r.tanh() * ap - 1.0).abs());
        checked += 1;
    }
    Ok(HessianReport {
        n,
        points_checked: checked,
        max_radial_violation: max_radial,
        max_angular_violation: max_angular,
        max_ode_residual: max_ode,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rho_values() {
        assert_eq!(rho(2).unwrap(), 0.5);
        assert_eq!(rho(3).unwrap(), 1.0);
        assert_eq!(rho(6).unwrap(), 2.5);
        assert!(rho(1).is_err());
        assert!(rho(7).is_err());
    }

    #[test]
    fn grid_spacing_and_weights() {
        let grid = RadialGrid::new(3, 10.0, 101).unwrap();
        assert_relative_eq!(grid.spacing(), 0.1, max_relative = 1e-15);
        assert_eq!(grid.weights[0], 0.0);
        assert!(grid.weights.iter().all(|&w| w >= 0.0));
        assert!(RadialGrid::new(3, 10.0, 1).is_err());
        assert!(RadialGrid::new(3, 10.0, 15).is_err());
    }

    #[test]
    fn integrate_constant_n2() {
        // 2 pi (cosh 1 - 1) on [0, 1]
        let grid = RadialGrid::new(2, 1.0, 4001).unwrap();
        let f = RadialField::from_fn(grid, |_| 1.0).unwrap();
        let expected = 2.0 * PI * (1f64.cosh() - 1.0);
        assert_relative_eq!(integrate_radial(&f), expected, max_relative = 1e-7);
        assert_relative_eq!(expected, 3.4122763, max_relative = 1e-6);
    }

    #[test]
    fn integrate_constant_n3() {
        // 4 pi (sinh 1 cosh 1 - 1) / 2 on [0, 1]
        let grid = RadialGrid::new(3, 1.0, 4001).unwrap();
        let f = RadialField::from_fn(grid, |_| 1.0).unwrap();
        let expected = 4.0 * PI * (1f64.sinh() * 1f64.cosh() - 1.0) / 2.0;
        assert_relative_eq!(integrate_radial(&f), expected, max_relative = 1e-7);
        assert_relative_eq!(expected, 5.1107, max_relative = 1e-4);
    }

    #[test]
    fn integrate_zero() {
        let grid = RadialGrid::new(4, 5.0, 64).unwrap();
        let f = RadialField::zero(grid);
        assert_eq!(integrate_radial(&f), 0.0);
    }

    #[test]
    fn field_rejects_nan() {
        let grid = RadialGrid::new(3, 5.0, 64).unwrap();
        let mut vals = vec![0.0; 64];
        vals[10] = f64::NAN;
        assert!(RadialField::new(grid, vals).is_err());
    }

    #[test]
    fn weight_grad_basics() {
        for n in 2..=6 {
            assert_eq!(morawetz_weight_grad(0.0, n).unwrap(), 0.0);
        }
        // closed form for n = 3 at r = 1
        let expected = (1f64.sinh() * 1f64.cosh() - 1.0) / (2.0 * 1f64.sinh().powi(2));
        assert_relative_eq!(morawetz_weight_grad(1.0, 3).unwrap(), expected, max_relative = 1e-13);
        assert_relative_eq!(expected, 0.294487, max_relative = 1e-5);
        // asymptotic bound 1/(2 rho) attained in the limit
        let far = morawetz_weight_grad(50.0, 3).unwrap();
        assert!(far <= 0.5 + 1e-15);
        assert!((far - 0.5).abs() < 1e-6);
        assert!(morawetz_weight_grad(-1.0, 3).is_err());
    }

    #[test]
    fn weight_grad_bounded_for_all_dimensions() {
        for n in 2..=6 {
            let bound = 1.0 / (n as f64 - 1.0);
            for &r in &[1e-6, 1e-3, 0.1, 0.49, 0.51, 1.0, 5.0, 30.0] {
                let ap = morawetz_weight_grad(r, n).unwrap();
                assert!(ap > 0.0 && ap <= bound + 1e-14, "n={n} r={r} a'={ap}");
            }
        }
    }

    #[test]
    fn weight_grad_matches_quadrature_route() {
        for n in 2..=6 {
            for &r in &[0.05, 0.3, 0.7, 2.0, 8.0] {
                let closed = morawetz_weight_grad(r, n).unwrap();
                let quadr = morawetz_weight_grad_quadrature(r, n).unwrap();
                assert_relative_eq!(closed, quadr, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn hessian_check_clean_on_fine_grid() {
        let grid = RadialGrid::new(3, 20.0, 2000).unwrap();
        let report = morawetz_weight_hessian_check(&grid, HESSIAN_DEFAULT_TOL).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.max_ode_residual < 1e-8);
    }

    #[test]
    fn hessian_small_r_limit() {
        // a'(r) ~ r/n near zero so a''(0) = 1/n > 0
        let app = morawetz_weight_second(1e-6, 2).unwrap();
        assert_relative_eq!(app, 0.5, max_relative = 1e-6);
    }

    #[test]
    fn ode_residual_with_independent_derivative() {
        // differentiate a' numerically and check the defining ODE
        for n in 2..=6 {
            let nf = n as f64;
            for &r in &[0.2, 1.0, 3.0, 10.0] {
                let dr = 1e-5;
                let plus = morawetz_weight_grad(r + dr, n).unwrap();
                let minus = morawetz_weight_grad(r - dr, n).unwrap();
                let app = (plus - minus) / (2.0 * dr);
                let ap = morawetz_weight_grad(r, n).unwrap();
                let residual = app + (nf - 1.0) / r.tanh() * ap - 1.0;
                assert!(residual.abs() < 1e-8, "n={n} r={r} residual={residual}");
            }
        }
    }
}
