//! Discrete spectral calculus for the radial Laplace-Beltrami operator on
//! H^n: eigendecomposition of the finite-volume discretization in the dmu
//! inner product, fractional Sobolev norms H^{sigma,tau}, the linear
//! shifted-wave propagator S(t), and the Plancherel density derived from the
//! Harish-Chandra c-function.
//!
//! The operator acts on the interior nodes of a `RadialGrid`: Dirichlet
//! truncation at r_max stands in for decay at infinity, while the center
//! r = 0 carries no measure (sinh^{n-1}(0) = 0) and enters only through the
//! vanishing-flux closure of the first cell. The continuum spectrum of
//! -Delta_{H^n} is [rho^2, oo); discrete eigenvalues that undershoot rho^2
//! by the O(h^2) discretization slack are clamped to rho^2 so that
//! D = (-Delta - rho^2)^{1/2} stays well-defined, and the clamp count is
//! reported.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    check_dimension, integrate_radial, measure_density, rho, HyperbolicParams, RadialField,
    RadialGrid,
};

/// Regularity pair (sigma, tau) of the norm `|| D^tau Dtilde^sigma u ||_L2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevIndex {
    pub sigma: f64,
    pub tau: f64,
}

impl SobolevIndex {
    pub fn new(sigma: f64, tau: f64) -> Result<Self> {
        if !(tau < 1.5) {
            return Err(Error::InvalidParameter(format!(
                "tau must be below 3/2, got {tau}"
            )));
        }
        if !sigma.is_finite() || !tau.is_finite() {
            return Err(Error::InvalidParameter("non-finite Sobolev index".into()));
        }
        Ok(Self { sigma, tau })
    }
}

/// Eigendecomposition of the discrete radial `-Delta_{H^n}`.
#[derive(Debug, Clone)]
pub struct SpectralOperator {
    pub grid: Arc<RadialGrid>,
    params: HyperbolicParams,
    /// Ascending eigenvalues, clamped from below at rho^2.
    pub eigenvalues: Vec<f64>,
    /// Per-mode flag: eigenvalue was below rho^2 before clamping.
    pub clamped: Vec<bool>,
    /// Interior-node values of the eigenvectors, one contiguous block per
    /// mode, orthonormal in the grid quadrature inner product.
    vectors: Vec<f64>,
    /// Interior quadrature weights (grid weights at nodes 1..=N-2).
    interior_weights: Vec<f64>,
    pub low_resolution: bool,
}

pub const RECOMMENDED_MIN_POINTS: usize = 64;

/// Builds the symmetric finite-volume discretization of
/// `-d^2/dr^2 - (n-1) coth(r) d/dr` in the dmu inner product and solves the
/// full eigenproblem.
pub fn build_spectral(grid: Arc<RadialGrid>) -> Result<SpectralOperator> {
    let n = grid.num_points;
    let m = n - 2; // interior unknowns, Dirichlet at r_max
    let h = grid.spacing();
    let dim = grid.n;
    let params = grid.params();

    // Face densities sinh^{n-1}(r_{i+1/2}) and nodal masses h sinh^{n-1}(r_i).
    // The sphere-area factor cancels between stiffness and mass.
    let face = |i: usize| measure_density((i as f64 + 0.5) * h, dim);
    let mass: Vec<f64> = (1..=m).map(|i| h * measure_density(i as f64 * h, dim)).collect();

    let mut b = DMatrix::<f64>::zeros(m, m);
    for k in 0..m {
        let i = k + 1; // grid node index
        let w_left = if i == 1 { 0.0 } else { face(i - 1) };
        let w_right = face(i);
        b[(k, k)] = (w_left + w_right) / (h * mass[k]);
        if k + 1 < m {
            b[(k, k + 1)] = -w_right / (h * (mass[k] * mass[k + 1]).sqrt());
            b[(k + 1, k)] = b[(k, k + 1)];
        }
    }

    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &c| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[c])
            .ok_or(())
            .map_err(|_| Error::Eigensolver("NaN eigenvalue".into()))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigensolver("non-finite eigenvalue".into()));
    }

    let rho2 = params.rho_sq();
    let mut eigenvalues = Vec::with_capacity(m);
    let mut clamped = Vec::with_capacity(m);
    let mut vectors = vec![0.0; m * m];
    let sphere = grid.sphere_area();
    for (k, &src) in order.iter().enumerate() {
        let mu = eig.eigenvalues[src];
        let clamp = mu < rho2;
        eigenvalues.push(if clamp { rho2 } else { mu });
        clamped.push(clamp);
        // e_k = M^{-1/2} y_k, normalized against the full dmu weights
        // (mass above omits the sphere factor, restore it here).
        let col = eig.eigenvectors.column(src);
        for j in 0..m {
            vectors[k * m + j] = col[j] / (sphere * mass[j]).sqrt();
        }
    }
    let clamp_count = clamped.iter().filter(|&&c| c).count();
    if clamp_count > 0 {
        eprintln!(
            "warning: {clamp_count} eigenvalue(s) below rho^2 = {rho2} clamped to the spectral bottom"
        );
    }

    let interior_weights = grid.weights[1..=m].to_vec();
    Ok(SpectralOperator {
        grid,
        params,
        eigenvalues,
        clamped,
        vectors,
        interior_weights,
        low_resolution: n < RECOMMENDED_MIN_POINTS,
    })
}

impl SpectralOperator {
    pub fn params(&self) -> HyperbolicParams {
        self.params
    }

    pub fn rho_sq(&self) -> f64 {
        self.params.rho_sq()
    }

    pub fn num_modes(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn clamp_count(&self) -> usize {
        self.clamped.iter().filter(|&&c| c).count()
    }

    /// Interior values of mode k.
    pub fn mode_values(&self, k: usize) -> &[f64] {
        let m = self.num_modes();
        &self.vectors[k * m..(k + 1) * m]
    }

    /// Mode k as a grid field (zero at r_max, regularity extrapolation at 0).
    pub fn mode_field(&self, k: usize) -> RadialField {
        let m = self.num_modes();
        let mut values = vec![0.0; self.grid.num_points];
        values[1..=m].copy_from_slice(self.mode_values(k));
        values[0] = (4.0 * values[1] - values[2]) / 3.0;
        RadialField {
            grid: self.grid.clone(),
            values,
        }
    }

    fn check_same_grid(&self, f: &RadialField) -> Result<()> {
        if !self.grid.same_grid(&f.grid) {
            return Err(Error::InvalidGrid(
                "field and spectral operator live on different grids".into(),
            ));
        }
        Ok(())
    }

    /// Coefficients <f, e_k> in the dmu quadrature inner product.
    pub fn project(&self, f: &RadialField) -> Result<Vec<f64>> {
        self.check_same_grid(f)?;
        let m = self.num_modes();
        let weighted: Vec<f64> = (0..m)
            .map(|j| self.interior_weights[j] * f.values[j + 1])
            .collect();
        Ok((0..m)
            .map(|k| {
                let mode = self.mode_values(k);
                mode.iter().zip(weighted.iter()).map(|(e, w)| e * w).sum()
            })
            .collect())
    }

    /// Synthesizes grid values from coefficients; the center value follows
    /// the radial regularity condition u'(0) = 0, the boundary is Dirichlet.
    pub fn reconstruct(&self, coeffs: &[f64]) -> RadialField {
        let m = self.num_modes();
        let mut values = vec![0.0; self.grid.num_points];
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let mode = self.mode_values(k);
            for j in 0..m {
                values[j + 1] += c * mode[j];
            }
        }
        values[0] = (4.0 * values[1] - values[2]) / 3.0;
        RadialField {
            grid: self.grid.clone(),
            values,
        }
    }
}

/// `|| D^tau Dtilde^sigma f ||_{L^2}` evaluated mode-wise:
/// sqrt( sum_k (mu_k - rho^2)^tau (mu_k + 1)^sigma <f, e_k>^2 ).
pub fn sobolev_norm(f: &RadialField, idx: SobolevIndex, op: &SpectralOperator) -> Result<f64> {
    let coeffs = op.project(f)?;
    sobolev_norm_of_coeffs(&coeffs, idx, op)
}

pub fn sobolev_norm_of_coeffs(
    coeffs: &[f64],
    idx: SobolevIndex,
    op: &SpectralOperator,
) -> Result<f64> {
    let rho2 = op.rho_sq();
    let total_sq: f64 = coeffs.iter().map(|c| c * c).sum();
    let floor = 1e-14 * total_sq.max(1e-300);
    let mut acc = 0.0;
    for (k, &c) in coeffs.iter().enumerate() {
        let mu = op.eigenvalues[k];
        let shifted = mu - rho2;
        let d_factor = if shifted > 0.0 {
            shifted.powf(idx.tau)
        } else if idx.tau == 0.0 {
            1.0
        } else if idx.tau > 0.0 {
            0.0
        } else if c * c > floor {
            return Err(Error::SpectralBottom { tau: idx.tau });
        } else {
            continue;
        };
        acc += d_factor * (mu + 1.0).powf(idx.sigma) * c * c;
    }
    Ok(acc.sqrt())
}

/// `( integral |f|^q dmu )^{1/q}`.
pub fn lq_norm(f: &RadialField, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::InvalidParameter(format!("Lq norm needs q >= 1, got {q}")));
    }
    let integrand = RadialField {
        grid: f.grid.clone(),
        values: f.values.iter().map(|v| v.abs().powf(q)).collect(),
    };
    Ok(integrate_radial(&integrand).powf(1.0 / q))
}

/// State (u, du/dt) at an instant.
#[derive(Debug, Clone)]
pub struct StatePair {
    pub u: RadialField,
    pub ut: RadialField,
    pub time: f64,
}

impl StatePair {
    pub fn new(u: RadialField, ut: RadialField, time: f64) -> Result<Self> {
        if !u.grid.same_grid(&ut.grid) {
            return Err(Error::InvalidGrid("u and ut on different grids".into()));
        }
        Ok(Self { u, ut, time })
    }
}

/// Applies the linear shifted-wave group S(t) mode-wise:
/// `(cos(t lambda) u0 + sin(t lambda)/lambda u1,
///   -lambda sin(t lambda) u0 + cos(t lambda) u1)` with
/// `lambda_k = sqrt(mu_k - rho^2)`; `sin(t lambda)/lambda` is continued by t
/// at lambda = 0.
pub fn linear_propagate(state: &StatePair, t: f64, op: &SpectralOperator) -> Result<StatePair> {
    let c_u = op.project(&state.u)?;
    let c_ut = op.project(&state.ut)?;
    let rho2 = op.rho_sq();
    let m = op.num_modes();
    let mut new_u = vec![0.0; m];
    let mut new_ut = vec![0.0; m];
    for k in 0..m {
        let lambda = (op.eigenvalues[k] - rho2).max(0.0).sqrt();
        let (s, c) = (t * lambda).sin_cos();
        let sinc_t = if lambda == 0.0 { t } else { s / lambda };
        new_u[k] = c * c_u[k] + sinc_t * c_ut[k];
        new_ut[k] = -lambda * s * c_u[k] + c * c_ut[k];
    }
    Ok(StatePair {
        u: op.reconstruct(&new_u),
        ut: op.reconstruct(&new_ut),
        time: state.time + t,
    })
}

// ---------------------------------------------------------------------------
// Harish-Chandra density
// ---------------------------------------------------------------------------

/// ln Gamma(z) for complex z (Lanczos approximation, reflection for
/// Re z < 1/2).
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    const G: f64 = 7.0;
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if z.re < 0.5 {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        let pi = std::f64::consts::PI;
        return Complex64::new(pi, 0.0).ln()
            - (Complex64::new(pi, 0.0) * z).sin().ln()
            - ln_gamma_complex(Complex64::new(1.0, 0.0) - z);
    }
    let zm = z - Complex64::new(1.0, 0.0);
    let mut x = Complex64::new(COEFFS[0], 0.0);
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        x += Complex64::new(c, 0.0) / (zm + Complex64::new(i as f64, 0.0));
    }
    let t = zm + Complex64::new(G + 0.5, 0.0);
    0.5 * (2.0 * std::f64::consts::PI).ln()
        + (zm + Complex64::new(0.5, 0.0)) * t.ln()
        - t
        + x.ln()
}

/// Plancherel density `|Gamma(i lambda + rho)|^2 / |Gamma(i lambda)|^2`,
/// i.e. |c(lambda)|^{-2} up to the dimensional constant left free by the
/// normalization of the c-function. Vanishes at lambda = 0 (double zero).
pub fn harish_chandra_density(lambda: f64, n: usize) -> Result<f64> {
    check_dimension(n)?;
    let lam = lambda.abs();
    if lam == 0.0 {
        return Ok(0.0);
    }
    let rho = rho(n)?;
    let z_num = Complex64::new(rho, lam);
    let z_den = Complex64::new(0.0, lam);
    let log_ratio = 2.0 * (ln_gamma_complex(z_num).re - ln_gamma_complex(z_den).re);
    Ok(log_ratio.exp())
}

/// Same density from the Gamma recurrences and
/// |Gamma(i y)|^2 = pi / (y sinh(pi y)), |Gamma(1/2 + i y)|^2 = pi / cosh(pi y);
/// closed for every supported dimension, used to cross-check the Lanczos route.
pub fn harish_chandra_density_closed_form(lambda: f64, n: usize) -> Result<f64> {
    check_dimension(n)?;
    let y = lambda.abs();
    if y == 0.0 {
        return Ok(0.0);
    }
    let half_integer = y * (std::f64::consts::PI * y).tanh();
    Ok(match n {
        2 => half_integer,
        3 => y * y,
        4 => (0.25 + y * y) * half_integer,
        5 => y * y * (1.0 + y * y),
        6 => (2.25 + y * y) * (0.25 + y * y) * half_integer,
        _ => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn op_n3() -> SpectralOperator {
        let grid = RadialGrid::new(3, 20.0, 512).unwrap();
        build_spectral(grid).unwrap()
    }

    #[test]
    fn n3_eigenvalues_match_sinh_substitution_oracle() {
        // v = sinh(r) u turns the radial operator into -d^2/dr^2 + 1 on
        // (0, r_max) with Dirichlet ends: eigenvalues 1 + (k pi / r_max)^2.
        let op = op_n3();
        let l = 20.0;
        let h = op.grid.spacing();
        let bottom = op.eigenvalues[0];
        assert!((bottom - (1.0 + (std::f64::consts::PI / l).powi(2))).abs() < 10.0 * h * h);
        for k in 1..=10 {
            let exact = 1.0 + (k as f64 * std::f64::consts::PI / l).powi(2);
            let got = op.eigenvalues[k - 1];
            assert!(
                ((got - exact) / exact).abs() < 1e-3,
                "k={k}: got {got}, exact {exact}"
            );
        }
        assert_eq!(op.clamp_count(), 0);
        assert!(!op.low_resolution);
    }

    #[test]
    fn low_resolution_flagged() {
        let grid = RadialGrid::new(3, 10.0, 16).unwrap();
        let op = build_spectral(grid).unwrap();
        assert!(op.low_resolution);
    }

    #[test]
    fn eigenvector_gram_matrix_is_identity() {
        let op = op_n3();
        let m = op.num_modes();
        let probe = [0usize, 1, 2, 7, m / 2, m - 1];
        for &a in &probe {
            for &b in &probe {
                let fa = op.mode_field(a);
                let dot: f64 = op
                    .project(&fa)
                    .unwrap()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| if k == b { *c } else { 0.0 })
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-8, "gram({a},{b}) = {dot}");
            }
        }
    }

    #[test]
    fn parseval_on_interior_supported_field() {
        let op = op_n3();
        let f = RadialField::from_fn(op.grid.clone(), |r| (-(r - 4.0) * (r - 4.0)).exp()).unwrap();
        let coeffs = op.project(&f).unwrap();
        let sum_sq: f64 = coeffs.iter().map(|c| c * c).sum();
        let l2 = lq_norm(&f, 2.0).unwrap();
        assert_relative_eq!(sum_sq, l2 * l2, max_relative = 1e-8);
    }

    #[test]
    fn sobolev_norm_identity_and_eigenmode() {
        let op = op_n3();
        let idx0 = SobolevIndex::new(0.0, 0.0).unwrap();
        let f = RadialField::from_fn(op.grid.clone(), |r| (-(r - 5.0) * (r - 5.0)).exp()).unwrap();
        let ns = sobolev_norm(&f, idx0, &op).unwrap();
        let nl = lq_norm(&f, 2.0).unwrap();
        assert_relative_eq!(ns, nl, max_relative = 1e-12);

        let k = 3;
        let e = op.mode_field(k);
        let idx = SobolevIndex::new(0.7, 0.4).unwrap();
        let mu = op.eigenvalues[k];
        let expect = (mu - op.rho_sq()).powf(0.2) * (mu + 1.0).powf(0.35);
        assert_relative_eq!(sobolev_norm(&e, idx, &op).unwrap(), expect, max_relative = 1e-10);

        let zero = RadialField::zero(op.grid.clone());
        assert_eq!(sobolev_norm(&zero, idx, &op).unwrap(), 0.0);
    }

    #[test]
    fn sobolev_monotone_in_sigma() {
        let op = op_n3();
        let f = RadialField::from_fn(op.grid.clone(), |r| r * (-r).exp()).unwrap();
        let lo = sobolev_norm(&f, SobolevIndex::new(0.3, 0.5).unwrap(), &op).unwrap();
        let hi = sobolev_norm(&f, SobolevIndex::new(0.8, 0.5).unwrap(), &op).unwrap();
        assert!(lo <= hi);
    }

    #[test]
    fn sobolev_index_validation() {
        assert!(SobolevIndex::new(0.5, 1.6).is_err());
        assert!(SobolevIndex::new(0.5, -0.5).is_ok());
    }

    #[test]
    fn spectral_bottom_error_on_clamped_mode() {
        let mut op = op_n3();
        // force a clamped bottom mode
        op.eigenvalues[0] = op.rho_sq();
        op.clamped[0] = true;
        let e0 = op.mode_field(0);
        let idx = SobolevIndex::new(0.0, -0.5).unwrap();
        match sobolev_norm(&e0, idx, &op) {
            Err(Error::SpectralBottom { .. }) => {}
            other => panic!("expected spectral-bottom error, got {other:?}"),
        }
        // positive tau annihilates the clamped mode instead
        let idx_pos = SobolevIndex::new(0.0, 0.5).unwrap();
        assert!(sobolev_norm(&e0, idx_pos, &op).unwrap() < 1e-12);
    }

    #[test]
    fn propagator_identity_and_eigenmode_rotation() {
        let op = op_n3();
        let u = op.mode_field(2);
        let ut = RadialField::zero(op.grid.clone());
        let state = StatePair::new(u, ut, 0.0).unwrap();

        let same = linear_propagate(&state, 0.0, &op).unwrap();
        for i in 1..op.grid.num_points - 1 {
            assert!((same.u.values[i] - state.u.values[i]).abs() < 1e-12);
        }

        let t = 1.7;
        let moved = linear_propagate(&state, t, &op).unwrap();
        let lambda = (op.eigenvalues[2] - op.rho_sq()).sqrt();
        for i in 1..op.grid.num_points - 1 {
            let expect = (t * lambda).cos() * state.u.values[i];
            assert!((moved.u.values[i] - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn propagator_group_law_and_energy_conservation() {
        let op = op_n3();
        let u = RadialField::from_fn(op.grid.clone(), |r| (-(r - 6.0) * (r - 6.0) / 2.0).exp()).unwrap();
        let ut =
            RadialField::from_fn(op.grid.clone(), |r| 0.3 * (-(r - 5.0) * (r - 5.0)).exp()).unwrap();
        let state = StatePair::new(u, ut, 0.0).unwrap();

        let ab = linear_propagate(&linear_propagate(&state, 1.3, &op).unwrap(), 2.1, &op).unwrap();
        let once = linear_propagate(&state, 3.4, &op).unwrap();
        let scale_u = once.u.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let scale_ut = once.ut.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..op.grid.num_points {
            assert!((ab.u.values[i] - once.u.values[i]).abs() < 1e-10 * scale_u);
            assert!((ab.ut.values[i] - once.ut.values[i]).abs() < 1e-10 * scale_ut);
        }

        let idx_h01 = SobolevIndex::new(0.0, 1.0).unwrap();
        let idx_l2 = SobolevIndex::new(0.0, 0.0).unwrap();
        let e0 = sobolev_norm(&state.u, idx_h01, &op).unwrap().powi(2)
            + sobolev_norm(&state.ut, idx_l2, &op).unwrap().powi(2);
        for &t in &[1.0, 4.0, 10.0] {
            let s = linear_propagate(&state, t, &op).unwrap();
            let e = sobolev_norm(&s.u, idx_h01, &op).unwrap().powi(2)
                + sobolev_norm(&s.ut, idx_l2, &op).unwrap().powi(2);
            assert_relative_eq!(e, e0, max_relative = 1e-12);
        }
    }

    #[test]
    fn lq_norm_cases() {
        let grid = RadialGrid::new(2, 1.0, 2001).unwrap();
        let f = RadialField::from_fn(grid.clone(), |_| 1.0).unwrap();
        let expected = 2.0 * std::f64::consts::PI * (1f64.cosh() - 1.0);
        assert_relative_eq!(lq_norm(&f, 1.0).unwrap(), expected, max_relative = 1e-6);
        assert_eq!(lq_norm(&RadialField::zero(grid), 3.0).unwrap(), 0.0);
        assert!(lq_norm(&f, 0.5).is_err());
    }

    #[test]
    fn harish_chandra_matches_closed_forms() {
        for n in 2..=6 {
            for &lam in &[1e-3, 0.1, 0.5, 1.0, 3.0, 10.0, 50.0] {
                let lanczos = harish_chandra_density(lam, n).unwrap();
                let closed = harish_chandra_density_closed_form(lam, n).unwrap();
                assert_relative_eq!(lanczos, closed, max_relative = 1e-9);
            }
            assert_eq!(harish_chandra_density(0.0, n).unwrap(), 0.0);
        }
        // n = 3 is exactly lambda^2 by the recurrence Gamma(1 + iy) = iy Gamma(iy)
        assert_relative_eq!(harish_chandra_density(2.0, 3).unwrap(), 4.0, max_relative = 1e-11);
    }

    #[test]
    fn harish_chandra_growth_envelope() {
        // density / (lambda^2 (1+lambda)^{n-3}) stays bounded above and away
        // from zero on [1, 50]
        for n in 2..=6 {
            let mut sup = 0.0f64;
            let mut inf = f64::INFINITY;
            for i in 1..=500 {
                let lam = 0.1 * i as f64;
                let envelope = lam * lam * (1.0 + lam).powi(n as i32 - 3);
                let ratio = harish_chandra_density(lam, n).unwrap() / envelope;
                sup = sup.max(ratio);
                if lam >= 1.0 {
                    inf = inf.min(ratio);
                }
            }
            assert!(sup.is_finite() && sup > 0.0);
            assert!(inf > 1e-3, "n={n} inf={inf}");
        }
        // small-lambda limit for n = 2: density / lambda^2 bounded
        let small = harish_chandra_density(1e-4, 2).unwrap() / 1e-8;
        assert!(small.is_finite() && small > 0.0 && small < 10.0);
    }
}
