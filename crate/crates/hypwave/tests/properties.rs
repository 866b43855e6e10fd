//! Property tests for the structural invariants: quadrature linearity and
//! monotonicity, coordinate round trips, admissibility monotonicity, the
//! scaling covariance of the two-factor bound, and measure transport
//! through the cone map.

use proptest::prelude::*;

use hypwave::admissibility::{is_sigma_admissible, PairQuery};
use hypwave::cone::{cone_to_hyperbolic, hyperbolic_to_cone, ConeCoords};
use hypwave::geometry::{integrate_radial, RadialField, RadialGrid};
use hypwave::inequalities::{
    sphere_integral, two_factor_bound_check,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radial_integration_is_linear_and_monotone(
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        shift in 0.0f64..2.0,
        n in 2usize..=6,
    ) {
        let grid = RadialGrid::new(n, 8.0, 257).unwrap();
        let f = RadialField::from_fn(grid.clone(), |r| (-r).exp() * (1.3 * r).sin()).unwrap();
        let g = RadialField::from_fn(grid.clone(), |r| (-(r - 2.0) * (r - 2.0)).exp()).unwrap();
        let combo = RadialField::new(
            grid.clone(),
            f.values
                .iter()
                .zip(g.values.iter())
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
        .unwrap();
        let lhs = integrate_radial(&combo);
        let rhs = a * integrate_radial(&f) + b * integrate_radial(&g);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs().max(rhs.abs())));

        // pointwise domination implies ordered integrals
        let bigger = RadialField::new(
            grid.clone(),
            g.values.iter().map(|y| y + shift).collect(),
        )
        .unwrap();
        prop_assert!(integrate_radial(&bigger) >= integrate_radial(&g) - 1e-12);
    }

    #[test]
    fn cone_map_round_trip(tau in -1.5f64..1.0, s in 0.0f64..4.0, t0 in -5.0f64..-1.0) {
        let (x, t) = hyperbolic_to_cone(ConeCoords { tau, s }, t0);
        let back = cone_to_hyperbolic(x, t, t0).unwrap();
        prop_assert!((back.tau - tau).abs() < 1e-12);
        prop_assert!((back.s - s).abs() < 1e-12);
    }

    #[test]
    fn admissibility_monotone_in_sigma(
        inv_p in 0.01f64..0.5,
        inv_q in 0.01f64..0.49,
        n in 2usize..=6,
        sigma in 0.05f64..0.9,
        bump in 0.01f64..0.09,
    ) {
        let q1 = PairQuery { inv_p, inv_q, n, sigma, p: None, open: false };
        let q2 = PairQuery { sigma: sigma + bump, ..q1 };
        if is_sigma_admissible(&q1).unwrap() {
            prop_assert!(is_sigma_admissible(&q2).unwrap());
        }
    }

    #[test]
    fn two_factor_scaling_covariance(
        r1 in 0.2f64..1.5,
        gap in 0.1f64..2.0,
        k1 in 0.1f64..0.85,
        extra in 0.3f64..1.5,
        lam in 0.3f64..3.0,
    ) {
        let k2 = 1.0 - k1 + extra; // ensures k1 + k2 > 1
        let r2 = r1 + gap;
        let (v, b) = two_factor_bound_check(r1, r2, k1, k2).unwrap();
        let (vs, bs) = two_factor_bound_check(lam * r1, lam * r2, k1, k2).unwrap();
        let factor = lam.powf(1.0 - k1 - k2);
        prop_assert!((vs - v * factor).abs() <= 2e-6 * (vs.abs() + v.abs() * factor));
        prop_assert!((bs - b * factor).abs() <= 1e-10 * bs.abs());
        prop_assert!(v <= b * (1.0 + 1e-6));
    }

    #[test]
    fn sphere_branches_both_dominate(
        r in 0.1f64..1.5,
        gap in 0.05f64..2.0,
        kappa in prop_oneof![0.1f64..0.9, 1.1f64..2.8],
    ) {
        // wherever the two min-branch products are defined they both sit
        // above the integral
        let x = r + gap;
        let integral = sphere_integral(x, r, kappa).unwrap();
        let pi = std::f64::consts::PI;
        let chord = 2.0 * pi * r * (x - r).powf(-kappa);
        prop_assert!(integral <= chord * (1.0 + 1e-8));
    }
}

/// Measure transport: dx dt = e^{3 tau} dmu dtau, tested with a synthetic
/// table of ones (the L^6 mass of u = 1 is the region's volume).
#[test]
fn cone_volume_element_identity() {
    use hypwave::cone::{l6_volume_identity, CartesianSolution};
    let dr = 0.02;
    let dt = 0.02;
    let nr = 400;
    let nt = 400;
    let times: Vec<f64> = (0..nt).map(|j| -4.0 + j as f64 * dt).collect();
    let rows: Vec<Vec<f64>> = times.iter().map(|_| vec![1.0; nr]).collect();
    let sol = CartesianSolution::from_rows(rows, times, 0.0, dr).unwrap();
    let (lhs, rhs) = l6_volume_identity(&sol, -2.0, -0.9, -0.1, 1.5, 128).unwrap();
    assert!(lhs > 0.0);
    assert!(
        (lhs - rhs).abs() / rhs <= 1e-6,
        "volume mismatch: {lhs} vs {rhs}"
    );
}

/// Doubling the exterior threshold radius never increases the fitted
/// pointwise-decay constant (the sup runs over a smaller region).
#[test]
fn decay_constant_monotone_in_threshold() {
    use hypwave::solver::euclidean::{
        decay_check, simulate_quintic, DecayProfile, InitialData2d, SimConfig2d,
    };
    let mut cfg = SimConfig2d::defaults(18.0, 901, 5.0);
    cfg.initial = InitialData2d::PowerLaw {
        amplitude: 1.0,
        eps: 0.5,
        taper_start: 5.0,
        taper_end: 8.0,
    };
    let traj = simulate_quintic(&cfg).unwrap();
    let p1 = DecayProfile::new(1.0, 0.5, 1.0, 0.09).unwrap();
    let p2 = DecayProfile::new(1.0, 0.5, 2.0, 0.09).unwrap();
    let b1 = decay_check(&traj, &p1).unwrap().fitted_b1;
    let b2 = decay_check(&traj, &p2).unwrap().fitted_b1;
    assert!(b2 <= b1 + 1e-12, "B1 grew when the region shrank: {b1} -> {b2}");
}
