//! The light-cone correspondence: coordinates, the conjugation identity,
//! push-forward of a quintic planar solution onto hyperboloid slices where
//! it solves the shifted wave equation on H^2, the local energies J1/J2,
//! and the L^6 volume identity.

use hypwave::cone::{
    cone_to_hyperbolic, conjugation_residual, l6_volume_identity, local_energy_j1,
    local_energy_j2, pushforward, ring_s0_range, shifted_wave_residual, CartesianSolution,
    ConeCoords,
};
use hypwave::geometry::RadialGrid;
use hypwave::solver::euclidean::{simulate_quintic, InitialData2d, SimConfig2d};
use hypwave::solver::SnapshotPolicy;

fn solution(num_points: usize) -> hypwave::Result<CartesianSolution> {
    let mut cfg = SimConfig2d::defaults(14.0, num_points, 5.0);
    cfg.dt = 0.4 * 14.0 / (num_points - 1) as f64;
    cfg.initial = InitialData2d::PowerLaw {
        amplitude: 1.0,
        eps: 0.5,
        taper_start: 4.0,
        taper_end: 7.0,
    };
    cfg.snapshots = SnapshotPolicy::EveryKSteps(2);
    let fwd = simulate_quintic(&cfg)?;
    let mut bcfg = cfg.clone();
    bcfg.t_final = 3.0;
    bcfg.initial = InitialData2d::Fields {
        u0: fwd.snapshots[0].u.clone(),
        u1: fwd.snapshots[0].ut.iter().map(|v| -v).collect(),
    };
    let bwd = simulate_quintic(&bcfg)?;
    CartesianSolution::from_trajectories(&fwd, Some(&bwd))
}

fn main() -> hypwave::Result<()> {
    let t0 = -2.0;
    let c = cone_to_hyperbolic(0.6, -0.4, t0)?;
    println!("cone point (|x| = 0.6, t = -0.4), vertex t0 = -2:");
    println!("  maps to (tau, s) = ({:.6}, {:.6})", c.tau, c.s);

    // conjugation identity on a closed-form test function
    let samples: Vec<ConeCoords> = (1..=5)
        .map(|i| ConeCoords {
            tau: -0.4,
            s: 0.3 * i as f64,
        })
        .collect();
    let g = |r: f64, t: f64| (-(r * r) - (t + 1.5) * (t + 1.5)).exp();
    println!("\nconjugation identity residual on a gaussian test function:");
    for &h in &[2e-2, 1e-2, 5e-3] {
        println!("  fd step {h:.0e}: {:.3e}", conjugation_residual(g, t0, &samples, h)?);
    }

    let sol_c = solution(1401)?;
    let sol_f = solution(2801)?;

    // pushed-forward solution satisfies the shifted wave equation
    let grid_c = RadialGrid::new(2, 2.4, 61)?;
    let grid_f = RadialGrid::new(2, 2.4, 121)?;
    let res_c = shifted_wave_residual(&sol_c, t0, -0.5, 0.04, &grid_c, 0.15, 2.2, true)?;
    let res_f = shifted_wave_residual(&sol_f, t0, -0.5, 0.02, &grid_f, 0.15, 2.2, true)?;
    println!("\nshifted-wave residual of the pushed-forward quintic solution:");
    println!("  coarse {res_c:.3e} -> fine {res_f:.3e} (ratio {:.2})", res_c / res_f);

    // local energies
    let h2 = RadialGrid::new(2, 2.4, 481)?;
    println!("\ncenter-disk energy J1(tau):");
    for k in 0..=4 {
        let tau = -1.0 + 0.25 * k as f64;
        let state = pushforward(&sol_f, t0, tau, &h2)?;
        println!("  tau = {tau:>5.2}: J1 = {:.6e}", local_energy_j1(&state, t0)?);
    }
    let (s_lo, s_hi) = ring_s0_range(-0.5, t0, 4.7, 13.0)?;
    println!("\nring energy J2(-0.5, s0) saturates in s0:");
    for k in 0..=4 {
        let s0 = s_lo + (s_hi - s_lo) * k as f64 / 4.0;
        let (j2, _) = local_energy_j2(&sol_f, -0.5, s0, t0, 0.09, 256)?;
        println!("  s0 = {s0:>5.2}: J2 = {j2:.6e}");
    }

    let (lhs, rhs) = l6_volume_identity(&sol_f, t0, -0.8, -0.2, 2.0, 128)?;
    println!("\nL^6 volume identity over a slab:");
    println!("  hyperboloid side {lhs:.8e}");
    println!("  cartesian side   {rhs:.8e}");
    println!("  relative gap     {:.2e}", (lhs - rhs).abs() / rhs);
    Ok(())
}
