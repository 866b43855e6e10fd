//! Negative-energy focusing blow-up: the virial functional M(t) = ||u||^2
//! turns convex (M'' >= -4E > 0) and the ratio M/M' decreases with slope at
//! most (1-p)/4, forcing a finite-time singularity in both time directions.

use hypwave::solver::hyperbolic::{simulate, virial_monitor, InitialData, SimConfig};
use hypwave::solver::{Status, Zeta};

fn main() -> hypwave::Result<()> {
    let mut cfg = SimConfig::defaults(3, 3.0, Zeta::Focusing, 16.0, 1601);
    cfg.t_final = 8.0;
    cfg.dt = 0.4 * 16.0 / 1600.0;
    cfg.allow_boundary_proximity = true;
    cfg.initial = InitialData::Gaussian {
        amplitude: 5.0,
        center: 0.0,
        width: 1.0,
    };
    let forward = simulate(&cfg)?;
    let mut back = cfg.clone();
    back.initial = InitialData::Fields {
        u0: forward.snapshots[0].u.clone(),
        u1: forward.snapshots[0].ut.iter().map(|v| -v).collect(),
    };
    let backward = simulate(&back)?;

    let e0 = forward.energy[0];
    println!("focusing n = 3, p = 3, amplitude 5 gaussian: E = {e0:.4}");
    for (label, traj) in [("forward", &forward), ("backward", &backward)] {
        match traj.status {
            Status::BlowupDetected(t) => println!("  {label}: blow-up detected, last stable t = {t:.4}"),
            other => println!("  {label}: {other:?}"),
        }
    }

    let report = virial_monitor(&forward, e0, 3.0);
    println!("\nvirial monitor (forward):");
    println!("  min M''        = {:.4}  (floor -4E = {:.4})", report.min_msecond, -4.0 * e0);
    if let Some((a, b)) = report.window {
        println!("  window M,M'>0  = [{a:.4}, {b:.4}]");
    }
    if let Some(s) = report.ratio_slope {
        println!("  fitted d/dt(M/M')    = {s:.4}");
    }
    if let Some(s) = report.max_local_slope {
        println!("  max local d/dt(M/M') = {s:.4}  (ceiling (1-p)/4 = {})", report.slope_bound);
    }
    if let Some(t) = report.blowup_estimate {
        println!("  M/M' extrapolates to zero near t = {t:.4}");
    }
    println!("\n  t, M, M', M'' samples:");
    let step = report.times.len() / 8;
    for i in (0..report.times.len()).step_by(step.max(1)) {
        println!(
            "  t = {:>7.4}   M = {:>10.4}   M' = {:>10.4}   M'' = {:>10.4}",
            report.times[i], report.m[i], report.mprime[i], report.msecond[i]
        );
    }
    Ok(())
}
