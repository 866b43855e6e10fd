//! Energy conservation of the defocusing shifted wave on H^3: the drift of
//! E = 1/2||u||_{H^{0,1}}^2 + 1/2||u_t||^2 + 1/(p+1)||u||_{p+1}^{p+1}
//! along a leapfrog trajectory, shrinking at second order.

use hypwave::solver::hyperbolic::{simulate, SimConfig};
use hypwave::solver::Zeta;

fn main() -> hypwave::Result<()> {
    println!("defocusing n = 3, p = 3 gaussian, t in [0, 10]");
    println!("{:>8} {:>14} {:>14} {:>8}", "N", "E(0)", "rel drift", "ratio");
    let mut prev: Option<f64> = None;
    for n in [1000usize, 2000, 4000] {
        let mut cfg = SimConfig::defaults(3, 3.0, Zeta::Defocusing, 20.0, n);
        cfg.t_final = 10.0;
        cfg.dt = 0.4 * 20.0 / (n - 1) as f64;
        let traj = simulate(&cfg)?;
        let e0 = traj.energy[0];
        let drift = traj
            .energy
            .iter()
            .fold(0.0f64, |m, &e| m.max((e - e0).abs()))
            / e0;
        match prev {
            Some(p) => println!("{n:>8} {e0:>14.8} {drift:>14.3e} {:>8.2}", p / drift),
            None => println!("{n:>8} {e0:>14.8} {drift:>14.3e} {:>8}", "-"),
        }
        prev = Some(drift);
    }
    Ok(())
}
