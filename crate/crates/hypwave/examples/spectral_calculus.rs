//! Spectral calculus on the radial Laplace-Beltrami operator: discrete
//! eigenvalues against the sinh-substitution oracle (n = 3), fractional
//! Sobolev norms, and the Plancherel density from the c-function.

use hypwave::geometry::{RadialField, RadialGrid};
use hypwave::operators::{
    build_spectral, harish_chandra_density, harish_chandra_density_closed_form, linear_propagate,
    lq_norm, sobolev_norm, SobolevIndex, StatePair,
};

fn main() -> hypwave::Result<()> {
    let grid = RadialGrid::new(3, 20.0, 512)?;
    let op = build_spectral(grid.clone())?;

    println!("discrete spectrum of -Delta_H3 (bottom rho^2 = 1):");
    println!("{:>4} {:>14} {:>14} {:>10}", "k", "mu_k", "1+(k pi/L)^2", "rel err");
    for k in 1..=8 {
        let exact = 1.0 + (k as f64 * std::f64::consts::PI / 20.0).powi(2);
        let got = op.eigenvalues[k - 1];
        println!(
            "{k:>4} {got:>14.8} {exact:>14.8} {:>10.2e}",
            ((got - exact) / exact).abs()
        );
    }

    let f = RadialField::from_fn(grid.clone(), |r| (-(r - 4.0) * (r - 4.0)).exp())?;
    let l2 = lq_norm(&f, 2.0)?;
    let h_half = sobolev_norm(&f, SobolevIndex::new(0.5, 0.0)?, &op)?;
    let h01 = sobolev_norm(&f, SobolevIndex::new(0.0, 1.0)?, &op)?;
    println!("\nnorms of a gaussian bump at r = 4:");
    println!("  L2          = {l2:.8}");
    println!("  H^(1/2,0)   = {h_half:.8}");
    println!("  H^(0,1)     = {h01:.8}");

    // linear propagation conserves the shifted energy mode by mode
    let state = StatePair::new(f, RadialField::zero(grid.clone()), 0.0)?;
    let e = |s: &StatePair| -> hypwave::Result<f64> {
        Ok(0.5 * sobolev_norm(&s.u, SobolevIndex::new(0.0, 1.0)?, &op)?.powi(2)
            + 0.5 * lq_norm(&s.ut, 2.0)?.powi(2))
    };
    let e0 = e(&state)?;
    let moved = linear_propagate(&state, 7.5, &op)?;
    println!("\nlinear flow S(7.5): energy {e0:.12} -> {:.12}", e(&moved)?);

    println!("\nPlancherel density |Gamma(i y + rho)|^2/|Gamma(i y)|^2:");
    println!("{:>4} {:>6} {:>16} {:>16}", "n", "y", "lanczos", "closed form");
    for n in 2..=6 {
        for &y in &[0.5, 2.0, 10.0] {
            println!(
                "{n:>4} {y:>6.1} {:>16.9e} {:>16.9e}",
                harish_chandra_density(y, n)?,
                harish_chandra_density_closed_form(y, n)?
            );
        }
    }
    Ok(())
}
