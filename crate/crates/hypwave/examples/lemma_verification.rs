//! Randomized verification of the weighted integral inequalities with their
//! explicit constants.

use hypwave::inequalities::{
    randomized_check, sphere_integral, sphere_integral_bound, three_factor_bound_check,
    two_factor_bound_check, LemmaId,
};

fn main() -> hypwave::Result<()> {
    // the two-factor constant is the verbatim formula 1/(1-k1) + 1/(k1+k2-1)
    let (integral, bound) = two_factor_bound_check(1.0, 2.0, 0.5, 1.0)?;
    println!("two-factor, r = (1,2), kappa = (1/2, 1):");
    println!("  integral {integral:.8} <= C (r2-r1)^(1-k1-k2) = {bound} (C = 4)");

    let (i3, b3) = three_factor_bound_check(0.8, 1.7, 2.5, 0.3, 0.4, 0.9)?;
    println!("three-factor, r = (0.8, 1.7, 2.5), kappa = (0.3, 0.4, 0.9):");
    println!("  integral {i3:.8} <= {b3:.8}");

    let v = sphere_integral(2.0, 1.0, 2.5)?;
    let b = sphere_integral_bound(2.0, 1.0, 2.5)?;
    println!("circle integral |x| = 2, r = 1, kappa = 5/2:");
    println!("  integral {v:.8} <= {b:.8}");

    println!("\nrandomized sweeps (seed 7):");
    for id in [LemmaId::Sphere, LemmaId::TwoFactor, LemmaId::ThreeFactor] {
        let rep = randomized_check(id, 1000, 7)?;
        println!(
            "  {:<13} samples {}, max value/bound {:.4}, violations {}, fitted constant {:.3}",
            rep.lemma_id.name(),
            rep.samples,
            rep.max_ratio,
            rep.violations,
            rep.fitted_constant
        );
    }
    Ok(())
}
