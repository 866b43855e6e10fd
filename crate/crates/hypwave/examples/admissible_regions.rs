//! Strichartz admissibility calculus: pair checks, critical exponents,
//! minimal regularity by feasibility bisection, and the region polygon.

use hypwave::admissibility::{
    beta, critical_exponents, is_compatible, is_control, is_sigma_admissible, min_sigma,
    min_sigma_closed_form, region_polygon, PairQuery,
};

fn main() -> hypwave::Result<()> {
    println!("critical exponents:");
    println!("{:>3} {:>10} {:>10} {:>10}", "n", "p_conf", "p_c", "p_strauss");
    for n in 2..=6 {
        let c = critical_exponents(n)?;
        println!("{n:>3} {:>10.4} {:>10.4} {:>10.4}", c.p_conf, c.p_c, c.p_strauss);
    }

    println!("\npair checks at sigma = 1/2:");
    let q = PairQuery::from_exponents(4.0, 4.0, 3, 0.5).with_p(3.0);
    println!("  (4,4) on H^3, p=3: admissible {}, control {}, compatible {}",
        is_sigma_admissible(&q)?, is_control(&q)?, is_compatible(&q)?);
    let q2 = PairQuery::from_exponents(6.0, 6.0, 2, 0.5).with_p(5.0);
    println!("  (6,6) on H^2, p=5: admissible {} (the n=2 constraint is strict)",
        is_sigma_admissible(&q2)?);
    println!("  beta(4) in n=3: {}", beta(4.0, 3)?);

    println!("\nminimal regularity: bisection vs closed form");
    println!("{:>3} {:>6} {:>12} {:>12}", "n", "p", "bisection", "closed form");
    for (n, p) in [(3usize, 4.0), (3, 2.5), (2, 4.0), (2, 6.0), (4, 2.9), (5, 2.2), (6, 1.9)] {
        let found = min_sigma(p, n, 1e-7)?;
        let closed = min_sigma_closed_form(p, n)?;
        println!("{n:>3} {p:>6.2} {:>12.7} {:>12.7}", found.sigma, closed.sigma);
    }

    println!("\nsigma-admissible region, n = 3, sigma = 1/2 (reciprocal plane):");
    let poly = region_polygon(0.5, 3)?;
    for v in &poly.vertices {
        println!(
            "  (1/p1, 1/q1) = ({:.4}, {:.4})  original: {}  open boundary: {}",
            v.inv_p, v.inv_q, v.in_original, v.on_open_boundary
        );
    }
    Ok(())
}
