//! Strichartz admissibility calculus.
//!
//! Everything here is exact arithmetic on exponent reciprocals: a pair
//! (p1, q1) enters as (1/p1, 1/q1) in the unit square. The left-hand
//! conditions (PQ1), (Q1) define sigma-admissible pairs, the right-hand
//! conditions (PQ2), (Q2) applied to the Hoelder dual
//! (1/p2, 1/q2) = (1 - p/p1, 1 - p/q1) define (p, sigma)-control pairs, and
//! compatible = admissible and control. Dimension 2 carries strict
//! inequalities where 3 <= n <= 6 carries closed ones, so strictness is
//! first-class: every comparison goes through [`Cmp`] with an explicit
//! open/closed flag and a 1e-12 float band.

use crate::error::{Error, Result};
use crate::geometry::check_dimension;

/// Comparison band for floating-point boundary decisions.
pub const EPS: f64 = 1e-12;

/// One inequality `lhs >= rhs` (closed) or `lhs > rhs` (open).
#[derive(Debug, Clone, Copy)]
struct Cmp {
    lhs: f64,
    rhs: f64,
    strict: bool,
}

impl Cmp {
    fn holds(&self, force_open: bool) -> bool {
        let strict = self.strict || force_open;
        if strict {
            self.lhs > self.rhs + EPS
        } else {
            self.lhs >= self.rhs - EPS
        }
    }
}

/// Query for admissibility / control / compatibility of a pair (p1, q1).
#[derive(Debug, Clone, Copy)]
pub struct PairQuery {
    pub inv_p: f64,
    pub inv_q: f64,
    pub n: usize,
    pub sigma: f64,
    /// nonlinearity exponent, needed for control/compatible queries
    pub p: Option<f64>,
    /// demand the open (strict) version of every inequality
    pub open: bool,
}

impl PairQuery {
    /// Builds a query from the exponents themselves.
    pub fn from_exponents(p1: f64, q1: f64, n: usize, sigma: f64) -> Self {
        Self {
            inv_p: 1.0 / p1,
            inv_q: 1.0 / q1,
            n,
            sigma,
            p: None,
            open: false,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn open(mut self) -> Self {
        self.open = true;
        self
    }

    fn validate(&self) -> Result<()> {
        check_dimension(self.n)?;
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma must lie in (0,1), got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// beta(q) = (n+1)/2 (1/2 - 1/q), the regularity cost of the pair.
pub fn beta(q: f64, n: usize) -> Result<f64> {
    check_dimension(n)?;
    if !(q >= 2.0) {
        return Err(Error::InvalidParameter(format!("beta needs q >= 2, got {q}")));
    }
    Ok((n as f64 + 1.0) / 2.0 * (0.5 - 1.0 / q))
}

/// Membership of (x, y) = (1/p1, 1/q1) in (0, 1/2] x (0, 1/2).
fn in_box(x: f64, y: f64, open: bool) -> bool {
    let x_ok = if open {
        x > EPS && x < 0.5 - EPS
    } else {
        x > EPS && x <= 0.5 + EPS
    };
    let y_ok = y > EPS && y < 0.5 - EPS;
    x_ok && y_ok
}

/// Left-hand conditions (PQ1) and (Q1) at regularity sigma.
fn left_conditions(x: f64, y: f64, n: usize, sigma: f64, open: bool) -> bool {
    let nf = n as f64;
    let (pq1, q1) = if n >= 3 {
        (
            Cmp {
                lhs: x + nf * y,
                rhs: nf / 2.0 - sigma,
                strict: false,
            },
            Cmp {
                lhs: y,
                rhs: 0.5 - 2.0 * sigma / (nf + 1.0),
                strict: false,
            },
        )
    } else {
        (
            Cmp {
                lhs: x + 2.0 * y,
                rhs: 1.0 - sigma,
                strict: true,
            },
            Cmp {
                lhs: y,
                rhs: 0.5 - 2.0 * sigma / 3.0,
                strict: false,
            },
        )
    };
    pq1.holds(open) && q1.holds(open)
}

/// Right-hand conditions (PQ2) and (Q2) for the dual pair (x2, y2).
fn right_conditions(x2: f64, y2: f64, n: usize, sigma: f64, open: bool) -> bool {
    let nf = n as f64;
    let (pq2, q2) = if n >= 3 {
        (
            Cmp {
                lhs: x2 + nf * y2,
                rhs: nf / 2.0 - 1.0 + sigma,
                strict: false,
            },
            Cmp {
                lhs: y2,
                rhs: (nf - 3.0) / (2.0 * (nf + 1.0)) + 2.0 * sigma / (nf + 1.0),
                strict: false,
            },
        )
    } else {
        (
            Cmp {
                lhs: x2 + 2.0 * y2,
                rhs: sigma,
                strict: true,
            },
            Cmp {
                lhs: y2,
                rhs: 2.0 * sigma / 3.0 - 1.0 / 6.0,
                strict: false,
            },
        )
    };
    pq2.holds(open) && q2.holds(open)
}

/// Is (p1, q1) a (left) sigma-admissible pair?
pub fn is_sigma_admissible(q: &PairQuery) -> Result<bool> {
    q.validate()?;
    Ok(in_box(q.inv_p, q.inv_q, q.open) && left_conditions(q.inv_p, q.inv_q, q.n, q.sigma, q.open))
}

/// Is (p1, q1) a (p, sigma)-control pair? The dual
/// (1/p2, 1/q2) = (1 - p/p1, 1 - p/q1) must land in the box and satisfy
/// (PQ2), (Q2).
pub fn is_control(q: &PairQuery) -> Result<bool> {
    q.validate()?;
    let p = q
        .p
        .ok_or_else(|| Error::InvalidParameter("control query needs the exponent p".into()))?;
    if !(p > 1.0) {
        return Err(Error::InvalidParameter(format!("exponent p must exceed 1, got {p}")));
    }
    let x2 = 1.0 - p * q.inv_p;
    let y2 = 1.0 - p * q.inv_q;
    if !(x2 > EPS && x2 < 1.0 && y2 > EPS && y2 < 1.0) {
        return Ok(false); // dual reciprocals outside (0,1)
    }
    Ok(in_box(x2, y2, q.open) && right_conditions(x2, y2, q.n, q.sigma, q.open))
}

/// Compatible = sigma-admissible and (p, sigma)-control.
pub fn is_compatible(q: &PairQuery) -> Result<bool> {
    Ok(is_sigma_admissible(q)? && is_control(q)?)
}

/// Critical exponents of dimension n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalExponents {
    /// conformal exponent 1 + 4/(n-1)
    pub p_conf: f64,
    /// energy-critical exponent 1 + 4/(n-2); infinite when n = 2
    pub p_c: f64,
    /// Strauss small-data global-existence threshold
    pub p_strauss: f64,
}

pub fn critical_exponents(n: usize) -> Result<CriticalExponents> {
    check_dimension(n)?;
    let nf = n as f64;
    let p_conf = 1.0 + 4.0 / (nf - 1.0);
    let p_c = if n == 2 { f64::INFINITY } else { 1.0 + 4.0 / (nf - 2.0) };
    let a = 0.5 + 1.0 / (nf - 1.0);
    let p_strauss = a + (a * a + 2.0 / (nf - 1.0)).sqrt();
    Ok(CriticalExponents {
        p_conf,
        p_c,
        p_strauss,
    })
}

/// Closed-form minimal regularity sigma_p from the local-theory tables,
/// per dimension and exponent range. `strict` marks rows where only
/// sigma > sigma_p is admitted.
#[derive(Debug, Clone, Copy)]
pub struct MinimalSigma {
    pub sigma: f64,
    pub strict: bool,
}

pub fn min_sigma_closed_form(p: f64, n: usize) -> Result<MinimalSigma> {
    check_dimension(n)?;
    let crit = critical_exponents(n)?;
    if !(p > 1.0 && p < crit.p_c) {
        return Err(Error::InvalidParameter(format!(
            "p must lie in (1, p_c) = (1, {}), got {p}",
            crit.p_c
        )));
    }
    let nf = n as f64;
    Ok(match n {
        2 => {
            if p >= 5.0 {
                MinimalSigma {
                    sigma: 1.0 - 2.0 / (p - 1.0),
                    strict: true,
                }
            } else if p > 3.0 {
                MinimalSigma {
                    sigma: 0.75 - 1.0 / (p - 1.0),
                    strict: false,
                }
            } else if p > 2.0 {
                MinimalSigma {
                    sigma: 0.75 - 1.5 / p,
                    strict: true,
                }
            } else {
                MinimalSigma {
                    sigma: 0.0,
                    strict: true,
                }
            }
        }
        3 => {
            if p >= 3.0 {
                MinimalSigma {
                    sigma: 1.5 - 2.0 / (p - 1.0),
                    strict: false,
                }
            } else if p > 2.0 {
                MinimalSigma {
                    sigma: 1.0 - 1.0 / (p - 1.0),
                    strict: false,
                }
            } else {
                MinimalSigma {
                    sigma: 0.0,
                    strict: true,
                }
            }
        }
        _ => {
            let p_mid = 1.0 + 4.0 * (nf - 1.0) / ((nf - 1.0) * (nf - 1.0) + 4.0);
            if p >= crit.p_conf {
                MinimalSigma {
                    sigma: nf / 2.0 - 2.0 / (p - 1.0),
                    strict: false,
                }
            } else if p >= p_mid {
                MinimalSigma {
                    sigma: (nf + 1.0) / 4.0 - 1.0 / (p - 1.0),
                    strict: false,
                }
            } else if p > 1.0 + 3.0 / nf {
                MinimalSigma {
                    sigma: (nf + 1.0) * (nf * p - nf - 3.0) / (4.0 * nf * p - 2.0 * nf - 2.0),
                    strict: false,
                }
            } else {
                MinimalSigma {
                    sigma: 0.0,
                    strict: true,
                }
            }
        }
    })
}

/// Candidate pairs seeded from the local-theory tables (minimal-regularity
/// rows, the sigma close-to-1 interpolation rows, the conformal pair) and
/// their convex interpolations, all evaluated at the query regularity. The
/// feasibility decision itself always goes through `is_compatible`, so
/// these only accelerate the search.
fn table_candidates(p: f64, n: usize, sigma: f64) -> Vec<(f64, f64)> {
    let nf = n as f64;
    let mut cands: Vec<(f64, f64)> = Vec::new();
    match n {
        2 => {
            // the admissible eps window of the p >= 5 row shrinks like
            // 2 - (1 - sigma)(p - 1) near the regularity threshold, so the
            // ladder scales with it instead of being fixed
            let eps_window = (2.0 - (1.0 - sigma) * (p - 1.0)).min(1.0 / 3.0);
            let mut eps_ladder = vec![0.01, 0.05, 0.1, 0.2, 0.3];
            if eps_window > 0.0 {
                eps_ladder.extend([0.25 * eps_window, 0.5 * eps_window, 0.75 * eps_window]);
            }
            for &eps in &eps_ladder {
                cands.push(((2.0 + sigma - 3.0 * eps) / (3.0 * p), (7.0 - 4.0 * sigma) / (6.0 * p)));
            }
            cands.push(((1.0 + 3.0 * sigma) / (3.0 * p), (3.0 - 4.0 * sigma) / 6.0));
            // (p/(1-sigma_p), p/(1-sigma+sigma_p)) row: scan offsets
            for &ds in &[0.05, 0.1, 0.2, 0.3, 0.45] {
                let sp = sigma - ds;
                if sp > 0.0 {
                    cands.push(((1.0 - sp) / p, (1.0 - ds) / p));
                }
            }
            cands.push((1.0 / (2.0 * p), (3.0 - 4.0 * sigma) / 6.0));
            // regularity close to 1: (2, 6p/(5-2s)) and (6p/(5+s), 6p/(5-2s))
            cands.push((0.5, (5.0 - 2.0 * sigma) / (6.0 * p)));
            cands.push(((5.0 + sigma) / (6.0 * p), (5.0 - 2.0 * sigma) / (6.0 * p)));
        }
        3 => {
            cands.push(((1.0 + sigma) / (2.0 * p), (2.0 - sigma) / (2.0 * p)));
            cands.push((1.0 / (2.0 * p), (1.0 - sigma) / 2.0));
        }
        _ => {
            cands.push((
                (2.0 + (nf - 1.0) * sigma) / ((nf + 1.0) * p),
                (nf + 5.0 - 4.0 * sigma) / (2.0 * (nf + 1.0) * p),
            ));
            cands.push((1.0 / (2.0 * p), (nf + 3.0 - 2.0 * sigma) / (2.0 * nf * p)));
            cands.push((1.0 / (2.0 * p), (nf + 1.0 - 4.0 * sigma) / (2.0 * (nf + 1.0))));
        }
    }
    if n >= 3 {
        // regularity close to 1: (2, 2(n+1)p/(n+3-2s)) for p < 2 and
        // (2(n+1)p/(n+3+(n-1)s), 2(n+1)p/(n+3-2s)) for p >= 2
        let y = (nf + 3.0 - 2.0 * sigma) / (2.0 * (nf + 1.0) * p);
        cands.push((0.5, y));
        cands.push(((nf + 3.0 + (nf - 1.0) * sigma) / (2.0 * (nf + 1.0) * p), y));
    }
    // conformal-range universal pair (p+1, p+1)
    cands.push((1.0 / (p + 1.0), 1.0 / (p + 1.0)));
    // convex interpolations between the seeded anchors (the construction
    // behind intermediate regularity levels)
    let anchors = cands.clone();
    for (i, a) in anchors.iter().enumerate() {
        for b in anchors.iter().skip(i + 1) {
            for &theta in &[0.25, 0.5, 0.75] {
                cands.push((
                    theta * a.0 + (1.0 - theta) * b.0,
                    theta * a.1 + (1.0 - theta) * b.1,
                ));
            }
        }
    }
    cands
}

/// Does any (p, sigma)-compatible pair exist at this regularity?
/// Returns a witness when one is found.
pub fn compatible_pair_exists(p: f64, n: usize, sigma: f64) -> Result<Option<(f64, f64)>> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Ok(None);
    }
    let check = |x: f64, y: f64| -> bool {
        if !(x > 0.0 && y > 0.0) {
            return false;
        }
        let q = PairQuery {
            inv_p: x,
            inv_q: y,
            n,
            sigma,
            p: Some(p),
            open: false,
        };
        matches!(is_compatible(&q), Ok(true))
    };
    for (x, y) in table_candidates(p, n, sigma) {
        if check(x, y) {
            return Ok(Some((x, y)));
        }
    }
    const LATTICE: usize = 192;
    for i in 1..=LATTICE {
        let x = 0.5 * i as f64 / LATTICE as f64;
        for j in 1..LATTICE {
            let y = 0.5 * j as f64 / LATTICE as f64;
            if check(x, y) {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy)]
pub struct MinSigmaResult {
    pub sigma: f64,
    /// compatible pair witnessing feasibility just above the infimum,
    /// as reciprocals (1/p1, 1/q1)
    pub witness: (f64, f64),
}

/// Infimum over sigma of "a (p, sigma)-compatible pair exists", located by
/// bisection with the feasibility search of [`compatible_pair_exists`].
pub fn min_sigma(p: f64, n: usize, tol: f64) -> Result<MinSigmaResult> {
    check_dimension(n)?;
    let crit = critical_exponents(n)?;
    if !(p > 1.0 && p < crit.p_c) {
        return Err(Error::InvalidParameter(format!(
            "p must lie in (1, p_c), got {p} with p_c = {}",
            crit.p_c
        )));
    }
    let tol = tol.max(1e-12);
    let mut lo = 1e-9;
    if let Some(w) = compatible_pair_exists(p, n, lo)? {
        return Ok(MinSigmaResult { sigma: 0.0, witness: w });
    }
    // locate a feasible starting point for the bisection
    let mut hi = 1.0 - 1e-9;
    let mut witness = None;
    for &probe in &[
        1.0 - 1e-9,
        0.999,
        0.99,
        0.97,
        0.95,
        0.9,
        0.8,
        0.7,
        0.6,
        0.5,
        0.4,
        0.3,
        0.2,
        0.1,
    ] {
        if let Some(w) = compatible_pair_exists(p, n, probe)? {
            hi = probe;
            witness = Some(w);
            break;
        }
    }
    let mut witness = witness.ok_or_else(|| {
        Error::InvalidParameter(format!(
            "no compatible pair found at any regularity for p = {p}, n = {n}"
        ))
    })?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match compatible_pair_exists(p, n, mid)? {
            Some(w) => {
                witness = w;
                hi = mid;
            }
            None => lo = mid,
        }
    }
    Ok(MinSigmaResult { sigma: hi, witness })
}

/// Saved-derivative range: the admissible extra regularity kappa that can be
/// kept on the left-hand side when the pair is used below its ceiling.
/// Returns (kappa_max, upper_end_open).
pub fn kappa_range(inv_p: f64, inv_q: f64, n: usize, sigma: f64) -> Result<(f64, bool)> {
    check_dimension(n)?;
    let nf = n as f64;
    let original = if n >= 3 {
        2.0 * inv_p + (nf - 1.0) * inv_q >= (nf - 1.0) / 2.0 - EPS
    } else {
        2.0 * inv_p + inv_q > 0.5 + EPS
    };
    if original {
        let b = (nf + 1.0) / 2.0 * (0.5 - inv_q);
        Ok(((sigma - b).max(0.0), false))
    } else if n >= 3 {
        Ok(((nf * inv_q + inv_p - nf / 2.0 + sigma).max(0.0), false))
    } else {
        Ok(((2.0 * inv_q + inv_p - 1.0 + sigma).max(0.0), true))
    }
}

// ---------------------------------------------------------------------------
// Region polygons
// ---------------------------------------------------------------------------

/// A vertex of the admissible region in the (1/p1, 1/q1) square.
#[derive(Debug, Clone, Copy)]
pub struct RegionVertex {
    pub inv_p: f64,
    pub inv_q: f64,
    /// lies in the original admissible set T_n
    pub in_original: bool,
    /// lies on at least one strict (open) boundary segment
    pub on_open_boundary: bool,
}

/// Boundary trace of the sigma-admissible region, counter-clockwise.
#[derive(Debug, Clone)]
pub struct RegionPolygon {
    pub n: usize,
    pub sigma: f64,
    pub vertices: Vec<RegionVertex>,
}

/// Half-plane a x + b y >= c (strict when open).
#[derive(Debug, Clone, Copy)]
struct HalfPlane {
    a: f64,
    b: f64,
    c: f64,
    open: bool,
}

fn clip(poly: Vec<(f64, f64)>, hp: &HalfPlane) -> Vec<(f64, f64)> {
    let inside = |p: &(f64, f64)| hp.a * p.0 + hp.b * p.1 >= hp.c - 1e-14;
    let mut out = Vec::new();
    let m = poly.len();
    for i in 0..m {
        let cur = poly[i];
        let nxt = poly[(i + 1) % m];
        let cur_in = inside(&cur);
        let nxt_in = inside(&nxt);
        if cur_in {
            out.push(cur);
        }
        if cur_in != nxt_in {
            let da = hp.a * cur.0 + hp.b * cur.1 - hp.c;
            let db = hp.a * nxt.0 + hp.b * nxt.1 - hp.c;
            let t = da / (da - db);
            out.push((cur.0 + t * (nxt.0 - cur.0), cur.1 + t * (nxt.1 - cur.1)));
        }
    }
    // drop duplicate consecutive vertices
    let mut dedup: Vec<(f64, f64)> = Vec::new();
    for v in out {
        if dedup
            .last()
            .map(|l| (l.0 - v.0).abs() > 1e-12 || (l.1 - v.1).abs() > 1e-12)
            .unwrap_or(true)
        {
            dedup.push(v);
        }
    }
    if dedup.len() >= 2 {
        let first = dedup[0];
        let last = *dedup.last().unwrap();
        if (first.0 - last.0).abs() < 1e-12 && (first.1 - last.1).abs() < 1e-12 {
            dedup.pop();
        }
    }
    dedup
}

fn admissible_half_planes(n: usize, sigma: f64) -> Vec<HalfPlane> {
    let nf = n as f64;
    let mut hps = vec![
        // box: x > 0, x <= 1/2, y > 0, y < 1/2
        HalfPlane { a: 1.0, b: 0.0, c: 0.0, open: true },
        HalfPlane { a: -1.0, b: 0.0, c: -0.5, open: false },
        HalfPlane { a: 0.0, b: 1.0, c: 0.0, open: true },
        HalfPlane { a: 0.0, b: -1.0, c: -0.5, open: true },
    ];
    if n >= 3 {
        hps.push(HalfPlane { a: 1.0, b: nf, c: nf / 2.0 - sigma, open: false });
        hps.push(HalfPlane {
            a: 0.0,
            b: 1.0,
            c: 0.5 - 2.0 * sigma / (nf + 1.0),
            open: false,
        });
    } else {
        hps.push(HalfPlane { a: 1.0, b: 2.0, c: 1.0 - sigma, open: true });
        hps.push(HalfPlane {
            a: 0.0,
            b: 1.0,
            c: 0.5 - 2.0 * sigma / 3.0,
            open: false,
        });
    }
    hps
}

fn in_original_set(x: f64, y: f64, n: usize) -> bool {
    let nf = n as f64;
    if !in_box(x, y, false) {
        return false;
    }
    if n >= 3 {
        2.0 * x + (nf - 1.0) * y >= (nf - 1.0) / 2.0 - EPS
    } else {
        2.0 * x + y > 0.5 + EPS
    }
}

/// Traces the sigma-admissible region boundary. Vertices are tagged with
/// membership in the original admissible set T_n and whether they sit on a
/// strict boundary (the box edges x = 0, y = 0, y = 1/2 and, for n = 2, the
/// (PQ1) line).
pub fn region_polygon(sigma: f64, n: usize) -> Result<RegionPolygon> {
    check_dimension(n)?;
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "sigma must lie in (0,1), got {sigma}"
        )));
    }
    let hps = admissible_half_planes(n, sigma);
    let mut poly = vec![(0.0, 0.0), (0.5, 0.0), (0.5, 0.5), (0.0, 0.5)];
    for hp in &hps {
        poly = clip(poly, hp);
        if poly.is_empty() {
            break;
        }
    }
    let vertices = poly
        .into_iter()
        .map(|(x, y)| {
            let on_open = hps
                .iter()
                .filter(|hp| hp.open)
                .any(|hp| (hp.a * x + hp.b * y - hp.c).abs() < 1e-10);
            RegionVertex {
                inv_p: x,
                inv_q: y,
                in_original: in_original_set(x, y, n),
                on_open_boundary: on_open,
            }
        })
        .collect();
    Ok(RegionPolygon { n, sigma, vertices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn beta_values() {
        assert_eq!(beta(2.0, 3).unwrap(), 0.0);
        assert_relative_eq!(beta(4.0, 3).unwrap(), 0.5);
        assert_relative_eq!(beta(6.0, 2).unwrap(), 0.5);
        assert!(beta(1.5, 3).is_err());
    }

    #[test]
    fn admissible_spec_cases() {
        // n=3, sigma=1/2, (4,4) is admissible
        let q = PairQuery::from_exponents(4.0, 4.0, 3, 0.5);
        assert!(is_sigma_admissible(&q).unwrap());
        // n=2, sigma=1/2, (6,6): (PQ1) is strict and fails at equality
        let q2 = PairQuery::from_exponents(6.0, 6.0, 2, 0.5);
        assert!(!is_sigma_admissible(&q2).unwrap());
        // near-degenerate high regularity
        let q3 = PairQuery {
            inv_p: 0.5,
            inv_q: 0.49,
            n: 4,
            sigma: 0.99,
            p: None,
            open: false,
        };
        assert!(is_sigma_admissible(&q3).unwrap());
        // sigma outside (0,1) rejected
        let bad = PairQuery::from_exponents(4.0, 4.0, 3, 1.0);
        assert!(is_sigma_admissible(&bad).is_err());
    }

    #[test]
    fn control_spec_cases() {
        let q = PairQuery::from_exponents(4.0, 4.0, 3, 0.5).with_p(3.0);
        assert!(is_control(&q).unwrap());

        // p so large the dual leaves the box
        let q2 = PairQuery::from_exponents(4.0, 4.0, 3, 0.5).with_p(50.0);
        assert!(!is_control(&q2).unwrap());

        // n=2 row "5 <= p": pair (3p/(2+sigma-3eps), 6p/(7-4sigma))
        let (p, sigma, eps) = (5.0, 0.55, 0.1);
        let p1 = 3.0 * p / (2.0 + sigma - 3.0 * eps);
        let q1 = 6.0 * p / (7.0 - 4.0 * sigma);
        let q3 = PairQuery::from_exponents(p1, q1, 2, sigma).with_p(p);
        assert!(is_control(&q3).unwrap());
    }

    #[test]
    fn compatible_spec_cases() {
        let q = PairQuery::from_exponents(4.0, 4.0, 3, 0.5).with_p(3.0);
        assert!(is_compatible(&q).unwrap());
        let q2 = PairQuery::from_exponents(6.0, 6.0, 2, 0.5).with_p(5.0);
        assert!(!is_compatible(&q2).unwrap());
        let q3 = PairQuery::from_exponents(3.0, 3.0, 4, 0.5).with_p(2.0);
        assert!(is_compatible(&q3).unwrap());
    }

    #[test]
    fn conformal_pair_is_half_compatible() {
        // (p+1, p+1) is (p, 1/2)-compatible for p <= p_conf (strict at n=2)
        for n in 2..=6 {
            let crit = critical_exponents(n).unwrap();
            let p = if n == 2 { 4.9 } else { crit.p_conf };
            let q = PairQuery::from_exponents(p + 1.0, p + 1.0, n, 0.5).with_p(p);
            assert!(is_compatible(&q).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn critical_exponent_values() {
        let c2 = critical_exponents(2).unwrap();
        assert_eq!(c2.p_conf, 5.0);
        assert!(c2.p_c.is_infinite());
        let c3 = critical_exponents(3).unwrap();
        assert_eq!(c3.p_conf, 3.0);
        assert_eq!(c3.p_c, 5.0);
        assert_relative_eq!(c3.p_strauss, 1.0 + 2f64.sqrt(), max_relative = 1e-12);
        let c6 = critical_exponents(6).unwrap();
        assert_eq!(c6.p_c, 2.0);
    }

    #[test]
    fn min_sigma_matches_closed_forms_spot() {
        // n=3, p=4: sigma_3 = 3/2 - 2/3 = 5/6
        let r = min_sigma(4.0, 3, 1e-7).unwrap();
        assert!((r.sigma - 5.0 / 6.0).abs() < 1e-6, "{}", r.sigma);
        // n=2, p=4: sigma_2 = 3/4 - 1/3 = 5/12
        let r2 = min_sigma(4.0, 2, 1e-7).unwrap();
        assert!((r2.sigma - 5.0 / 12.0).abs() < 1e-6, "{}", r2.sigma);
        // n=3, p=1.5: infimum 0, not attained
        let r3 = min_sigma(1.5, 3, 1e-7).unwrap();
        assert!(r3.sigma.abs() < 1e-6, "{}", r3.sigma);
        assert!(min_sigma(6.0, 3, 1e-6).is_err());
    }

    #[test]
    fn monotone_in_sigma() {
        // a sigma1-admissible pair is sigma2-admissible for sigma2 > sigma1
        let base = PairQuery::from_exponents(4.0, 4.0, 3, 0.5);
        assert!(is_sigma_admissible(&base).unwrap());
        for &s in &[0.6, 0.75, 0.9] {
            let q = PairQuery { sigma: s, ..base };
            assert!(is_sigma_admissible(&q).unwrap());
        }
    }

    #[test]
    fn region_polygon_self_consistent() {
        for &(n, sigma) in &[
            (2, 0.3),
            (2, 0.75),
            (2, 0.9),
            (3, 0.5),
            (4, 0.3),
            (4, 0.8),
            (6, 0.45),
        ] {
            let poly = region_polygon(sigma, n).unwrap();
            assert!(poly.vertices.len() >= 3, "degenerate polygon for n={n} sigma={sigma}");
            for v in &poly.vertices {
                assert!(v.inv_p >= -1e-12 && v.inv_p <= 0.5 + 1e-12);
                assert!(v.inv_q >= -1e-12 && v.inv_q <= 0.5 + 1e-12);
                // vertices slightly inside the region must pass the predicate
                let c = centroid(&poly);
                let eps = 1e-6;
                let x = v.inv_p + (c.0 - v.inv_p) * eps;
                let y = v.inv_q + (c.1 - v.inv_q) * eps;
                let q = PairQuery {
                    inv_p: x,
                    inv_q: y,
                    n,
                    sigma,
                    p: None,
                    open: false,
                };
                assert!(
                    is_sigma_admissible(&q).unwrap(),
                    "n={n} sigma={sigma} vertex ({},{})",
                    v.inv_p,
                    v.inv_q
                );
            }
        }
    }

    fn centroid(poly: &RegionPolygon) -> (f64, f64) {
        let m = poly.vertices.len() as f64;
        (
            poly.vertices.iter().map(|v| v.inv_p).sum::<f64>() / m,
            poly.vertices.iter().map(|v| v.inv_q).sum::<f64>() / m,
        )
    }

    #[test]
    fn region_membership_agrees_with_predicate() {
        // deterministic pseudo-random sweep, boundary-aware
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(n, sigma) in &[(2usize, 0.6), (3, 0.5), (5, 0.35)] {
            let poly = region_polygon(sigma, n).unwrap();
            let verts: Vec<(f64, f64)> = poly.vertices.iter().map(|v| (v.inv_p, v.inv_q)).collect();
            for _ in 0..2000 {
                let x = rng.gen_range(0.0..0.55);
                let y = rng.gen_range(0.0..0.55);
                let d = signed_distance(&verts, x, y);
                // skip the comparison band around the boundary
                if d.abs() < 1e-7 {
                    continue;
                }
                let q = PairQuery {
                    inv_p: x,
                    inv_q: y,
                    n,
                    sigma,
                    p: None,
                    open: false,
                };
                let inside_poly = d > 0.0;
                assert_eq!(
                    is_sigma_admissible(&q).unwrap(),
                    inside_poly,
                    "n={n} sigma={sigma} point ({x},{y}) dist {d}"
                );
            }
        }
    }

    /// positive inside (convex, ccw), negative outside
    fn signed_distance(verts: &[(f64, f64)], x: f64, y: f64) -> f64 {
        let mut d = f64::INFINITY;
        let m = verts.len();
        for i in 0..m {
            let (x0, y0) = verts[i];
            let (x1, y1) = verts[(i + 1) % m];
            let (ex, ey) = (x1 - x0, y1 - y0);
            let len = (ex * ex + ey * ey).sqrt();
            if len < 1e-14 {
                continue;
            }
            let cross = ex * (y - y0) - ey * (x - x0);
            d = d.min(cross / len);
        }
        d
    }

    #[test]
    fn kappa_range_basic() {
        // original admissible pair: kappa up to sigma - beta(q1)
        let (k, open) = kappa_range(0.25, 0.25, 3, 0.5).unwrap();
        assert!(!open);
        assert_relative_eq!(k, 0.5 - beta(4.0, 3).unwrap(), max_relative = 1e-12);
    }
}
