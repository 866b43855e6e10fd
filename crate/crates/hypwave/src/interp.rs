//! Bicubic (tensor Lagrange) interpolation of solver snapshots in (r, t),
//! with derivatives from the same stencil. Snapshot times must be uniformly
//! spaced; the r grid is uniform by construction.

use crate::error::{Error, Result};

/// A space-time sample of the interpolated solution.
#[derive(Debug, Clone, Copy)]
pub struct SpaceTimeSample {
    pub u: f64,
    pub u_r: f64,
    pub u_t: f64,
}

/// Uniform space-time table of one scalar field.
pub struct SpaceTimeTable<'a> {
    values: Vec<&'a [f64]>,
    r0: f64,
    dr: f64,
    t0: f64,
    dt: f64,
}

/// Cubic Lagrange basis on nodes {-1, 0, 1, 2} evaluated at local coordinate
/// s in [0, 1]; returns weights and derivative weights (per unit step).
fn cubic_weights(s: f64) -> ([f64; 4], [f64; 4]) {
    let w = [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ];
    let dw = [
        -(3.0 * s * s - 6.0 * s + 2.0) / 6.0,
        (3.0 * s * s - 4.0 * s - 1.0) / 2.0,
        -(3.0 * s * s - 2.0 * s - 2.0) / 2.0,
        (3.0 * s * s - 1.0) / 6.0,
    ];
    (w, dw)
}

impl<'a> SpaceTimeTable<'a> {
    /// Rows are time levels (must be uniformly spaced), columns the r grid.
    pub fn new(rows: Vec<&'a [f64]>, times: &[f64], r0: f64, dr: f64) -> Result<Self> {
        if rows.len() < 4 {
            return Err(Error::InsufficientData(
                "interpolation needs at least 4 time levels".into(),
            ));
        }
        if rows.len() != times.len() {
            return Err(Error::InvalidParameter("rows/times length mismatch".into()));
        }
        let dt = times[1] - times[0];
        for w in times.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.abs().max(1.0) {
                return Err(Error::InvalidParameter(
                    "snapshot times are not uniformly spaced".into(),
                ));
            }
        }
        let cols = rows[0].len();
        if cols < 4 || rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParameter("ragged or too-narrow value table".into()));
        }
        Ok(Self {
            values: rows,
            r0,
            dr,
            t0: times[0],
            dt,
        })
    }

    pub fn t_min(&self) -> f64 {
        self.t0
    }

    pub fn t_max(&self) -> f64 {
        self.t0 + self.dt * (self.values.len() - 1) as f64
    }

    pub fn r_max(&self) -> f64 {
        self.r0 + self.dr * (self.values[0].len() - 1) as f64
    }

    pub fn contains(&self, r: f64, t: f64) -> bool {
        r >= self.r0 - 1e-12
            && r <= self.r_max() + 1e-12
            && t >= self.t_min() - 1e-12
            && t <= self.t_max() + 1e-12
    }

    /// Interpolates u, u_r, u_t at (r, t).
    pub fn sample(&self, r: f64, t: f64) -> Result<SpaceTimeSample> {
        if !self.contains(r, t) {
            return Err(Error::SliceOutOfRange(format!(
                "(r, t) = ({r}, {t}) outside the tabulated region r in [{}, {}], t in [{}, {}]",
                self.r0,
                self.r_max(),
                self.t_min(),
                self.t_max()
            )));
        }
        let nr = self.values[0].len();
        let nt = self.values.len();

        let fr = (r - self.r0) / self.dr;
        let ft = (t - self.t0) / self.dt;
        // anchor so that the 4-point stencil {i-1..i+2} stays in range
        let ir = (fr.floor() as isize).clamp(1, nr as isize - 3) as usize;
        let it = (ft.floor() as isize).clamp(1, nt as isize - 3) as usize;
        let sr = fr - ir as f64;
        let st = ft - it as f64;

        let (wr, dwr) = cubic_weights(sr);
        let (wt, dwt) = cubic_weights(st);

        let mut u = 0.0;
        let mut u_r = 0.0;
        let mut u_t = 0.0;
        for (a, (&wta, &dwta)) in wt.iter().zip(dwt.iter()).enumerate().map(|(a, p)| (a, p)) {
            let row = self.values[it + a - 1];
            let mut row_u = 0.0;
            let mut row_ur = 0.0;
            for b in 0..4 {
                let v = row[ir + b - 1];
                row_u += wr[b] * v;
                row_ur += dwr[b] * v;
            }
            u += wta * row_u;
            u_r += wta * row_ur;
            u_t += dwta * row_u;
        }
        Ok(SpaceTimeSample {
            u,
            u_r: u_r / self.dr,
            u_t: u_t / self.dt,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubic_polynomials_exactly() {
        let f = |r: f64, t: f64| 1.0 + r + 0.5 * r * r * r - t * t + 0.25 * t * t * t + r * t;
        let fr = |r: f64, t: f64| 1.0 + 1.5 * r * r + t;
        let ft = |r: f64, t: f64| -2.0 * t + 0.75 * t * t + r;
        let dr = 0.1;
        let dt = 0.05;
        let nr = 30;
        let nt = 20;
        let rows: Vec<Vec<f64>> = (0..nt)
            .map(|j| (0..nr).map(|i| f(i as f64 * dr, j as f64 * dt)).collect())
            .collect();
        let times: Vec<f64> = (0..nt).map(|j| j as f64 * dt).collect();
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let table = SpaceTimeTable::new(refs, &times, 0.0, dr).unwrap();
        for &(r, t) in &[(0.51, 0.21), (1.73, 0.49), (2.4, 0.87), (0.05, 0.02)] {
            let s = table.sample(r, t).unwrap();
            assert!((s.u - f(r, t)).abs() < 1e-12, "u at ({r},{t})");
            assert!((s.u_r - fr(r, t)).abs() < 1e-10, "u_r at ({r},{t})");
            assert!((s.u_t - ft(r, t)).abs() < 1e-10, "u_t at ({r},{t})");
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let rows: Vec<Vec<f64>> = (0..5).map(|_| vec![0.0; 8]).collect();
        let times: Vec<f64> = (0..5).map(|j| j as f64).collect();
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let table = SpaceTimeTable::new(refs, &times, 0.0, 1.0).unwrap();
        assert!(table.sample(3.0, 10.0).is_err());
        assert!(table.sample(20.0, 2.0).is_err());
    }
}
