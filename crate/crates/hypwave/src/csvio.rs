//! CSV and JSON artifact writers. Float formatting goes through Rust's
//! shortest round-trip `Display`, so identical runs produce byte-identical
//! files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::solver::euclidean::Trajectory2d;
use crate::solver::hyperbolic::Trajectory;

pub fn write_csv<P: AsRef<Path>>(
    path: P,
    header: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                write!(w, ",")?;
            }
            write!(w, "{v}")?;
            first = false;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Reads a snapshot CSV with columns (r, u, ut).
pub fn read_snapshot_csv<P: AsRef<Path>>(path: P) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let mut r = Vec::new();
    let mut u = Vec::new();
    let mut ut = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 && line.starts_with('r') {
            continue; // header
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let parse = |c: Option<&str>| -> Result<f64> {
            c.ok_or_else(|| {
                crate::error::Error::InvalidParameter(format!("short CSV row {i}"))
            })?
            .trim()
            .parse::<f64>()
            .map_err(|e| crate::error::Error::InvalidParameter(format!("CSV row {i}: {e}")))
        };
        r.push(parse(cols.next())?);
        u.push(parse(cols.next())?);
        ut.push(parse(cols.next())?);
    }
    Ok((r, u, ut))
}

pub fn write_json<P: AsRef<Path>, T: Serialize>(path: P, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let s = serde_json::to_string_pretty(value)
        .map_err(|e| crate::error::Error::InvalidParameter(format!("serialize: {e}")))?;
    w.write_all(s.as_bytes())?;
    w.write_all(b"\n")?;
    Ok(())
}

fn stride_for(len: usize, max_rows: usize) -> usize {
    (len / max_rows.max(1)).max(1)
}

/// Diagnostic series: (t, energy, morawetz_acc, M, Mprime, max_abs_u).
pub fn write_trajectory_csv<P: AsRef<Path>>(path: P, traj: &Trajectory, max_rows: usize) -> Result<()> {
    let stride = stride_for(traj.times.len(), max_rows);
    let n = traj.times.len();
    let rows = (0..n).filter(move |i| i % stride == 0 || *i == n - 1).map(|i| {
        vec![
            traj.times[i],
            traj.energy[i],
            traj.morawetz_acc[i],
            traj.virial_m[i],
            traj.virial_mprime[i],
            traj.max_abs[i],
        ]
    });
    write_csv(
        path,
        &["t", "energy", "morawetz_acc", "M", "Mprime", "max_abs_u"],
        rows,
    )
}

/// Same series for the planar solver, with the running L^6 mass appended.
pub fn write_trajectory2d_csv<P: AsRef<Path>>(
    path: P,
    traj: &Trajectory2d,
    max_rows: usize,
) -> Result<()> {
    let stride = stride_for(traj.times.len(), max_rows);
    let n = traj.times.len();
    let rows = (0..n).filter(move |i| i % stride == 0 || *i == n - 1).map(|i| {
        vec![
            traj.times[i],
            traj.energy[i],
            traj.l6_acc[i],
            traj.virial_m[i],
            traj.virial_mprime[i],
            traj.max_abs[i],
            traj.l6_acc[i],
        ]
    });
    write_csv(
        path,
        &["t", "energy", "morawetz_acc", "M", "Mprime", "max_abs_u", "l6l6_acc"],
        rows,
    )
}

/// One (r, u, ut) file per decimated snapshot time.
pub fn write_snapshots_csv<P: AsRef<Path>>(dir: P, traj: &Trajectory, max_files: usize) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let stride = stride_for(traj.snapshots.len(), max_files);
    for (k, snap) in traj.snapshots.iter().enumerate() {
        if k % stride != 0 && k + 1 != traj.snapshots.len() {
            continue;
        }
        let path = dir.join(format!("snapshot_{k:04}.csv"));
        let rows = (0..traj.grid.num_points)
            .map(|i| vec![traj.grid.points[i], snap.u[i], snap.ut[i]]);
        write_csv(path, &["r", "u", "ut"], rows)?;
    }
    Ok(())
}

pub fn write_snapshots2d_csv<P: AsRef<Path>>(
    dir: P,
    traj: &Trajectory2d,
    max_files: usize,
) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let stride = stride_for(traj.snapshots.len(), max_files);
    for (k, snap) in traj.snapshots.iter().enumerate() {
        if k % stride != 0 && k + 1 != traj.snapshots.len() {
            continue;
        }
        let path = dir.join(format!("snapshot_{k:04}.csv"));
        let rows = (0..traj.grid.num_points)
            .map(|i| vec![traj.grid.points[i], snap.u[i], snap.ut[i]]);
        write_csv(path, &["r", "u", "ut"], rows)?;
    }
    Ok(())
}
