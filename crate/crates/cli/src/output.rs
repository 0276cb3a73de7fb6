//! CSV writers. Every file has a header row and numbers are written in
//! scientific notation with 17 significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use gpme_core::solver::RunRecord;
use gpme_core::ExactSolution;

use crate::error::CliError;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let wrap = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(wrap)?;
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        w.write_record(&row).map_err(wrap)?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Writes the probe, snapshot and front files of one run and returns their
/// paths.
pub fn write_run(
    dir: &Path,
    stem: &str,
    rec: &RunRecord,
    oracle: Option<&ExactSolution>,
) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    for probe in &rec.probes {
        let path = dir.join(format!("{stem}_probe_x{}.csv", probe.x_requested));
        let rows = probe.samples.iter().map(|&(t, p)| {
            let mut row = vec![num(t), num(p)];
            if let Some(o) = oracle {
                row.push(num(o.value(probe.x, t)));
            }
            row
        });
        let header: &[&str] = if oracle.is_some() {
            &["t", "p", "p_exact"]
        } else {
            &["t", "p"]
        };
        write_csv(&path, header, rows)?;
        written.push(path);
    }
    for snap in &rec.snapshots {
        let path = dir.join(format!("{stem}_snapshot_t{}.csv", snap.t_requested));
        let rows = snap.x.iter().zip(&snap.p).map(|(&x, &p)| {
            let mut row = vec![num(x), num(p)];
            if let Some(o) = oracle {
                row.push(num(o.value(x, snap.t)));
            }
            row
        });
        let header: &[&str] = if oracle.is_some() {
            &["x", "p", "p_exact"]
        } else {
            &["x", "p"]
        };
        write_csv(&path, header, rows)?;
        written.push(path);
    }
    let path = dir.join(format!("{stem}_front.csv"));
    let rows = rec.fronts.iter().map(|f| {
        let mut row = vec![num(f.t), num(f.xi), num(f.crossing), num(f.support)];
        if let Some(o) = oracle {
            row.push(num(o.shock_position(f.t)));
        }
        row
    });
    let header: &[&str] = if oracle.is_some() {
        &["t", "xi", "crossing", "support", "x_exact"]
    } else {
        &["t", "xi", "crossing", "support"]
    };
    write_csv(&path, header, rows)?;
    written.push(path);
    Ok(written)
}
