//! CSV and JSON writers with stable schemas.
//!
//! Trajectory CSV: header `t,M,m,xi,H0,H1,H2,dist_to_orbit`, 17 significant
//! digits per value. Field snapshots: `t,x,u`. Surface CSV: `M,m,F,gradnorm`.
//! JSON summaries share the keys `command`, `config`, `checks`,
//! `sup_orbital_distance`, `breaking`, plus command-specific extras.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use super::fsurface::SurfaceSample;
use super::{CheckResult, LabError};
use crate::solver::TrajectoryRecord;

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trajectory_csv(
    path: &Path,
    record: &TrajectoryRecord,
    orbit: &[(f64, f64)],
) -> Result<(), LabError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,M,m,xi,H0,H1,H2,dist_to_orbit")?;
    for i in 0..record.times.len() {
        let e = &record.extrema[i];
        let c = &record.conserved[i];
        let (xi, dist) = orbit[i];
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            fmt_g17(record.times[i]),
            fmt_g17(e.max_val),
            fmt_g17(e.min_val),
            fmt_g17(xi),
            fmt_g17(c.h0),
            fmt_g17(c.h1),
            fmt_g17(c.h2),
            fmt_g17(dist),
        )?;
    }
    Ok(())
}

pub fn write_fields_csv(path: &Path, record: &TrajectoryRecord) -> Result<(), LabError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,x,u")?;
    for (t, field) in record.times.iter().zip(&record.fields) {
        let grid = field.grid();
        for (j, &u) in field.values().iter().enumerate() {
            writeln!(w, "{},{},{}", fmt_g17(*t), fmt_g17(grid.node(j)), fmt_g17(u))?;
        }
    }
    Ok(())
}

pub fn write_surface_csv(path: &Path, samples: &[SurfaceSample]) -> Result<(), LabError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "M,m,F,gradnorm")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_g17(s.max),
            fmt_g17(s.min),
            fmt_g17(s.f),
            fmt_g17(s.gradnorm),
        )?;
    }
    Ok(())
}

/// JSON summary written by every subcommand.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub command: String,
    pub config: Value,
    pub checks: Vec<CheckResult>,
    pub sup_orbital_distance: Option<f64>,
    pub breaking: Option<bool>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl Summary {
    pub fn new(command: &str, config: Value) -> Self {
        Self {
            command: command.to_string(),
            config,
            checks: Vec::new(),
            sup_orbital_distance: None,
            breaking: None,
            extra: Map::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), LabError> {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, self)
            .map_err(|e| LabError::BadConfig(format!("summary serialization: {e}")))?;
        writeln!(w)?;
        Ok(())
    }
}
