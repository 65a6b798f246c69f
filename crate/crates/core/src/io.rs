//! Plain-text sample dumps shared by ground-state and evolution artifacts.
//!
//! Layout (version 1): a CSV file with header `x,<name>` and one row per grid
//! point in storage order, values written with 17 significant digits. The
//! grid is recovered from the `x` column.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};

pub const FIELD_DUMP_VERSION: u32 = 1;

/// Fixed 17-significant-digit rendering used in every CSV artifact.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_field_csv<W: Write>(out: W, field: &Field, name: &str) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", name])?;
    let grid = field.grid();
    for (j, v) in field.samples().iter().enumerate() {
        w.write_record([fmt_f64(grid.coordinate(j)), fmt_f64(*v)])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a dump written by [`write_field_csv`], reconstructing its grid.
pub fn read_field_csv<R: Read>(input: R) -> Result<Field> {
    let mut r = csv::Reader::from_reader(input);
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(Error::Format(format!(
                "expected 2 columns, got {}",
                rec.len()
            )));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("bad number {s:?}: {e}")))
        };
        xs.push(parse(&rec[0])?);
        vs.push(parse(&rec[1])?);
    }
    if xs.len() < 2 {
        return Err(Error::Format("too few rows".into()));
    }
    let n = xs.len();
    let length = -2.0 * xs[0];
    let grid = Grid::new(n, length)?;
    let tol = 1e-9 * grid.spacing();
    for (j, x) in xs.iter().enumerate() {
        if (x - grid.coordinate(j)).abs() > tol {
            return Err(Error::Format(format!(
                "row {j}: x = {x} does not match a uniform grid on [-{0}, {0})",
                length / 2.0
            )));
        }
    }
    Field::new(&grid, vs)
}
