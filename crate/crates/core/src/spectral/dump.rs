//! Binary field dump.
//!
//! Layout (all little-endian):
//! `"FWF1"` magic (4 bytes), `dim` as u32, per-axis point counts as u64,
//! per-axis extents as f64, domain tag byte (0 = space, 1 = frequency),
//! then `(re, im)` f64 pairs in row-major order.

use num_complex::Complex64;
use std::io::{Read, Write};

use super::field::{Domain, Field};
use super::grid::Grid;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"FWF1";

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidParameter(format!("field dump i/o failed: {e}"))
}

pub fn write_field<W: Write>(mut w: W, field: &Field) -> Result<()> {
    let grid = field.grid();
    w.write_all(MAGIC).map_err(io_err)?;
    w.write_all(&(grid.dim() as u32).to_le_bytes()).map_err(io_err)?;
    for axis in 0..grid.dim() {
        w.write_all(&(grid.points(axis) as u64).to_le_bytes())
            .map_err(io_err)?;
    }
    for axis in 0..grid.dim() {
        w.write_all(&grid.extent(axis).to_le_bytes()).map_err(io_err)?;
    }
    let tag: u8 = match field.domain() {
        Domain::Space => 0,
        Domain::Frequency => 1,
    };
    w.write_all(&[tag]).map_err(io_err)?;
    for v in field.samples() {
        w.write_all(&v.re.to_le_bytes()).map_err(io_err)?;
        w.write_all(&v.im.to_le_bytes()).map_err(io_err)?;
    }
    Ok(())
}

pub fn read_field<R: Read>(mut r: R) -> Result<Field> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(io_err)?;
    if &magic != MAGIC {
        return Err(Error::InvalidParameter(
            "not a field dump (bad magic)".into(),
        ));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4).map_err(io_err)?;
    let dim = u32::from_le_bytes(b4) as usize;
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidParameter(format!(
            "field dump dimension {dim} out of range"
        )));
    }
    let mut b8 = [0u8; 8];
    let mut n = Vec::with_capacity(dim);
    for _ in 0..dim {
        r.read_exact(&mut b8).map_err(io_err)?;
        n.push(u64::from_le_bytes(b8) as usize);
    }
    let mut l = Vec::with_capacity(dim);
    for _ in 0..dim {
        r.read_exact(&mut b8).map_err(io_err)?;
        l.push(f64::from_le_bytes(b8));
    }
    let mut tag = [0u8; 1];
    r.read_exact(&mut tag).map_err(io_err)?;
    let domain = match tag[0] {
        0 => Domain::Space,
        1 => Domain::Frequency,
        other => {
            return Err(Error::InvalidParameter(format!(
                "field dump domain tag {other} out of range"
            )))
        }
    };
    let grid = Grid::new_per_axis(n, l)?;
    let total = grid.total_points();
    let mut samples = Vec::with_capacity(total);
    for _ in 0..total {
        r.read_exact(&mut b8).map_err(io_err)?;
        let re = f64::from_le_bytes(b8);
        r.read_exact(&mut b8).map_err(io_err)?;
        let im = f64::from_le_bytes(b8);
        samples.push(Complex64::new(re, im));
    }
    Field::from_samples(grid, samples, domain)
}
