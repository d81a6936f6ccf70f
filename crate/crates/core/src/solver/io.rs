//! Diagnostics CSV and the flat little-endian field dump with its JSON sidecar.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Field, Grid};
use super::step::Diagnostics;
use crate::error::{Error, Result};

/// `time,mass,energy,l2` followed by one `hs_<s>` column per traced order.
pub fn csv_header(diag: &Diagnostics) -> String {
    let mut cols = vec!["time".to_string(), "mass".into(), "energy".into(), "l2".into()];
    cols.extend(diag.hs.iter().map(|h| format!("hs_{}", h.s)));
    cols.join(",")
}

pub fn write_csv<W: Write>(diag: &Diagnostics, mut out: W) -> Result<()> {
    writeln!(out, "{}", csv_header(diag))?;
    for i in 0..diag.times.len() {
        write!(out, "{:e},{:e},{:e},{:e}", diag.times[i], diag.mass[i], diag.energy[i], diag.l2[i])?;
        for h in &diag.hs {
            write!(out, ",{:e}", h.values[i])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Sidecar describing a binary dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DumpDescriptor {
    pub dim: usize,
    pub points: Vec<usize>,
    pub extent: Vec<f64>,
    pub time: f64,
    pub layout: String,
    pub encoding: String,
    pub header_bytes: usize,
}

impl DumpDescriptor {
    pub fn new(grid: &Grid, time: f64) -> Self {
        DumpDescriptor {
            dim: grid.dim,
            points: grid.points.clone(),
            extent: grid.extent.clone(),
            time,
            layout: "row-major, last axis fastest".into(),
            encoding: "little-endian f64 pairs (re, im)".into(),
            header_bytes: 8 * (1 + 2 * grid.dim),
        }
    }
}

/// `u64 dim`, `u64` points per axis, `f64` extent per axis, then `re, im` per node.
pub fn write_binary<W: Write>(u: &Field, mut out: W) -> Result<()> {
    let g = &u.grid;
    out.write_all(&(g.dim as u64).to_le_bytes())?;
    for &m in &g.points {
        out.write_all(&(m as u64).to_le_bytes())?;
    }
    for &l in &g.extent {
        out.write_all(&l.to_le_bytes())?;
    }
    let mut buf = Vec::with_capacity(16 * u.values.len());
    for z in &u.values {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}

pub fn read_binary<R: Read>(mut input: R) -> Result<Field> {
    let dim = read_u64(&mut input)? as usize;
    if dim == 0 || dim > 3 {
        return Err(Error::Parse(format!("bad dimension {dim} in dump")));
    }
    let points = (0..dim).map(|_| read_u64(&mut input).map(|m| m as usize)).collect::<Result<Vec<_>>>()?;
    let extent = (0..dim).map(|_| read_f64(&mut input)).collect::<Result<Vec<_>>>()?;
    let grid = Grid::new(extent, points)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = read_f64(&mut input)?;
        values.push(Complex64::new(re, read_f64(&mut input)?));
    }
    Field::from_values(&grid, values)
}

/// Write `<stem>.bin` and `<stem>.json` into `dir`.
pub fn dump_field(u: &Field, time: f64, dir: &Path, stem: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_binary(u, std::io::BufWriter::new(fs::File::create(dir.join(format!("{stem}.bin")))?))?;
    let desc = serde_json::to_string_pretty(&DumpDescriptor::new(&u.grid, time))
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    fs::write(dir.join(format!("{stem}.json")), desc + "\n")?;
    Ok(())
}
