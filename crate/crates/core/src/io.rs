//! CSV formats.
//!
//! Density matrix files are sparse triplets with a dimension header:
//!
//! ```text
//! # dims=2,2
//! row,col,re,im
//! 0,0,0.5,0
//! 0,3,0.5,0
//! 3,0,0.5,0
//! 3,3,0.5,0
//! ```
//!
//! Row and column are 0-based computational basis indices; omitted entries
//! are zero. Tensor dumps list 1-based generator indices `i_1..i_n` and the
//! value. Numbers use the shortest representation that parses back to the
//! same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::correlation::CorrelationTensor;
use crate::spec::parse_usize_list;
use crate::states::DensityMatrix;
use crate::{CMatrix, Error, Result};

/// Shortest round-trip decimal form.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // normalizes -0
        return "0".into();
    }
    format!("{x}")
}

pub fn density_to_csv(rho: &DensityMatrix) -> String {
    let mut out = String::new();
    let dims: Vec<String> = rho.dims().iter().map(|d| d.to_string()).collect();
    writeln!(out, "# dims={}", dims.join(",")).unwrap();
    out.push_str("row,col,re,im\n");
    let m = rho.matrix();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            if z.re != 0.0 || z.im != 0.0 {
                writeln!(out, "{r},{c},{},{}", fmt_f64(z.re), fmt_f64(z.im)).unwrap();
            }
        }
    }
    out
}

pub fn write_density_csv(rho: &DensityMatrix, path: &Path) -> Result<()> {
    fs::write(path, density_to_csv(rho))?;
    Ok(())
}

/// Parse and validate a density matrix file body.
pub fn parse_density_csv(text: &str) -> Result<DensityMatrix> {
    let mut dims: Option<Vec<usize>> = None;
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(d) = comment.trim().strip_prefix("dims=") {
                dims = Some(parse_usize_list(d)?);
            }
            continue;
        }
        if line.starts_with("row") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!("line {}: expected row,col,re,im", lineno + 1)));
        }
        let bad = |what: &str| Error::Parse(format!("line {}: bad {what}", lineno + 1));
        let r: usize = fields[0].parse().map_err(|_| bad("row"))?;
        let c: usize = fields[1].parse().map_err(|_| bad("column"))?;
        let re: f64 = fields[2].parse().map_err(|_| bad("real part"))?;
        let im: f64 = fields[3].parse().map_err(|_| bad("imaginary part"))?;
        entries.push((r, c, Complex64::new(re, im)));
    }
    let dims = dims.ok_or_else(|| Error::Parse("missing '# dims=' header".into()))?;
    let total: usize = dims.iter().product();
    let mut m = CMatrix::zeros(total, total);
    for (r, c, z) in entries {
        if r >= total || c >= total {
            return Err(Error::Parse(format!("entry ({r}, {c}) outside {total}x{total}")));
        }
        m[(r, c)] = z;
    }
    DensityMatrix::new(m, dims)
}

pub fn read_density_csv(path: &Path) -> Result<DensityMatrix> {
    parse_density_csv(&fs::read_to_string(path)?)
}

/// `i_1,…,i_n,value` rows with 1-based indices.
pub fn tensor_to_csv(t: &CorrelationTensor) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=t.order()).map(|j| format!("i_{j}")).collect();
    writeln!(out, "{},value", header.join(",")).unwrap();
    for (idx, v) in t.entries() {
        for i in idx {
            write!(out, "{},", i + 1).unwrap();
        }
        writeln!(out, "{}", fmt_f64(v)).unwrap();
    }
    out
}
