//! Singular spectra and the matrix norms built on them, plus lower bounds on
//! the trace norm of a matrix known only on some entries.

use std::collections::{BTreeMap, BTreeSet};

use log::warn;

use crate::correlation::CorrelationTensor;
use crate::{Error, RMatrix, Result};

/// Singular values in non-increasing order, clamped at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn from_values(mut values: Vec<f64>) -> Self {
        for v in &mut values {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of the `k` largest singular values. `k` beyond the spectrum length
    /// is clamped, giving the trace norm.
    pub fn ky_fan(&self, k: usize) -> f64 {
        if k > self.values.len() {
            warn!(
                "Ky Fan index {k} exceeds rank bound {}; using the trace norm",
                self.values.len()
            );
        }
        self.values.iter().take(k).sum()
    }

    pub fn trace_norm(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.values.iter().map(|s| s * s).sum::<f64>().sqrt()
    }

    /// Largest singular value (operator norm).
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

pub fn singular_values(m: &RMatrix) -> SingularSpectrum {
    if m.is_empty() {
        return SingularSpectrum { values: Vec::new() };
    }
    SingularSpectrum::from_values(m.singular_values().iter().copied().collect())
}

pub fn ky_fan_norm(m: &RMatrix, k: usize) -> f64 {
    singular_values(m).ky_fan(k)
}

pub fn trace_norm(m: &RMatrix) -> f64 {
    singular_values(m).trace_norm()
}

/// Computed from the entries, not the spectrum.
pub fn frobenius_norm(m: &RMatrix) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn standard_norm(t: &CorrelationTensor) -> f64 {
    t.standard_norm()
}

/// A matrix of known shape with some entries measured.
#[derive(Debug, Clone)]
pub struct PartialMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), f64>,
}

impl PartialMatrix {
    pub fn new(rows: usize, cols: usize, known: &[(usize, usize, f64)]) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for &(r, c, v) in known {
            if r >= rows || c >= cols {
                return Err(Error::InvalidParameter(format!(
                    "entry ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("entry ({r}, {c}) is not finite")));
            }
            if entries.insert((r, c), v).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate entry ({r}, {c})")));
            }
        }
        Ok(Self { rows, cols, entries })
    }

    /// Every entry of `m` known.
    pub fn from_full(m: &RMatrix) -> Self {
        let mut entries = BTreeMap::new();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                entries.insert((r, c), m[(r, c)]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }

    /// Keep only the listed positions of `m`.
    pub fn from_positions(m: &RMatrix, positions: &[(usize, usize)]) -> Result<Self> {
        let known: Vec<(usize, usize, f64)> = positions
            .iter()
            .map(|&(r, c)| {
                if r < m.nrows() && c < m.ncols() {
                    Ok((r, c, m[(r, c)]))
                } else {
                    Err(Error::InvalidParameter(format!("entry ({r}, {c}) outside matrix")))
                }
            })
            .collect::<Result<_>>()?;
        Self::new(m.nrows(), m.ncols(), &known)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn known_count(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Option<f64> {
        self.entries.get(&(r, c)).copied()
    }

    /// `Σ_i |a_ii|` over the known diagonal.
    pub fn diagonal_bound(&self) -> f64 {
        self.entries
            .iter()
            .filter(|((r, c), _)| r == c)
            .map(|(_, v)| v.abs())
            .sum()
    }

    /// `√Σ a²` over the known entries.
    pub fn frobenius_bound(&self) -> f64 {
        self.entries.values().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest `Σ |a_{i σ(i)}|` over a greedy matching of known entries with
    /// distinct rows and columns; a permuted diagonal bounds the trace norm
    /// the same way the main diagonal does.
    pub fn matching_bound(&self) -> f64 {
        let mut sorted: Vec<(&(usize, usize), &f64)> = self.entries.iter().collect();
        sorted.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
        let mut used_r = BTreeSet::new();
        let mut used_c = BTreeSet::new();
        let mut acc = 0.0;
        for (&(r, c), v) in sorted {
            if !used_r.contains(&r) && !used_c.contains(&c) {
                used_r.insert(r);
                used_c.insert(c);
                acc += v.abs();
            }
        }
        acc
    }

    /// Largest trace norm over fully known submatrices grown greedily from
    /// each known entry. Singular values of a submatrix never exceed those
    /// of the whole matrix.
    pub fn submatrix_bound(&self) -> f64 {
        let mut best = 0.0f64;
        for &(r0, c0) in self.entries.keys() {
            let mut rows = vec![r0];
            let mut cols = vec![c0];
            loop {
                let add_row = (0..self.rows)
                    .filter(|r| !rows.contains(r))
                    .find(|&r| cols.iter().all(|&c| self.entries.contains_key(&(r, c))));
                if let Some(r) = add_row {
                    rows.push(r);
                    continue;
                }
                let add_col = (0..self.cols)
                    .filter(|c| !cols.contains(c))
                    .find(|&c| rows.iter().all(|&r| self.entries.contains_key(&(r, c))));
                match add_col {
                    Some(c) => cols.push(c),
                    None => break,
                }
            }
            let sub = RMatrix::from_fn(rows.len(), cols.len(), |i, j| self.entries[&(rows[i], cols[j])]);
            best = best.max(trace_norm(&sub));
        }
        best
    }
}

/// Lower bound on the trace norm of any completion of `p`: the maximum of
/// the diagonal sum, the best permuted-diagonal sum, the trace norm of fully
/// known submatrices, and the Frobenius norm of the known entries.
pub fn trace_norm_lower_bound(p: &PartialMatrix) -> Result<f64> {
    if p.entries.is_empty() {
        return Err(Error::InvalidParameter("no known entries".into()));
    }
    Ok(p.diagonal_bound()
        .max(p.matching_bound())
        .max(p.submatrix_bound())
        .max(p.frobenius_bound()))
}
