//! Multipartite quantum states.
//!
//! [`DensityMatrix`] and [`PureState`] carry the list of local dimensions
//! `[d_1, …, d_n]` alongside the amplitudes; the computational basis is
//! ordered with party 1 as the most significant digit.

mod families;
mod hamiltonian;
pub mod random;

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::{CMatrix, Error, Result};

pub use families::{dicke_state, figure1_family, figure3_family, ghz_state, maximally_mixed, w_state};
pub use hamiltonian::{hamiltonian_h1, hamiltonian_h2, thermal_state, Pauli, PauliStringHamiltonian, PauliTerm};

/// Hermiticity and trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-9;
/// Normalization tolerance for pure states.
pub const PURE_NORM_TOL: f64 = 1e-12;
/// Unitarity tolerance for local unitaries.
pub const UNITARY_TOL: f64 = 1e-10;

fn validate_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::InvalidParameter("empty dimension list".into()));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDimension(d));
    }
    Ok(dims.iter().product())
}

/// Decompose a flat basis index into per-party digits.
pub(crate) fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
}

pub(crate) fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

#[derive(Debug, Clone)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
    dims: Vec<usize>,
}

impl PureState {
    /// Wrap amplitudes; fails unless the vector has unit norm.
    pub fn new(amplitudes: DVector<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let total = validate_dims(&dims)?;
        if amplitudes.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for total dimension {}",
                amplitudes.len(),
                total
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::InvalidState(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Normalize and wrap; fails on the zero vector.
    pub fn normalized(amplitudes: DVector<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Self::new(amplitudes.unscale(norm), dims)
    }

    /// `|ψ_1⟩ ⊗ … ⊗ |ψ_n⟩` from single-party states.
    pub fn product(factors: &[PureState]) -> Result<Self> {
        let Some((first, rest)) = factors.split_first() else {
            return Err(Error::InvalidParameter("empty product".into()));
        };
        let mut amps = first.amplitudes.clone();
        let mut dims = first.dims.clone();
        for f in rest {
            amps = amps.kronecker(&f.amplitudes);
            dims.extend_from_slice(&f.dims);
        }
        Self::normalized(amps, dims)
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn party_count(&self) -> usize {
        self.dims.len()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: self.projector(),
            dims: self.dims.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validating constructor: Hermitian and unit trace to [`DENSITY_TOL`],
    /// smallest eigenvalue at least [`PSD_TOL`].
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let rho = Self::from_parts(matrix, dims)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Shape checks only.
    pub(crate) fn from_parts(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let total = validate_dims(&dims)?;
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but dims multiply to {}",
                matrix.nrows(),
                matrix.ncols(),
                total
            )));
        }
        Ok(Self { matrix, dims })
    }

    pub fn validate(&self) -> Result<()> {
        let herm_err = (&self.matrix - self.matrix.adjoint())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        if herm_err > DENSITY_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (max deviation {herm_err:e})"
            )));
        }
        let tr = self.matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()).unscale(2.0);
        SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn party_count(&self) -> usize {
        self.dims.len()
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn purity(&self) -> f64 {
        crate::basis::trace_of_product(&self.matrix, &self.matrix).re
    }

    /// `p I/D + (1 - p) ρ`.
    pub fn mix_with_white_noise(&self, p: f64) -> Result<Self> {
        check_probability(p)?;
        let dim = self.dimension();
        let mut m = self.matrix.scale(1.0 - p);
        let diag = Complex64::new(p / dim as f64, 0.0);
        for i in 0..dim {
            m[(i, i)] += diag;
        }
        Ok(Self {
            matrix: m,
            dims: self.dims.clone(),
        })
    }

    /// Reduced state on the parties in `keep` (0-based, any order; the result
    /// keeps them in ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let keep = normalize_subset(keep, self.party_count())?;
        if keep.len() == self.party_count() {
            return Ok(self.clone());
        }
        let n = self.party_count();
        let traced: Vec<usize> = (0..n).filter(|j| !keep.contains(j)).collect();
        let keep_dims: Vec<usize> = keep.iter().map(|&j| self.dims[j]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&j| self.dims[j]).collect();
        let dk: usize = keep_dims.iter().product();
        let dt: usize = traced_dims.iter().product();

        let strides = strides(&self.dims);
        let offset = |k_idx: usize, t_idx: usize, kd: &mut [usize], td: &mut [usize]| {
            digits(k_idx, &keep_dims, kd);
            digits(t_idx, &traced_dims, td);
            keep.iter().zip(kd.iter()).map(|(&j, &x)| x * strides[j]).sum::<usize>()
                + traced
                    .iter()
                    .zip(td.iter())
                    .map(|(&j, &x)| x * strides[j])
                    .sum::<usize>()
        };

        let mut kd = vec![0; keep.len()];
        let mut td = vec![0; traced.len()];
        // full index for every (kept, traced) pair
        let mut full = vec![0usize; dk * dt];
        for a in 0..dk {
            for t in 0..dt {
                full[a * dt + t] = offset(a, t, &mut kd, &mut td);
            }
        }
        let mut out = CMatrix::zeros(dk, dk);
        for a in 0..dk {
            for b in 0..dk {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..dt {
                    acc += self.matrix[(full[a * dt + t], full[b * dt + t])];
                }
                out[(a, b)] = acc;
            }
        }
        Ok(Self {
            matrix: out,
            dims: keep_dims,
        })
    }

    /// `(⊗U_j) ρ (⊗U_j)†`.
    pub fn apply_local_unitaries(&self, unitaries: &[CMatrix]) -> Result<Self> {
        if unitaries.len() != self.party_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} unitaries for {} parties",
                unitaries.len(),
                self.party_count()
            )));
        }
        for (j, (u, &d)) in unitaries.iter().zip(&self.dims).enumerate() {
            if u.nrows() != d || u.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "unitary {} is {}x{}, party dimension is {}",
                    j + 1,
                    u.nrows(),
                    u.ncols(),
                    d
                )));
            }
            let dev = (u.adjoint() * u - CMatrix::identity(d, d))
                .iter()
                .fold(0.0f64, |m, z| m.max(z.norm()));
            if dev > UNITARY_TOL {
                return Err(Error::InvalidParameter(format!("matrix {} is not unitary", j + 1)));
            }
        }
        let mut full = unitaries[0].clone();
        for u in &unitaries[1..] {
            full = kron(&full, u);
        }
        Ok(Self {
            matrix: &full * &self.matrix * full.adjoint(),
            dims: self.dims.clone(),
        })
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be non-negative and sum to 1.
    pub fn mixture(terms: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidParameter("empty mixture".into()));
        };
        let total: f64 = terms.iter().map(|(w, _)| w).sum();
        if terms.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(
                "mixture weights must be a probability vector".into(),
            ));
        }
        let mut m = CMatrix::zeros(first.dimension(), first.dimension());
        for (w, rho) in terms {
            if rho.dims != first.dims {
                return Err(Error::DimensionMismatch("mixture terms have different dims".into()));
            }
            m += rho.matrix.scale(*w);
        }
        Ok(Self {
            matrix: m,
            dims: first.dims.clone(),
        })
    }
}

/// `p I_D/D + (1 - p)|ψ⟩⟨ψ|`.
pub fn white_noise_mix(psi: &PureState, p: f64) -> Result<DensityMatrix> {
    psi.to_density().mix_with_white_noise(p)
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

pub fn apply_local_unitaries(rho: &DensityMatrix, unitaries: &[CMatrix]) -> Result<DensityMatrix> {
    rho.apply_local_unitaries(unitaries)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("noise level {p} outside [0, 1]")));
    }
    Ok(())
}

/// Row-major strides of the computational basis.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for j in (0..dims.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * dims[j + 1];
    }
    s
}

/// Sorted, deduplicated, range-checked party subset.
pub(crate) fn normalize_subset(subset: &[usize], n: usize) -> Result<Vec<usize>> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("empty subset".into()));
    }
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != subset.len() {
        return Err(Error::InvalidSubset(format!("repeated party in {subset:?}")));
    }
    if let Some(&j) = s.iter().find(|&&j| j >= n) {
        return Err(Error::InvalidSubset(format!("party {} out of range 1..={n}", j + 1)));
    }
    Ok(s)
}
