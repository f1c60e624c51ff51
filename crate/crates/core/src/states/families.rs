//! Named state families: GHZ, W, Dicke, and the two mixtures scanned in the
//! detection-region plots.

use nalgebra::DVector;
use num_complex::Complex64;

use super::{validate_dims, DensityMatrix, PureState};
use crate::{CMatrix, Error, Result};

const SIMPLEX_TOL: f64 = 1e-12;

fn ket(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

/// `(1/√d) Σ_i |i⟩^{⊗n}`.
pub fn ghz_state(d: usize, n_parties: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if n_parties < 2 {
        return Err(Error::InvalidParameter(format!(
            "GHZ state needs at least 2 parties, got {n_parties}"
        )));
    }
    let dims = vec![d; n_parties];
    let mut v = DVector::zeros(d.pow(n_parties as u32));
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[ket(&vec![i; n_parties], d)] = amp;
    }
    PureState::normalized(v, dims)
}

/// Tripartite generalized W state
/// `(1/√(3(d-1))) Σ_{i=0}^{d-2} (|i,i,i+1⟩ + |i,i+1,i⟩ + |i+1,i,i⟩)`.
pub fn w_state(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut v = DVector::zeros(d * d * d);
    let amp = Complex64::new(1.0 / (3.0 * (d - 1) as f64).sqrt(), 0.0);
    for i in 0..d - 1 {
        for k in [[i, i, i + 1], [i, i + 1, i], [i + 1, i, i]] {
            v[ket(&k, d)] += amp;
        }
    }
    PureState::normalized(v, vec![d; 3])
}

/// `n`-qubit Dicke state with `k` excitations.
pub fn dicke_state(n: usize, k: usize) -> Result<PureState> {
    if n == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "Dicke state needs 0 <= k <= n, got n={n}, k={k}"
        )));
    }
    if n > 20 {
        return Err(Error::InvalidParameter(format!(
            "{n} qubits is beyond dense simulation"
        )));
    }
    let dim = 1usize << n;
    let mut v = DVector::zeros(dim);
    for idx in 0..dim {
        if idx.count_ones() as usize == k {
            v[idx] = Complex64::new(1.0, 0.0);
        }
    }
    PureState::normalized(v, vec![2; n])
}

/// `I/D`.
pub fn maximally_mixed(dims: &[usize]) -> Result<DensityMatrix> {
    let total = validate_dims(dims)?;
    DensityMatrix::from_parts(CMatrix::identity(total, total).unscale(total as f64), dims.to_vec())
}

fn check_simplex(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha >= 0.0 && beta >= 0.0 && alpha + beta <= 1.0 + SIMPLEX_TOL) {
        return Err(Error::InvalidParameter(format!(
            "(alpha, beta) = ({alpha}, {beta}) is outside the simplex alpha, beta >= 0, alpha + beta <= 1"
        )));
    }
    Ok((1.0 - alpha - beta).max(0.0))
}

/// Three-qudit family `α ρ_GHZ(d) + β ρ_W(d) + (1-α-β)/(2d-2) Σ_{i=0}^{d-2}
/// (|i,i,i+1⟩⟨·| + |i+1,i+1,i⟩⟨·|)`.
///
/// The diagonal part runs over the `2(d-1)` projectors that keep every ket
/// inside the local range, which is what the `2d - 2` normalization counts.
pub fn figure1_family(alpha: f64, beta: f64, d: usize) -> Result<DensityMatrix> {
    let rest = check_simplex(alpha, beta)?;
    let ghz = ghz_state(d, 3)?.projector();
    let w = w_state(d)?.projector();
    let mut m = ghz.scale(alpha) + w.scale(beta);
    let weight = Complex64::new(rest / (2 * d - 2) as f64, 0.0);
    for i in 0..d - 1 {
        for k in [[i, i, i + 1], [i + 1, i + 1, i]] {
            let idx = ket(&k, d);
            m[(idx, idx)] += weight;
        }
    }
    DensityMatrix::from_parts(m, vec![d; 3])
}

/// Four-qubit family `α ρ_GHZ + β ρ_{D_2^4} + (1-α-β) I/16`.
pub fn figure3_family(alpha: f64, beta: f64) -> Result<DensityMatrix> {
    let rest = check_simplex(alpha, beta)?;
    let ghz = ghz_state(2, 4)?.projector();
    let dicke = dicke_state(4, 2)?.projector();
    let mut m = ghz.scale(alpha) + dicke.scale(beta);
    let weight = Complex64::new(rest / 16.0, 0.0);
    for i in 0..16 {
        m[(i, i)] += weight;
    }
    DensityMatrix::from_parts(m, vec![2; 4])
}
