//! Qubit Hamiltonians written as sums of Pauli strings, and their thermal
//! states.

use std::fmt;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::DensityMatrix;
use crate::{CMatrix, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let entries = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        CMatrix::from_row_slice(2, 2, &entries)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    /// One label per site.
    pub ops: Vec<Pauli>,
}

impl PauliTerm {
    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        self.ops.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn label(&self) -> String {
        self.ops.iter().map(|p| p.to_string()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct PauliStringHamiltonian {
    n: usize,
    terms: Vec<PauliTerm>,
    field_strength: f64,
}

impl PauliStringHamiltonian {
    pub fn new(n: usize, terms: Vec<PauliTerm>, field_strength: f64) -> Result<Self> {
        if n == 0 || n > 14 {
            return Err(Error::InvalidParameter(format!("unsupported qubit count {n}")));
        }
        if let Some(t) = terms.iter().find(|t| t.ops.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "term {} does not act on {n} sites",
                t.label()
            )));
        }
        Ok(Self {
            n,
            terms,
            field_strength,
        })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn field_strength(&self) -> f64 {
        self.field_strength
    }

    pub fn matrix(&self) -> CMatrix {
        let dim = 1usize << self.n;
        let mut h = CMatrix::zeros(dim, dim);
        for term in &self.terms {
            let mut op = term.ops[0].matrix();
            for p in &term.ops[1..] {
                op = op.kronecker(&p.matrix());
            }
            h += op.scale(term.coefficient);
        }
        h
    }
}

fn placed(n: usize, sites: &[(usize, Pauli)]) -> Vec<Pauli> {
    let mut ops = vec![Pauli::I; n];
    for &(s, p) in sites {
        ops[s % n] = p;
    }
    ops
}

fn cyclic_three_body(n: usize, h: f64, middles: &[Pauli]) -> Result<PauliStringHamiltonian> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "periodic three-body chain needs n >= 3, got {n}"
        )));
    }
    let mut terms = Vec::new();
    for j in 0..n {
        let left = (j + n - 1) % n;
        let right = (j + 1) % n;
        for &m in middles {
            terms.push(PauliTerm {
                coefficient: -1.0,
                ops: placed(n, &[(left, Pauli::Z), (j, m), (right, Pauli::Z)]),
            });
        }
    }
    if h != 0.0 {
        for j in 0..n {
            terms.push(PauliTerm {
                coefficient: h,
                ops: placed(n, &[(j, Pauli::X)]),
            });
        }
    }
    PauliStringHamiltonian::new(n, terms, h)
}

/// `Σ_j (-Z_{j-1} X_j Z_{j+1} + h X_j)` with periodic boundaries.
pub fn hamiltonian_h1(n: usize, h: f64) -> Result<PauliStringHamiltonian> {
    cyclic_three_body(n, h, &[Pauli::X])
}

/// `Σ_j [-Z_{j-1} (X_j + Y_j + Z_j) Z_{j+1} + h X_j]` with periodic boundaries.
pub fn hamiltonian_h2(n: usize, h: f64) -> Result<PauliStringHamiltonian> {
    cyclic_three_body(n, h, &[Pauli::X, Pauli::Y, Pauli::Z])
}

/// `exp(-H/kT) / tr exp(-H/kT)` via the eigendecomposition of `H`.
pub fn thermal_state(h: &PauliStringHamiltonian, kt: f64) -> Result<DensityMatrix> {
    if !(kt > 0.0 && kt.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "temperature kT = {kt} must be positive"
        )));
    }
    let eig = SymmetricEigen::new(h.matrix());
    let e0 = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|&e| (-(e - e0) / kt).exp()).collect();
    let z: f64 = weights.iter().sum();
    let v = &eig.eigenvectors;
    let dim = v.nrows();
    let mut scaled = v.clone();
    for (c, w) in weights.iter().enumerate() {
        let f = Complex64::new(w / z, 0.0);
        for r in 0..dim {
            scaled[(r, c)] *= f;
        }
    }
    let rho = &scaled * v.adjoint();
    let rho = (&rho + rho.adjoint()).unscale(2.0);
    DensityMatrix::from_parts(rho, vec![2; h.qubits()])
}
