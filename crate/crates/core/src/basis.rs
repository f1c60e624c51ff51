//! Local operator bases.
//!
//! For a `d`-level system the basis is `{λ_0 = I, λ_1, …, λ_{d²-1}}` where the
//! `λ_m` (`m ≥ 1`) are the generalized Gell-Mann matrices scaled so that
//! `tr(λ_m λ_n) = 2 δ_mn`. With this normalization the qubit generators are
//! exactly the Pauli matrices `X, Y, Z`.
//!
//! Generator order is fixed: the symmetric block `E_jk + E_kj`, then the
//! antisymmetric block `-i E_jk + i E_kj` (both over `j < k` in lexicographic
//! order), then the `d - 1` diagonal generators.

use num_complex::Complex64;

use crate::{CMatrix, Error, Result};

/// Tolerance used by [`OperatorBasis::validate`].
pub const BASIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    generators: Vec<CMatrix>,
}

impl OperatorBasis {
    /// Generalized Gell-Mann generators of `SU(d)`.
    pub fn su(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut generators = Vec::with_capacity(d * d - 1);

        for j in 0..d {
            for k in (j + 1)..d {
                let mut g = CMatrix::from_element(d, d, zero);
                g[(j, k)] = Complex64::new(1.0, 0.0);
                g[(k, j)] = Complex64::new(1.0, 0.0);
                generators.push(g);
            }
        }
        for j in 0..d {
            for k in (j + 1)..d {
                let mut g = CMatrix::from_element(d, d, zero);
                g[(j, k)] = Complex64::new(0.0, -1.0);
                g[(k, j)] = Complex64::new(0.0, 1.0);
                generators.push(g);
            }
        }
        for l in 1..d {
            let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
            let mut g = CMatrix::from_element(d, d, zero);
            for m in 0..l {
                g[(m, m)] = Complex64::new(scale, 0.0);
            }
            g[(l, l)] = Complex64::new(-(l as f64) * scale, 0.0);
            generators.push(g);
        }

        Ok(Self { dim: d, generators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `d² - 1` traceless generators, `λ_1 … λ_{d²-1}`.
    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn identity(&self) -> CMatrix {
        CMatrix::identity(self.dim, self.dim)
    }

    /// Identity followed by the generators: `λ_0, λ_1, …`.
    pub fn with_identity(&self) -> Vec<CMatrix> {
        let mut ops = Vec::with_capacity(self.generators.len() + 1);
        ops.push(self.identity());
        ops.extend(self.generators.iter().cloned());
        ops
    }

    /// Expansion coefficients of a Hermitian operator:
    /// `H = (tr H / d) I + ½ Σ_m c_m λ_m` with `c_m = tr(H λ_m)`.
    pub fn coefficients(&self, h: &CMatrix) -> Vec<f64> {
        self.generators.iter().map(|g| trace_of_product(h, g).re).collect()
    }

    /// Check hermiticity, tracelessness and orthonormality of the generators.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        for (m, g) in self.generators.iter().enumerate() {
            if (g - g.adjoint()).iter().any(|z| z.norm() > BASIS_TOL) {
                return Err(Error::InvalidParameter(format!("generator {} is not Hermitian", m + 1)));
            }
            if g.trace().norm() > BASIS_TOL {
                return Err(Error::InvalidParameter(format!("generator {} is not traceless", m + 1)));
            }
            for (n, h) in self.generators.iter().enumerate() {
                let expected = if m == n { 2.0 } else { 0.0 };
                if (trace_of_product(g, h) - expected).norm() > BASIS_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "generators {} and {} violate tr(λ_m λ_n) = 2δ_mn",
                        m + 1,
                        n + 1
                    )));
                }
            }
        }
        if self.generators.len() != d * d - 1 {
            return Err(Error::InvalidParameter("wrong generator count".into()));
        }
        Ok(())
    }
}

/// Generalized Gell-Mann basis for local dimension `d`; see [`OperatorBasis::su`].
pub fn build_su_generators(d: usize) -> Result<OperatorBasis> {
    OperatorBasis::su(d)
}

/// `tr(A B)` without forming the product.
pub(crate) fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}
