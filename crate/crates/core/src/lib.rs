//! Detection of genuine multipartite entanglement and non-full-separability
//! from correlation tensors.
//!
//! A density matrix on `H_1 ⊗ … ⊗ H_n` is expanded in a local orthogonal
//! Hermitian operator basis (generalized Gell-Mann matrices, normalized to
//! `tr(λ_m λ_n) = 2 δ_mn`). The resulting real correlation tensors are
//! matricized along party subsets, and matrix norms of those matricizations
//! (Frobenius, Ky Fan `k`, trace) are compared against closed-form bounds
//! that every biseparable or fully separable state satisfies.
//!
//! The crate is organised bottom-up:
//!
//! - [`basis`]: local operator bases.
//! - [`states`]: density matrices, the named state families, spin
//!   Hamiltonians with their thermal states, and random test states.
//! - [`correlation`]: correlation tensors, outer products, matricization.
//! - [`norms`]: singular spectra, Ky Fan/trace/Frobenius norms and lower
//!   bounds from partially known matrices.
//! - [`criteria`]: the detection conditions and white-noise tolerances.
//! - [`spec`], [`io`], [`scan`], [`cli`]: command-line plumbing.

pub mod basis;
pub mod cli;
pub mod correlation;
pub mod criteria;
pub mod error;
pub mod io;
pub mod norms;
pub mod scan;
pub mod spec;
pub mod states;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use basis::OperatorBasis;
pub use correlation::{CorrelationTensor, MatricizationSpec};
pub use criteria::{Criterion, CriterionId, CriterionResult, DetectedClass, TestRecord};
pub use error::{Error, Result};
pub use norms::{PartialMatrix, SingularSpectrum};
pub use states::{DensityMatrix, PauliStringHamiltonian, PureState};

/// Dense complex matrix used for operators and density matrices.
pub type CMatrix = DMatrix<Complex64>;
/// Dense real matrix used for matricized tensors.
pub type RMatrix = DMatrix<f64>;
