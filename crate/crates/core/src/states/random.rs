//! Seeded random states and local unitaries.
//!
//! Every generator takes a 64-bit seed and is deterministic for that seed.
//! Pure states are Haar distributed (normalized complex Gaussian vectors);
//! unitaries come from the QR decomposition of a Ginibre matrix with the
//! phase of `R`'s diagonal removed.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{digits, strides, validate_dims, DensityMatrix, PureState};
use crate::{CMatrix, Error, Result};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub(crate) fn haar_vector<R: Rng>(dims: &[usize], rng: &mut R) -> Result<PureState> {
    let total = validate_dims(dims)?;
    let v = DVector::from_fn(total, |_, _| gaussian(rng));
    PureState::normalized(v, dims.to_vec())
}

fn haar_unitary<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..d {
        let rc = r[(c, c)];
        let phase = if rc.norm() > 0.0 {
            rc / rc.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..d {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// Place a product `|a⟩_A ⊗ |b⟩_Ā` into the full party ordering.
fn embed_bipartite(a: &PureState, b: &PureState, subset_a: &[usize], dims: &[usize]) -> Result<PureState> {
    let n = dims.len();
    let subset_b: Vec<usize> = (0..n).filter(|j| !subset_a.contains(j)).collect();
    let st = strides(dims);
    let mut v = DVector::zeros(dims.iter().product());
    let mut da = vec![0; subset_a.len()];
    let mut db = vec![0; subset_b.len()];
    for (ia, &xa) in a.amplitudes().iter().enumerate() {
        digits(ia, a.dims(), &mut da);
        let off_a: usize = subset_a.iter().zip(&da).map(|(&j, &x)| x * st[j]).sum();
        for (ib, &xb) in b.amplitudes().iter().enumerate() {
            digits(ib, b.dims(), &mut db);
            let off_b: usize = subset_b.iter().zip(&db).map(|(&j, &x)| x * st[j]).sum();
            v[off_a + off_b] = xa * xb;
        }
    }
    PureState::normalized(v, dims.to_vec())
}

fn random_weights<R: Rng>(count: usize, rng: &mut R) -> Vec<f64> {
    // exponential draws give a flat Dirichlet
    let raw: Vec<f64> = (0..count).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / s).collect()
}

fn mixture_of(states: &[PureState], weights: &[f64]) -> Result<DensityMatrix> {
    let dim = states[0].amplitudes().len();
    let mut m = CMatrix::zeros(dim, dim);
    for (psi, &w) in states.iter().zip(weights) {
        m += psi.projector().scale(w);
    }
    DensityMatrix::from_parts(m, states[0].dims().to_vec())
}

/// Haar-random pure state.
pub fn random_pure_state(dims: &[usize], seed: u64) -> Result<PureState> {
    haar_vector(dims, &mut rng(seed))
}

/// Product of independent Haar-random single-party states.
pub fn random_product_pure(dims: &[usize], seed: u64) -> Result<PureState> {
    validate_dims(dims)?;
    let mut r = rng(seed);
    let factors = dims
        .iter()
        .map(|&d| haar_vector(&[d], &mut r))
        .collect::<Result<Vec<_>>>()?;
    PureState::product(&factors)
}

/// Full-rank random mixed state `G G† / tr(G G†)` with Ginibre `G`.
pub fn random_mixed_state(dims: &[usize], seed: u64) -> Result<DensityMatrix> {
    let total = validate_dims(dims)?;
    let mut r = rng(seed);
    let g = CMatrix::from_fn(total, total, |_, _| gaussian(&mut r));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m.unscale(tr);
    let m = (&m + m.adjoint()).unscale(2.0);
    DensityMatrix::from_parts(m, dims.to_vec())
}

/// Convex mixture of `term_count` pure states, each a product across an
/// independently sampled bipartition `A|Ā` with Haar-random factors.
pub fn random_biseparable_mixture(dims: &[usize], term_count: usize, seed: u64) -> Result<DensityMatrix> {
    validate_dims(dims)?;
    let n = dims.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "biseparable states need at least two parties".into(),
        ));
    }
    if term_count == 0 {
        return Err(Error::InvalidParameter("term count must be positive".into()));
    }
    let mut r = rng(seed);
    let mut states = Vec::with_capacity(term_count);
    for _ in 0..term_count {
        // nonempty proper subsets are the masks 1..2^n - 1
        let mask = r.random_range(1..(1usize << n) - 1);
        let a: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let b: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 0).collect();
        let dims_a: Vec<usize> = a.iter().map(|&j| dims[j]).collect();
        let dims_b: Vec<usize> = b.iter().map(|&j| dims[j]).collect();
        let psi_a = haar_vector(&dims_a, &mut r)?;
        let psi_b = haar_vector(&dims_b, &mut r)?;
        states.push(embed_bipartite(&psi_a, &psi_b, &a, dims)?);
    }
    let weights = random_weights(term_count, &mut r);
    mixture_of(&states, &weights)
}

/// Convex mixture of `term_count` random fully product pure states.
pub fn random_fully_separable_mixture(dims: &[usize], term_count: usize, seed: u64) -> Result<DensityMatrix> {
    validate_dims(dims)?;
    if term_count == 0 {
        return Err(Error::InvalidParameter("term count must be positive".into()));
    }
    let mut r = rng(seed);
    let mut states = Vec::with_capacity(term_count);
    for _ in 0..term_count {
        let factors = dims
            .iter()
            .map(|&d| haar_vector(&[d], &mut r))
            .collect::<Result<Vec<_>>>()?;
        states.push(PureState::product(&factors)?);
    }
    let weights = random_weights(term_count, &mut r);
    mixture_of(&states, &weights)
}

/// One Haar-random unitary per party.
pub fn random_local_unitaries(dims: &[usize], seed: u64) -> Result<Vec<CMatrix>> {
    validate_dims(dims)?;
    let mut r = rng(seed);
    Ok(dims.iter().map(|&d| haar_unitary(d, &mut r)).collect())
}
