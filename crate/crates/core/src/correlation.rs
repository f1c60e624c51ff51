//! Correlation tensors and their matricizations.
//!
//! For a state `ρ` on `n` parties the Bloch tensor is
//! `𝒯_{i_1…i_n} = tr(ρ λ_{i_1} ⊗ … ⊗ λ_{i_n})` with `i_j = 0` standing for the
//! identity. The full correlation tensor `T` keeps only the entries with every
//! `i_j ≥ 1`; the `m`-body tensor `T^{(S)}` fixes `i_j = 0` outside `S`.
//!
//! Tensor entries are stored row-major (last index fastest) and indexed
//! from 0 in memory; index `i` refers to generator `λ_{i+1}` of the party's
//! [`OperatorBasis`]. Parties are 0-based in the API and 1-based in labels
//! and CSV output.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::OperatorBasis;
use crate::states::{normalize_subset, strides, DensityMatrix, PureState};
use crate::{CMatrix, Error, RMatrix, Result};

/// Default tolerance for [`check_pure_factorization`].
pub const FACTORIZATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    parties: Vec<usize>,
    shape: Vec<usize>,
    values: Vec<f64>,
}

impl CorrelationTensor {
    pub fn new(parties: Vec<usize>, shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if parties.len() != shape.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} parties but tensor of order {}",
                parties.len(),
                shape.len()
            )));
        }
        let distinct: BTreeSet<_> = parties.iter().collect();
        if distinct.len() != parties.len() {
            return Err(Error::InvalidSubset(format!("repeated party in {parties:?}")));
        }
        if values.len() != shape.iter().product::<usize>() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for shape {shape:?}",
                values.len()
            )));
        }
        Ok(Self { parties, shape, values })
    }

    /// Parties carried by each index position (0-based).
    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        let st = strides(&self.shape);
        self.values[index.iter().zip(&st).map(|(i, s)| i * s).sum::<usize>()]
    }

    /// Iterate `(multi-index, value)` pairs in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        let mut idx = vec![0usize; self.order()];
        self.values.iter().enumerate().map(move |(flat, &v)| {
            crate::states::digits(flat, &self.shape, &mut idx);
            (idx.clone(), v)
        })
    }

    /// Euclidean norm of all entries.
    pub fn standard_norm(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            parties: self.parties.clone(),
            shape: self.shape.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// `(T ∘ S)_{i…j…} = T_{i…} S_{j…}`; the party sets must be disjoint.
    pub fn outer(&self, other: &CorrelationTensor) -> Result<Self> {
        if self.parties.iter().any(|p| other.parties.contains(p)) {
            return Err(Error::InvalidSubset(format!(
                "outer product of overlapping parties {:?} and {:?}",
                self.parties, other.parties
            )));
        }
        let mut values = Vec::with_capacity(self.values.len() * other.values.len());
        for &a in &self.values {
            values.extend(other.values.iter().map(|&b| a * b));
        }
        let mut parties = self.parties.clone();
        parties.extend_from_slice(&other.parties);
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&other.shape);
        Ok(Self { parties, shape, values })
    }

    /// Matrix with rows indexed by the lexicographic join of the positions in
    /// `spec` (earliest position slowest) and columns by the remaining ones.
    pub fn matricize(&self, spec: &MatricizationSpec) -> Result<RMatrix> {
        if spec.order != self.order() {
            return Err(Error::DimensionMismatch(format!(
                "matricization of an order-{} tensor applied to order {}",
                spec.order,
                self.order()
            )));
        }
        let cols: Vec<usize> = spec.columns();
        let row_dims: Vec<usize> = spec.rows.iter().map(|&p| self.shape[p]).collect();
        let col_dims: Vec<usize> = cols.iter().map(|&p| self.shape[p]).collect();
        let row_strides = strides(&row_dims);
        let col_strides = strides(&col_dims);
        let n_rows: usize = row_dims.iter().product();
        let n_cols: usize = col_dims.iter().product();

        // per-position contribution to the row or column index
        let mut row_weight = vec![0usize; self.order()];
        let mut col_weight = vec![0usize; self.order()];
        for (k, &p) in spec.rows.iter().enumerate() {
            row_weight[p] = row_strides[k];
        }
        for (k, &p) in cols.iter().enumerate() {
            col_weight[p] = col_strides[k];
        }

        let mut m = DMatrix::zeros(n_rows, n_cols);
        let mut idx = vec![0usize; self.order()];
        for (flat, &v) in self.values.iter().enumerate() {
            crate::states::digits(flat, &self.shape, &mut idx);
            let r: usize = idx.iter().zip(&row_weight).map(|(i, w)| i * w).sum();
            let c: usize = idx.iter().zip(&col_weight).map(|(i, w)| i * w).sum();
            m[(r, c)] = v;
        }
        Ok(m)
    }

    /// Matricization selected by party labels (0-based) instead of positions.
    pub fn matricize_parties(&self, row_parties: &[usize]) -> Result<RMatrix> {
        let positions = row_parties
            .iter()
            .map(|p| {
                self.parties
                    .iter()
                    .position(|q| q == p)
                    .ok_or_else(|| Error::InvalidSubset(format!("party {} not in tensor", p + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        self.matricize(&MatricizationSpec::new(&positions, self.order())?)
    }

    /// Column vector of all entries in storage order.
    pub fn vectorize(&self) -> RMatrix {
        DMatrix::from_column_slice(self.values.len(), 1, &self.values)
    }
}

/// The set `A` of row positions of an `A,Ā` matricization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatricizationSpec {
    rows: Vec<usize>,
    order: usize,
}

impl MatricizationSpec {
    /// `rows` must be a nonempty proper subset of `0..order`. Vectorization
    /// (all positions as rows) goes through [`MatricizationSpec::vectorization`].
    pub fn new(rows: &[usize], order: usize) -> Result<Self> {
        let rows = normalize_subset(rows, order)?;
        if rows.len() == order {
            return Err(Error::InvalidSubset(
                "row set covers every index; use MatricizationSpec::vectorization".into(),
            ));
        }
        Ok(Self { rows, order })
    }

    /// All positions as rows: the tensor becomes a single column.
    pub fn vectorization(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidSubset("empty tensor".into()));
        }
        Ok(Self {
            rows: (0..order).collect(),
            order,
        })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn columns(&self) -> Vec<usize> {
        (0..self.order).filter(|p| !self.rows.contains(p)).collect()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_vectorization(&self) -> bool {
        self.rows.len() == self.order
    }

    /// Swap the roles of rows and columns.
    pub fn complement(&self) -> Result<Self> {
        Self::new(&self.columns(), self.order)
    }

    /// Every matricization up to `A ↔ Ā`, fixing position 0 in the rows.
    pub fn all_up_to_complement(order: usize) -> Vec<Self> {
        if order < 2 {
            return Vec::new();
        }
        (0..(1usize << (order - 1)) - 1)
            .map(|mask| {
                let rows: Vec<usize> = std::iter::once(0)
                    .chain((1..order).filter(|p| mask >> (p - 1) & 1 == 1))
                    .collect();
                Self { rows, order }
            })
            .collect()
    }

    /// Label such as `12|34` using 1-based party numbers.
    pub fn label(&self, parties: &[usize]) -> String {
        let sep = if parties.iter().any(|&p| p >= 9) { "," } else { "" };
        let join = |pos: &[usize]| {
            pos.iter()
                .map(|&p| (parties[p] + 1).to_string())
                .collect::<Vec<_>>()
                .join(sep)
        };
        format!("{}|{}", join(&self.rows), join(&self.columns()))
    }
}

/// Mode-by-mode contraction `out[i_1…i_n] = tr(ρ ops_1[i_1] ⊗ … ⊗ ops_n[i_n])`.
fn contract(rho: &DensityMatrix, ops: &[Vec<CMatrix>]) -> Vec<f64> {
    let dims = rho.dims();
    let n = dims.len();
    let total = rho.dimension();
    let slot: Vec<usize> = dims.iter().map(|d| d * d).collect();
    let slot_strides = strides(&slot);

    // ρ re-indexed as [(a_1,b_1), …, (a_n,b_n)]
    let m = rho.matrix();
    let mut buf = vec![Complex64::new(0.0, 0.0); slot.iter().product()];
    let mut da = vec![0; n];
    let mut db = vec![0; n];
    for a in 0..total {
        crate::states::digits(a, dims, &mut da);
        for b in 0..total {
            crate::states::digits(b, dims, &mut db);
            let idx: usize = (0..n).map(|j| (da[j] * dims[j] + db[j]) * slot_strides[j]).sum();
            buf[idx] = m[(a, b)];
        }
    }

    let mut sizes = slot.clone();
    for j in 0..n {
        let d = dims[j];
        // tr(X op) = Σ_{a,b} X_{ab} op_{ba}; keep only nonzero operator entries
        let sparse: Vec<Vec<(usize, Complex64)>> = ops[j]
            .iter()
            .map(|op| {
                let mut nz = Vec::new();
                for a in 0..d {
                    for b in 0..d {
                        let v = op[(b, a)];
                        if v.norm() != 0.0 {
                            nz.push((a * d + b, v));
                        }
                    }
                }
                nz
            })
            .collect();
        let prefix: usize = sizes[..j].iter().product();
        let suffix: usize = sizes[j + 1..].iter().product();
        let mid = sizes[j];
        let out_mid = sparse.len();
        let mut out = vec![Complex64::new(0.0, 0.0); prefix * out_mid * suffix];
        for p in 0..prefix {
            for (i, nz) in sparse.iter().enumerate() {
                let dst = (p * out_mid + i) * suffix;
                for &(c, w) in nz {
                    let src = (p * mid + c) * suffix;
                    for s in 0..suffix {
                        out[dst + s] += w * buf[src + s];
                    }
                }
            }
        }
        buf = out;
        sizes[j] = out_mid;
    }
    buf.into_iter().map(|z| z.re).collect()
}

fn bases(dims: &[usize]) -> Result<Vec<OperatorBasis>> {
    dims.iter().map(|&d| OperatorBasis::su(d)).collect()
}

/// Full correlation tensor `T_{i_1…i_n}`, all `i_j ≥ 1`.
pub fn full_correlation_tensor(rho: &DensityMatrix) -> CorrelationTensor {
    let bases = bases(rho.dims()).expect("density matrix dims are validated");
    let ops: Vec<Vec<CMatrix>> = bases.iter().map(|b| b.generators().to_vec()).collect();
    let values = contract(rho, &ops);
    CorrelationTensor {
        parties: (0..rho.party_count()).collect(),
        shape: rho.dims().iter().map(|d| d * d - 1).collect(),
        values,
    }
}

/// The complete Bloch tensor `𝒯`, with index 0 standing for the identity.
#[derive(Debug, Clone)]
pub struct BlochTensor {
    dims: Vec<usize>,
    values: Vec<f64>,
}

impl BlochTensor {
    pub fn new(rho: &DensityMatrix) -> Self {
        let bases = bases(rho.dims()).expect("density matrix dims are validated");
        let ops: Vec<Vec<CMatrix>> = bases.iter().map(|b| b.with_identity()).collect();
        Self {
            dims: rho.dims().to_vec(),
            values: contract(rho, &ops),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Entry at a full index (0 = identity).
    pub fn get(&self, index: &[usize]) -> f64 {
        let shape: Vec<usize> = self.dims.iter().map(|d| d * d).collect();
        let st = strides(&shape);
        self.values[index.iter().zip(&st).map(|(i, s)| i * s).sum::<usize>()]
    }

    /// `T^{(S)}`: identity outside `S`, generators on `S`.
    pub fn m_body(&self, parties: &[usize]) -> Result<CorrelationTensor> {
        let parties = normalize_subset(parties, self.dims.len())?;
        let shape: Vec<usize> = parties.iter().map(|&j| self.dims[j] * self.dims[j] - 1).collect();
        let count: usize = shape.iter().product();
        let mut values = Vec::with_capacity(count);
        let mut local = vec![0; parties.len()];
        let mut full = vec![0; self.dims.len()];
        for flat in 0..count {
            crate::states::digits(flat, &shape, &mut local);
            full.iter_mut().for_each(|x| *x = 0);
            for (&j, &i) in parties.iter().zip(&local) {
                full[j] = i + 1;
            }
            values.push(self.get(&full));
        }
        CorrelationTensor::new(parties, shape, values)
    }
}

/// `m`-body correlation tensor of the given parties, computed from the
/// reduced state.
pub fn m_body_tensor(rho: &DensityMatrix, parties: &[usize]) -> Result<CorrelationTensor> {
    let parties = normalize_subset(parties, rho.party_count())?;
    let reduced = rho.partial_trace(&parties)?;
    let mut t = full_correlation_tensor(&reduced);
    t.parties = parties;
    Ok(t)
}

pub fn outer_product(t: &CorrelationTensor, s: &CorrelationTensor) -> Result<CorrelationTensor> {
    t.outer(s)
}

pub fn matricize(t: &CorrelationTensor, spec: &MatricizationSpec) -> Result<RMatrix> {
    t.matricize(spec)
}

/// Whether `ψ` factorizes across `A|Ā`: every Bloch-tensor entry with
/// indices on both sides equals the product of the two marginal entries.
pub fn check_pure_factorization(psi: &PureState, subset_a: &[usize], tol: f64) -> Result<bool> {
    Ok(factorization_defect(psi, subset_a)? <= tol)
}

/// Euclidean norm of `𝒯 - 𝒯^{(A)} ∘ 𝒯^{(Ā)}` over all index blocks.
pub fn factorization_defect(psi: &PureState, subset_a: &[usize]) -> Result<f64> {
    let n = psi.party_count();
    let a = normalize_subset(subset_a, n)?;
    if a.len() == n {
        return Err(Error::InvalidSubset("partition must be proper".into()));
    }
    let bloch = BlochTensor::new(&psi.to_density());
    let shape: Vec<usize> = psi.dims().iter().map(|d| d * d).collect();
    let mut idx = vec![0; n];
    let mut idx_a = vec![0; n];
    let mut idx_b = vec![0; n];
    let mut acc = 0.0;
    for flat in 0..bloch.values.len() {
        crate::states::digits(flat, &shape, &mut idx);
        for j in 0..n {
            let in_a = a.contains(&j);
            idx_a[j] = if in_a { idx[j] } else { 0 };
            idx_b[j] = if in_a { 0 } else { idx[j] };
        }
        let diff = bloch.values[flat] - bloch.get(&idx_a) * bloch.get(&idx_b);
        acc += diff * diff;
    }
    Ok(acc.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::trace_of_product;
    use crate::states::{ghz_state, maximally_mixed, random, w_state, PureState};
    use nalgebra::DVector;

    /// Direct `tr(ρ ⊗λ)` for every index, independent of the contraction.
    fn brute_force_full(rho: &DensityMatrix) -> Vec<f64> {
        let bases: Vec<OperatorBasis> = rho.dims().iter().map(|&d| OperatorBasis::su(d).unwrap()).collect();
        let shape: Vec<usize> = rho.dims().iter().map(|d| d * d - 1).collect();
        let count: usize = shape.iter().product();
        let mut idx = vec![0; shape.len()];
        (0..count)
            .map(|flat| {
                crate::states::digits(flat, &shape, &mut idx);
                let mut op = bases[0].generators()[idx[0]].clone();
                for j in 1..shape.len() {
                    op = op.kronecker(&bases[j].generators()[idx[j]]);
                }
                trace_of_product(rho.matrix(), &op).re
            })
            .collect()
    }

    #[test]
    fn contraction_matches_brute_force() {
        for (dims, seed) in [(vec![2, 2, 2], 1), (vec![2, 3], 2), (vec![3, 2, 2], 3)] {
            let rho = random::random_mixed_state(&dims, seed).unwrap();
            let t = full_correlation_tensor(&rho);
            let bf = brute_force_full(&rho);
            for (x, y) in t.values().iter().zip(&bf) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ghz_full_tensor_norm_and_entries() {
        let t = full_correlation_tensor(&ghz_state(2, 3).unwrap().to_density());
        assert!((t.standard_norm() - 2.0).abs() < 1e-12);
        assert!((t.get(&[0, 0, 0]) - 1.0).abs() < 1e-12); // XXX
        assert!((t.get(&[0, 1, 1]) + 1.0).abs() < 1e-12); // XYY
        assert!(t.get(&[2, 2, 2]).abs() < 1e-12); // ZZZ
    }

    #[test]
    fn w_full_tensor_norm() {
        let t = full_correlation_tensor(&w_state(2).unwrap().to_density());
        // ‖T‖² = 11/3 for the three-qubit W state
        assert!((t.standard_norm() - (11.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((t.standard_norm() - 1.92).abs() < 0.01);
    }

    #[test]
    fn maximally_mixed_has_zero_tensor() {
        for dims in [vec![2, 2, 2], vec![3, 4]] {
            let t = full_correlation_tensor(&maximally_mixed(&dims).unwrap());
            assert!(t.values().iter().all(|v| v.abs() < 1e-15));
        }
    }

    #[test]
    fn qubit_entries_are_bounded_by_one() {
        for seed in 0..10 {
            let t = full_correlation_tensor(&random::random_mixed_state(&[2, 2, 2], seed).unwrap());
            assert!(t.values().iter().all(|v| v.abs() <= 1.0 + 1e-12));
        }
    }

    #[test]
    fn m_body_ghz() {
        let rho = ghz_state(2, 3).unwrap().to_density();
        let one = m_body_tensor(&rho, &[0]).unwrap();
        assert!(one.values().iter().all(|v| v.abs() < 1e-15));
        let two = m_body_tensor(&rho, &[0, 1]).unwrap();
        let m = two.matricize(&MatricizationSpec::new(&[0], 2).unwrap()).unwrap();
        let expected = RMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 0.0, 1.0]));
        assert!((m - expected).abs().max() < 1e-15);
        assert!(m_body_tensor(&rho, &[]).is_err());
    }

    #[test]
    fn m_body_from_reduced_state_matches_bloch_extraction() {
        let rho = random::random_mixed_state(&[2, 3, 2], 17).unwrap();
        let bloch = BlochTensor::new(&rho);
        for subset in [vec![0], vec![1], vec![0, 2], vec![1, 2], vec![0, 1, 2]] {
            let a = m_body_tensor(&rho, &subset).unwrap();
            let b = bloch.m_body(&subset).unwrap();
            assert_eq!(a.parties(), b.parties());
            assert_eq!(a.shape(), b.shape());
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pure_product_one_body_norm() {
        for dims in [vec![2, 3], vec![4, 2, 5]] {
            let psi = random::random_product_pure(&dims, 5).unwrap();
            let rho = psi.to_density();
            for (j, &d) in dims.iter().enumerate() {
                let t = m_body_tensor(&rho, &[j]).unwrap();
                let bound = (2.0 * (d as f64 - 1.0) / d as f64).sqrt();
                assert!((t.standard_norm() - bound).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn outer_product_basics() {
        let rho = random::random_mixed_state(&[2, 3, 2], 4).unwrap();
        let t = m_body_tensor(&rho, &[0, 1]).unwrap();
        let s = m_body_tensor(&rho, &[2]).unwrap();
        let ts = t.outer(&s).unwrap();
        assert_eq!(ts.order(), 3);
        assert_eq!(ts.parties(), &[0, 1, 2]);
        assert!((ts.standard_norm() - t.standard_norm() * s.standard_norm()).abs() < 1e-12);
        assert!(matches!(t.outer(&t), Err(Error::InvalidSubset(_))));
    }

    #[test]
    fn product_state_tensor_factorizes() {
        let a = random::random_pure_state(&[2, 3], 8).unwrap();
        let b = random::random_pure_state(&[2], 9).unwrap();
        let psi = PureState::product(&[a.clone(), b.clone()]).unwrap();
        let full = full_correlation_tensor(&psi.to_density());
        let ta = full_correlation_tensor(&a.to_density());
        let mut tb = full_correlation_tensor(&b.to_density());
        tb.parties = vec![2];
        let prod = ta.outer(&tb).unwrap();
        for (x, y) in full.values().iter().zip(prod.values()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn matricize_order_two() {
        let t = CorrelationTensor::new(vec![0, 1], vec![2, 3], vec![1., 2., 3., 4., 5., 6.]).unwrap();
        let m = t.matricize(&MatricizationSpec::new(&[0], 2).unwrap()).unwrap();
        assert_eq!(m, RMatrix::from_row_slice(2, 3, &[1., 2., 3., 4., 5., 6.]));
        let mt = t.matricize(&MatricizationSpec::new(&[1], 2).unwrap()).unwrap();
        assert_eq!(mt, m.transpose());
    }

    #[test]
    fn matricize_13_24_layout() {
        // T_{i1 i2 i3 i4} = 1000 i1 + 100 i2 + 10 i3 + i4 (1-based values)
        let shape = vec![2, 3, 2, 2];
        let mut values = Vec::new();
        for a in 1..=2 {
            for b in 1..=3 {
                for c in 1..=2 {
                    for d in 1..=2 {
                        values.push((1000 * a + 100 * b + 10 * c + d) as f64);
                    }
                }
            }
        }
        let t = CorrelationTensor::new(vec![0, 1, 2, 3], shape, values).unwrap();
        let m = t.matricize(&MatricizationSpec::new(&[0, 2], 4).unwrap()).unwrap();
        assert_eq!(m.shape(), (4, 6));
        // rows (i1, i3) with i3 fast, columns (i2, i4) with i4 fast
        assert_eq!(m[(0, 0)], 1111.0);
        assert_eq!(m[(0, 1)], 1112.0);
        assert_eq!(m[(0, 2)], 1211.0);
        assert_eq!(m[(1, 0)], 1121.0);
        assert_eq!(m[(2, 0)], 2111.0);
        assert_eq!(m[(3, 5)], 2322.0);
    }

    #[test]
    fn outer_product_matricization_is_kronecker() {
        let rho = random::random_mixed_state(&[2, 2, 3, 2], 12).unwrap();
        let t = m_body_tensor(&rho, &[0, 1]).unwrap();
        let w = m_body_tensor(&rho, &[2, 3]).unwrap();
        let tw = t.outer(&w).unwrap();
        let lhs = tw.matricize(&MatricizationSpec::new(&[0, 2], 4).unwrap()).unwrap();
        let mt = t.matricize(&MatricizationSpec::new(&[0], 2).unwrap()).unwrap();
        let mw = w.matricize(&MatricizationSpec::new(&[0], 2).unwrap()).unwrap();
        assert!((lhs - mt.kronecker(&mw)).abs().max() < 1e-12);
    }

    #[test]
    fn vectorization_is_flagged() {
        let t = full_correlation_tensor(&ghz_state(2, 3).unwrap().to_density());
        assert!(MatricizationSpec::new(&[0, 1, 2], 3).is_err());
        assert!(MatricizationSpec::new(&[], 3).is_err());
        let v = MatricizationSpec::vectorization(3).unwrap();
        assert!(v.is_vectorization());
        let m = t.matricize(&v).unwrap();
        assert_eq!(m.shape(), (27, 1));
        assert_eq!(m, t.vectorize());
    }

    #[test]
    fn specs_up_to_complement() {
        let labels: Vec<String> = MatricizationSpec::all_up_to_complement(4)
            .iter()
            .map(|s| s.label(&[0, 1, 2, 3]))
            .collect();
        assert_eq!(
            labels,
            vec!["1|234", "12|34", "13|24", "123|4", "14|23", "124|3", "134|2"]
        );
        assert_eq!(MatricizationSpec::all_up_to_complement(2).len(), 1);
        assert_eq!(MatricizationSpec::all_up_to_complement(3).len(), 3);
    }

    #[test]
    fn factorization_check() {
        // |0⟩ ⊗ |Φ+⟩
        let mut v = DVector::zeros(8);
        v[0] = Complex64::new(1.0, 0.0);
        v[3] = Complex64::new(1.0, 0.0);
        let psi = PureState::normalized(v, vec![2, 2, 2]).unwrap();
        assert!(check_pure_factorization(&psi, &[0], FACTORIZATION_TOL).unwrap());
        assert!(!check_pure_factorization(&psi, &[1], FACTORIZATION_TOL).unwrap());

        let ghz = ghz_state(2, 3).unwrap();
        for a in [vec![0], vec![1], vec![2]] {
            assert!(!check_pure_factorization(&ghz, &a, FACTORIZATION_TOL).unwrap());
        }
        let prod = random::random_product_pure(&[2, 3, 2], 1).unwrap();
        for a in [vec![0], vec![1], vec![2], vec![0, 1]] {
            assert!(check_pure_factorization(&prod, &a, FACTORIZATION_TOL).unwrap());
        }
        assert!(check_pure_factorization(&ghz, &[0, 1, 2], 1e-8).is_err());
    }
}
