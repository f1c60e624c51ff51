//! Entanglement criteria on correlation tensors.
//!
//! Each criterion evaluates one or more tests `value > threshold`; the state
//! is flagged as soon as any test exceeds its threshold by more than
//! [`VIOLATION_TOL`] (relative), so states sitting on a bound are not flagged
//! on rounding noise. Thresholds are the
//! closed-form maxima attained by biseparable (or fully separable) states:
//!
//! | id   | statistic                                         | threshold                         |
//! |------|---------------------------------------------------|-----------------------------------|
//! | T1   | `‖T‖`, three qudits                               | `√(8(d-1)(d²-1)/d³)`              |
//! | T2   | mean Ky Fan `k` of the three `1|23` unfoldings     | `(2k + √3)/3`, `k = 1..3`         |
//! | T3   | mean Ky Fan `k` of the three `2|2` matricizations | `2√k` (`k ≤ 3`), `1 + 2k/3` (`k ≤ 9`) |
//! | T4   | trace norm of every matricization                 | `Π_j √(2(d_j-1)/d_j)`             |
//! | CHSH | `σ_1² + σ_2²` of the two-qubit correlation matrix | `1`                               |
//!
//! T2 also carries the single-unfolding tests with thresholds `√3, 2, 3`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::correlation::{full_correlation_tensor, BlochTensor, CorrelationTensor, MatricizationSpec};
use crate::norms::{singular_values, SingularSpectrum};
use crate::states::{DensityMatrix, PureState};
use crate::{Error, Result};

/// Relative slack a statistic must exceed its threshold by to count.
pub const VIOLATION_TOL: f64 = 1e-9;

fn exceeds(value: f64, threshold: f64) -> bool {
    value - threshold > VIOLATION_TOL * threshold.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriterionId {
    T1,
    T2,
    T3,
    T4,
    #[serde(rename = "CHSH")]
    Chsh,
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CriterionId::T1 => "T1",
            CriterionId::T2 => "T2",
            CriterionId::T3 => "T3",
            CriterionId::T4 => "T4",
            CriterionId::Chsh => "CHSH",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DetectedClass {
    Gme,
    NotFullySeparable,
    ChshViolation,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub label: String,
    pub k: Option<usize>,
    pub value: f64,
    pub threshold: f64,
    /// Row parties (0-based) of the matricization behind the test, when the
    /// test is on a single matricization.
    #[serde(skip)]
    pub rows: Option<Vec<usize>>,
}

impl TestRecord {
    fn new(label: impl Into<String>, k: Option<usize>, value: f64, threshold: f64) -> Self {
        Self {
            label: label.into(),
            k,
            value,
            threshold,
            rows: None,
        }
    }

    pub fn margin(&self) -> f64 {
        self.value - self.threshold
    }

    pub fn violated(&self) -> bool {
        exceeds(self.value, self.threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: CriterionId,
    pub tests: Vec<TestRecord>,
    pub violated: bool,
    pub margin: f64,
    pub detected_class: DetectedClass,
}

impl CriterionResult {
    fn from_tests(criterion: CriterionId, tests: Vec<TestRecord>, class: DetectedClass) -> Self {
        let margin = tests.iter().map(TestRecord::margin).fold(f64::NEG_INFINITY, f64::max);
        let violated = tests.iter().any(TestRecord::violated);
        Self {
            criterion,
            tests,
            violated,
            margin,
            detected_class: if violated { class } else { DetectedClass::None },
        }
    }

    /// Test with the largest margin.
    pub fn best(&self) -> &TestRecord {
        self.tests
            .iter()
            .max_by(|a, b| a.margin().total_cmp(&b.margin()))
            .expect("criterion results always carry at least one test")
    }

    pub fn test(&self, label: &str, k: Option<usize>) -> Option<&TestRecord> {
        self.tests.iter().find(|t| t.label == label && t.k == k)
    }

    /// The same criterion restricted to a subset of its tests.
    pub fn restricted(&self, keep: impl Fn(&TestRecord) -> bool) -> Option<Self> {
        let tests: Vec<TestRecord> = self.tests.iter().filter(|t| keep(t)).cloned().collect();
        if tests.is_empty() {
            return None;
        }
        let class = match self.criterion {
            CriterionId::T4 => DetectedClass::NotFullySeparable,
            CriterionId::Chsh => DetectedClass::ChshViolation,
            _ => DetectedClass::Gme,
        };
        Some(Self::from_tests(self.criterion, tests, class))
    }

    /// Restriction of a T4 result to one-versus-rest unfoldings.
    pub fn unfolding_only(&self) -> Option<Self> {
        self.restricted(|t| t.rows.as_ref().is_some_and(|r| r.len() == 1))
    }
}

fn require_dims(rho: &DensityMatrix, expected: &[usize], what: &str) -> Result<()> {
    if rho.dims() != expected {
        return Err(Error::DimensionMismatch(format!(
            "{what} requires dims {expected:?}, state has {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// `√(2(d-1)/d)`, the largest 1-body tensor norm.
pub fn one_body_bound(d: usize) -> f64 {
    let d = d as f64;
    (2.0 * (d - 1.0) / d).sqrt()
}

/// `2√((d_j d_k - 1)/(d_j d_k))`, the largest 2-body tensor norm.
pub fn two_body_bound(dj: usize, dk: usize) -> f64 {
    let p = (dj * dk) as f64;
    2.0 * ((p - 1.0) / p).sqrt()
}

pub fn t1_threshold(d: usize) -> f64 {
    let d = d as f64;
    (8.0 * (d - 1.0) * (d * d - 1.0) / (d * d * d)).sqrt()
}

pub fn t2_threshold(k: usize) -> f64 {
    (2.0 * k as f64 + 3f64.sqrt()) / 3.0
}

/// Single-unfolding thresholds for `k = 1, 2, 3`.
pub fn t2_single_threshold(k: usize) -> f64 {
    match k {
        1 => 3f64.sqrt(),
        2 => 2.0,
        _ => 3.0,
    }
}

pub fn t3_threshold(k: usize) -> f64 {
    if k <= 3 {
        2.0 * (k as f64).sqrt()
    } else {
        1.0 + 2.0 * k as f64 / 3.0
    }
}

pub fn t4_threshold(dims: &[usize]) -> f64 {
    dims.iter().map(|&d| one_body_bound(d)).product()
}

fn spectra(t: &CorrelationTensor, specs: &[MatricizationSpec]) -> Result<Vec<SingularSpectrum>> {
    specs.iter().map(|s| Ok(singular_values(&t.matricize(s)?))).collect()
}

/// Standard tensor norm against the tripartite biseparable maximum.
pub fn theorem1_tripartite_gme(rho: &DensityMatrix) -> Result<CriterionResult> {
    let dims = rho.dims();
    if dims.len() != 3 || dims.iter().any(|&d| d != dims[0]) {
        return Err(Error::DimensionMismatch(format!(
            "T1 requires three parties of equal dimension, state has {dims:?}"
        )));
    }
    let t = full_correlation_tensor(rho);
    let test = TestRecord::new("full", None, t.standard_norm(), t1_threshold(dims[0]));
    Ok(CriterionResult::from_tests(
        CriterionId::T1,
        vec![test],
        DetectedClass::Gme,
    ))
}

/// Average Ky Fan norms of the three unfoldings of a three-qubit state.
pub fn theorem2_3qubit_gme(rho: &DensityMatrix) -> Result<CriterionResult> {
    require_dims(rho, &[2, 2, 2], "T2")?;
    let t = full_correlation_tensor(rho);
    let specs: Vec<MatricizationSpec> = (0..3).map(|j| MatricizationSpec::new(&[j], 3)).collect::<Result<_>>()?;
    let spectra = spectra(&t, &specs)?;
    let mut tests = Vec::new();
    for k in 1..=3 {
        let avg = spectra.iter().map(|s| s.ky_fan(k)).sum::<f64>() / 3.0;
        tests.push(TestRecord::new("avg", Some(k), avg, t2_threshold(k)));
    }
    for (spec, s) in specs.iter().zip(&spectra) {
        for k in 1..=3 {
            let mut rec = TestRecord::new(spec.label(t.parties()), Some(k), s.ky_fan(k), t2_single_threshold(k));
            rec.rows = Some(spec.rows().to_vec());
            tests.push(rec);
        }
    }
    Ok(CriterionResult::from_tests(CriterionId::T2, tests, DetectedClass::Gme))
}

/// Average Ky Fan norms of the three 2-vs-2 matricizations of a four-qubit
/// state.
pub fn theorem3_4qubit_gme(rho: &DensityMatrix) -> Result<CriterionResult> {
    require_dims(rho, &[2, 2, 2, 2], "T3")?;
    let t = full_correlation_tensor(rho);
    let specs: Vec<MatricizationSpec> = [[0, 1], [0, 2], [0, 3]]
        .iter()
        .map(|r| MatricizationSpec::new(r, 4))
        .collect::<Result<_>>()?;
    let spectra = spectra(&t, &specs)?;
    let tests = (1..=9)
        .map(|k| {
            let avg = spectra.iter().map(|s| s.ky_fan(k)).sum::<f64>() / 3.0;
            TestRecord::new("avg22", Some(k), avg, t3_threshold(k))
        })
        .collect();
    Ok(CriterionResult::from_tests(CriterionId::T3, tests, DetectedClass::Gme))
}

fn t4_from_tensor(t: &CorrelationTensor, dims: &[usize], unfoldings_only: bool) -> Result<CriterionResult> {
    let threshold = t4_threshold(dims);
    let specs: Vec<MatricizationSpec> = if unfoldings_only {
        (0..t.order())
            .map(|j| MatricizationSpec::new(&[j], t.order()))
            .collect::<Result<_>>()?
    } else {
        MatricizationSpec::all_up_to_complement(t.order())
    };
    let mut tests = Vec::with_capacity(specs.len());
    for spec in &specs {
        let value = singular_values(&t.matricize(spec)?).trace_norm();
        let mut rec = TestRecord::new(spec.label(t.parties()), None, value, threshold);
        // an unfolding's complement is also an unfolding when n = 2
        let rows = if spec.rows().len() == 1 || spec.columns().len() == 1 {
            vec![if spec.rows().len() == 1 {
                spec.rows()[0]
            } else {
                spec.columns()[0]
            }]
        } else {
            spec.rows().to_vec()
        };
        rec.rows = Some(rows);
        tests.push(rec);
    }
    Ok(CriterionResult::from_tests(
        CriterionId::T4,
        tests,
        DetectedClass::NotFullySeparable,
    ))
}

/// Trace norm of every matricization of the full tensor against the fully
/// separable maximum. Matricizations are enumerated up to `A ↔ Ā` with
/// party 1 in the row set.
pub fn theorem4_full_separability(rho: &DensityMatrix) -> Result<CriterionResult> {
    if rho.party_count() < 2 {
        return Err(Error::DimensionMismatch("T4 requires at least two parties".into()));
    }
    t4_from_tensor(&full_correlation_tensor(rho), rho.dims(), false)
}

/// T4 restricted to the `n` one-versus-rest unfoldings.
pub fn t4_unfolding_only(rho: &DensityMatrix) -> Result<CriterionResult> {
    if rho.party_count() < 2 {
        return Err(Error::DimensionMismatch("T4 requires at least two parties".into()));
    }
    t4_from_tensor(&full_correlation_tensor(rho), rho.dims(), true)
}

/// Two-qubit CHSH violation from the correlation matrix spectrum.
pub fn chsh_violation_2qubit(rho: &DensityMatrix) -> Result<CriterionResult> {
    require_dims(rho, &[2, 2], "CHSH")?;
    let t = full_correlation_tensor(rho);
    let s = singular_values(&t.matricize(&MatricizationSpec::new(&[0], 2)?)?);
    let v = s.values();
    let value = v[0] * v[0] + v[1] * v[1];
    let test = TestRecord::new("1|2", Some(2), value, 1.0);
    Ok(CriterionResult::from_tests(
        CriterionId::Chsh,
        vec![test],
        DetectedClass::ChshViolation,
    ))
}

/// Criterion selector used by the CLI, the FFI layer and noise tolerances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Criterion {
    T1,
    T2,
    T3,
    T4,
    /// T4 with one-versus-rest unfoldings only.
    T4Unfolding,
    /// T4 on a single matricization, given by its 0-based row parties.
    T4Matricization(Vec<usize>),
    Chsh,
}

impl Criterion {
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<CriterionResult> {
        match self {
            Criterion::T1 => theorem1_tripartite_gme(rho),
            Criterion::T2 => theorem2_3qubit_gme(rho),
            Criterion::T3 => theorem3_4qubit_gme(rho),
            Criterion::T4 => theorem4_full_separability(rho),
            Criterion::T4Unfolding => t4_unfolding_only(rho),
            Criterion::T4Matricization(rows) => {
                if rho.party_count() < 2 {
                    return Err(Error::DimensionMismatch("T4 requires at least two parties".into()));
                }
                let t = full_correlation_tensor(rho);
                let spec = MatricizationSpec::new(rows, t.order())?;
                let value = singular_values(&t.matricize(&spec)?).trace_norm();
                let mut rec = TestRecord::new(spec.label(t.parties()), None, value, t4_threshold(rho.dims()));
                rec.rows = Some(spec.rows().to_vec());
                Ok(CriterionResult::from_tests(
                    CriterionId::T4,
                    vec![rec],
                    DetectedClass::NotFullySeparable,
                ))
            }
            Criterion::Chsh => chsh_violation_2qubit(rho),
        }
    }

    /// Power of `(1 - p)` by which the test statistics scale under white noise.
    pub fn noise_exponent(&self) -> i32 {
        match self {
            Criterion::Chsh => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Criterion::T1 => "t1".into(),
            Criterion::T2 => "t2".into(),
            Criterion::T3 => "t3".into(),
            Criterion::T4 => "t4".into(),
            Criterion::T4Unfolding => "t4u".into(),
            Criterion::T4Matricization(rows) => {
                format!(
                    "t4@{}",
                    rows.iter().map(|r| (r + 1).to_string()).collect::<Vec<_>>().join(",")
                )
            }
            Criterion::Chsh => "chsh".into(),
        }
    }
}

impl FromStr for Criterion {
    type Err = Error;

    /// `t1`, `t2`, `t3`, `t4`, `t4u` (or `t4-unfolding`), `chsh`, and
    /// `t4@1,2` for a single matricization with 1-based row parties.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if let Some(rows) = lower.strip_prefix("t4@") {
            let rows = rows
                .split([',', '+'])
                .filter(|x| !x.is_empty())
                .map(|x| match x.parse::<usize>() {
                    Ok(p) if p >= 1 => Ok(p - 1),
                    _ => Err(Error::Parse(format!("bad party '{x}' in criterion '{s}'"))),
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Criterion::T4Matricization(rows));
        }
        match lower.as_str() {
            "t1" => Ok(Criterion::T1),
            "t2" => Ok(Criterion::T2),
            "t3" => Ok(Criterion::T3),
            "t4" => Ok(Criterion::T4),
            "t4u" | "t4-unfolding" => Ok(Criterion::T4Unfolding),
            "chsh" => Ok(Criterion::Chsh),
            _ => Err(Error::Parse(format!("unknown criterion '{s}'"))),
        }
    }
}

/// Largest white-noise level at which a pure state is still detected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseTolerance {
    pub p: f64,
    pub detected: bool,
}

/// Tolerance from a result on the noiseless state: every statistic scales as
/// `(1 - p)^e`, so test `i` fires while `p < 1 - (threshold_i / value_i)^{1/e}`.
pub fn tolerance_from_result(result: &CriterionResult, exponent: i32) -> NoiseTolerance {
    if !result.violated {
        return NoiseTolerance {
            p: 0.0,
            detected: false,
        };
    }
    let p = result
        .tests
        .iter()
        .filter(|t| t.value > 0.0)
        .map(|t| 1.0 - (t.threshold / t.value).powf(1.0 / exponent as f64))
        .fold(0.0f64, f64::max);
    NoiseTolerance {
        p: p.clamp(0.0, 1.0),
        detected: true,
    }
}

/// Analytic white-noise tolerance of `criterion` on `psi`.
pub fn white_noise_tolerance(psi: &PureState, criterion: &Criterion) -> Result<NoiseTolerance> {
    let result = criterion.evaluate(&psi.to_density())?;
    Ok(tolerance_from_result(&result, criterion.noise_exponent()))
}

/// The same tolerance located by bisection on `p`, evaluating the criterion
/// on each mixed state. Detection is monotone in `p`.
pub fn white_noise_tolerance_bisection(psi: &PureState, criterion: &Criterion, tol: f64) -> Result<NoiseTolerance> {
    let rho = psi.to_density();
    let detected_at = |p: f64| -> Result<bool> { Ok(criterion.evaluate(&rho.mix_with_white_noise(p)?)?.violated) };
    if !detected_at(0.0)? {
        return Ok(NoiseTolerance {
            p: 0.0,
            detected: false,
        });
    }
    if detected_at(1.0)? {
        return Ok(NoiseTolerance { p: 1.0, detected: true });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if detected_at(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(NoiseTolerance {
        p: 0.5 * (lo + hi),
        detected: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    /// `‖T^{(j)}‖ ≤ √(2(d-1)/d)`
    OneBody,
    /// `‖T^{(j,k)}‖ ≤ 2√((d_j d_k - 1)/(d_j d_k))`
    TwoBody,
    /// `‖T^{(j,l)}‖_k ≤ k` for qubit pairs
    QubitPairKyFan,
    /// `‖T^{(j,l,m)}‖ ≤ 2` for qubit triples
    QubitTripleNorm,
    /// `‖T^{(j,l,m)}_{j|lm}‖_k ≤ 2√k` for qubit triples
    QubitTripleKyFan,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub bound: BoundKind,
    pub parties: Vec<usize>,
    pub k: Option<usize>,
    pub value: f64,
    pub limit: f64,
}

impl BoundCheck {
    pub fn slack(&self) -> f64 {
        self.limit - self.value
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundAudit {
    pub checks: Vec<BoundCheck>,
}

impl BoundAudit {
    pub fn min_slack(&self) -> f64 {
        self.checks.iter().map(BoundCheck::slack).fold(f64::INFINITY, f64::min)
    }

    pub fn of_kind(&self, kind: BoundKind) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(move |c| c.bound == kind)
    }
}

/// Check every applicable norm bound on every 1-, 2- and 3-body tensor.
pub fn meaningful_bound_audit(rho: &DensityMatrix) -> Result<BoundAudit> {
    let bloch = BlochTensor::new(rho);
    let dims = rho.dims();
    let n = dims.len();
    let mut checks = Vec::new();

    for (j, &d) in dims.iter().enumerate() {
        let t = bloch.m_body(&[j])?;
        checks.push(BoundCheck {
            bound: BoundKind::OneBody,
            parties: vec![j],
            k: None,
            value: t.standard_norm(),
            limit: one_body_bound(d),
        });
    }
    for j in 0..n {
        for l in (j + 1)..n {
            let t = bloch.m_body(&[j, l])?;
            checks.push(BoundCheck {
                bound: BoundKind::TwoBody,
                parties: vec![j, l],
                k: None,
                value: t.standard_norm(),
                limit: two_body_bound(dims[j], dims[l]),
            });
            if dims[j] == 2 && dims[l] == 2 {
                let s = singular_values(&t.matricize(&MatricizationSpec::new(&[0], 2)?)?);
                for k in 1..=3 {
                    checks.push(BoundCheck {
                        bound: BoundKind::QubitPairKyFan,
                        parties: vec![j, l],
                        k: Some(k),
                        value: s.ky_fan(k),
                        limit: k as f64,
                    });
                }
            }
        }
    }
    for j in 0..n {
        for l in (j + 1)..n {
            for m in (l + 1)..n {
                if dims[j] != 2 || dims[l] != 2 || dims[m] != 2 {
                    continue;
                }
                let t = bloch.m_body(&[j, l, m])?;
                checks.push(BoundCheck {
                    bound: BoundKind::QubitTripleNorm,
                    parties: vec![j, l, m],
                    k: None,
                    value: t.standard_norm(),
                    limit: 2.0,
                });
                for row in 0..3 {
                    let s = singular_values(&t.matricize(&MatricizationSpec::new(&[row], 3)?)?);
                    for k in 1..=3 {
                        checks.push(BoundCheck {
                            bound: BoundKind::QubitTripleKyFan,
                            parties: vec![j, l, m],
                            k: Some(k),
                            value: s.ky_fan(k),
                            limit: 2.0 * (k as f64).sqrt(),
                        });
                    }
                }
            }
        }
    }
    Ok(BoundAudit { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{dicke_state, ghz_state, maximally_mixed, random, w_state};

    const SQRT3: f64 = 1.7320508075688772;

    #[test]
    fn thresholds() {
        assert!((t1_threshold(2) - SQRT3).abs() < 1e-15);
        assert!((t2_threshold(2) - (4.0 + SQRT3) / 3.0).abs() < 1e-15);
        assert_eq!(t3_threshold(4), 1.0 + 8.0 / 3.0);
        assert!((t3_threshold(3) - 2.0 * SQRT3).abs() < 1e-15);
        assert_eq!(t4_threshold(&[2, 2, 2]), 1.0);
        assert!((t4_threshold(&[3, 3]) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn t1_examples() {
        let r = theorem1_tripartite_gme(&ghz_state(2, 3).unwrap().to_density()).unwrap();
        assert!(r.violated);
        assert_eq!(r.detected_class, DetectedClass::Gme);
        assert!((r.tests[0].value - 2.0).abs() < 1e-12);
        let r = theorem1_tripartite_gme(&w_state(2).unwrap().to_density()).unwrap();
        assert!(r.violated);
        let r = theorem1_tripartite_gme(&maximally_mixed(&[2, 2, 2]).unwrap()).unwrap();
        assert!(!r.violated);
        assert_eq!(r.detected_class, DetectedClass::None);
        assert!(matches!(
            theorem1_tripartite_gme(&maximally_mixed(&[2, 3, 2]).unwrap()),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(theorem1_tripartite_gme(&maximally_mixed(&[2, 2]).unwrap()).is_err());
    }

    #[test]
    fn t2_ghz_average() {
        let r = theorem2_3qubit_gme(&ghz_state(2, 3).unwrap().to_density()).unwrap();
        let k2 = r.test("avg", Some(2)).unwrap();
        assert!((k2.value - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(r.violated);
        assert_eq!(r.tests.len(), 12);
        assert!(theorem2_3qubit_gme(&maximally_mixed(&[2, 2]).unwrap()).is_err());
    }

    #[test]
    fn t3_rejects_wrong_dims_and_noise() {
        assert!(
            !theorem3_4qubit_gme(&maximally_mixed(&[2; 4]).unwrap())
                .unwrap()
                .violated
        );
        assert!(theorem3_4qubit_gme(&maximally_mixed(&[2; 3]).unwrap()).is_err());
        assert!(
            theorem3_4qubit_gme(&dicke_state(4, 2).unwrap().to_density())
                .unwrap()
                .violated
        );
    }

    #[test]
    fn t4_enumerates_and_dominates_unfoldings() {
        let rho = dicke_state(4, 1).unwrap().to_density();
        let full = theorem4_full_separability(&rho).unwrap();
        assert_eq!(full.tests.len(), 7);
        let unf = full.unfolding_only().unwrap();
        assert_eq!(unf.tests.len(), 4);
        let direct = t4_unfolding_only(&rho).unwrap();
        assert!((unf.margin - direct.margin).abs() < 1e-12);
        assert!(full.margin >= direct.margin);
        let two = theorem4_full_separability(&random::random_mixed_state(&[2, 3], 1).unwrap()).unwrap();
        assert_eq!(two.tests.len(), 1);
        assert!(two.unfolding_only().is_some());
        assert!(theorem4_full_separability(&maximally_mixed(&[3]).unwrap()).is_err());
    }

    #[test]
    fn chsh_examples() {
        let bell = ghz_state(2, 2).unwrap().to_density();
        let r = chsh_violation_2qubit(&bell).unwrap();
        assert!((r.tests[0].value - 2.0).abs() < 1e-12);
        assert_eq!(r.detected_class, DetectedClass::ChshViolation);
        assert!(
            !chsh_violation_2qubit(&maximally_mixed(&[2, 2]).unwrap())
                .unwrap()
                .violated
        );
        for seed in 0..20 {
            let p = random::random_product_pure(&[2, 2], seed).unwrap().to_density();
            assert!(chsh_violation_2qubit(&p).unwrap().tests[0].value <= 1.0 + 1e-12);
        }
        assert!(chsh_violation_2qubit(&maximally_mixed(&[2, 3]).unwrap()).is_err());
    }

    #[test]
    fn tie_is_not_a_violation() {
        let tests = vec![TestRecord::new("x", None, 1.0, 1.0)];
        let r = CriterionResult::from_tests(CriterionId::T4, tests, DetectedClass::NotFullySeparable);
        assert!(!r.violated);
        assert_eq!(r.margin, 0.0);
    }

    #[test]
    fn ghz_t1_tolerance() {
        let t = white_noise_tolerance(&ghz_state(2, 3).unwrap(), &Criterion::T1).unwrap();
        assert!(t.detected);
        assert!((t.p - (1.0 - SQRT3 / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn undetected_state_has_zero_tolerance() {
        let prod = random::random_product_pure(&[2, 2, 2], 3).unwrap();
        let t = white_noise_tolerance(&prod, &Criterion::T2).unwrap();
        assert!(!t.detected);
        assert_eq!(t.p, 0.0);
        let b = white_noise_tolerance_bisection(&prod, &Criterion::T2, 1e-9).unwrap();
        assert!(!b.detected);
    }

    #[test]
    fn chsh_tolerance_uses_quadratic_scaling() {
        let bell = ghz_state(2, 2).unwrap();
        let a = white_noise_tolerance(&bell, &Criterion::Chsh).unwrap();
        let b = white_noise_tolerance_bisection(&bell, &Criterion::Chsh, 1e-10).unwrap();
        assert!((a.p - (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
        assert!((a.p - b.p).abs() < 1e-6);
    }

    #[test]
    fn criterion_parsing() {
        assert_eq!("T2".parse::<Criterion>().unwrap(), Criterion::T2);
        assert_eq!("t4-unfolding".parse::<Criterion>().unwrap(), Criterion::T4Unfolding);
        assert_eq!(
            "t4@1,2".parse::<Criterion>().unwrap(),
            Criterion::T4Matricization(vec![0, 1])
        );
        assert!("t9".parse::<Criterion>().is_err());
        assert!("t4@0".parse::<Criterion>().is_err());
    }

    #[test]
    fn json_shape() {
        let r = theorem1_tripartite_gme(&ghz_state(2, 3).unwrap().to_density()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["criterion"], "T1");
        assert_eq!(v["detected_class"], "GME");
        assert_eq!(v["violated"], true);
        let keys: Vec<&String> = v["tests"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, vec!["k", "label", "threshold", "value"]);
        let chsh = chsh_violation_2qubit(&maximally_mixed(&[2, 2]).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&chsh).unwrap();
        assert_eq!(v["criterion"], "CHSH");
        assert_eq!(v["detected_class"], "NONE");
    }

    #[test]
    fn audit_equality_cases() {
        let ghz = meaningful_bound_audit(&ghz_state(2, 3).unwrap().to_density()).unwrap();
        assert!(ghz.min_slack() > -1e-9);
        let triple = ghz.of_kind(BoundKind::QubitTripleNorm).next().unwrap();
        assert!(triple.slack().abs() < 1e-12);
        let bell = meaningful_bound_audit(&ghz_state(2, 2).unwrap().to_density()).unwrap();
        assert!(bell.of_kind(BoundKind::TwoBody).all(|c| c.slack().abs() < 1e-12));
        assert!(bell.of_kind(BoundKind::QubitPairKyFan).all(|c| c.slack().abs() < 1e-12));
        let prod = meaningful_bound_audit(&random::random_product_pure(&[3, 4], 2).unwrap().to_density()).unwrap();
        assert!(prod.of_kind(BoundKind::OneBody).all(|c| c.slack().abs() < 1e-12));
    }
}
