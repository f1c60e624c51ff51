//! Grid scans over the two-parameter mixture families and the thermal
//! states, emitted as CSV.
//!
//! Cells are evaluated independently on a dedicated thread pool; rows are
//! written in grid order (first axis slowest) whatever the completion order,
//! so output depends only on the configuration.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::criteria::{theorem3_4qubit_gme, theorem4_full_separability, Criterion, CriterionResult};
use crate::io::fmt_f64;
use crate::states::{self, DensityMatrix};
use crate::{Error, Result};

/// Evenly spaced grid `min:max:points`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidParameter(format!(
                "axis needs at least 2 points, got {points}"
            )));
        }
        if !(min.is_finite() && max.is_finite()) || max < min {
            return Err(Error::InvalidParameter(format!("bad axis range {min}:{max}")));
        }
        Ok(Self { min, max, points })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.points - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Parse(format!("axis '{s}' is not min:max:points"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let min = parts[0].trim().parse().map_err(|_| bad())?;
        let max = parts[1].trim().parse().map_err(|_| bad())?;
        let points = parts[2].trim().parse().map_err(|_| bad())?;
        Axis::new(min, max, points)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", fmt_f64(self.min), fmt_f64(self.max), self.points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanFamily {
    Fig1 { d: usize },
    Fig3,
    ThermalH1 { n: usize },
    ThermalH2 { n: usize },
}

impl ScanFamily {
    pub fn is_region(&self) -> bool {
        matches!(self, ScanFamily::Fig1 { .. } | ScanFamily::Fig3)
    }

    fn region_state(&self, alpha: f64, beta: f64) -> Result<DensityMatrix> {
        match *self {
            ScanFamily::Fig1 { d } => states::figure1_family(alpha, beta, d),
            ScanFamily::Fig3 => states::figure3_family(alpha, beta),
            _ => Err(Error::InvalidParameter(format!("{self} is not a mixture family"))),
        }
    }

    fn thermal_state(&self, h: f64, kt: f64) -> Result<DensityMatrix> {
        let ham = match *self {
            ScanFamily::ThermalH1 { n } => states::hamiltonian_h1(n, h)?,
            ScanFamily::ThermalH2 { n } => states::hamiltonian_h2(n, h)?,
            _ => return Err(Error::InvalidParameter(format!("{self} is not a thermal family"))),
        };
        states::thermal_state(&ham, kt)
    }
}

impl FromStr for ScanFamily {
    type Err = Error;

    /// `fig1[:d=N]`, `fig3`, `thermal-h1[:n=N]`, `thermal-h2[:n=N]`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, body) = s.split_once(':').unwrap_or((s, ""));
        let mut value: Option<(String, usize)> = None;
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in '{s}'")))?;
            let v = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer in '{s}'")))?;
            if value.replace((k.trim().to_ascii_lowercase(), v)).is_some() {
                return Err(Error::Parse(format!("too many parameters in '{s}'")));
            }
        }
        let take = |key: &str, default: usize| -> Result<usize> {
            match &value {
                None => Ok(default),
                Some((k, v)) if k == key => Ok(*v),
                Some((k, _)) => Err(Error::Parse(format!("unknown parameter '{k}' in '{s}'"))),
            }
        };
        match name.trim().to_ascii_lowercase().as_str() {
            "fig1" => Ok(ScanFamily::Fig1 { d: take("d", 4)? }),
            "fig3" => {
                take("", 0)?;
                Ok(ScanFamily::Fig3)
            }
            "thermal-h1" => Ok(ScanFamily::ThermalH1 { n: take("n", 4)? }),
            "thermal-h2" => Ok(ScanFamily::ThermalH2 { n: take("n", 4)? }),
            other => Err(Error::Parse(format!("unknown scan family '{other}'"))),
        }
    }
}

impl fmt::Display for ScanFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanFamily::Fig1 { d } => write!(f, "fig1:d={d}"),
            ScanFamily::Fig3 => write!(f, "fig3"),
            ScanFamily::ThermalH1 { n } => write!(f, "thermal-h1:n={n}"),
            ScanFamily::ThermalH2 { n } => write!(f, "thermal-h2:n={n}"),
        }
    }
}

/// Scan setup. Region scans use axes `(alpha, beta)`, thermal scans
/// `(h, kT)`; the first axis varies slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub family: ScanFamily,
    pub axes: [Axis; 2],
    /// Criteria for region scans; thermal scans always report T4, its
    /// unfolding restriction and T3.
    pub criteria: Vec<Criterion>,
    /// `0` means the number of available cores.
    pub workers: usize,
    pub seed: u64,
}

impl ScanConfig {
    pub fn region(family: ScanFamily, criteria: Vec<Criterion>) -> Result<Self> {
        Ok(Self {
            family,
            axes: [Axis::new(0.0, 1.0, 101)?, Axis::new(0.0, 1.0, 101)?],
            criteria,
            workers: 0,
            seed: 0,
        })
    }

    pub fn thermal(family: ScanFamily) -> Result<Self> {
        Ok(Self {
            family,
            axes: [Axis::new(0.0, 2.0, 41)?, Axis::new(0.05, 3.0, 60)?],
            criteria: vec![Criterion::T4, Criterion::T4Unfolding, Criterion::T3],
            workers: 0,
            seed: 0,
        })
    }

    fn axis_names(&self) -> [&'static str; 2] {
        if self.family.is_region() {
            ["alpha", "beta"]
        } else {
            ["h", "kT"]
        }
    }

    /// Provenance line written at the top of every output file. Worker
    /// count is left out since it does not affect the results.
    pub fn provenance(&self, command: &str) -> String {
        let [a, b] = self.axis_names();
        let crit: Vec<String> = self.criteria.iter().map(Criterion::name).collect();
        format!(
            "# corrtensor {} {command} family={} {a}={} {b}={} criteria={} seed={}",
            env!("CARGO_PKG_VERSION"),
            self.family,
            self.axes[0],
            self.axes[1],
            crit.join(";"),
            self.seed
        )
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))
    }

    fn grid(&self) -> Vec<(f64, f64)> {
        let (xs, ys) = (self.axes[0].values(), self.axes[1].values());
        xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect()
    }
}

fn bool_str(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Points with `alpha + beta` above one by more than this are skipped.
const SIMPLEX_SLACK: f64 = 1e-12;

/// Region scan CSV: `alpha,beta,criterion,status,violated,best_value,threshold,margin`.
pub fn scan_region(config: &ScanConfig) -> Result<String> {
    if !config.family.is_region() {
        return Err(Error::InvalidParameter(format!(
            "scan-region needs fig1 or fig3, got {}",
            config.family
        )));
    }
    if config.criteria.is_empty() {
        return Err(Error::InvalidParameter("no criteria given".into()));
    }
    // Dimension mismatches surface before any work is scheduled.
    let probe = config.family.region_state(0.0, 0.0)?;
    for c in &config.criteria {
        c.evaluate(&probe)?;
    }

    let cells = config.grid();
    let rows: Vec<Option<Vec<CriterionResult>>> = config.pool()?.install(|| {
        cells
            .par_iter()
            .map(|&(alpha, beta)| -> Result<Option<Vec<CriterionResult>>> {
                if alpha + beta > 1.0 + SIMPLEX_SLACK {
                    return Ok(None);
                }
                let rho = config.family.region_state(alpha, beta.min(1.0 - alpha).max(0.0))?;
                config
                    .criteria
                    .iter()
                    .map(|c| c.evaluate(&rho))
                    .collect::<Result<Vec<_>>>()
                    .map(Some)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut out = String::new();
    out.push_str(&config.provenance("scan-region"));
    out.push('\n');
    out.push_str("alpha,beta,criterion,status,violated,best_value,threshold,margin\n");
    for (&(alpha, beta), row) in cells.iter().zip(&rows) {
        for (ci, c) in config.criteria.iter().enumerate() {
            let (a, b, name) = (fmt_f64(alpha), fmt_f64(beta), c.name());
            match row {
                None => writeln!(out, "{a},{b},{name},skip,,,,").unwrap(),
                Some(results) => {
                    let r = &results[ci];
                    let best = r.best();
                    writeln!(
                        out,
                        "{a},{b},{name},ok,{},{},{},{}",
                        bool_str(r.violated),
                        fmt_f64(best.value),
                        fmt_f64(best.threshold),
                        fmt_f64(r.margin)
                    )
                    .unwrap();
                }
            }
        }
    }
    Ok(out)
}

/// One grid cell of a thermal scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalCell {
    pub h: f64,
    pub kt: f64,
    pub t4: CriterionResult,
    pub t4_unfolding: CriterionResult,
    /// Present for four qubits only.
    pub t3: Option<CriterionResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalScan {
    pub cells: Vec<ThermalCell>,
    pub csv: String,
    /// Per-`h` largest `kT` at which each criterion fires.
    pub summary_csv: String,
}

impl ThermalScan {
    /// Largest detected `kT` per `h` for one column (`None` when nothing
    /// fires at that `h`).
    pub fn max_detected_kt(&self, pick: impl Fn(&ThermalCell) -> Option<bool>) -> Vec<(f64, Option<f64>)> {
        let mut out: Vec<(f64, Option<f64>)> = Vec::new();
        for cell in &self.cells {
            if out.last().map(|(h, _)| *h) != Some(cell.h) {
                out.push((cell.h, None));
            }
            if pick(cell) == Some(true) {
                let slot = &mut out.last_mut().unwrap().1;
                *slot = Some(slot.map_or(cell.kt, |k: f64| k.max(cell.kt)));
            }
        }
        out
    }
}

pub fn evaluate_thermal_cell(family: ScanFamily, h: f64, kt: f64) -> Result<ThermalCell> {
    let rho = family.thermal_state(h, kt)?;
    let t4 = theorem4_full_separability(&rho)?;
    let t4_unfolding = t4
        .unfolding_only()
        .expect("T4 results on two or more parties include unfoldings");
    let t3 = if rho.dims() == [2, 2, 2, 2] {
        Some(theorem3_4qubit_gme(&rho)?)
    } else {
        None
    };
    Ok(ThermalCell {
        h,
        kt,
        t4,
        t4_unfolding,
        t3,
    })
}

/// Thermal scan over `(h, kT)` for H1 or H2.
pub fn scan_thermal(config: &ScanConfig) -> Result<ThermalScan> {
    let family = config.family;
    if family.is_region() {
        return Err(Error::InvalidParameter(format!(
            "scan-thermal needs thermal-h1 or thermal-h2, got {family}"
        )));
    }
    if config.axes[1].min <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "kT grid must be positive, starts at {}",
            config.axes[1].min
        )));
    }
    let grid = config.grid();
    let cells: Vec<ThermalCell> = config.pool()?.install(|| {
        grid.par_iter()
            .map(|&(h, kt)| evaluate_thermal_cell(family, h, kt))
            .collect::<Result<Vec<_>>>()
    })?;

    let opt_bool = |r: &Option<CriterionResult>| r.as_ref().map_or(String::new(), |r| bool_str(r.violated).into());
    let opt_margin = |r: &Option<CriterionResult>| r.as_ref().map_or(String::new(), |r| fmt_f64(r.margin));

    let mut csv = String::new();
    csv.push_str(&config.provenance("scan-thermal"));
    csv.push('\n');
    csv.push_str("h,kT,t4_violated,t4_margin,t4_unfolding_violated,t4_unfolding_margin,t3_violated,t3_margin\n");
    for c in &cells {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(c.h),
            fmt_f64(c.kt),
            bool_str(c.t4.violated),
            fmt_f64(c.t4.margin),
            bool_str(c.t4_unfolding.violated),
            fmt_f64(c.t4_unfolding.margin),
            opt_bool(&c.t3),
            opt_margin(&c.t3)
        )
        .unwrap();
    }

    let mut scan = ThermalScan {
        cells,
        csv,
        summary_csv: String::new(),
    };
    let t4 = scan.max_detected_kt(|c| Some(c.t4.violated));
    let t4u = scan.max_detected_kt(|c| Some(c.t4_unfolding.violated));
    let t3 = scan.max_detected_kt(|c| c.t3.as_ref().map(|r| r.violated));
    let cell = |v: Option<f64>| v.map_or(String::new(), fmt_f64);
    let mut summary = String::new();
    summary.push_str(&config.provenance("scan-thermal-summary"));
    summary.push('\n');
    summary.push_str("h,max_kT_t4,max_kT_t4_unfolding,max_kT_t3\n");
    for ((a, b), c) in t4.iter().zip(&t4u).zip(&t3) {
        writeln!(summary, "{},{},{},{}", fmt_f64(a.0), cell(a.1), cell(b.1), cell(c.1)).unwrap();
    }
    scan.summary_csv = summary;
    Ok(scan)
}
