//! Command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::correlation::{full_correlation_tensor, MatricizationSpec};
use crate::criteria::{tolerance_from_result, white_noise_tolerance, Criterion, CriterionResult};
use crate::io::{self, fmt_f64};
use crate::norms::singular_values;
use crate::scan::{self, Axis, ScanConfig, ScanFamily};
use crate::spec::{parse_usize_list, BuiltState, StateSpec};
use crate::states::DensityMatrix;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "corrtensor",
    version,
    about = "Entanglement detection from correlation tensors"
)]
pub struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for scans (default: available cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Seed for random state families without their own seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate detection criteria on a state.
    Detect(DetectArgs),
    /// Scan the (alpha, beta) plane of fig1 or fig3.
    ScanRegion(RegionArgs),
    /// Scan (h, kT) for the thermal states of H1 or H2.
    ScanThermal(ThermalArgs),
    /// White-noise tolerance of a criterion.
    Tolerance(ToleranceArgs),
    /// Export the correlation tensor or its matricization norms.
    Tensor(TensorArgs),
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// State, e.g. `ghz:d=2,n=3` or `file:rho.csv`.
    #[arg(long)]
    pub state: String,
    /// Comma-separated criteria (t1, t2, t3, t4, t4u, chsh, t4@1,2).
    /// Defaults to every criterion applicable to the state's dimensions.
    #[arg(long)]
    pub criteria: Option<String>,
    /// Mix the state with white noise of this weight first.
    #[arg(long)]
    pub noise: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// `fig1[:d=N]` or `fig3`.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value = "0:1:101")]
    pub alpha: String,
    #[arg(long, default_value = "0:1:101")]
    pub beta: String,
    /// Comma-separated criteria; defaults to t1 for fig1 and t3 for fig3.
    #[arg(long)]
    pub criteria: Option<String>,
}

#[derive(Debug, Args)]
pub struct ThermalArgs {
    /// `thermal-h1[:n=N]` or `thermal-h2[:n=N]`.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value = "0:2:41")]
    pub h: String,
    #[arg(long = "kt", default_value = "0.05:3:60")]
    pub kt: String,
    /// Per-h summary file; defaults to `<out>.summary.csv` when `--out` is set.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long)]
    pub criterion: String,
}

#[derive(Debug, Args)]
pub struct TensorArgs {
    #[arg(long)]
    pub state: String,
    /// Row parties (1-based, comma-separated) of one matricization.
    #[arg(long)]
    pub matricize: Option<String>,
    /// Report singular spectra and norms instead of tensor entries.
    #[arg(long)]
    pub norms: bool,
    /// Also write the density matrix to this file.
    #[arg(long)]
    pub save_state: Option<PathBuf>,
}

/// Exit status for an error: 2 usage, 3 domain mismatch, 4 I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::InvalidParameter(_) => 2,
        Error::InvalidDimension(_) | Error::DimensionMismatch(_) | Error::InvalidState(_) | Error::InvalidSubset(_) => {
            3
        }
        Error::Io(_) => 4,
    }
}

pub fn parse_criteria(list: &str) -> Result<Vec<Criterion>> {
    // `t4@1,2` swallows the following bare numbers
    let mut out: Vec<Criterion> = Vec::new();
    for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if tok.chars().all(|c| c.is_ascii_digit()) {
            match out.last_mut() {
                Some(Criterion::T4Matricization(rows)) => {
                    let p: usize = tok.parse().map_err(|_| Error::Parse(format!("bad party '{tok}'")))?;
                    if p == 0 {
                        return Err(Error::Parse("parties are 1-based".into()));
                    }
                    rows.push(p - 1);
                    continue;
                }
                _ => return Err(Error::Parse(format!("unknown criterion '{tok}'"))),
            }
        }
        out.push(tok.parse()?);
    }
    if out.is_empty() {
        return Err(Error::Parse("empty criteria list".into()));
    }
    Ok(out)
}

/// Criteria whose dimension requirements the state meets.
pub fn applicable_criteria(dims: &[usize]) -> Vec<Criterion> {
    let mut out = Vec::new();
    if dims.len() == 3 && dims.iter().all(|&d| d == dims[0]) {
        out.push(Criterion::T1);
    }
    if dims == [2, 2, 2] {
        out.push(Criterion::T2);
    }
    if dims == [2, 2, 2, 2] {
        out.push(Criterion::T3);
    }
    if dims.len() >= 2 {
        out.push(Criterion::T4);
    }
    if dims == [2, 2] {
        out.push(Criterion::Chsh);
    }
    out
}

fn build_state(spec: &str, seed: u64) -> Result<(StateSpec, BuiltState)> {
    let spec: StateSpec = spec.parse()?;
    let built = spec.build(seed)?;
    Ok((spec, built))
}

#[derive(Serialize)]
struct DetectReport<'a> {
    state: String,
    dims: &'a [usize],
    noise: f64,
    results: Vec<CriterionResult>,
}

fn detect_csv(results: &[CriterionResult], names: &[String]) -> String {
    let mut out = String::from("criterion,label,k,value,threshold,violated,margin\n");
    for (r, name) in results.iter().zip(names) {
        for t in &r.tests {
            writeln!(
                out,
                "{name},{},{},{},{},{},{}",
                t.label,
                t.k.map_or(String::new(), |k| k.to_string()),
                fmt_f64(t.value),
                fmt_f64(t.threshold),
                t.violated(),
                fmt_f64(t.margin())
            )
            .unwrap();
        }
    }
    out
}

#[derive(Serialize)]
struct MatricizationReport {
    rows: Vec<usize>,
    label: String,
    singular_values: Vec<f64>,
    ky_fan: Vec<f64>,
    trace_norm: f64,
    frobenius: f64,
}

#[derive(Serialize)]
struct NormReport {
    state: String,
    dims: Vec<usize>,
    standard_norm: f64,
    matricizations: Vec<MatricizationReport>,
}

fn norm_report(spec: &StateSpec, rho: &DensityMatrix, rows: Option<&[usize]>) -> Result<NormReport> {
    if rho.party_count() < 2 {
        return Err(Error::DimensionMismatch(
            "matricizations need at least two parties".into(),
        ));
    }
    let t = full_correlation_tensor(rho);
    let specs = match rows {
        Some(r) => vec![MatricizationSpec::new(r, t.order())?],
        None => MatricizationSpec::all_up_to_complement(t.order()),
    };
    let mut matricizations = Vec::new();
    for s in specs {
        let spectrum = singular_values(&t.matricize(&s)?);
        matricizations.push(MatricizationReport {
            rows: s.rows().iter().map(|r| r + 1).collect(),
            label: s.label(t.parties()),
            singular_values: spectrum.values().to_vec(),
            ky_fan: (1..=spectrum.len()).map(|k| spectrum.ky_fan(k)).collect(),
            trace_norm: spectrum.trace_norm(),
            frobenius: spectrum.frobenius(),
        });
    }
    Ok(NormReport {
        state: spec.to_string(),
        dims: rho.dims().to_vec(),
        standard_norm: t.standard_norm(),
        matricizations,
    })
}

fn norm_report_csv(r: &NormReport) -> String {
    let mut out = String::from("label,rows,singular_values,trace_norm,frobenius,standard_norm\n");
    let join = |v: &[f64]| v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(";");
    for m in &r.matricizations {
        let rows: Vec<String> = m.rows.iter().map(|x| x.to_string()).collect();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            m.label,
            rows.join(";"),
            join(&m.singular_values),
            fmt_f64(m.trace_norm),
            fmt_f64(m.frobenius),
            fmt_f64(r.standard_norm)
        )
        .unwrap();
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn summary_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.summary.csv"))
}

fn run_detect(cli: &Cli, args: &DetectArgs, stdout: &mut dyn Write) -> Result<()> {
    let (spec, built) = build_state(&args.state, cli.seed)?;
    let noise = args.noise.unwrap_or(0.0);
    let rho = if noise != 0.0 {
        built.density.mix_with_white_noise(noise)?
    } else {
        built.density
    };
    let criteria = match &args.criteria {
        Some(list) => parse_criteria(list)?,
        None => applicable_criteria(rho.dims()),
    };
    if criteria.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "no criterion applies to dims {:?}",
            rho.dims()
        )));
    }
    let results = criteria.iter().map(|c| c.evaluate(&rho)).collect::<Result<Vec<_>>>()?;
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&DetectReport {
            state: spec.to_string(),
            dims: rho.dims(),
            noise,
            results,
        }),
        Format::Csv => detect_csv(&results, &criteria.iter().map(Criterion::name).collect::<Vec<_>>()),
    };
    emit(cli.out.as_deref(), stdout, &text)
}

fn run_region(cli: &Cli, args: &RegionArgs, stdout: &mut dyn Write) -> Result<()> {
    let family: ScanFamily = args.family.parse()?;
    let criteria = match &args.criteria {
        Some(list) => parse_criteria(list)?,
        None => match family {
            ScanFamily::Fig3 => vec![Criterion::T3],
            _ => vec![Criterion::T1],
        },
    };
    let mut config = ScanConfig::region(family, criteria)?;
    config.axes = [args.alpha.parse::<Axis>()?, args.beta.parse::<Axis>()?];
    config.workers = cli.workers;
    config.seed = cli.seed;
    require_csv(cli)?;
    let csv = scan::scan_region(&config)?;
    emit(cli.out.as_deref(), stdout, &csv)
}

fn run_thermal(cli: &Cli, args: &ThermalArgs, stdout: &mut dyn Write) -> Result<()> {
    let family: ScanFamily = args.family.parse()?;
    let mut config = ScanConfig::thermal(family)?;
    config.axes = [args.h.parse::<Axis>()?, args.kt.parse::<Axis>()?];
    config.workers = cli.workers;
    config.seed = cli.seed;
    require_csv(cli)?;
    let result = scan::scan_thermal(&config)?;
    emit(cli.out.as_deref(), stdout, &result.csv)?;
    let summary = args.summary.clone().or_else(|| cli.out.as_deref().map(summary_path));
    match summary {
        Some(path) => fs::write(&path, &result.summary_csv)?,
        None => log::info!("no --out or --summary given; per-h summary not written"),
    }
    Ok(())
}

fn require_csv(cli: &Cli) -> Result<()> {
    if cli.format == Some(Format::Json) {
        return Err(Error::InvalidParameter("scans only produce CSV".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct ToleranceReport {
    state: String,
    criterion: String,
    p: f64,
    detected: bool,
}

fn run_tolerance(cli: &Cli, args: &ToleranceArgs, stdout: &mut dyn Write) -> Result<()> {
    let (spec, built) = build_state(&args.state, cli.seed)?;
    let criterion: Criterion = args.criterion.trim().parse()?;
    // Mixed inputs work too: every statistic is homogeneous in the traceless part.
    let tol = match &built.pure {
        Some(psi) => white_noise_tolerance(psi, &criterion)?,
        None => tolerance_from_result(&criterion.evaluate(&built.density)?, criterion.noise_exponent()),
    };
    if !tol.detected {
        log::warn!("{} does not detect {spec} even without noise", criterion.name());
    }
    let text = match cli.format {
        Some(Format::Json) => to_json(&ToleranceReport {
            state: spec.to_string(),
            criterion: criterion.name(),
            p: tol.p,
            detected: tol.detected,
        }),
        Some(Format::Csv) => format!(
            "state,criterion,p,detected\n\"{spec}\",{},{:.6},{}\n",
            criterion.name(),
            tol.p,
            tol.detected
        ),
        None => format!("{:.6}\n", tol.p),
    };
    emit(cli.out.as_deref(), stdout, &text)
}

fn run_tensor(cli: &Cli, args: &TensorArgs, stdout: &mut dyn Write) -> Result<()> {
    let (spec, built) = build_state(&args.state, cli.seed)?;
    let rho = built.density;
    if let Some(path) = &args.save_state {
        io::write_density_csv(&rho, path)?;
    }
    let text = if args.norms || args.matricize.is_some() {
        let rows = args
            .matricize
            .as_deref()
            .map(|m| {
                parse_usize_list(m)?
                    .into_iter()
                    .map(|p| {
                        p.checked_sub(1)
                            .ok_or_else(|| Error::Parse("parties are 1-based".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        let report = norm_report(&spec, &rho, rows.as_deref())?;
        match cli.format.unwrap_or(Format::Json) {
            Format::Json => to_json(&report),
            Format::Csv => norm_report_csv(&report),
        }
    } else {
        let t = full_correlation_tensor(&rho);
        match cli.format.unwrap_or(Format::Csv) {
            Format::Csv => io::tensor_to_csv(&t),
            Format::Json => to_json(&serde_json::json!({
                "state": spec.to_string(),
                "dims": rho.dims(),
                "shape": t.shape(),
                "values": t.values(),
            })),
        }
    };
    emit(cli.out.as_deref(), stdout, &text)
}

/// Run a parsed command, writing the primary output to `--out` or `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Detect(a) => run_detect(cli, a, stdout),
        Command::ScanRegion(a) => run_region(cli, a, stdout),
        Command::ScanThermal(a) => run_thermal(cli, a, stdout),
        Command::Tolerance(a) => run_tolerance(cli, a, stdout),
        Command::Tensor(a) => run_tensor(cli, a, stdout),
    }
}
