//! Command implementations behind the `trajopt` binary.
//!
//! Each `cmd_*` function returns the process exit code and reports
//! problems on stderr.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use trajopt::benchmarks::{self, classify_zigzag, entry, relative_error, BenchmarkEntry, NAMES};
use trajopt::diagnostics::{centrality, kkt_report, CentralityReport, KktReport};
use trajopt::problem::{barrier, evaluate};
use trajopt::{scan_zeta, solve, Error as CoreError, SolveResult, Status, TraceRecord, TrajectoryConfig};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_EVALUATION: i32 = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub problem_name: String,
    pub zeta: f64,
    /// Defaults to the registry step.
    pub step: Option<f64>,
    /// Defaults to the registry budget.
    pub max_iters: Option<usize>,
    pub seed: u64,
    pub x0: Option<Vec<f64>>,
    pub trace_out: Option<PathBuf>,
    pub report_out: Option<PathBuf>,
    pub format: Format,
}

impl RunSpec {
    pub fn new(problem_name: impl Into<String>, zeta: f64) -> Self {
        Self {
            problem_name: problem_name.into(),
            zeta,
            step: None,
            max_iters: None,
            seed: 0,
            x0: None,
            trace_out: None,
            report_out: None,
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed trace at line {line}: {reason}")]
    Trace { line: usize, reason: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                CoreError::UnknownProblem(_) | CoreError::InvalidInput(_) | CoreError::DimensionMismatch { .. } => {
                    EXIT_USAGE
                }
                CoreError::InfeasibleStart { .. } | CoreError::Initialization { .. } => EXIT_INFEASIBLE,
                _ => EXIT_EVALUATION,
            },
            CliError::Io(_) | CliError::Json(_) | CliError::Trace { .. } => EXIT_IO,
        }
    }
}

fn finish(result: Result<i32, CliError>) -> i32 {
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// One row of the trace file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iter: usize,
    pub t: f64,
    pub f: f64,
    pub g_max: f64,
    pub cos_theta: Option<f64>,
    pub s_norm: f64,
    pub x: Vec<f64>,
}

impl From<&TraceRecord> for TraceRow {
    fn from(r: &TraceRecord) -> Self {
        Self {
            iter: r.iter,
            t: r.t,
            f: r.f,
            g_max: r.g_max,
            cos_theta: r.cos_theta,
            s_norm: r.s_norm,
            x: r.x.iter().copied().collect(),
        }
    }
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trace_to_csv(trace: &[TraceRecord], n: usize) -> String {
    let mut out = String::from("iter,t,f,g_max,cos_theta,s_norm");
    for i in 0..n {
        out.push_str(&format!(",x_{i}"));
    }
    out.push('\n');
    for r in trace {
        let mut fields = vec![
            r.iter.to_string(),
            real(r.t),
            real(r.f),
            real(r.g_max),
            r.cos_theta.map(real).unwrap_or_default(),
            real(r.s_norm),
        ];
        fields.extend(r.x.iter().map(|&v| real(v)));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceRow>, CliError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(CliError::Trace {
        line: 1,
        reason: "empty file".into(),
    })?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 6 || columns[..6] != ["iter", "t", "f", "g_max", "cos_theta", "s_norm"] {
        return Err(CliError::Trace {
            line: 1,
            reason: format!("unexpected header `{header}`"),
        });
    }
    let n = columns.len() - 6;
    let mut rows = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let bad = |reason: String| CliError::Trace { line: lineno, reason };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 + n {
            return Err(bad(format!("expected {} fields, got {}", 6 + n, fields.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("`{s}`: {e}")));
        rows.push(TraceRow {
            iter: fields[0].parse().map_err(|e| bad(format!("`{}`: {e}", fields[0])))?,
            t: num(fields[1])?,
            f: num(fields[2])?,
            g_max: num(fields[3])?,
            cos_theta: if fields[4].is_empty() {
                None
            } else {
                Some(num(fields[4])?)
            },
            s_norm: num(fields[5])?,
            x: fields[6..].iter().map(|s| num(s)).collect::<Result<_, _>>()?,
        });
    }
    Ok(rows)
}

fn write_trace(path: &Path, format: Format, trace: &[TraceRecord], n: usize) -> Result<(), CliError> {
    let body = match format {
        Format::Csv => trace_to_csv(trace, n),
        Format::Json => {
            let rows: Vec<TraceRow> = trace.iter().map(TraceRow::from).collect();
            serde_json::to_string(&rows)?
        }
    };
    fs::write(path, body)?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct KktSummary {
    pub lambda_star: f64,
    pub residual_norm: f64,
    pub normalized_residual: f64,
    pub cos_theta: f64,
    pub g_active_value: f64,
}

impl From<KktReport> for KktSummary {
    fn from(k: KktReport) -> Self {
        Self {
            lambda_star: k.lambda_star,
            residual_norm: k.residual_norm,
            normalized_residual: k.normalized_residual,
            cos_theta: k.cos_theta,
            g_active_value: k.g_active_value,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CentralitySummary {
    pub cos_theta: f64,
    pub mu: f64,
    pub in_mu_neighborhood: bool,
    pub epsilon: f64,
}

impl From<CentralityReport> for CentralitySummary {
    fn from(c: CentralityReport) -> Self {
        Self {
            cos_theta: c.cos_theta,
            mu: c.mu,
            in_mu_neighborhood: c.in_mu_neighborhood,
            epsilon: c.epsilon,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub problem: String,
    pub zeta: f64,
    pub step: f64,
    /// `None` when the start was given explicitly.
    pub seed: Option<u64>,
    pub x0: Vec<f64>,
    pub status: &'static str,
    pub iterations: usize,
    pub x_final: Vec<f64>,
    pub f_final: f64,
    pub f_star: f64,
    pub rel_error: f64,
    pub boundary_point: Option<Vec<f64>>,
    pub crossing_point: Option<Vec<f64>>,
    pub cos_theta_at_boundary: Option<f64>,
    pub zigzag_category: &'static str,
    pub failure: Option<String>,
    pub kkt: Option<KktSummary>,
    pub centrality: Option<CentralitySummary>,
    pub diagnostics_error: Option<String>,
}

fn to_vec(x: &DVector<f64>) -> Vec<f64> {
    x.iter().copied().collect()
}

/// KKT and centrality diagnostics at `x`, the latter for the
/// `zeta`-neighborhood.
fn terminal_diagnostics(
    entry: &BenchmarkEntry,
    x: &DVector<f64>,
    zeta: f64,
) -> Result<(KktSummary, CentralitySummary), CoreError> {
    let e = evaluate(&entry.problem, x)?;
    let b = barrier(&e);
    let kkt = kkt_report(&e, &b)?;
    let dir = if entry.problem.n_constraints() == 1 {
        e.constraint_gradient(0)
    } else {
        b.grad_phi.clone()
    };
    let c = centrality(&e.grad_f, &dir, zeta, zeta)?;
    Ok((kkt.into(), c.into()))
}

pub fn build_report(
    entry: &BenchmarkEntry,
    spec: &RunSpec,
    step: f64,
    x0: &DVector<f64>,
    r: &SolveResult,
) -> RunReport {
    let (kkt, cen, diagnostics_error) = match terminal_diagnostics(entry, &r.x_final, spec.zeta) {
        Ok((k, c)) => (Some(k), Some(c), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    RunReport {
        schema_version: SCHEMA_VERSION,
        problem: entry.name().to_string(),
        zeta: spec.zeta,
        step,
        seed: spec.x0.is_none().then_some(spec.seed),
        x0: to_vec(x0),
        status: r.status.as_str(),
        iterations: r.iterations,
        x_final: to_vec(&r.x_final),
        f_final: r.f_final,
        f_star: entry.reported_f_star,
        rel_error: relative_error(r.f_final, entry.reported_f_star),
        boundary_point: r.boundary_point.as_ref().map(to_vec),
        crossing_point: r.crossing_point.as_ref().map(to_vec),
        cos_theta_at_boundary: r.cos_theta_at_boundary,
        zigzag_category: classify_zigzag(&r.trace).as_str(),
        failure: r.failure.as_ref().map(|e| e.to_string()),
        kkt,
        centrality: cen,
        diagnostics_error,
    }
}

fn run(spec: &RunSpec) -> Result<i32, CliError> {
    let entry = entry(&spec.problem_name)?;
    let n = entry.problem.n_dims();
    let x0 = match &spec.x0 {
        Some(v) if v.len() != n => {
            return Err(CliError::Usage(format!(
                "--x0 has {} entries but {} has dimension {n}",
                v.len(),
                entry.name()
            )))
        }
        Some(v) => DVector::from_column_slice(v),
        None => entry.draw_start(spec.seed)?,
    };
    let step = spec.step.unwrap_or_else(|| entry.step());
    let config = TrajectoryConfig::new(spec.zeta, step).with_max_iters(spec.max_iters.unwrap_or(entry.max_iters));
    let result = solve(&entry.problem, &config, &x0)?;

    if let Some(path) = &spec.trace_out {
        write_trace(path, spec.format, &result.trace, n)?;
    }
    let report = build_report(&entry, spec, step, &x0, &result);
    let json = serde_json::to_string_pretty(&report)?;
    match &spec.report_out {
        Some(path) => fs::write(path, json)?,
        None => println!("{json}"),
    }
    Ok(match result.status {
        Status::EvaluationFailure => {
            if let Some(e) = &result.failure {
                eprintln!("error: {e}");
            }
            EXIT_EVALUATION
        }
        _ => EXIT_OK,
    })
}

/// Runs one problem and writes its trace and report. Exit codes: 0 on a
/// completed run, 2 for usage errors (including unknown problems), 3 for an
/// infeasible or unobtainable start, 4 on evaluation failure.
pub fn cmd_run(spec: &RunSpec) -> i32 {
    finish(run(spec))
}

/// One row of the suite summary.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteRow {
    pub name: String,
    pub reported_f_star: f64,
    pub reported_f_zeta: Option<f64>,
    pub step: f64,
    pub reported_iters: Option<usize>,
    pub reported_rel_error: Option<f64>,
    pub f_final: Option<f64>,
    pub rel_error: Option<f64>,
    pub iters: Option<usize>,
    pub status: String,
    pub zigzag_category: Option<&'static str>,
    pub trace_file: Option<String>,
    pub error: Option<String>,
}

impl SuiteRow {
    pub fn completed(&self) -> bool {
        self.error.is_none() && self.status != Status::EvaluationFailure.as_str()
    }
}

fn opt(v: Option<impl ToString>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub const SUITE_HEADER: &str = "name,reported_f_star,reported_f_zeta,step,reported_iters,reported_rel_error,\
f_final,rel_error,iters,status,zigzag_category,trace_file,error";

fn suite_csv(rows: &[SuiteRow]) -> String {
    let mut out = format!("{SUITE_HEADER}\n");
    for r in rows {
        let fields = [
            r.name.clone(),
            r.reported_f_star.to_string(),
            opt(r.reported_f_zeta),
            r.step.to_string(),
            opt(r.reported_iters),
            opt(r.reported_rel_error),
            opt(r.f_final),
            opt(r.rel_error),
            opt(r.iters),
            r.status.clone(),
            opt(r.zigzag_category),
            opt(r.trace_file.clone()),
            // keep the row on one CSV line
            opt(r.error.as_ref().map(|e| e.replace([',', '\n'], ";"))),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn suite_row(name: &str, zeta: f64, seed: u64, out_dir: &Path) -> SuiteRow {
    let e = entry(name).expect("registry name");
    let mut row = SuiteRow {
        name: name.to_string(),
        reported_f_star: e.reported_f_star,
        reported_f_zeta: e.reported_f_zeta,
        step: e.step(),
        reported_iters: e.reported_iters,
        reported_rel_error: e.reported_rel_error,
        f_final: None,
        rel_error: None,
        iters: None,
        status: "error".into(),
        zigzag_category: None,
        trace_file: None,
        error: None,
    };
    match benchmarks::run_benchmark(name, zeta, None, seed) {
        Ok(r) => {
            let file = format!("{name}.csv");
            let trace = trace_to_csv(&r.result.trace, e.problem.n_dims());
            match fs::write(out_dir.join(&file), trace) {
                Ok(()) => row.trace_file = Some(file),
                Err(err) => row.error = Some(format!("writing trace: {err}")),
            }
            row.f_final = Some(r.f_final);
            row.rel_error = Some(r.rel_error);
            row.iters = Some(r.iters_to_termination);
            row.status = r.status.as_str().to_string();
            row.zigzag_category = Some(r.zigzag_category.as_str());
            if let Some(f) = &r.result.failure {
                row.error = Some(f.to_string());
            }
        }
        Err(err) => row.error = Some(err.to_string()),
    }
    row
}

/// Runs every registry entry at its reported step in parallel and writes
/// `summary.csv`, `summary.json` and one trace per entry into `out_dir`.
pub fn run_suite(zeta: f64, seed: u64, out_dir: &Path) -> Result<Vec<SuiteRow>, CliError> {
    TrajectoryConfig::new(zeta, 1.0).validate()?;
    fs::create_dir_all(out_dir)?;
    let rows: Vec<SuiteRow> = NAMES
        .par_iter()
        .map(|name| suite_row(name, zeta, seed, out_dir))
        .collect();
    fs::write(out_dir.join("summary.csv"), suite_csv(&rows))?;
    let json = serde_json::json!({ "schema_version": SCHEMA_VERSION, "zeta": zeta, "seed": seed, "rows": rows });
    fs::write(out_dir.join("summary.json"), serde_json::to_string_pretty(&json)?)?;
    Ok(rows)
}

/// Exit 0 when at least 9 of the 13 rows complete.
pub fn cmd_suite(zeta: f64, out_dir: &Path) -> i32 {
    cmd_suite_seeded(zeta, 0, out_dir)
}

pub fn cmd_suite_seeded(zeta: f64, seed: u64, out_dir: &Path) -> i32 {
    finish(run_suite(zeta, seed, out_dir).map(|rows| {
        let done = rows.iter().filter(|r| r.completed()).count();
        eprintln!("{done}/{} rows completed", rows.len());
        if done >= 9 {
            EXIT_OK
        } else {
            EXIT_EVALUATION
        }
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSpec {
    pub problem_name: String,
    pub zetas: Vec<f64>,
    pub step: Option<f64>,
    pub max_iters: Option<usize>,
    pub seed: u64,
    pub x0: Option<Vec<f64>>,
    /// Integrate `dx/dt = s` instead of the unit field.
    pub raw_field: bool,
    pub out: Option<PathBuf>,
}

impl ScanSpec {
    pub fn new(problem_name: impl Into<String>, zetas: Vec<f64>) -> Self {
        Self {
            problem_name: problem_name.into(),
            zetas,
            step: None,
            max_iters: None,
            seed: 0,
            x0: None,
            raw_field: false,
            out: None,
        }
    }
}

pub const SCAN_HEADER: &str = "zeta,iters,scaled_iters";

fn zeta_scan(spec: &ScanSpec) -> Result<i32, CliError> {
    if spec.zetas.is_empty() {
        return Err(CliError::Usage("no zeta values given".into()));
    }
    let entry = entry(&spec.problem_name)?;
    let x0 = match &spec.x0 {
        Some(v) if v.len() != entry.problem.n_dims() => {
            return Err(CliError::Usage(format!("--x0 has {} entries", v.len())))
        }
        Some(v) => DVector::from_column_slice(v),
        None => entry.draw_start(spec.seed)?,
    };
    let mut config = TrajectoryConfig::new(spec.zetas[0], spec.step.unwrap_or_else(|| entry.step()))
        .with_max_iters(spec.max_iters.unwrap_or(entry.max_iters));
    if spec.raw_field {
        config = config.with_raw_field();
    }
    let rows = scan_zeta(&entry.problem, &config, &x0, &spec.zetas)?;
    let mut out = format!("{SCAN_HEADER}\n");
    for r in &rows {
        let (iters, scaled) = match r.iterations_to_boundary {
            Some(k) => (k.to_string(), real(k as f64 * (1.0 - r.zeta))),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!("{},{iters},{scaled}\n", r.zeta));
    }
    match &spec.out {
        Some(path) => fs::write(path, out)?,
        None => print!("{out}"),
    }
    Ok(EXIT_OK)
}

/// Iterations to the boundary for each zeta. Rows whose run ends otherwise
/// leave the counts empty. Exit 2 on an empty list.
pub fn cmd_zeta_scan(spec: &ScanSpec) -> i32 {
    finish(zeta_scan(spec))
}
