//! Benchmark registry and reproduction harness.
//!
//! Reported figures come from `data/reference.tsv`. Starts are drawn
//! uniformly from a per-problem box by rejection sampling with a seeded
//! ChaCha8 generator, so a `(name, seed)` pair always gives the same run.

pub mod cec2006;
pub mod chebyshev;
pub mod toy;

use std::fmt;
use std::path::PathBuf;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::integrator::{solve, SolveResult, Status, TraceRecord, TrajectoryConfig};
use crate::problem::{evaluate, Problem};

const REFERENCE: &str = include_str!("../../data/reference.tsv");

pub const MAX_SEED_ATTEMPTS: usize = 100_000;

/// Names in registry order.
pub const NAMES: [&str; 13] = [
    "G01",
    "G04",
    "G06",
    "G07",
    "G08",
    "G09",
    "G10",
    "G18",
    "G19",
    "G24",
    "toy2d_linear",
    "toy2d_nonconvex",
    "chebyshev",
];

/// One row of the reference table.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceRow {
    pub name: String,
    pub f_star: f64,
    pub f_zeta: Option<f64>,
    pub step: Option<f64>,
    pub iters: Option<usize>,
    pub rel_error: Option<f64>,
}

pub fn parse_reference(text: &str) -> Result<Vec<ReferenceRow>> {
    let mut rows = Vec::new();
    let mut version = None;
    let mut header_seen = false;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let err = |reason: String| Error::ReferenceData { line: lineno, reason };
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("schema_version") {
                version = Some(v.trim().to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(err(format!("expected 6 fields, got {}", fields.len())));
        }
        if !header_seen {
            if fields[0] != "name" {
                return Err(err("missing header row".into()));
            }
            header_seen = true;
            continue;
        }
        let real = |s: &str| -> Result<Option<f64>> {
            if s == "-" {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|e| err(format!("`{s}`: {e}")))
        };
        let iters = match fields[4] {
            "-" => None,
            s => Some(s.parse().map_err(|e| err(format!("`{s}`: {e}")))?),
        };
        rows.push(ReferenceRow {
            name: fields[0].to_string(),
            f_star: real(fields[1])?.ok_or_else(|| err("f_star is required".into()))?,
            f_zeta: real(fields[2])?,
            step: real(fields[3])?,
            iters,
            rel_error: real(fields[5])?,
        });
    }
    if version.as_deref() != Some("1") {
        return Err(Error::ReferenceData {
            line: 1,
            reason: "missing or unsupported schema_version".into(),
        });
    }
    Ok(rows)
}

pub fn reference_rows() -> Vec<ReferenceRow> {
    parse_reference(REFERENCE).expect("bundled reference table")
}

/// Axis-aligned box from which starts are drawn.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl SeedBox {
    fn new(lower: &[f64], upper: &[f64]) -> Self {
        assert_eq!(lower.len(), upper.len());
        Self {
            lower: lower.to_vec(),
            upper: upper.to_vec(),
        }
    }

    fn uniform(n: usize, lo: f64, hi: f64) -> Self {
        Self::new(&vec![lo; n], &vec![hi; n])
    }

    pub fn sample(&self, rng: &mut impl Rng) -> DVector<f64> {
        DVector::from_iterator(
            self.lower.len(),
            self.lower
                .iter()
                .zip(&self.upper)
                .map(|(&lo, &hi)| if hi > lo { rng.gen_range(lo..hi) } else { lo }),
        )
    }
}

impl fmt::Display for SeedBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| format!("[{lo}, {hi}]"))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Clone, Debug)]
pub struct BenchmarkEntry {
    pub problem: Problem,
    pub reported_f_star: f64,
    pub reported_f_zeta: Option<f64>,
    pub reported_step: Option<f64>,
    pub reported_iters: Option<usize>,
    pub reported_rel_error: Option<f64>,
    /// Box bounds are part of the constraint list; always true here.
    pub bounds_as_constraints: bool,
    pub feasible_seed_box: SeedBox,
    /// Step used when the table reports none.
    pub default_step: f64,
    pub max_iters: usize,
    pub known_optimum: Option<DVector<f64>>,
}

impl BenchmarkEntry {
    pub fn name(&self) -> &str {
        self.problem.name()
    }

    pub fn step(&self) -> f64 {
        self.reported_step.unwrap_or(self.default_step)
    }

    /// Draws a strictly feasible start.
    pub fn draw_start(&self, seed: u64) -> Result<DVector<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..MAX_SEED_ATTEMPTS {
            let x = self.feasible_seed_box.sample(&mut rng);
            if let Ok(e) = evaluate(&self.problem, &x) {
                if e.feasible {
                    return Ok(x);
                }
            }
        }
        Err(Error::Initialization {
            attempts: MAX_SEED_ATTEMPTS,
        })
    }
}

fn seed_box(name: &str) -> (SeedBox, f64) {
    match name {
        "G01" => {
            let mut hi = vec![1.0; 13];
            hi[9] = 2.0;
            hi[10] = 2.0;
            hi[11] = 2.0;
            (SeedBox::new(&[0.0; 13], &hi), 0.002)
        }
        "G04" => (
            SeedBox::new(&[78.0, 33.0, 27.0, 27.0, 27.0], &[102.0, 45.0, 45.0, 45.0, 45.0]),
            0.2,
        ),
        "G06" => (SeedBox::new(&[13.0, 5.0], &[16.0, 10.0]), 0.002),
        "G07" => (
            SeedBox::new(
                &[0.0, 0.0, 6.0, 3.0, -1.0, -1.0, -1.0, 7.0, 6.0, 6.0],
                &[4.0, 4.0, 10.0, 7.0, 3.0, 3.0, 3.0, 10.0, 10.0, 10.0],
            ),
            0.0027,
        ),
        "G08" => (SeedBox::new(&[1.0, 4.0], &[1.5, 4.5]), 0.01),
        "G09" => (SeedBox::uniform(7, -3.0, 3.0), 0.05),
        "G10" => (
            SeedBox::new(
                &[100.0, 1000.0, 4000.0, 100.0, 200.0, 100.0, 200.0, 300.0],
                &[1500.0, 2500.0, 6500.0, 300.0, 400.0, 300.0, 400.0, 500.0],
            ),
            0.35,
        ),
        "G18" => {
            let mut lo = vec![-1.0; 9];
            lo[8] = 0.0;
            (SeedBox::new(&lo, &[1.0; 9]), 0.01)
        }
        "G19" => (SeedBox::uniform(15, 0.0, 10.0), 0.05),
        // the sub-region containing the optimum
        "G24" => (SeedBox::new(&[2.0, 0.0], &[3.0, 4.0]), 0.02),
        "toy2d_linear" => (SeedBox::new(&[2.0, 12.0], &[15.0, 25.0]), 1e-3),
        // just above the branch of the central path that trajectories abandon
        "toy2d_nonconvex" => (SeedBox::new(&[4.0, 12.5], &[5.0, 14.0]), 1e-3),
        "chebyshev" => (SeedBox::new(&[1.0, -4.0, 0.1], &[5.0, 0.0, 1.0]), 2e-3),
        _ => unreachable!("seed box for unknown problem {name}"),
    }
}

/// G08's optimum is interior, so its runs never reach the boundary and end
/// on this budget.
fn max_iters(name: &str) -> usize {
    match name {
        "G08" => 150,
        _ => 200_000,
    }
}

fn problem_by_name(name: &str) -> Option<Problem> {
    Some(match name {
        "G01" => cec2006::g01(),
        "G04" => cec2006::g04(),
        "G06" => cec2006::g06(),
        "G07" => cec2006::g07(),
        "G08" => cec2006::g08(),
        "G09" => cec2006::g09(),
        "G10" => cec2006::g10(),
        "G18" => cec2006::g18(),
        "G19" => cec2006::g19(),
        "G24" => cec2006::g24(),
        "toy2d_linear" => toy::toy2d_linear(),
        "toy2d_nonconvex" => toy::toy2d_nonconvex(),
        "chebyshev" => chebyshev::chebyshev(),
        _ => return None,
    })
}

fn known_optimum(name: &str) -> Option<DVector<f64>> {
    match name {
        "toy2d_linear" => Some(DVector::from_vec(vec![0.0, 10.0])),
        "chebyshev" => Some(chebyshev::reference_center()),
        _ => cec2006::known_optimum(name).map(DVector::from_vec),
    }
}

fn build_entry(row: &ReferenceRow) -> Result<BenchmarkEntry> {
    let problem = problem_by_name(&row.name).ok_or_else(|| Error::UnknownProblem(row.name.clone()))?;
    let (feasible_seed_box, default_step) = seed_box(&row.name);
    Ok(BenchmarkEntry {
        known_optimum: known_optimum(&row.name),
        problem,
        reported_f_star: row.f_star,
        reported_f_zeta: row.f_zeta,
        reported_step: row.step,
        reported_iters: row.iters,
        reported_rel_error: row.rel_error,
        bounds_as_constraints: true,
        feasible_seed_box,
        default_step,
        max_iters: max_iters(&row.name),
    })
}

/// All benchmark entries in [`NAMES`] order.
pub fn registry() -> Vec<BenchmarkEntry> {
    let rows = reference_rows();
    NAMES
        .iter()
        .map(|name| {
            let row = rows.iter().find(|r| r.name == *name).expect("reference row");
            build_entry(row).expect("registry entry")
        })
        .collect()
}

pub fn entry(name: &str) -> Result<BenchmarkEntry> {
    let rows = reference_rows();
    let row = rows
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::UnknownProblem(name.to_string()))?;
    build_entry(row)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZigzagCategory {
    /// Stays inside the `zeta`-neighborhood once it gets there.
    WithinNeighborhood,
    /// Oscillates in and out of the neighborhood near the end only.
    ZigzagNearSolution,
    /// Oscillates around the neighborhood for most of the run.
    ZigzagThroughout,
}

impl ZigzagCategory {
    pub fn as_str(&self) -> &'static str {
        match self {
            ZigzagCategory::WithinNeighborhood => "within_neighborhood",
            ZigzagCategory::ZigzagNearSolution => "zigzag_near_solution",
            ZigzagCategory::ZigzagThroughout => "zigzag_throughout",
        }
    }
}

/// Turning-point rate above which the middle half of a run counts as
/// zigzagging throughout.
pub const ZIGZAG_BODY_RATE: f64 = 0.5;
/// Turning-point rate above which the last quarter counts as zigzagging
/// near the solution.
pub const ZIGZAG_TAIL_RATE: f64 = 0.3;
/// Increments smaller than this are treated as flat.
const ZIGZAG_MIN_STEP: f64 = 1e-9;

/// Share of interior samples in `window` where `cos theta` turns, i.e. where
/// consecutive increments change sign.
pub fn turning_rate(window: &[f64]) -> f64 {
    if window.len() < 3 {
        return 0.0;
    }
    let turns = window
        .windows(3)
        .filter(|w| {
            let (d0, d1) = (w[1] - w[0], w[2] - w[1]);
            d0.abs() > ZIGZAG_MIN_STEP && d1.abs() > ZIGZAG_MIN_STEP && d0 * d1 < 0.0
        })
        .count();
    turns as f64 / (window.len() - 2) as f64
}

/// Classifies a run by how often `cos theta` oscillates. The first quarter
/// (approach to the neighborhood) is ignored; the middle half decides
/// [`ZigzagCategory::ZigzagThroughout`] and the last quarter
/// [`ZigzagCategory::ZigzagNearSolution`]. Oscillation counts whether or not
/// it happens below the `-zeta` line, since a run can chatter just outside
/// the neighborhood.
pub fn classify_zigzag(trace: &[TraceRecord]) -> ZigzagCategory {
    let cos: Vec<f64> = trace.iter().filter_map(|r| r.cos_theta).collect();
    let (q1, q3) = (cos.len() / 4, cos.len() * 3 / 4);
    if turning_rate(&cos[q1..q3]) > ZIGZAG_BODY_RATE {
        ZigzagCategory::ZigzagThroughout
    } else if turning_rate(&cos[q3..]) > ZIGZAG_TAIL_RATE {
        ZigzagCategory::ZigzagNearSolution
    } else {
        ZigzagCategory::WithinNeighborhood
    }
}

#[derive(Clone, Debug)]
pub struct BenchmarkReport {
    pub name: String,
    pub seed: u64,
    pub zeta: f64,
    pub step: f64,
    pub x0: DVector<f64>,
    pub f_final: f64,
    pub f_star: f64,
    /// `|f_final - f_star| / |f_star|`.
    pub rel_error: f64,
    pub iters_to_termination: usize,
    pub status: Status,
    pub zigzag_category: ZigzagCategory,
    pub cos_theta_at_boundary: Option<f64>,
    /// Set by callers that write the trace to disk.
    pub trace_path: Option<PathBuf>,
    pub result: SolveResult,
}

pub fn relative_error(value: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        (value - reference).abs()
    } else {
        (value - reference).abs() / reference.abs()
    }
}

/// Runs `entry` from `x0`.
pub fn run_from(
    entry: &BenchmarkEntry,
    zeta: f64,
    step: Option<f64>,
    x0: &DVector<f64>,
    max_iters: Option<usize>,
) -> Result<SolveResult> {
    let config = TrajectoryConfig::new(zeta, step.unwrap_or_else(|| entry.step()))
        .with_max_iters(max_iters.unwrap_or(entry.max_iters));
    solve(&entry.problem, &config, x0)
}

pub fn report(
    entry: &BenchmarkEntry,
    zeta: f64,
    step: f64,
    seed: u64,
    x0: DVector<f64>,
    result: SolveResult,
) -> BenchmarkReport {
    BenchmarkReport {
        name: entry.name().to_string(),
        seed,
        zeta,
        step,
        x0,
        f_final: result.f_final,
        f_star: entry.reported_f_star,
        rel_error: relative_error(result.f_final, entry.reported_f_star),
        iters_to_termination: result.iterations,
        status: result.status,
        zigzag_category: classify_zigzag(&result.trace),
        cos_theta_at_boundary: result.cos_theta_at_boundary,
        trace_path: None,
        result,
    }
}

/// Draws a start with `seed` and runs the entry at its reported (or the
/// given) step.
pub fn run_benchmark(name: &str, zeta: f64, step: Option<f64>, seed: u64) -> Result<BenchmarkReport> {
    let entry = entry(name)?;
    let x0 = entry.draw_start(seed)?;
    let h = step.unwrap_or_else(|| entry.step());
    let result = run_from(&entry, zeta, Some(h), &x0, None)?;
    Ok(report(&entry, zeta, h, seed, x0, result))
}
