//! Experiment drivers and report emission.

use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use serde::Serialize;
use sliceprov_core::embedding::{run_comparison, ComparisonOptions, ComparisonRow, Method};
use sliceprov_core::provisioning::{
    build_rp, carp, delta_scaling, scale_slices, verify_solution, CarpOptions, PriorUsage, ProvisioningSolution, Variant,
    VerificationReport, DELTA_TOLERANCE,
};
use sliceprov_core::{InfrastructureGraph, ProvisioningError, RateTables, SliceSpec};
use sliceprov_milp::{solve, SolveStatus, SolverOptions};
use thiserror::Error;

use crate::metrics::{emit_rb_breakdown, timing_rows, MetricsReport, MetricsRow, Outcome, VariantMetrics};
use crate::scenario::Scenario;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Provisioning(#[from] ProvisioningError),
    #[error("{0}")]
    Invalid(String),
}

/// Status string recorded for a failed run.
pub fn error_status(e: &ProvisioningError) -> (Outcome, String) {
    match e {
        ProvisioningError::Infeasible { .. } | ProvisioningError::DeltaFloor { .. } => (Outcome::Infeasible, "infeasible".into()),
        ProvisioningError::NoSolution { status, .. } => (Outcome::Failed, status.clone()),
        other => (Outcome::Failed, format!("error: {other}")),
    }
}

#[derive(Clone, Debug)]
pub struct VariantRun {
    pub variant: Variant,
    pub solution: Option<ProvisioningSolution>,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub report: MetricsReport,
    pub runs: Vec<VariantRun>,
}

/// Runs every requested variant in order. Failures are recorded and the run continues.
pub fn run_experiment(scn: &Scenario) -> ExperimentOutput {
    let opts = CarpOptions { lambda: scn.lambda, solver: scn.solver.clone() };
    let mut metrics = Vec::new();
    let mut runs = Vec::new();
    for &variant in &scn.variants {
        let result = if scn.delta_scaling {
            delta_scaling(&scn.infra, &scn.slices, &scn.rates, variant, &opts, DELTA_TOLERANCE).map(|(_, sol)| sol)
        } else {
            carp(&scn.infra, &scn.slices, &scn.rates, variant, &opts)
        };
        match result {
            Ok(sol) => {
                let m = VariantMetrics::solved(&scn.infra, &sol);
                info!("{}: c_tot = {:.6} ({}, {:.3}s)", variant, sol.costs.total, m.status, m.solve_time_s);
                metrics.push(m);
                runs.push(VariantRun { variant, solution: Some(sol) });
            }
            Err(e) => {
                let (outcome, status) = error_status(&e);
                info!("{variant}: {status}");
                metrics.push(VariantMetrics { variant, outcome, status, delta: None, metrics: None, solve_time_s: 0.0, problems: vec![] });
                runs.push(VariantRun { variant, solution: None });
            }
        }
    }
    let names: Vec<String> = scn.slices.iter().map(|s| s.name.clone()).collect();
    let solved: Vec<&ProvisioningSolution> = runs.iter().filter_map(|r| r.solution.as_ref()).collect();
    let rb_breakdown = emit_rb_breakdown(&scn.infra, &names, &solved);
    ExperimentOutput {
        report: MetricsReport { scenario: scn.name.clone(), lambda: scn.lambda, variants: metrics, rb_breakdown },
        runs,
    }
}

fn create_dir(dir: &Path) -> Result<(), ReportError> {
    fs::create_dir_all(dir).map_err(|source| ReportError::Io { path: dir.to_path_buf(), source })
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), ReportError> {
    let err = |source| ReportError::Csv { path: path.to_path_buf(), source };
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    for row in rows {
        w.serialize(row).map_err(err)?;
    }
    w.flush().map_err(|source| ReportError::Io { path: path.to_path_buf(), source })
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), ReportError> {
    let text = serde_json::to_string_pretty(value).map_err(|source| ReportError::Json { path: path.to_path_buf(), source })?;
    fs::write(path, text + "\n").map_err(|source| ReportError::Io { path: path.to_path_buf(), source })
}

/// File name of a variant's serialized solution.
pub fn solution_file(v: Variant) -> String {
    format!("solution-{}.json", v.name())
}

/// Writes `metrics.csv`, `rb_breakdown.csv`, `timings.csv`, `report.json` and one solution file per solved variant.
pub fn write_experiment(dir: &Path, out: &ExperimentOutput) -> Result<Vec<PathBuf>, ReportError> {
    create_dir(dir)?;
    let mut written = Vec::new();
    let mut emit = |name: &str, f: &dyn Fn(&Path) -> Result<(), ReportError>| {
        let path = dir.join(name);
        f(&path)?;
        written.push(path);
        Ok::<(), ReportError>(())
    };
    let rows: Vec<MetricsRow> = out.report.variants.iter().map(MetricsRow::from).collect();
    emit("metrics.csv", &|p| write_csv(p, &rows))?;
    emit("rb_breakdown.csv", &|p| write_csv(p, &out.report.rb_breakdown))?;
    let timings: Vec<_> = out.report.variants.iter().flat_map(timing_rows).collect();
    emit("timings.csv", &|p| write_csv(p, &timings))?;
    emit("report.json", &|p| write_json(p, &out.report))?;
    for run in &out.runs {
        if let Some(sol) = &run.solution {
            emit(&solution_file(run.variant), &|p| write_json(p, sol))?;
        }
    }
    Ok(written)
}

/// Verifies a solution against the scenario it was computed for, at the solution's demand scaling.
pub fn check_solution(scn: &Scenario, sol: &ProvisioningSolution, tol: f64) -> Result<VerificationReport, ReportError> {
    if sol.radio.len() != scn.slices.len() || sol.wired.len() != scn.slices.len() {
        return Err(ReportError::Invalid(format!("solution has {} slices, scenario has {}", sol.radio.len(), scn.slices.len())));
    }
    if !(sol.delta > 0.0 && sol.delta <= 1.0) {
        return Err(ReportError::Invalid(format!("solution delta {} outside ]0, 1]", sol.delta)));
    }
    let slices = if sol.delta < 1.0 { scale_slices(&scn.slices, sol.delta) } else { scn.slices.clone() };
    Ok(verify_solution(&scn.infra, &slices, &scn.rates, sol, tol))
}

/// Runs the provisioning-vs-direct embedding sweep on the scenario's embedding setup.
pub fn compare_embedding(scn: &Scenario, counts: Option<&[usize]>) -> Result<Vec<ComparisonRow>, ReportError> {
    let setup = scn.embedding.as_ref().ok_or_else(|| ReportError::Invalid("scenario has no `embedding` section".into()))?;
    let counts = counts.unwrap_or(&setup.sfc_counts);
    let opts = ComparisonOptions { link_scale: setup.link_scale, variant: setup.variant, solver: scn.solver.clone() };
    Ok(run_comparison(&scn.infra, &setup.template, counts, &Method::ALL, &opts)?)
}

/// Flat comparison row for CSV output.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonCsvRow {
    pub method: &'static str,
    pub sfc_count: usize,
    pub cost: Option<f64>,
    pub time_s: f64,
    pub status: String,
}

pub fn comparison_rows(rows: &[ComparisonRow]) -> Vec<ComparisonCsvRow> {
    rows.iter()
        .map(|r| ComparisonCsvRow { method: r.method.name(), sfc_count: r.sfc_count, cost: r.cost, time_s: r.time_s, status: r.status.clone() })
        .collect()
}

pub fn write_comparison(dir: &Path, rows: &[ComparisonRow]) -> Result<PathBuf, ReportError> {
    create_dir(dir)?;
    let path = dir.join("comparison.csv");
    write_csv(&path, &comparison_rows(rows))?;
    Ok(path)
}

/// Whether radio provisioning alone succeeds: one RP over all slices (joint) or one per slice in order.
pub fn radio_feasible(
    infra: &InfrastructureGraph,
    slices: &[SliceSpec],
    rates: &RateTables,
    joint: bool,
    solver: &SolverOptions,
) -> Result<bool, ProvisioningError> {
    let groups: Vec<Vec<usize>> = if joint { vec![(0..slices.len()).collect()] } else { (0..slices.len()).map(|s| vec![s]).collect() };
    let mut prior = PriorUsage::empty(infra);
    for group in groups {
        let pm = build_rp(infra, slices, rates, &group, 0.0, &prior)?;
        let sol = solve(&pm.model, solver)?;
        match sol.status {
            SolveStatus::Infeasible => return Ok(false),
            s if !s.has_solution() || !sol.has_assignment() => {
                return Err(ProvisioningError::NoSolution { step: "RP".into(), slices: vec![], status: s.to_string() })
            }
            _ => {}
        }
        for shares in pm.decode_radio(&sol.values) {
            prior.add_radio(&shares);
        }
    }
    Ok(true)
}

/// Largest multiplier `m` in `[0, hi]` (within `tol`) of every radio demand for which radio provisioning succeeds.
pub fn max_rate_multiplier(
    infra: &InfrastructureGraph,
    slices: &[SliceSpec],
    rates: &RateTables,
    joint: bool,
    solver: &SolverOptions,
    hi: f64,
    tol: f64,
) -> Result<f64, ProvisioningError> {
    if !(hi > 0.0 && tol > 0.0) {
        return Err(ProvisioningError::Invalid("multiplier bound and tolerance must be > 0".into()));
    }
    let feasible = |m: f64| radio_feasible(infra, &scale_slices(slices, m), rates, joint, solver);
    if feasible(hi)? {
        return Ok(hi);
    }
    let (mut lo, mut hi) = (0.0, hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
