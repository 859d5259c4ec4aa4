use std::num::NonZeroU32;
use std::time::{Duration, Instant};

use highs::{HighsModelStatus, HighsSolutionStatus, RowProblem, Sense as HSense};
use serde::{Deserialize, Serialize};

use crate::brute_force::{brute_force_solve, BruteForceGrid};
use crate::error::MilpError;
use crate::model::{MilpModel, Sense, VarKind};
use crate::solution::{MilpSolution, SolveStatus};

/// Environment variable consulted by [`Backend::from_env`].
pub const BACKEND_ENV: &str = "SLICEPROV_SOLVER";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Highs,
    /// Exhaustive enumeration; only for tiny models.
    BruteForce,
}

impl Backend {
    pub fn from_name(name: &str) -> Result<Backend, MilpError> {
        match name.trim().to_ascii_lowercase().as_str() {
            "highs" => Ok(Backend::Highs),
            "brute-force" | "bruteforce" => Ok(Backend::BruteForce),
            other => Err(MilpError::BackendUnavailable(other.to_string())),
        }
    }

    /// Backend named by `SLICEPROV_SOLVER`, or HiGHS when unset.
    pub fn from_env() -> Result<Backend, MilpError> {
        match std::env::var(BACKEND_ENV) {
            Ok(v) if !v.trim().is_empty() => Backend::from_name(&v),
            _ => Ok(Backend::Highs),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Highs => "highs",
            Backend::BruteForce => "brute-force",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub backend: Backend,
    pub time_limit: Duration,
    /// Relative MIP gap at which the search stops.
    pub mip_gap: f64,
    pub mip_abs_gap: f64,
    pub seed: i32,
    pub threads: u32,
    pub feasibility_tol: f64,
    /// Re-solve the LP with integers fixed to their rounded values.
    pub polish: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            backend: Backend::Highs,
            time_limit: Duration::from_secs(600),
            mip_gap: 1e-6,
            mip_abs_gap: 1e-9,
            seed: 0,
            threads: 1,
            feasibility_tol: 1e-9,
            polish: true,
        }
    }
}

/// Solve with default options apart from the two limits.
pub fn solve_with_limits(model: &MilpModel, time_limit: Duration, mip_gap: f64) -> Result<MilpSolution, MilpError> {
    let opts = SolverOptions { time_limit, mip_gap, ..Default::default() };
    solve(model, &opts)
}

pub fn solve(model: &MilpModel, opts: &SolverOptions) -> Result<MilpSolution, MilpError> {
    match opts.backend {
        Backend::Highs => solve_highs(model, opts),
        Backend::BruteForce => brute_force_solve(model, &BruteForceGrid::default()),
    }
}

fn empty_model(model: &MilpModel, start: Instant) -> MilpSolution {
    let ok = model.constraints().iter().all(|c| c.violation(&[]) <= 1e-9);
    if ok {
        MilpSolution {
            status: SolveStatus::Optimal,
            objective: Some(0.0),
            values: vec![],
            mip_gap: Some(0.0),
            solve_time: start.elapsed(),
        }
    } else {
        MilpSolution::without_assignment(SolveStatus::Infeasible, start.elapsed())
    }
}

struct Run {
    status: HighsModelStatus,
    has_primal: bool,
    values: Vec<f64>,
    mip_gap: f64,
}

fn run_highs(model: &MilpModel, opts: &SolverOptions, fixed: Option<&[f64]>, objective: bool, time_limit: f64) -> Run {
    let mut pb = RowProblem::default();
    let mut obj = vec![0.0; model.num_vars()];
    if objective {
        for &(v, c) in model.objective() {
            obj[v.0] += c;
        }
    }
    let cols: Vec<_> = model
        .variables()
        .iter()
        .enumerate()
        .map(|(j, v)| match fixed {
            Some(vals) if v.kind.is_integral() => pb.add_column(obj[j], vals[j]..=vals[j]),
            _ if v.kind == VarKind::Continuous || fixed.is_some() => pb.add_column(obj[j], v.lower..=v.upper),
            _ => pb.add_integer_column(obj[j], v.lower..=v.upper),
        })
        .collect();
    for c in model.constraints() {
        let row: Vec<_> = c.terms.iter().map(|&(v, a)| (cols[v.0], a)).collect();
        match c.sense {
            Sense::Le => pb.add_row(..=c.rhs, row),
            Sense::Ge => pb.add_row(c.rhs.., row),
            Sense::Eq => pb.add_row(c.rhs..=c.rhs, row),
        }
    }
    let mut m = pb.optimise(HSense::Minimise);
    m.make_quiet();
    m.set_threads(NonZeroU32::new(opts.threads.max(1)).expect("nonzero"));
    m.set_option("random_seed", opts.seed);
    m.set_option("time_limit", time_limit.max(0.01));
    m.set_option("mip_rel_gap", opts.mip_gap);
    m.set_option("mip_abs_gap", opts.mip_abs_gap);
    m.set_option("primal_feasibility_tolerance", opts.feasibility_tol);
    m.set_option("mip_feasibility_tolerance", opts.feasibility_tol);
    let solved = m.solve();
    let status = solved.status();
    let has_primal = solved.primal_solution_status() == HighsSolutionStatus::Feasible;
    let values = if has_primal { solved.get_solution().columns().to_vec() } else { Vec::new() };
    let mip_gap = if model.num_integral() > 0 && fixed.is_none() { solved.mip_gap() } else { 0.0 };
    Run { status, has_primal, values, mip_gap }
}

fn solve_highs(model: &MilpModel, opts: &SolverOptions) -> Result<MilpSolution, MilpError> {
    let start = Instant::now();
    if model.num_vars() == 0 {
        return Ok(empty_model(model, start));
    }
    let limit = opts.time_limit.as_secs_f64();
    let run = run_highs(model, opts, None, true, limit);
    let status = match run.status {
        HighsModelStatus::Optimal => SolveStatus::Optimal,
        HighsModelStatus::Infeasible => SolveStatus::Infeasible,
        HighsModelStatus::Unbounded => SolveStatus::Unbounded,
        HighsModelStatus::UnboundedOrInfeasible => {
            let probe = run_highs(model, opts, None, false, (limit - start.elapsed().as_secs_f64()).max(1.0));
            if probe.status == HighsModelStatus::Optimal {
                SolveStatus::Unbounded
            } else {
                SolveStatus::Infeasible
            }
        }
        HighsModelStatus::ReachedTimeLimit
        | HighsModelStatus::ReachedIterationLimit
        | HighsModelStatus::ReachedSolutionLimit
        | HighsModelStatus::ReachedInterrupt
        | HighsModelStatus::ReachedMemoryLimit => {
            if run.has_primal {
                SolveStatus::Feasible
            } else {
                SolveStatus::Timeout
            }
        }
        other => return Err(MilpError::Solver(format!("HiGHS returned {other:?}"))),
    };
    if !status.has_solution() || !run.has_primal {
        let status = if status.has_solution() { SolveStatus::Timeout } else { status };
        return Ok(MilpSolution::without_assignment(status, start.elapsed()));
    }
    let mut values = run.values;
    for (x, v) in values.iter_mut().zip(model.variables()) {
        if v.kind.is_integral() {
            *x = x.round();
        }
    }
    if opts.polish && model.num_integral() > 0 {
        let left = (limit - start.elapsed().as_secs_f64()).max(1.0);
        let p = run_highs(model, opts, Some(&values), true, left);
        if p.status == HighsModelStatus::Optimal && p.has_primal {
            for (j, v) in model.variables().iter().enumerate() {
                if !v.kind.is_integral() {
                    values[j] = p.values[j];
                }
            }
        } else {
            log::debug!("polish of {} returned {:?}; keeping MIP values", model.name, p.status);
        }
    }
    for (x, v) in values.iter_mut().zip(model.variables()) {
        *x = x.clamp(v.lower, v.upper);
    }
    Ok(MilpSolution {
        status,
        objective: Some(model.objective_value(&values)),
        values,
        mip_gap: Some(run.mip_gap),
        solve_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backend_names() {
        assert_eq!(Backend::from_name("HiGHS").unwrap(), Backend::Highs);
        assert_eq!(Backend::from_name("brute-force").unwrap(), Backend::BruteForce);
        assert!(matches!(Backend::from_name("cplex"), Err(MilpError::BackendUnavailable(_))));
    }

    #[test]
    fn small_mip() {
        let mut m = MilpModel::new("t");
        let x = m.integer("x", 0.0, 10.0).unwrap();
        let y = m.continuous("y", 0.0, 10.0).unwrap();
        m.set_objective(&[(x, -1.0), (y, -2.0)]).unwrap();
        m.add_row("a", &[(x, 1.0), (y, 1.0)], Sense::Le, 3.5).unwrap();
        m.add_row("b", &[(x, 1.0), (y, -1.0)], Sense::Ge, 1.0).unwrap();
        let s = solve(&m, &SolverOptions::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        // x = 2, y = 1 and x = 3, y = 0.5 both reach -4
        assert!((s.objective.unwrap() + 4.0).abs() < 1e-9);
    }

    #[test]
    fn statuses() {
        let mut inf = MilpModel::new("inf");
        let x = inf.integer("x", 0.0, 3.0).unwrap();
        inf.add_row("r", &[(x, 2.0)], Sense::Eq, 3.0).unwrap();
        assert_eq!(solve(&inf, &SolverOptions::default()).unwrap().status, SolveStatus::Infeasible);

        let mut unb = MilpModel::new("unb");
        let y = unb.continuous("y", 0.0, f64::INFINITY).unwrap();
        unb.set_objective(&[(y, -1.0)]).unwrap();
        unb.add_row("r", &[(y, 1.0)], Sense::Ge, 1.0).unwrap();
        assert_eq!(solve(&unb, &SolverOptions::default()).unwrap().status, SolveStatus::Unbounded);

        let empty = MilpModel::new("empty");
        assert_eq!(solve(&empty, &SolverOptions::default()).unwrap().status, SolveStatus::Optimal);
    }
}
