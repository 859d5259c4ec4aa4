use std::time::Instant;

use log::{debug, info};
use sliceprov_milp::{solve, MilpSolution, SolveStatus, SolverOptions};

use crate::error::ProvisioningError;
use crate::radio::RateTables;
use crate::slice::SliceSpec;
use crate::topology::InfrastructureGraph;

use super::builder::{build_jrn, build_np, build_rp, ProvisioningModel};
use super::cost::{radio_cost, wired_cost};
use super::shares::{Costs, PriorUsage, ProblemRecord, ProvisioningSolution, RadioShares, Variant, WiredShares};

#[derive(Clone, Debug, PartialEq)]
pub struct CarpOptions {
    /// Rate discount, currency per bit/s.
    pub lambda: f64,
    pub solver: SolverOptions,
}

impl Default for CarpOptions {
    fn default() -> Self {
        CarpOptions { lambda: 0.0, solver: SolverOptions::default() }
    }
}

/// Default bisection tolerance on the demand multiplier.
pub const DELTA_TOLERANCE: f64 = 1.0 / 64.0;

fn solve_problem(
    pm: &ProvisioningModel,
    slices: &[SliceSpec],
    opts: &SolverOptions,
) -> Result<(MilpSolution, ProblemRecord), ProvisioningError> {
    let names: Vec<String> = pm.slices.iter().map(|&s| slices[s].name.clone()).collect();
    let step = pm.step.name().to_string();
    debug!("solving {step} for {names:?}: {} vars, {} rows", pm.model.num_vars(), pm.model.num_constraints());
    let started = Instant::now();
    let sol = solve(&pm.model, opts)?;
    let elapsed = started.elapsed().as_secs_f64();
    match sol.status {
        SolveStatus::Infeasible => return Err(ProvisioningError::Infeasible { step, slices: names }),
        s if !s.has_solution() || !sol.has_assignment() => {
            return Err(ProvisioningError::NoSolution { step, slices: names, status: s.to_string() })
        }
        _ => {}
    }
    let record = ProblemRecord {
        step: pm.step,
        slices: pm.slices.clone(),
        variables: pm.num_variables(),
        instance_variables: pm.num_instance_variables(),
        constraints: pm.model.num_constraints(),
        status: sol.status.to_string(),
        objective: sol.objective.unwrap_or(f64::NAN),
        solve_time_s: elapsed,
    };
    Ok((sol, record))
}

fn assemble(
    infra: &InfrastructureGraph,
    rates: &RateTables,
    variant: Variant,
    lambda: f64,
    radio: Vec<RadioShares>,
    wired: Vec<WiredShares>,
    problems: Vec<ProblemRecord>,
) -> ProvisioningSolution {
    let slice_costs: Vec<Costs> = radio
        .iter()
        .zip(&wired)
        .enumerate()
        .map(|(s, (r, w))| Costs::new(radio_cost(infra, rates, s, lambda, r), wired_cost(infra, w)))
        .collect();
    let costs = Costs::new(slice_costs.iter().map(|c| c.radio).sum(), slice_costs.iter().map(|c| c.wired).sum());
    ProvisioningSolution { variant, lambda, delta: 1.0, radio, wired, slice_costs, costs, problems }
}

/// Provision every slice with the given variant. Sequential steps follow the slice order.
pub fn carp(
    infra: &InfrastructureGraph,
    slices: &[SliceSpec],
    rates: &RateTables,
    variant: Variant,
    opts: &CarpOptions,
) -> Result<ProvisioningSolution, ProvisioningError> {
    if slices.is_empty() {
        return Err(ProvisioningError::Invalid("no slices to provision".into()));
    }
    let all: Vec<usize> = (0..slices.len()).collect();
    let mut problems = Vec::new();

    if variant == Variant::Jrn {
        let pm = build_jrn(infra, slices, rates, opts.lambda)?;
        let (sol, rec) = solve_problem(&pm, slices, &opts.solver)?;
        problems.push(rec);
        let radio = pm.decode_radio(&sol.values);
        let wired = pm.decode_wired(&sol.values);
        info!("{variant}: objective {:?}", sol.objective);
        return Ok(assemble(infra, rates, variant, opts.lambda, radio, wired, problems));
    }

    let mut prior = PriorUsage::empty(infra);
    let mut radio: Vec<Option<RadioShares>> = vec![None; slices.len()];
    let radio_groups: Vec<Vec<usize>> = if variant.sequential_radio() { all.iter().map(|&s| vec![s]).collect() } else { vec![all.clone()] };
    for group in &radio_groups {
        let pm = build_rp(infra, slices, rates, group, opts.lambda, &prior)?;
        let (sol, rec) = solve_problem(&pm, slices, &opts.solver)?;
        problems.push(rec);
        for (k, sh) in pm.decode_radio(&sol.values).into_iter().enumerate() {
            prior.add_radio(&sh);
            radio[group[k]] = Some(sh);
        }
    }
    let radio: Vec<RadioShares> = radio.into_iter().map(|r| r.expect("every slice solved in the radio step")).collect();

    let mut prior = PriorUsage::empty(infra);
    let mut wired: Vec<Option<WiredShares>> = vec![None; slices.len()];
    let net_groups: Vec<Vec<usize>> = if variant.sequential_network() { all.iter().map(|&s| vec![s]).collect() } else { vec![all] };
    for group in &net_groups {
        let pm = build_np(infra, slices, rates, group, &radio, &prior)?;
        let (sol, rec) = solve_problem(&pm, slices, &opts.solver)?;
        problems.push(rec);
        for (k, sh) in pm.decode_wired(&sol.values).into_iter().enumerate() {
            prior.add_wired(&sh);
            wired[group[k]] = Some(sh);
        }
    }
    let wired: Vec<WiredShares> = wired.into_iter().map(|w| w.expect("every slice solved in the network step")).collect();
    let sol = assemble(infra, rates, variant, opts.lambda, radio, wired, problems);
    info!("{variant}: c_tot = {}", sol.costs.total);
    Ok(sol)
}

/// Every slice with all demands multiplied by `delta`.
pub fn scale_slices(slices: &[SliceSpec], delta: f64) -> Vec<SliceSpec> {
    slices.iter().map(|s| s.scaled(delta)).collect()
}

/// Largest demand multiplier in `]0, 1]` (within `tolerance`) for which `carp` succeeds.
///
/// Returns immediately when the full demand fits. Only infeasibility drives the
/// bisection; any other failure is returned as is.
pub fn delta_scaling(
    infra: &InfrastructureGraph,
    slices: &[SliceSpec],
    rates: &RateTables,
    variant: Variant,
    opts: &CarpOptions,
    tolerance: f64,
) -> Result<(f64, ProvisioningSolution), ProvisioningError> {
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(ProvisioningError::Invalid(format!("delta tolerance must lie in ]0, 1[, got {tolerance}")));
    }
    let attempt = |delta: f64| -> Result<Option<ProvisioningSolution>, ProvisioningError> {
        match carp(infra, &scale_slices(slices, delta), rates, variant, opts) {
            Ok(mut sol) => {
                sol.delta = delta;
                Ok(Some(sol))
            }
            Err(e) if e.is_infeasible() => Ok(None),
            Err(e) => Err(e),
        }
    };
    if let Some(sol) = attempt(1.0)? {
        return Ok((1.0, sol));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = None;
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        match attempt(mid)? {
            Some(sol) => {
                lo = mid;
                best = Some(sol);
            }
            None => hi = mid,
        }
        debug!("delta bisection: [{lo}, {hi}]");
    }
    match best {
        Some(sol) => Ok((lo, sol)),
        None => Err(ProvisioningError::DeltaFloor { delta: hi }),
    }
}
