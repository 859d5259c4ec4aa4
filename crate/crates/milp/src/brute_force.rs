//! Exhaustive reference solver for tiny models.
//!
//! Integer variables are enumerated over their full bounded domain. For each
//! integer assignment the continuous part is either solved exactly with the
//! dense simplex or sampled on a uniform grid.

use std::time::Instant;

use crate::error::MilpError;
use crate::model::MilpModel;
use crate::simplex::{solve_lp, LpOutcome, LpProblem};
use crate::solution::{MilpSolution, SolveStatus};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ContinuousMode {
    /// Solve the residual LP exactly.
    ExactLp,
    /// Sample each continuous variable at `points` evenly spaced values.
    Grid { points: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BruteForceGrid {
    pub continuous: ContinuousMode,
    pub max_integer_vars: usize,
    /// Upper bound on enumerated integer assignments.
    pub max_assignments: u64,
    /// Continuous-variable limit in grid mode.
    pub max_grid_vars: usize,
    /// Row tolerance used when checking grid points.
    pub tolerance: f64,
}

impl Default for BruteForceGrid {
    fn default() -> Self {
        BruteForceGrid {
            continuous: ContinuousMode::ExactLp,
            max_integer_vars: 8,
            max_assignments: 1 << 20,
            max_grid_vars: 4,
            tolerance: 1e-9,
        }
    }
}

struct SplitRow {
    int_terms: Vec<(usize, f64)>,
    cont_terms: Vec<(usize, f64)>,
}

pub fn brute_force_solve(model: &MilpModel, grid: &BruteForceGrid) -> Result<MilpSolution, MilpError> {
    let start = Instant::now();
    let vars = model.variables();
    let ints: Vec<usize> = (0..vars.len()).filter(|&j| vars[j].kind.is_integral()).collect();
    let conts: Vec<usize> = (0..vars.len()).filter(|&j| !vars[j].kind.is_integral()).collect();
    if ints.len() > grid.max_integer_vars {
        return Err(MilpError::TooLarge(format!("{} integer variables (limit {})", ints.len(), grid.max_integer_vars)));
    }
    let mut domains = Vec::with_capacity(ints.len());
    let mut total: u64 = 1;
    for &j in &ints {
        let (lo, hi) = (vars[j].lower.ceil(), vars[j].upper.floor());
        if !lo.is_finite() || !hi.is_finite() {
            return Err(MilpError::TooLarge(format!("integer variable {} is unbounded", vars[j].name)));
        }
        if lo > hi {
            return Ok(MilpSolution::without_assignment(SolveStatus::Infeasible, start.elapsed()));
        }
        let size = (hi - lo) as u64 + 1;
        total = total.saturating_mul(size);
        domains.push((lo, size));
    }
    if let ContinuousMode::Grid { points } = grid.continuous {
        if conts.len() > grid.max_grid_vars {
            return Err(MilpError::TooLarge(format!(
                "{} continuous variables in grid mode (limit {})",
                conts.len(),
                grid.max_grid_vars
            )));
        }
        for &j in &conts {
            if !vars[j].lower.is_finite() || !vars[j].upper.is_finite() {
                return Err(MilpError::TooLarge(format!("continuous variable {} is unbounded", vars[j].name)));
            }
        }
        total = total.saturating_mul((points.max(1) as u64).saturating_pow(conts.len() as u32));
    }
    if total > grid.max_assignments {
        return Err(MilpError::TooLarge(format!("{total} assignments (limit {})", grid.max_assignments)));
    }

    let mut int_pos = vec![usize::MAX; vars.len()];
    let mut cont_pos = vec![usize::MAX; vars.len()];
    ints.iter().enumerate().for_each(|(k, &j)| int_pos[j] = k);
    conts.iter().enumerate().for_each(|(k, &j)| cont_pos[j] = k);
    let split: Vec<SplitRow> = model
        .constraints()
        .iter()
        .map(|c| {
            let mut r = SplitRow { int_terms: vec![], cont_terms: vec![] };
            for &(v, a) in &c.terms {
                if int_pos[v.0] != usize::MAX {
                    r.int_terms.push((int_pos[v.0], a));
                } else {
                    r.cont_terms.push((cont_pos[v.0], a));
                }
            }
            r
        })
        .collect();
    let mut cont_cost = vec![0.0; conts.len()];
    let mut int_cost = vec![0.0; ints.len()];
    for &(v, c) in model.objective() {
        if int_pos[v.0] != usize::MAX {
            int_cost[int_pos[v.0]] += c;
        } else {
            cont_cost[cont_pos[v.0]] += c;
        }
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut int_vals: Vec<f64> = domains.iter().map(|d| d.0).collect();
    let mut counter = vec![0u64; ints.len()];
    loop {
        let int_obj: f64 = int_vals.iter().zip(&int_cost).map(|(x, c)| x * c).sum();
        let residual: Vec<f64> = model
            .constraints()
            .iter()
            .zip(&split)
            .map(|(c, s)| c.rhs - s.int_terms.iter().map(|&(k, a)| a * int_vals[k]).sum::<f64>())
            .collect();
        let candidate = match grid.continuous {
            ContinuousMode::ExactLp => {
                let lp = LpProblem {
                    cost: cont_cost.clone(),
                    lower: conts.iter().map(|&j| vars[j].lower).collect(),
                    upper: conts.iter().map(|&j| vars[j].upper).collect(),
                    rows: model
                        .constraints()
                        .iter()
                        .zip(&split)
                        .zip(&residual)
                        .map(|((c, s), &b)| (s.cont_terms.clone(), c.sense, b))
                        .collect(),
                };
                match solve_lp(&lp) {
                    LpOutcome::Optimal { x, objective } => Some((int_obj + objective, x)),
                    LpOutcome::Infeasible => None,
                    LpOutcome::Unbounded => {
                        return Ok(MilpSolution::without_assignment(SolveStatus::Unbounded, start.elapsed()));
                    }
                }
            }
            ContinuousMode::Grid { points } => grid_search(model, &split, &residual, &conts, &cont_cost, points, grid.tolerance)
                .map(|(o, x)| (int_obj + o, x)),
        };
        if let Some((obj, cx)) = candidate {
            if best.as_ref().is_none_or(|(b, _)| obj < *b - 1e-12) {
                let mut full = vec![0.0; vars.len()];
                ints.iter().enumerate().for_each(|(k, &j)| full[j] = int_vals[k]);
                conts.iter().enumerate().for_each(|(k, &j)| full[j] = cx[k]);
                best = Some((obj, full));
            }
        }
        // Odometer increment over the integer domains.
        let mut k = 0;
        loop {
            if k == ints.len() {
                let elapsed = start.elapsed();
                return Ok(match best {
                    Some((obj, values)) => MilpSolution {
                        status: SolveStatus::Optimal,
                        objective: Some(obj),
                        values,
                        mip_gap: Some(0.0),
                        solve_time: elapsed,
                    },
                    None => MilpSolution::without_assignment(SolveStatus::Infeasible, elapsed),
                });
            }
            counter[k] += 1;
            if counter[k] < domains[k].1 {
                int_vals[k] = domains[k].0 + counter[k] as f64;
                break;
            }
            counter[k] = 0;
            int_vals[k] = domains[k].0;
            k += 1;
        }
    }
}

fn grid_search(
    model: &MilpModel,
    split: &[SplitRow],
    residual: &[f64],
    conts: &[usize],
    cost: &[f64],
    points: usize,
    tol: f64,
) -> Option<(f64, Vec<f64>)> {
    let vars = model.variables();
    let points = points.max(1);
    let axis = |k: usize, p: usize| -> f64 {
        let v = &vars[conts[k]];
        if points == 1 {
            v.lower
        } else {
            v.lower + (v.upper - v.lower) * p as f64 / (points - 1) as f64
        }
    };
    let mut idx = vec![0usize; conts.len()];
    let mut best: Option<(f64, Vec<f64>)> = None;
    loop {
        let x: Vec<f64> = (0..conts.len()).map(|k| axis(k, idx[k])).collect();
        let feasible = model.constraints().iter().zip(split).zip(residual).all(|((c, s), &b)| {
            let lhs: f64 = s.cont_terms.iter().map(|&(k, a)| a * x[k]).sum();
            match c.sense {
                crate::model::Sense::Le => lhs <= b + tol,
                crate::model::Sense::Ge => lhs >= b - tol,
                crate::model::Sense::Eq => (lhs - b).abs() <= tol,
            }
        });
        if feasible {
            let obj: f64 = x.iter().zip(cost).map(|(a, c)| a * c).sum();
            if best.as_ref().is_none_or(|(b, _)| obj < *b - 1e-12) {
                best = Some((obj, x));
            }
        }
        let mut k = 0;
        loop {
            if k == conts.len() {
                return best;
            }
            idx[k] += 1;
            if idx[k] < points {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sense;

    #[test]
    fn knapsack_optimum() {
        // max 4a + 5b + 3c, 2a + 3b + c <= 4, binaries -> b = c = 1, value 8
        let mut m = MilpModel::new("knap");
        let a = m.binary("a").unwrap();
        let b = m.binary("b").unwrap();
        let c = m.binary("c").unwrap();
        m.set_objective(&[(a, -4.0), (b, -5.0), (c, -3.0)]).unwrap();
        m.add_row("cap", &[(a, 2.0), (b, 3.0), (c, 1.0)], Sense::Le, 4.0).unwrap();
        let s = brute_force_solve(&m, &BruteForceGrid::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert_eq!(s.objective, Some(-8.0));
        assert_eq!(s.values, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn mixed_exact_and_grid_agree() {
        let mut m = MilpModel::new("mix");
        let k = m.integer("k", 0.0, 3.0).unwrap();
        let x = m.continuous("x", 0.0, 2.0).unwrap();
        m.set_objective(&[(k, 1.0), (x, 2.0)]).unwrap();
        m.add_row("d", &[(k, 1.0), (x, 1.0)], Sense::Ge, 2.5).unwrap();
        let exact = brute_force_solve(&m, &BruteForceGrid::default()).unwrap();
        assert!((exact.objective.unwrap() - 3.0).abs() < 1e-9);
        let g = BruteForceGrid { continuous: ContinuousMode::Grid { points: 5 }, ..Default::default() };
        let grid = brute_force_solve(&m, &g).unwrap();
        assert!((grid.objective.unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn limits_are_enforced() {
        let mut m = MilpModel::new("big");
        for i in 0..9 {
            m.binary(format!("b{i}")).unwrap();
        }
        assert!(matches!(brute_force_solve(&m, &BruteForceGrid::default()), Err(MilpError::TooLarge(_))));
        let mut u = MilpModel::new("unb");
        u.integer("k", 0.0, f64::INFINITY).unwrap();
        assert!(matches!(brute_force_solve(&u, &BruteForceGrid::default()), Err(MilpError::TooLarge(_))));
    }

    #[test]
    fn infeasible_model() {
        let mut m = MilpModel::new("inf");
        let k = m.integer("k", 0.0, 2.0).unwrap();
        m.add_row("r", &[(k, 2.0)], Sense::Eq, 3.0).unwrap();
        let s = brute_force_solve(&m, &BruteForceGrid::default()).unwrap();
        assert_eq!(s.status, SolveStatus::Infeasible);
    }
}
