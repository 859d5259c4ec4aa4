use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::model::VarId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    /// An incumbent exists but optimality was not proven.
    Feasible,
    Infeasible,
    Unbounded,
    /// Limit reached without any incumbent.
    Timeout,
}

impl SolveStatus {
    pub fn has_solution(self) -> bool {
        matches!(self, SolveStatus::Optimal | SolveStatus::Feasible)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::Timeout => "timeout",
        }
    }
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MilpSolution {
    pub status: SolveStatus,
    /// Objective of the returned assignment, when there is one.
    pub objective: Option<f64>,
    /// One value per model variable when there is an assignment.
    pub values: Vec<f64>,
    pub mip_gap: Option<f64>,
    pub solve_time: Duration,
}

impl MilpSolution {
    pub fn without_assignment(status: SolveStatus, solve_time: Duration) -> Self {
        MilpSolution { status, objective: None, values: Vec::new(), mip_gap: None, solve_time }
    }

    pub fn value(&self, var: VarId) -> f64 {
        self.values[var.0]
    }

    /// True when `values` holds an assignment, which is empty for a model without variables.
    pub fn has_assignment(&self) -> bool {
        self.objective.is_some()
    }
}
