use serde::{Deserialize, Serialize};

use crate::error::MilpError;
use crate::model::MilpModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Bound,
    Integrality,
    Row,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Variable name for bound/integrality violations, row name otherwise.
    pub name: String,
    pub amount: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
    pub max_violation: f64,
    pub objective: f64,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check bounds, integrality and every row of `model` at absolute tolerance `tol`.
pub fn check_feasibility(model: &MilpModel, assignment: &[f64], tol: f64) -> Result<FeasibilityReport, MilpError> {
    if assignment.len() != model.num_vars() {
        return Err(MilpError::AssignmentLength { expected: model.num_vars(), got: assignment.len() });
    }
    let mut report = FeasibilityReport { objective: model.objective_value(assignment), ..Default::default() };
    let push = |report: &mut FeasibilityReport, kind, name: &str, amount: f64| {
        report.max_violation = report.max_violation.max(amount);
        if amount > tol || amount.is_nan() {
            report.violations.push(Violation { kind, name: name.to_string(), amount });
        }
    };
    for (v, &x) in model.variables().iter().zip(assignment) {
        let below = v.lower - x;
        let above = x - v.upper;
        push(&mut report, ViolationKind::Bound, &v.name, below.max(above).max(0.0));
        if v.kind.is_integral() {
            push(&mut report, ViolationKind::Integrality, &v.name, (x - x.round()).abs());
        }
    }
    for c in model.constraints() {
        push(&mut report, ViolationKind::Row, &c.name, c.violation(assignment));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Sense;

    #[test]
    fn flags_each_kind_of_violation() {
        let mut m = MilpModel::new("t");
        let x = m.continuous("x", 0.0, 1.0).unwrap();
        let k = m.integer("k", 0.0, 5.0).unwrap();
        m.add_row("sum", &[(x, 1.0), (k, 1.0)], Sense::Le, 2.0).unwrap();
        let ok = check_feasibility(&m, &[0.5, 1.0], 1e-9).unwrap();
        assert!(ok.is_feasible());
        let bad = check_feasibility(&m, &[1.5, 1.5], 1e-9).unwrap();
        let kinds: Vec<_> = bad.violations.iter().map(|v| v.kind).collect();
        assert_eq!(kinds, vec![ViolationKind::Bound, ViolationKind::Integrality, ViolationKind::Row]);
        assert!((bad.max_violation - 1.0).abs() < 1e-12);
        assert!(check_feasibility(&m, &[0.0], 1e-9).is_err());
    }
}
