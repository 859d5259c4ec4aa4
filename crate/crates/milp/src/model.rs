use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::MilpError;

/// Index of a variable inside a [`MilpModel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarKind {
    Continuous,
    Integer,
    Binary,
}

impl VarKind {
    pub fn is_integral(self) -> bool {
        !matches!(self, VarKind::Continuous)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v.0]).sum()
    }

    /// Signed amount by which `values` violates the row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// Linear expression `sum(c_j x_j) + constant`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinExpr {
    pub terms: Vec<(VarId, f64)>,
    pub constant: f64,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(value: f64) -> Self {
        LinExpr { terms: Vec::new(), constant: value }
    }

    pub fn term(var: VarId, coef: f64) -> Self {
        LinExpr { terms: vec![(var, coef)], constant: 0.0 }
    }

    pub fn add(&mut self, var: VarId, coef: f64) -> &mut Self {
        self.terms.push((var, coef));
        self
    }

    pub fn add_constant(&mut self, value: f64) -> &mut Self {
        self.constant += value;
        self
    }

    pub fn add_expr(&mut self, other: &LinExpr, scale: f64) -> &mut Self {
        self.terms.extend(other.terms.iter().map(|&(v, c)| (v, c * scale)));
        self.constant += other.constant * scale;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, values: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(v, c)| c * values[v.0]).sum::<f64>()
    }
}

/// A minimisation MILP: typed, bounded variables and named linear rows.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MilpModel {
    pub name: String,
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Vec<(VarId, f64)>,
    #[serde(skip)]
    var_names: HashMap<String, VarId>,
    #[serde(skip)]
    row_names: HashMap<String, usize>,
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    name.chars()
        .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '(' | ')' | ',' | '.' | '[' | ']' | '#' | '~'))
}

/// Merge repeated variables and drop exact zeros, keeping first-occurrence order.
pub(crate) fn canonical_terms(terms: &[(VarId, f64)]) -> Vec<(VarId, f64)> {
    let mut out: Vec<(VarId, f64)> = Vec::with_capacity(terms.len());
    let mut pos: HashMap<VarId, usize> = HashMap::new();
    for &(v, c) in terms {
        match pos.get(&v) {
            Some(&p) => out[p].1 += c,
            None => {
                pos.insert(v, out.len());
                out.push((v, c));
            }
        }
    }
    out.retain(|&(_, c)| c != 0.0);
    out
}

impl MilpModel {
    pub fn new(name: impl Into<String>) -> Self {
        MilpModel { name: name.into(), ..Default::default() }
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lower: f64,
        upper: f64,
    ) -> Result<VarId, MilpError> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(MilpError::InvalidName(name));
        }
        if self.var_names.contains_key(&name) {
            return Err(MilpError::DuplicateName(name));
        }
        if lower.is_nan() || upper.is_nan() || lower > upper || lower == f64::INFINITY || upper == f64::NEG_INFINITY {
            return Err(MilpError::InvalidBounds { name, lower, upper });
        }
        if kind == VarKind::Binary && (lower < 0.0 || upper > 1.0) {
            return Err(MilpError::InvalidBounds { name, lower, upper });
        }
        let id = VarId(self.variables.len());
        self.var_names.insert(name.clone(), id);
        self.variables.push(Variable { name, kind, lower, upper });
        Ok(id)
    }

    pub fn continuous(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> Result<VarId, MilpError> {
        self.add_var(name, VarKind::Continuous, lower, upper)
    }

    pub fn integer(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> Result<VarId, MilpError> {
        self.add_var(name, VarKind::Integer, lower, upper)
    }

    pub fn binary(&mut self, name: impl Into<String>) -> Result<VarId, MilpError> {
        self.add_var(name, VarKind::Binary, 0.0, 1.0)
    }

    /// Add `sum(terms) sense rhs`.
    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        terms: &[(VarId, f64)],
        sense: Sense,
        rhs: f64,
    ) -> Result<usize, MilpError> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(MilpError::InvalidName(name));
        }
        if self.row_names.contains_key(&name) {
            return Err(MilpError::DuplicateName(name));
        }
        if !rhs.is_finite() {
            return Err(MilpError::InvalidCoefficient { row: name, value: rhs });
        }
        for &(v, c) in terms {
            if v.0 >= self.variables.len() {
                return Err(MilpError::UnknownVariable(format!("#{}", v.0)));
            }
            if !c.is_finite() {
                return Err(MilpError::InvalidCoefficient { row: name, value: c });
            }
        }
        let idx = self.constraints.len();
        self.row_names.insert(name.clone(), idx);
        self.constraints.push(Constraint { name, terms: canonical_terms(terms), sense, rhs });
        Ok(idx)
    }

    /// Add `lhs sense rhs` for two affine expressions.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        lhs: &LinExpr,
        sense: Sense,
        rhs: &LinExpr,
    ) -> Result<usize, MilpError> {
        let mut terms = lhs.terms.clone();
        terms.extend(rhs.terms.iter().map(|&(v, c)| (v, -c)));
        self.add_row(name, &terms, sense, rhs.constant - lhs.constant)
    }

    /// Encode the strict row `sum(terms) < rhs` as `sum(terms) <= rhs - epsilon`.
    pub fn add_strict_lt(
        &mut self,
        name: impl Into<String>,
        terms: &[(VarId, f64)],
        rhs: f64,
        epsilon: f64,
    ) -> Result<usize, MilpError> {
        self.add_row(name, terms, Sense::Le, rhs - epsilon)
    }

    pub fn set_objective(&mut self, terms: &[(VarId, f64)]) -> Result<(), MilpError> {
        for &(v, c) in terms {
            if v.0 >= self.variables.len() {
                return Err(MilpError::UnknownVariable(format!("#{}", v.0)));
            }
            if !c.is_finite() {
                return Err(MilpError::InvalidCoefficient { row: "objective".into(), value: c });
            }
        }
        self.objective = canonical_terms(terms);
        Ok(())
    }

    pub fn add_objective_terms(&mut self, terms: &[(VarId, f64)]) -> Result<(), MilpError> {
        let mut all = self.objective.clone();
        all.extend_from_slice(terms);
        self.set_objective(&all)
    }

    pub fn set_bounds(&mut self, var: VarId, lower: f64, upper: f64) -> Result<(), MilpError> {
        let v = self
            .variables
            .get_mut(var.0)
            .ok_or_else(|| MilpError::UnknownVariable(format!("#{}", var.0)))?;
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(MilpError::InvalidBounds { name: v.name.clone(), lower, upper });
        }
        v.lower = lower;
        v.upper = upper;
        Ok(())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(VarId, f64)] {
        &self.objective
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn num_integral(&self) -> usize {
        self.variables.iter().filter(|v| v.kind.is_integral()).count()
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.var_names.get(name).copied()
    }

    pub fn constraint_by_name(&self, name: &str) -> Option<&Constraint> {
        self.row_names.get(name).map(|&i| &self.constraints[i])
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, c)| c * values[v.0]).sum()
    }

    /// Rebuild name lookups, e.g. after deserialisation.
    pub fn reindex(&mut self) {
        self.var_names = self.variables.iter().enumerate().map(|(i, v)| (v.name.clone(), VarId(i))).collect();
        self.row_names = self.constraints.iter().enumerate().map(|(i, c)| (c.name.clone(), i)).collect();
    }
}
