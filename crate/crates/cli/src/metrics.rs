//! Metrics derived from provisioning solutions.

use serde::{Deserialize, Serialize};
use sliceprov_core::provisioning::{ProblemRecord, ProvisioningSolution, Variant};
use sliceprov_core::InfrastructureGraph;

/// Shares at or below this count as unused.
pub const SHARE_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionMetrics {
    pub c_rr: f64,
    pub c_wr: f64,
    pub c_tot: f64,
    /// Provisioned resource blocks over all slices and RRHs.
    pub rb_used: f64,
    /// `rb_used / sum_r a_r`.
    pub rb_utilization: f64,
    pub used_nodes: usize,
    pub node_utilization: f64,
    /// Non-loopback links carrying a positive share.
    pub used_links: usize,
    pub link_utilization: f64,
}

pub fn solution_metrics(infra: &InfrastructureGraph, sol: &ProvisioningSolution) -> SolutionMetrics {
    let rb_used: f64 = sol.radio.iter().map(|r| {
        let (u, d) = r.blocks(infra);
        u + d
    }).sum();
    let rb_total: f64 = infra.rrhs().iter().map(|&i| infra.node(i).radio_blocks).sum();

    let used_nodes = (0..infra.nodes().len())
        .filter(|&i| {
            let radio = infra.rrh_slot(i).is_some_and(|r| sol.radio.iter().any(|s| s.used[r]));
            radio || sol.wired.iter().any(|w| w.used[i])
        })
        .count();
    let wired_links: Vec<usize> = (0..infra.links().len()).filter(|&l| !infra.link(l).is_loopback()).collect();
    let used_links = wired_links.iter().filter(|&&l| sol.wired.iter().map(|w| w.link_share(l)).sum::<f64>() > SHARE_EPS).count();
    let frac = |a: f64, b: f64| if b > 0.0 { a / b } else { 0.0 };
    SolutionMetrics {
        c_rr: sol.costs.radio,
        c_wr: sol.costs.wired,
        c_tot: sol.costs.total,
        rb_used,
        rb_utilization: frac(rb_used, rb_total),
        used_nodes,
        node_utilization: frac(used_nodes as f64, infra.nodes().len() as f64),
        used_links,
        link_utilization: frac(used_links as f64, wired_links.len() as f64),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Solved,
    Infeasible,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariantMetrics {
    pub variant: Variant,
    pub outcome: Outcome,
    /// `optimal` when every subproblem was solved to optimality, otherwise the first other solver status or the error.
    pub status: String,
    pub delta: Option<f64>,
    pub metrics: Option<SolutionMetrics>,
    pub solve_time_s: f64,
    pub problems: Vec<ProblemRecord>,
}

impl VariantMetrics {
    pub fn solved(infra: &InfrastructureGraph, sol: &ProvisioningSolution) -> Self {
        let status = sol.problems.iter().map(|p| p.status.as_str()).find(|s| *s != "optimal").unwrap_or("optimal").to_string();
        VariantMetrics {
            variant: sol.variant,
            outcome: Outcome::Solved,
            status,
            delta: Some(sol.delta),
            metrics: Some(solution_metrics(infra, sol)),
            solve_time_s: sol.solve_time_s(),
            problems: sol.problems.clone(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.outcome == Outcome::Solved && self.status == "optimal"
    }
}

/// Flat metrics row; timings are kept out so that reruns give identical files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub variant: String,
    pub outcome: Outcome,
    pub status: String,
    pub delta: Option<f64>,
    pub c_rr: Option<f64>,
    pub c_wr: Option<f64>,
    pub c_tot: Option<f64>,
    pub rb_utilization: Option<f64>,
    pub node_utilization: Option<f64>,
    pub link_utilization: Option<f64>,
    pub rb_used: Option<f64>,
    pub used_nodes: Option<usize>,
    pub used_links: Option<usize>,
}

impl From<&VariantMetrics> for MetricsRow {
    fn from(v: &VariantMetrics) -> Self {
        let m = v.metrics.as_ref();
        MetricsRow {
            variant: v.variant.name().into(),
            outcome: v.outcome,
            status: v.status.clone(),
            delta: v.delta,
            c_rr: m.map(|m| m.c_rr),
            c_wr: m.map(|m| m.c_wr),
            c_tot: m.map(|m| m.c_tot),
            rb_utilization: m.map(|m| m.rb_utilization),
            node_utilization: m.map(|m| m.node_utilization),
            link_utilization: m.map(|m| m.link_utilization),
            rb_used: m.map(|m| m.rb_used),
            used_nodes: m.map(|m| m.used_nodes),
            used_links: m.map(|m| m.used_links),
        }
    }
}

/// One solved subproblem of one variant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub variant: String,
    pub index: usize,
    pub step: String,
    /// Slice indices joined by `;`.
    pub slices: String,
    pub variables: usize,
    pub instance_variables: usize,
    pub constraints: usize,
    pub status: String,
    pub objective: f64,
    pub solve_time_s: f64,
}

pub fn timing_rows(v: &VariantMetrics) -> Vec<TimingRow> {
    v.problems
        .iter()
        .enumerate()
        .map(|(index, p)| TimingRow {
            variant: v.variant.name().into(),
            index,
            step: p.step.name().into(),
            slices: p.slices.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";"),
            variables: p.variables,
            instance_variables: p.instance_variables,
            constraints: p.constraints,
            status: p.status.clone(),
            objective: p.objective,
            solve_time_s: p.solve_time_s,
        })
        .collect()
}

/// Resource blocks one RRH provisions for one slice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbRow {
    pub variant: String,
    pub rrh: String,
    pub slice: String,
    pub rb_up: f64,
    pub rb_down: f64,
    pub rb_total: f64,
    pub capacity: f64,
}

/// Long-format table with one row per (variant, RRH, slice).
pub fn emit_rb_breakdown(infra: &InfrastructureGraph, slice_names: &[String], solutions: &[&ProvisioningSolution]) -> Vec<RbRow> {
    let mut rows = Vec::new();
    for sol in solutions {
        for (r, &i) in infra.rrhs().iter().enumerate() {
            let node = infra.node(i);
            for (s, shares) in sol.radio.iter().enumerate() {
                let rb_up = node.radio_blocks * shares.up[r].iter().sum::<f64>();
                let rb_down = node.radio_blocks * shares.down[r].iter().sum::<f64>();
                rows.push(RbRow {
                    variant: sol.variant.name().into(),
                    rrh: node.name.clone(),
                    slice: slice_names.get(s).cloned().unwrap_or_else(|| format!("s{s}")),
                    rb_up,
                    rb_down,
                    rb_total: rb_up + rb_down,
                    capacity: node.radio_blocks,
                });
            }
        }
    }
    rows
}

/// RRHs with a positive RB total in the breakdown of `variant`.
pub fn active_rrhs(rows: &[RbRow], variant: Variant) -> usize {
    let mut names: Vec<&str> = rows.iter().filter(|r| r.variant == variant.name() && r.rb_total > SHARE_EPS).map(|r| r.rrh.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    names.len()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub scenario: String,
    pub lambda: f64,
    pub variants: Vec<VariantMetrics>,
    pub rb_breakdown: Vec<RbRow>,
}

impl MetricsReport {
    pub fn get(&self, v: Variant) -> Option<&VariantMetrics> {
        self.variants.iter().find(|m| m.variant == v)
    }

    pub fn all_acceptable(&self) -> bool {
        self.variants.iter().all(|v| v.outcome != Outcome::Failed)
    }
}
