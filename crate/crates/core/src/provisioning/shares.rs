use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::topology::InfrastructureGraph;

/// Radio shares of one slice, indexed `[rrh slot][cell]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadioShares {
    pub up: Vec<Vec<f64>>,
    pub down: Vec<Vec<f64>>,
    pub used: Vec<bool>,
}

impl RadioShares {
    pub fn zeros(num_rrh: usize, cells: usize) -> Self {
        RadioShares { up: vec![vec![0.0; cells]; num_rrh], down: vec![vec![0.0; cells]; num_rrh], used: vec![false; num_rrh] }
    }

    pub fn num_rrh(&self) -> usize {
        self.used.len()
    }

    /// `sum_q (eta_u + eta_d)` for one RRH.
    pub fn share(&self, rrh: usize) -> f64 {
        self.up[rrh].iter().sum::<f64>() + self.down[rrh].iter().sum::<f64>()
    }

    pub fn total_share(&self) -> f64 {
        (0..self.num_rrh()).map(|r| self.share(r)).sum()
    }

    /// Resource blocks used, `(uplink, downlink)`: `sum_r a_r sum_q eta`.
    pub fn blocks(&self, infra: &InfrastructureGraph) -> (f64, f64) {
        let a = |r: usize| infra.node(infra.rrhs()[r]).radio_blocks;
        let sum = |t: &[Vec<f64>]| t.iter().enumerate().map(|(r, row)| a(r) * row.iter().sum::<f64>()).sum::<f64>();
        (sum(&self.up), sum(&self.down))
    }
}

/// Wired shares of one slice. Node tables are `[infra node][srd node]`, link tables `[infra link][srd link]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WiredShares {
    pub compute: Vec<Vec<f64>>,
    pub storage: Vec<Vec<f64>>,
    pub compute_instances: Vec<Vec<u64>>,
    pub storage_instances: Vec<Vec<u64>>,
    pub link: Vec<Vec<f64>>,
    pub used: Vec<bool>,
}

impl WiredShares {
    pub fn zeros(nodes: usize, srd_nodes: usize, links: usize, srd_links: usize) -> Self {
        WiredShares {
            compute: vec![vec![0.0; srd_nodes]; nodes],
            storage: vec![vec![0.0; srd_nodes]; nodes],
            compute_instances: vec![vec![0; srd_nodes]; nodes],
            storage_instances: vec![vec![0; srd_nodes]; nodes],
            link: vec![vec![0.0; srd_links]; links],
            used: vec![false; nodes],
        }
    }

    pub fn node_compute(&self, i: usize) -> f64 {
        self.compute[i].iter().sum()
    }

    pub fn node_storage(&self, i: usize) -> f64 {
        self.storage[i].iter().sum()
    }

    pub fn link_share(&self, l: usize) -> f64 {
        self.link[l].iter().sum()
    }
}

/// Shares already committed by earlier slices of a sequential run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PriorUsage {
    /// Per RRH slot.
    pub radio: Vec<f64>,
    /// Per infra node.
    pub compute: Vec<f64>,
    pub storage: Vec<f64>,
    /// Per infra link.
    pub link: Vec<f64>,
}

impl PriorUsage {
    pub fn empty(infra: &InfrastructureGraph) -> Self {
        PriorUsage {
            radio: vec![0.0; infra.rrhs().len()],
            compute: vec![0.0; infra.nodes().len()],
            storage: vec![0.0; infra.nodes().len()],
            link: vec![0.0; infra.links().len()],
        }
    }

    pub fn add_radio(&mut self, shares: &RadioShares) {
        for r in 0..shares.num_rrh() {
            self.radio[r] += shares.share(r);
        }
    }

    pub fn add_wired(&mut self, shares: &WiredShares) {
        for i in 0..shares.used.len() {
            self.compute[i] += shares.node_compute(i);
            self.storage[i] += shares.node_storage(i);
        }
        for l in 0..shares.link.len() {
            self.link[l] += shares.link_share(l);
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Costs {
    pub radio: f64,
    pub wired: f64,
    pub total: f64,
}

impl Costs {
    pub fn new(radio: f64, wired: f64) -> Self {
        Costs { radio, wired, total: radio + wired }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "JRN")]
    Jrn,
    #[serde(rename = "SR-SN")]
    SrSn,
    #[serde(rename = "SR-JN")]
    SrJn,
    #[serde(rename = "JR-SN")]
    JrSn,
    #[serde(rename = "JR-JN")]
    JrJn,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::Jrn, Variant::SrSn, Variant::SrJn, Variant::JrSn, Variant::JrJn];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Jrn => "JRN",
            Variant::SrSn => "SR-SN",
            Variant::SrJn => "SR-JN",
            Variant::JrSn => "JR-SN",
            Variant::JrJn => "JR-JN",
        }
    }

    pub fn is_two_step(self) -> bool {
        self != Variant::Jrn
    }

    /// Radio step runs slice by slice.
    pub fn sequential_radio(self) -> bool {
        matches!(self, Variant::SrSn | Variant::SrJn)
    }

    /// Network step runs slice by slice.
    pub fn sequential_network(self) -> bool {
        matches!(self, Variant::SrSn | Variant::JrSn)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let norm = s.trim().to_ascii_uppercase().replace('_', "-");
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == norm)
            .ok_or_else(|| format!("unknown variant '{s}' (expected one of JRN, SR-SN, SR-JN, JR-SN, JR-JN)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Rp,
    Np,
    Jrn,
}

impl Step {
    pub fn name(self) -> &'static str {
        match self {
            Step::Rp => "RP",
            Step::Np => "NP",
            Step::Jrn => "JRN",
        }
    }
}

/// One solved subproblem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemRecord {
    pub step: Step,
    /// Global slice indices covered by the problem.
    pub slices: Vec<usize>,
    /// Variables excluding the instance counts.
    pub variables: usize,
    pub instance_variables: usize,
    pub constraints: usize,
    pub status: String,
    pub objective: f64,
    pub solve_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProvisioningSolution {
    pub variant: Variant,
    pub lambda: f64,
    /// Demand scaling the solution was computed for.
    pub delta: f64,
    pub radio: Vec<RadioShares>,
    pub wired: Vec<WiredShares>,
    /// Per-slice costs, same order as `radio`.
    pub slice_costs: Vec<Costs>,
    pub costs: Costs,
    pub problems: Vec<ProblemRecord>,
}

impl ProvisioningSolution {
    pub fn solve_time_s(&self) -> f64 {
        self.problems.iter().map(|p| p.solve_time_s).sum()
    }

    pub fn objective_sum(&self) -> f64 {
        self.problems.iter().map(|p| p.objective).sum()
    }

    pub fn count(&self, step: Step) -> usize {
        self.problems.iter().filter(|p| p.step == step).count()
    }
}
