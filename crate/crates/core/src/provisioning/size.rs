use serde::{Deserialize, Serialize};

use crate::slice::SliceSpec;
use crate::topology::InfrastructureGraph;

use super::shares::{Step, Variant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceDims {
    pub cells: usize,
    pub srd_nodes: usize,
    pub srd_links: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioDims {
    pub infra_nodes: usize,
    pub rrh_nodes: usize,
    /// Including loopbacks.
    pub infra_links: usize,
    pub slices: Vec<SliceDims>,
}

impl ScenarioDims {
    pub fn of(infra: &InfrastructureGraph, slices: &[SliceSpec]) -> Self {
        ScenarioDims {
            infra_nodes: infra.nodes().len(),
            rrh_nodes: infra.rrhs().len(),
            infra_links: infra.links().len(),
            slices: slices
                .iter()
                .map(|s| SliceDims { cells: s.coverage.num_cells(), srd_nodes: s.srd.nodes.len(), srd_links: s.srd.links.len() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSize {
    pub step: Step,
    pub slices: Vec<usize>,
    pub variables: usize,
}

struct Counts {
    rp: fn(&ScenarioDims, &SliceDims) -> usize,
    np: fn(&ScenarioDims, &SliceDims) -> usize,
    jrn_extra: fn(&ScenarioDims) -> usize,
}

fn sizes(variant: Variant, dims: &ScenarioDims, k: &Counts) -> Vec<ProblemSize> {
    let all: Vec<usize> = (0..dims.slices.len()).collect();
    let sum = |idx: &[usize], f: fn(&ScenarioDims, &SliceDims) -> usize| idx.iter().map(|&s| f(dims, &dims.slices[s])).sum::<usize>();
    let groups = |seq: bool| -> Vec<Vec<usize>> {
        if seq {
            all.iter().map(|&s| vec![s]).collect()
        } else {
            vec![all.clone()]
        }
    };
    if variant == Variant::Jrn {
        let variables = sum(&all, k.rp) + sum(&all, k.np) + all.len() * (k.jrn_extra)(dims);
        return vec![ProblemSize { step: Step::Jrn, slices: all, variables }];
    }
    let mut out = Vec::new();
    for g in groups(variant.sequential_radio()) {
        out.push(ProblemSize { step: Step::Rp, variables: sum(&g, k.rp), slices: g });
    }
    for g in groups(variant.sequential_network()) {
        out.push(ProblemSize { step: Step::Np, variables: sum(&g, k.np), slices: g });
    }
    out
}

/// Variable counts of the models this crate builds, instance counts excluded.
///
/// Per slice the radio step has `|N_Ir| (1 + 2 |Q|)` variables (separate up and
/// down shares plus one indicator per RRH) and the network step
/// `2 |N_I| |N_V| + |N_I| + |E_I| |E_V|` (node shares, node indicators, link shares).
pub fn count_problem_size(variant: Variant, dims: &ScenarioDims) -> Vec<ProblemSize> {
    let k = Counts {
        rp: |d, s| d.rrh_nodes * (1 + 2 * s.cells),
        np: |d, s| 2 * d.infra_nodes * s.srd_nodes + d.infra_nodes + d.infra_links * s.srd_links,
        jrn_extra: |_| 0,
    };
    sizes(variant, dims, &k)
}

/// The reference size table taken literally: one radio share per (RRH, cell),
/// and node indicators counted only in the single-step row.
pub fn table_one_formula(variant: Variant, dims: &ScenarioDims) -> Vec<ProblemSize> {
    let k = Counts {
        rp: |d, s| d.rrh_nodes * (1 + s.cells),
        np: |d, s| 2 * d.infra_nodes * s.srd_nodes + d.infra_links * s.srd_links,
        jrn_extra: |d| d.infra_nodes,
    };
    sizes(variant, dims, &k)
}
