#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sliceprov_core::{
    build_fat_tree, precompute_rate_tables, CostTable, CoverageSpec, FatTreeCaps, InfraLink, InfraNode, InfrastructureGraph, LevelCaps,
    NodeCost, NodeKind, Point, RadioParams, RateTables, Rect, RrhCaps, SliceSpec, SrdGraph, SrdLink, SrdNode,
};
use sliceprov_milp::SolverOptions;

pub fn solver() -> SolverOptions {
    SolverOptions { mip_gap: 1e-9, ..SolverOptions::default() }
}

pub fn cloud(name: &str, compute: f64, storage: f64, cost: NodeCost) -> InfraNode {
    InfraNode { name: name.into(), kind: NodeKind::Cloud, compute, storage, radio_blocks: 0.0, position: None, cost }
}

pub fn unit_cost(per_unit: f64) -> NodeCost {
    NodeCost { fixed: 0.0, compute: per_unit, storage: per_unit, radio: 0.0 }
}

pub fn link(src: usize, dst: usize, bandwidth: f64, cost: f64) -> InfraLink {
    InfraLink { src, dst, bandwidth, cost }
}

/// Node with `n` instances worth of demand.
pub fn vnf(name: &str, compute: f64, storage: f64, n: f64) -> SrdNode {
    SrdNode::new(name, compute, compute / n, storage, storage / n)
}

pub fn srd_link(src: usize, dst: usize, bandwidth: f64) -> SrdLink {
    SrdLink { src, dst, bandwidth }
}

/// Wired-only slice: the radio node carries no rate.
pub fn wired_slice(name: &str, mut nodes: Vec<SrdNode>, links: Vec<SrdLink>, radio: usize) -> SliceSpec {
    nodes[radio].is_radio = true;
    SliceSpec::new(name, SrdGraph { nodes, links }, CoverageSpec::none()).unwrap()
}

/// vVOC -> vGW -> vBBU chain with ten instances per node, scaled by `k`.
pub fn chain_srd(k: f64) -> SrdGraph {
    let mut bbu = vnf("vBBU", 1.0 * k, 0.1 * k, 10.0);
    bbu.is_radio = true;
    SrdGraph {
        nodes: vec![vnf("vVOC", 1.4 * k, 3.8 * k, 10.0), vnf("vGW", 0.2 * k, 0.1 * k, 10.0), bbu],
        links: vec![srd_link(0, 1, 1.0 * k), srd_link(1, 2, 1.0 * k)],
    }
}

pub fn k2_caps() -> FatTreeCaps {
    FatTreeCaps {
        core: LevelCaps { compute: 16.0, storage: 32.0, bandwidth: 20.0 },
        aggregation: LevelCaps { compute: 8.0, storage: 16.0, bandwidth: 10.0 },
        edge: LevelCaps { compute: 4.0, storage: 8.0, bandwidth: 10.0 },
        loopback_bandwidth: 50.0,
    }
}

pub fn rrh_caps() -> RrhCaps {
    RrhCaps { radio_blocks: 100.0, compute: 6.0, storage: 6.0 }
}

/// k = 2 fat tree with RRHs 300 m apart on the x axis.
pub fn k2_infra(costs: &CostTable) -> InfrastructureGraph {
    let pos = [Point::new(0.0, 0.0), Point::new(300.0, 0.0)];
    build_fat_tree(2, &k2_caps(), &pos, &rrh_caps(), costs).unwrap()
}

pub fn coverage(area: Rect, users: f64, up: f64, down: f64, cell: f64) -> CoverageSpec {
    CoverageSpec::uniform_users(vec![area], users, up, down, (cell, cell)).unwrap()
}

pub fn radio_slice(name: &str, k: f64, cov: CoverageSpec) -> SliceSpec {
    SliceSpec::new(name, chain_srd(k), cov).unwrap()
}

pub fn rates(infra: &InfrastructureGraph, slices: &[SliceSpec]) -> RateTables {
    precompute_rate_tables(infra, slices, &RadioParams::default()).unwrap()
}

/// Random k = 2 scenario with `n` slices and at most 16 cells each.
pub fn random_k2(seed: u64, n: usize) -> (InfrastructureGraph, Vec<SliceSpec>, RateTables) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let infra = k2_infra(&CostTable::default());
    let slices: Vec<SliceSpec> = (0..n)
        .map(|s| {
            let x0 = rng.gen_range(-100.0..250.0);
            let w = rng.gen_range(100.0..200.0);
            let h = rng.gen_range(50.0..200.0);
            let cov = coverage(Rect::with_size(x0, -h / 2.0, w, h), rng.gen_range(5.0..40.0), 0.5e6, 1e6, 50.0);
            radio_slice(&format!("s{s}"), rng.gen_range(1..4) as f64 * 0.5, cov)
        })
        .collect();
    let rates = rates(&infra, &slices);
    (infra, slices, rates)
}
