//! Generated scenarios: randomized desk-scale instances, small constructed cases and tiny models for the exhaustive oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sliceprov_core::embedding::{build_embedding_ilp, EmbeddingUsage, SfcInstance, SfcLink, Vnf};
use sliceprov_core::provisioning::{build_jrn, build_np, build_rp, PriorUsage, RadioShares};
use sliceprov_core::{
    build_fat_tree, precompute_rate_tables, CostTable, CoverageSpec, FatTreeCaps, InfraLink, InfraNode, InfrastructureGraph, LevelCaps,
    NodeCost, NodeKind, Point, RadioParams, RateTables, Rect, RrhCaps, SliceSpec, SrdGraph, SrdLink, SrdNode, DEFAULT_CELL,
};
use sliceprov_milp::{solve, MilpModel, SolverOptions, VarKind};

use crate::presets::{preset_srd, preset_traffic, with_granularity, PRESET_NAMES};

/// Infrastructure, slices and their rate tables.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub infra: InfrastructureGraph,
    pub slices: Vec<SliceSpec>,
    pub rates: RateTables,
}

impl Instance {
    pub fn new(name: impl Into<String>, infra: InfrastructureGraph, slices: Vec<SliceSpec>) -> Self {
        let rates = precompute_rate_tables(&infra, &slices, &RadioParams::default()).expect("generated slices are valid");
        Instance { name: name.into(), infra, slices, rates }
    }
}

/// Solver settings used for exact comparisons.
pub fn exact_solver() -> SolverOptions {
    SolverOptions { mip_gap: 1e-9, ..SolverOptions::default() }
}

pub fn desk_caps() -> FatTreeCaps {
    FatTreeCaps {
        core: LevelCaps { compute: 16.0, storage: 32.0, bandwidth: 20.0 },
        aggregation: LevelCaps { compute: 8.0, storage: 16.0, bandwidth: 10.0 },
        edge: LevelCaps { compute: 4.0, storage: 8.0, bandwidth: 10.0 },
        loopback_bandwidth: 50.0,
    }
}

pub fn desk_rrh_caps() -> RrhCaps {
    RrhCaps { radio_blocks: 100.0, compute: 6.0, storage: 6.0 }
}

/// RRH leaves on a grid with four columns, 300 m apart.
pub fn grid_positions(n: usize) -> Vec<Point> {
    (0..n).map(|r| Point::new((r % 4) as f64 * 300.0, (r / 4) as f64 * 300.0)).collect()
}

pub fn fat_tree(k: usize) -> InfrastructureGraph {
    build_fat_tree(k, &desk_caps(), &grid_positions(k * k * k / 4), &desk_rrh_caps(), &CostTable::default()).expect("valid fat tree")
}

/// Random scenario on a k-ary fat tree with `n` slices of random preset types, each covering at most 20 cells.
pub fn desk_scenario_with(seed: u64, k: usize, n: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let infra = fat_tree(k);
    let rrhs = grid_positions(k * k * k / 4);
    let max_x = rrhs.iter().map(|p| p.x).fold(0.0, f64::max);
    let max_y = rrhs.iter().map(|p| p.y).fold(0.0, f64::max);
    let slices = (0..n)
        .map(|s| {
            let preset = PRESET_NAMES[rng.gen_range(0..3)];
            let scale = [0.25, 0.5][rng.gen_range(0..2)];
            let srd = with_granularity(preset_srd(preset).unwrap().scaled(scale), 10);
            let (_, up, down) = preset_traffic(preset).unwrap();
            let users = match preset {
                "slice1" => rng.gen_range(5.0..20.0),
                "slice2" => rng.gen_range(20.0..100.0),
                _ => rng.gen_range(5.0..25.0),
            };
            let w = rng.gen_range(90.0..450.0);
            let h = rng.gen_range(103.0..412.0);
            let x0 = rng.gen_range(-100.0..max_x.max(100.0));
            let y0 = rng.gen_range(-h / 2.0..max_y + 1.0);
            let cov = CoverageSpec::uniform_users(vec![Rect::with_size(x0, y0, w, h)], users, up, down, DEFAULT_CELL).unwrap();
            SliceSpec::new(format!("{preset}-{s}"), srd, cov).unwrap()
        })
        .collect();
    Instance::new(format!("desk-k{k}-s{n}-{seed}"), infra, slices)
}

/// Shape drawn from the seed: k in {2, 4}, |S| in {1, 2, 4}.
pub fn desk_scenario(seed: u64) -> Instance {
    let shapes = [(2, 1), (2, 2), (2, 4), (4, 1), (4, 2), (4, 4)];
    let (k, n) = shapes[(seed % shapes.len() as u64) as usize];
    desk_scenario_with(seed, k, n)
}

pub fn cloud_node(name: &str, compute: f64, storage: f64, cost: NodeCost) -> InfraNode {
    InfraNode { name: name.into(), kind: NodeKind::Cloud, compute, storage, radio_blocks: 0.0, position: None, cost }
}

pub fn rrh_node(name: &str, at: Point, blocks: f64, compute: f64, storage: f64) -> InfraNode {
    InfraNode {
        name: name.into(),
        kind: NodeKind::Rrh,
        compute,
        storage,
        radio_blocks: blocks,
        position: Some(at),
        cost: CostTable::default().rrh,
    }
}

fn unit_cost(x: f64) -> NodeCost {
    NodeCost { fixed: 0.0, compute: x, storage: x, radio: 0.0 }
}

fn link(src: usize, dst: usize, bandwidth: f64, cost: f64) -> InfraLink {
    InfraLink { src, dst, bandwidth, cost }
}

/// SRD node holding `n` instances of its demand.
fn instances(name: &str, compute: f64, storage: f64, n: f64) -> SrdNode {
    SrdNode::new(name, compute, compute / n, storage, storage / n)
}

fn wired(name: &str, mut nodes: Vec<SrdNode>, links: Vec<SrdLink>, radio: usize) -> SliceSpec {
    nodes[radio].is_radio = true;
    SliceSpec::new(name, SrdGraph { nodes, links }, CoverageSpec::none()).unwrap()
}

fn srd_link(src: usize, dst: usize, bandwidth: f64) -> SrdLink {
    SrdLink { src, dst, bandwidth }
}

/// v1 forks into v2 and v3 over one link; a costly third node can host v1.
pub fn fork_instance() -> Instance {
    let infra = InfrastructureGraph::new(
        vec![cloud_node("i1", 10.0, 10.0, unit_cost(1.0)), cloud_node("i2", 100.0, 100.0, unit_cost(1.0)), cloud_node("i3", 200.0, 200.0, unit_cost(10.0))],
        vec![link(0, 1, 5.0, 1.0), link(2, 1, 1000.0, 10.0)],
    )
    .unwrap();
    let slice = wired(
        "fork",
        vec![instances("v1", 50.0, 50.0, 130.0), instances("v2", 10.0, 10.0, 10.0), instances("v3", 10.0, 10.0, 10.0)],
        vec![srd_link(0, 1, 30.0), srd_link(0, 2, 20.0)],
        0,
    );
    Instance::new("fork", infra, vec![slice])
}

/// v1 and v2 merge into v3 over one link.
pub fn merge_instance() -> Instance {
    let infra = InfrastructureGraph::new(
        vec![cloud_node("i1", 30.0, 27.0, unit_cost(1.0)), cloud_node("i2", 25.0, 25.0, unit_cost(1.0))],
        vec![link(0, 1, 7.5, 1.0)],
    )
    .unwrap();
    let slice = wired(
        "merge",
        vec![instances("v1", 10.0, 10.0, 10.0), instances("v2", 12.0, 12.0, 12.0), instances("v3", 10.0, 10.0, 10.0)],
        vec![srd_link(0, 2, 3.0), srd_link(1, 2, 2.0)],
        2,
    );
    Instance::new("merge", infra, vec![slice])
}

/// Two 8-CPU nodes facing a two-VNF chain that asks for 16 CPUs per VNF: twice the capacity.
pub fn oversubscribed_instance() -> Instance {
    let infra = InfrastructureGraph::new(
        vec![cloud_node("i0", 8.0, 8.0, unit_cost(1.0)), cloud_node("i1", 8.0, 8.0, unit_cost(1.0))],
        vec![link(0, 1, 100.0, 1.0), link(1, 0, 100.0, 1.0), link(0, 0, 100.0, 0.0), link(1, 1, 100.0, 0.0)],
    )
    .unwrap();
    let slice = wired("double", vec![instances("a", 16.0, 16.0, 64.0), instances("b", 16.0, 16.0, 64.0)], vec![srd_link(0, 1, 1.0)], 1);
    Instance::new("oversubscribed", infra, vec![slice])
}

/// Eight RRHs on a 2 x 4 grid, 400 m apart, around one data center, with one slice of each preset type.
pub fn eight_rrh_instance() -> Instance {
    let mut nodes = vec![cloud_node("dc", 1000.0, 1000.0, CostTable::default().cloud)];
    let mut links = vec![link(0, 0, 1000.0, 0.0)];
    for r in 0..8 {
        let at = Point::new((r % 4) as f64 * 400.0, (r / 4) as f64 * 400.0);
        nodes.push(rrh_node(&format!("rrh{r}"), at, 100.0, 50.0, 50.0));
        links.extend([link(0, r + 1, 100.0, 1.0), link(r + 1, 0, 100.0, 1.0), link(r + 1, r + 1, 100.0, 0.0)]);
    }
    let infra = InfrastructureGraph::new(nodes, links).unwrap();
    let areas = [
        Rect::with_size(450.0, 100.0, 300.0, 200.0),
        Rect::with_size(0.0, 0.0, 1200.0, 400.0),
        Rect::with_size(-100.0, 450.0, 1400.0, 70.0),
    ];
    let slices = PRESET_NAMES
        .iter()
        .zip(areas)
        .map(|(&p, area)| {
            let (users, up, down) = preset_traffic(p).unwrap();
            let cov = CoverageSpec::uniform_users(vec![area], users, up, down, DEFAULT_CELL).unwrap();
            SliceSpec::new(p, with_granularity(preset_srd(p).unwrap(), 10), cov).unwrap()
        })
        .collect();
    Instance::new("eight-rrh", infra, slices)
}

/// Single slice-type-1 SFC template: per-SFC demand is the per-instance minimum.
pub fn type1_template() -> SrdGraph {
    preset_srd("slice1").unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TinyFamily {
    Rp,
    Np,
    Jrn,
    Embedding,
}

impl TinyFamily {
    pub const ALL: [TinyFamily; 4] = [TinyFamily::Rp, TinyFamily::Np, TinyFamily::Jrn, TinyFamily::Embedding];
}

#[derive(Clone, Debug)]
pub struct TinyModel {
    pub family: TinyFamily,
    pub label: String,
    pub model: MilpModel,
}

/// Number of integer assignments an exhaustive search visits.
pub fn enumeration_size(m: &MilpModel) -> f64 {
    m.variables()
        .iter()
        .filter(|v| v.kind != VarKind::Continuous)
        .map(|v| (v.upper.floor() - v.lower.ceil() + 1.0).max(1.0))
        .product()
}

/// One RRH with `blocks` RBs and one cloud node, fully linked.
fn tiny_radio_infra(rng: &mut ChaCha8Rng, rrhs: usize) -> InfrastructureGraph {
    let mut nodes: Vec<InfraNode> = (0..rrhs)
        .map(|r| {
            let c = f64::from(rng.gen_range(1..=3));
            rrh_node(&format!("r{r}"), Point::new(r as f64 * 200.0, 0.0), f64::from(rng.gen_range(1..=4)), c, 0.0)
        })
        .collect();
    nodes.push(cloud_node("c", f64::from(rng.gen_range(1..=3)), 0.0, unit_cost(f64::from(rng.gen_range(1..=3)))));
    let n = nodes.len();
    let mut links = Vec::new();
    for a in 0..n {
        links.push(link(a, a, 10.0, 0.0));
        for b in 0..n {
            if a != b {
                links.push(link(a, b, f64::from(rng.gen_range(1..=4)), 1.0));
            }
        }
    }
    InfrastructureGraph::new(nodes, links).unwrap()
}

fn tiny_radio_slice(rng: &mut ChaCha8Rng, name: &str, srd_nodes: usize) -> SliceSpec {
    let mut nodes: Vec<SrdNode> = (0..srd_nodes).map(|v| {
        let c = f64::from(rng.gen_range(1..=2));
        SrdNode::new(format!("v{v}"), c, 1.0, 0.0, 0.0)
    }).collect();
    nodes[srd_nodes - 1].is_radio = true;
    let links = (1..srd_nodes).map(|v| srd_link(v - 1, v, f64::from(rng.gen_range(1..=2)))).collect();
    let w = [90.0, 180.0][rng.gen_range(0..2)];
    let cov = CoverageSpec::uniform_users(vec![Rect::with_size(0.0, -50.0, w, 100.0)], rng.gen_range(1.0..8.0), 0.0, 1e6, (90.0, 100.0))
        .unwrap();
    SliceSpec::new(name, SrdGraph { nodes, links }, cov).unwrap()
}

/// Tiny RP, NP, JRN and embedding models with at most eight integer variables each.
pub fn tiny_models(seed: u64, per_family: usize) -> Vec<TinyModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let params = RadioParams::default();
    for k in 0..per_family {
        // RP: two RRHs, one or two slices.
        let infra = tiny_radio_infra(&mut rng, 2);
        let n = rng.gen_range(1..=2);
        let slices: Vec<_> = (0..n).map(|s| tiny_radio_slice(&mut rng, &format!("s{s}"), 1)).collect();
        let rates = precompute_rate_tables(&infra, &slices, &params).unwrap();
        let group: Vec<usize> = (0..n).collect();
        let rp = build_rp(&infra, &slices, &rates, &group, 0.0, &PriorUsage::empty(&infra)).unwrap();
        out.push(TinyModel { family: TinyFamily::Rp, label: format!("rp-{k}"), model: rp.model });

        // NP and JRN: one RRH and one cloud node, a two-VNF chain without storage.
        let infra = tiny_radio_infra(&mut rng, 1);
        let slices = vec![tiny_radio_slice(&mut rng, "s", 2)];
        let rates = precompute_rate_tables(&infra, &slices, &params).unwrap();
        let rp = build_rp(&infra, &slices, &rates, &[0], 0.0, &PriorUsage::empty(&infra)).unwrap();
        let radio = match solve(&rp.model, &exact_solver()) {
            Ok(sol) if sol.has_assignment() => rp.decode_radio(&sol.values),
            _ => vec![RadioShares::zeros(1, rates.cells[0])],
        };
        let np = build_np(&infra, &slices, &rates, &[0], &radio, &PriorUsage::empty(&infra)).unwrap();
        out.push(TinyModel { family: TinyFamily::Np, label: format!("np-{k}"), model: np.model });
        let jrn = build_jrn(&infra, &slices, &rates, 0.0).unwrap();
        out.push(TinyModel { family: TinyFamily::Jrn, label: format!("jrn-{k}"), model: jrn.model });

        // Embedding: one SFC of two or three VNFs on two nodes.
        let infra = InfrastructureGraph::new(
            vec![
                cloud_node("a", f64::from(rng.gen_range(1..=3)), 3.0, NodeCost { fixed: f64::from(rng.gen_range(0..=4)), ..unit_cost(1.0) }),
                cloud_node("b", f64::from(rng.gen_range(1..=3)), 3.0, NodeCost { fixed: f64::from(rng.gen_range(0..=4)), ..unit_cost(2.0) }),
            ],
            vec![link(0, 1, f64::from(rng.gen_range(0..=2)), 1.0), link(1, 0, 1.0, 2.0), link(0, 0, f64::from(rng.gen_range(0..=1)), 0.0)],
        )
        .unwrap();
        let len = rng.gen_range(2..=3);
        let sfc = SfcInstance {
            name: "f".into(),
            vnfs: (0..len).map(|v| Vnf { name: format!("v{v}"), compute: f64::from(rng.gen_range(1..=2)), storage: 1.0 }).collect(),
            links: (1..len).map(|v| SfcLink { src: v - 1, dst: v, bandwidth: 0.5 }).collect(),
        };
        let em = build_embedding_ilp(&infra, &[sfc], &EmbeddingUsage::empty(&infra)).unwrap();
        out.push(TinyModel { family: TinyFamily::Embedding, label: format!("emb-{k}"), model: em.model });
    }
    out
}
