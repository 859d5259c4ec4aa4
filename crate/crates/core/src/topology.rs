use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::geometry::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Cloud,
    Rrh,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NodeCost {
    pub fixed: f64,
    pub compute: f64,
    pub storage: f64,
    #[serde(default)]
    pub radio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfraNode {
    pub name: String,
    pub kind: NodeKind,
    /// CPUs.
    pub compute: f64,
    /// GBytes.
    pub storage: f64,
    /// Resource blocks per second; zero for cloud nodes.
    #[serde(default)]
    pub radio_blocks: f64,
    /// Meters in the coverage frame; required for RRHs.
    #[serde(default)]
    pub position: Option<Point>,
    pub cost: NodeCost,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfraLink {
    pub src: usize,
    pub dst: usize,
    /// Gbps.
    pub bandwidth: f64,
    /// Cost per Gbps.
    pub cost: f64,
}

impl InfraLink {
    pub fn is_loopback(&self) -> bool {
        self.src == self.dst
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GraphDef {
    nodes: Vec<InfraNode>,
    links: Vec<InfraLink>,
}

/// Directed infrastructure graph with per-node adjacency lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphDef", into = "GraphDef")]
pub struct InfrastructureGraph {
    nodes: Vec<InfraNode>,
    links: Vec<InfraLink>,
    rrhs: Vec<usize>,
    out_links: Vec<Vec<usize>>,
    in_links: Vec<Vec<usize>>,
    loopback: Vec<Option<usize>>,
}

impl TryFrom<GraphDef> for InfrastructureGraph {
    type Error = ModelError;
    fn try_from(d: GraphDef) -> Result<Self, ModelError> {
        InfrastructureGraph::new(d.nodes, d.links)
    }
}

impl From<InfrastructureGraph> for GraphDef {
    fn from(g: InfrastructureGraph) -> Self {
        GraphDef { nodes: g.nodes, links: g.links }
    }
}

fn nonneg(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

impl InfrastructureGraph {
    pub fn new(nodes: Vec<InfraNode>, links: Vec<InfraLink>) -> Result<Self, ModelError> {
        let mut names = HashSet::new();
        for n in &nodes {
            let err = |reason: &str| ModelError::Node { node: n.name.clone(), reason: reason.into() };
            if !names.insert(n.name.as_str()) {
                return Err(err("duplicate id"));
            }
            let c = &n.cost;
            if ![n.compute, n.storage, n.radio_blocks, c.fixed, c.compute, c.storage, c.radio].iter().all(|&x| nonneg(x)) {
                return Err(err("capacities and costs must be finite and >= 0"));
            }
            if n.radio_blocks > 0.0 && n.kind != NodeKind::Rrh {
                return Err(err("only rrh nodes carry resource blocks"));
            }
            if n.kind == NodeKind::Rrh && n.position.is_none() {
                return Err(err("rrh nodes need a position"));
            }
        }
        let mut seen = HashSet::new();
        let mut out_links = vec![Vec::new(); nodes.len()];
        let mut in_links = vec![Vec::new(); nodes.len()];
        let mut loopback = vec![None; nodes.len()];
        for (l, link) in links.iter().enumerate() {
            let err = |reason: &str| ModelError::Link { link: format!("#{l} ({}->{})", link.src, link.dst), reason: reason.into() };
            if link.src >= nodes.len() || link.dst >= nodes.len() {
                return Err(err("unknown endpoint"));
            }
            if !nonneg(link.bandwidth) || !nonneg(link.cost) {
                return Err(err("bandwidth and cost must be finite and >= 0"));
            }
            if !seen.insert((link.src, link.dst)) {
                return Err(err("parallel link"));
            }
            out_links[link.src].push(l);
            in_links[link.dst].push(l);
            if link.is_loopback() {
                loopback[link.src] = Some(l);
            }
        }
        let rrhs = (0..nodes.len()).filter(|&i| nodes[i].kind == NodeKind::Rrh).collect();
        Ok(InfrastructureGraph { nodes, links, rrhs, out_links, in_links, loopback })
    }

    pub fn nodes(&self) -> &[InfraNode] {
        &self.nodes
    }

    pub fn links(&self) -> &[InfraLink] {
        &self.links
    }

    pub fn node(&self, i: usize) -> &InfraNode {
        &self.nodes[i]
    }

    pub fn link(&self, l: usize) -> &InfraLink {
        &self.links[l]
    }

    /// Node indices of the RRHs, in node order. RRH position `r` in radio tables refers to `rrhs()[r]`.
    pub fn rrhs(&self) -> &[usize] {
        &self.rrhs
    }

    pub fn rrh_slot(&self, node: usize) -> Option<usize> {
        self.rrhs.iter().position(|&i| i == node)
    }

    pub fn out_links(&self, i: usize) -> &[usize] {
        &self.out_links[i]
    }

    pub fn in_links(&self, i: usize) -> &[usize] {
        &self.in_links[i]
    }

    pub fn loopback(&self, i: usize) -> Option<usize> {
        self.loopback[i]
    }

    pub fn is_rrh(&self, i: usize) -> bool {
        self.nodes[i].kind == NodeKind::Rrh
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    pub fn find_link(&self, src: usize, dst: usize) -> Option<usize> {
        self.out_links[src].iter().copied().find(|&l| self.links[l].dst == dst)
    }

    /// Nodes reachable from `from` along directed links.
    pub fn reachable(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(i) = queue.pop_front() {
            for &l in &self.out_links[i] {
                let j = self.links[l].dst;
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCaps {
    pub compute: f64,
    pub storage: f64,
    /// Bandwidth of the links from this level to the level below.
    pub bandwidth: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FatTreeCaps {
    pub core: LevelCaps,
    pub aggregation: LevelCaps,
    pub edge: LevelCaps,
    pub loopback_bandwidth: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RrhCaps {
    pub radio_blocks: f64,
    pub compute: f64,
    pub storage: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostTable {
    pub cloud: NodeCost,
    pub rrh: NodeCost,
    pub link: f64,
    pub loopback: f64,
}

impl Default for CostTable {
    /// Node rows of the reference cost table; link costs are 1 per Gbps and 0 on loopbacks.
    fn default() -> Self {
        CostTable {
            cloud: NodeCost { fixed: 20.0, compute: 1.0, storage: 1.0, radio: 0.0 },
            rrh: NodeCost { fixed: 25.0, compute: 1.0, storage: 1.0, radio: 0.05 },
            link: 1.0,
            loopback: 0.0,
        }
    }
}

/// k-ary fat tree: (k/2)^2 core, k pods of k/2 aggregation and k/2 edge switches, k/2 RRH leaves per edge switch.
pub fn build_fat_tree(
    k: usize,
    caps: &FatTreeCaps,
    rrh_positions: &[Point],
    rrh_caps: &RrhCaps,
    costs: &CostTable,
) -> Result<InfrastructureGraph, ModelError> {
    if k < 2 || k % 2 != 0 {
        return Err(ModelError::Topology(format!("fat-tree arity must be even and >= 2, got {k}")));
    }
    let h = k / 2;
    let leaves = k * k * k / 4;
    if rrh_positions.len() != leaves {
        return Err(ModelError::Topology(format!("k = {k} needs {leaves} rrh positions, got {}", rrh_positions.len())));
    }
    let mut nodes = Vec::new();
    let cloud = |name: String, lc: &LevelCaps| InfraNode {
        name,
        kind: NodeKind::Cloud,
        compute: lc.compute,
        storage: lc.storage,
        radio_blocks: 0.0,
        position: None,
        cost: costs.cloud,
    };
    for c in 0..h * h {
        nodes.push(cloud(format!("core{c}"), &caps.core));
    }
    let agg0 = nodes.len();
    for p in 0..k {
        for a in 0..h {
            nodes.push(cloud(format!("agg{p}_{a}"), &caps.aggregation));
        }
    }
    let edge0 = nodes.len();
    for p in 0..k {
        for e in 0..h {
            nodes.push(cloud(format!("edge{p}_{e}"), &caps.edge));
        }
    }
    let rrh0 = nodes.len();
    for (r, pos) in rrh_positions.iter().enumerate() {
        nodes.push(InfraNode {
            name: format!("rrh{r}"),
            kind: NodeKind::Rrh,
            compute: rrh_caps.compute,
            storage: rrh_caps.storage,
            radio_blocks: rrh_caps.radio_blocks,
            position: Some(*pos),
            cost: costs.rrh,
        });
    }
    let mut links = Vec::new();
    let mut both = |a: usize, b: usize, bw: f64| {
        links.push(InfraLink { src: a, dst: b, bandwidth: bw, cost: costs.link });
        links.push(InfraLink { src: b, dst: a, bandwidth: bw, cost: costs.link });
    };
    // Core switch (a, j) connects to aggregation switch a of every pod.
    for a in 0..h {
        for j in 0..h {
            let core = a * h + j;
            for p in 0..k {
                both(core, agg0 + p * h + a, caps.core.bandwidth);
            }
        }
    }
    for p in 0..k {
        for a in 0..h {
            for e in 0..h {
                both(agg0 + p * h + a, edge0 + p * h + e, caps.aggregation.bandwidth);
            }
        }
    }
    for p in 0..k {
        for e in 0..h {
            for r in 0..h {
                both(edge0 + p * h + e, rrh0 + (p * h + e) * h + r, caps.edge.bandwidth);
            }
        }
    }
    for i in 0..nodes.len() {
        links.push(InfraLink { src: i, dst: i, bandwidth: caps.loopback_bandwidth, cost: costs.loopback });
    }
    InfrastructureGraph::new(nodes, links)
}

/// Name-to-index map, handy for tests and scenario wiring.
pub fn name_index(g: &InfrastructureGraph) -> HashMap<String, usize> {
    g.nodes().iter().enumerate().map(|(i, n)| (n.name.clone(), i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> FatTreeCaps {
        let l = LevelCaps { compute: 10.0, storage: 10.0, bandwidth: 5.0 };
        FatTreeCaps { core: l, aggregation: l, edge: l, loopback_bandwidth: 100.0 }
    }

    fn positions(n: usize) -> Vec<Point> {
        (0..n).map(|i| Point { x: i as f64 * 10.0, y: 0.0 }).collect()
    }

    const RRH: RrhCaps = RrhCaps { radio_blocks: 100.0, compute: 1.0, storage: 1.0 };

    #[test]
    fn k4_counts() {
        let g = build_fat_tree(4, &caps(), &positions(16), &RRH, &CostTable::default()).unwrap();
        assert_eq!(g.nodes().len(), 36);
        let count = |p: &str| g.nodes().iter().filter(|n| n.name.starts_with(p)).count();
        assert_eq!((count("core"), count("agg"), count("edge"), count("rrh")), (4, 8, 8, 16));
        assert_eq!(g.rrhs().len(), 16);
        // 3 k^3 / 4 undirected links, both directions, plus one loopback per node.
        assert_eq!(g.links().len(), 2 * 48 + 36);
        assert!((0..36).all(|i| g.loopback(i).is_some()));
        // Every switch port is used: core and aggregation have k ports, edge has k ports.
        for (i, n) in g.nodes().iter().enumerate() {
            let ext = g.out_links(i).iter().filter(|&&l| !g.link(l).is_loopback()).count();
            let expected = if n.kind == NodeKind::Rrh { 1 } else { 4 };
            assert_eq!(ext, expected, "{}", n.name);
        }
    }

    #[test]
    fn k2_is_connected() {
        let g = build_fat_tree(2, &caps(), &positions(2), &RRH, &CostTable::default()).unwrap();
        assert_eq!(g.nodes().len(), 7);
        for &r in g.rrhs() {
            let seen = g.reachable(r);
            assert!(seen.iter().all(|&s| s));
        }
        let core = g.node_index("core0").unwrap();
        assert!(g.rrhs().iter().all(|&r| g.reachable(core)[r]));
    }

    #[test]
    fn table_costs() {
        let g = build_fat_tree(4, &caps(), &positions(16), &RRH, &CostTable::default()).unwrap();
        for n in g.nodes() {
            match n.kind {
                NodeKind::Cloud => assert_eq!((n.cost.fixed, n.cost.compute, n.cost.storage), (20.0, 1.0, 1.0)),
                NodeKind::Rrh => assert_eq!((n.cost.fixed, n.cost.radio), (25.0, 0.05)),
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_fat_tree(3, &caps(), &positions(6), &RRH, &CostTable::default()).is_err());
        assert!(build_fat_tree(4, &caps(), &positions(15), &RRH, &CostTable::default()).is_err());
        let n = InfraNode {
            name: "c".into(),
            kind: NodeKind::Cloud,
            compute: 1.0,
            storage: 1.0,
            radio_blocks: 5.0,
            position: None,
            cost: NodeCost::default(),
        };
        assert!(InfrastructureGraph::new(vec![n.clone()], vec![]).is_err());
        let ok = InfraNode { radio_blocks: 0.0, ..n };
        let dup = InfrastructureGraph::new(vec![ok.clone(), ok], vec![]);
        assert!(dup.is_err());
    }

    #[test]
    fn serde_round_trip_rebuilds_indices() {
        let g = build_fat_tree(2, &caps(), &positions(2), &RRH, &CostTable::default()).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: InfrastructureGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
