//! Direct SFC embedding and the provision-then-embed comparison.
//!
//! The embedding ILP places every VNF instance on exactly one node and routes
//! each SFC link as a splittable flow between the two hosts. Costs follow the
//! wired provisioning cost: fixed cost per used non-RRH node, per-unit compute
//! and storage, per-Gbps link cost.

use std::time::Instant;

use log::{debug, info};
use serde::{Deserialize, Serialize};
use sliceprov_milp::{solve, MilpModel, Sense, SolveStatus, SolverOptions, VarId};

use crate::coverage::CoverageSpec;
use crate::error::ProvisioningError;
use crate::provisioning::{carp, CarpOptions, ProvisioningSolution, Variant};
use crate::radio::RateTables;
use crate::slice::{SliceSpec, SrdGraph, SrdLink, SrdNode};
use crate::topology::{InfraLink, InfraNode, InfrastructureGraph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vnf {
    pub name: String,
    pub compute: f64,
    pub storage: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SfcLink {
    pub src: usize,
    pub dst: usize,
    /// Gbps.
    pub bandwidth: f64,
}

/// One service function chain instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SfcInstance {
    pub name: String,
    pub vnfs: Vec<Vnf>,
    pub links: Vec<SfcLink>,
}

impl SfcInstance {
    /// Instance whose VNFs take the SRD per-instance minima; link bandwidths are `r_b * link_scale`.
    pub fn from_srd(name: impl Into<String>, srd: &SrdGraph, link_scale: f64) -> Self {
        SfcInstance {
            name: name.into(),
            vnfs: srd.nodes.iter().map(|n| Vnf { name: n.name.clone(), compute: n.min_compute, storage: n.min_storage }).collect(),
            links: srd.links.iter().map(|l| SfcLink { src: l.src, dst: l.dst, bandwidth: l.bandwidth * link_scale }).collect(),
        }
    }

    fn validate(&self) -> Result<(), ProvisioningError> {
        let bad = |m: String| ProvisioningError::Invalid(format!("sfc {}: {m}", self.name));
        if self.vnfs.is_empty() {
            return Err(bad("no vnfs".into()));
        }
        for v in &self.vnfs {
            if !(v.compute > 0.0 && v.storage >= 0.0 && v.compute.is_finite() && v.storage.is_finite()) {
                return Err(bad(format!("{} needs positive compute and storage >= 0", v.name)));
            }
        }
        for l in &self.links {
            if l.src >= self.vnfs.len() || l.dst >= self.vnfs.len() || l.src == l.dst {
                return Err(bad(format!("bad link {}->{}", l.src, l.dst)));
            }
            if !(l.bandwidth > 0.0 && l.bandwidth.is_finite()) {
                return Err(bad(format!("link {}->{} needs positive bandwidth", l.src, l.dst)));
            }
        }
        Ok(())
    }
}

/// `n` copies of the per-instance SFC of `template`.
pub fn replicate_sfc(template: &SrdGraph, n: usize, link_scale: f64) -> Vec<SfcInstance> {
    (0..n).map(|f| SfcInstance::from_srd(format!("sfc{f}"), template, link_scale)).collect()
}

/// SRD aggregating `n` SFCs: node demands `n * minimum` and link demands `n * r_b * link_scale`.
pub fn aggregate_srd(template: &SrdGraph, n: usize, link_scale: f64) -> SrdGraph {
    let k = n as f64;
    SrdGraph {
        nodes: template
            .nodes
            .iter()
            .map(|v| SrdNode {
                compute: k * v.min_compute,
                storage: k * v.min_storage,
                rate_up: 0.0,
                rate_down: 0.0,
                ..v.clone()
            })
            .collect(),
        links: template.links.iter().map(|l| SrdLink { bandwidth: k * l.bandwidth * link_scale, ..l.clone() }).collect(),
    }
}

/// Absolute resources already taken by embedded SFCs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingUsage {
    pub compute: Vec<f64>,
    pub storage: Vec<f64>,
    pub link: Vec<f64>,
    pub used: Vec<bool>,
}

impl EmbeddingUsage {
    pub fn empty(infra: &InfrastructureGraph) -> Self {
        let (n, l) = (infra.nodes().len(), infra.links().len());
        EmbeddingUsage { compute: vec![0.0; n], storage: vec![0.0; n], link: vec![0.0; l], used: vec![false; n] }
    }

    fn add(&mut self, sfcs: &[SfcInstance], sol: &EmbeddingSolution) {
        for (f, sfc) in sfcs.iter().enumerate() {
            for (v, vnf) in sfc.vnfs.iter().enumerate() {
                let i = sol.placement[f][v];
                self.compute[i] += vnf.compute;
                self.storage[i] += vnf.storage;
                self.used[i] = true;
            }
            for (e, link) in sfc.links.iter().enumerate() {
                for (l, &y) in sol.routing[f][e].iter().enumerate() {
                    self.link[l] += y * link.bandwidth;
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingMode {
    Joint,
    Sequential,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSolution {
    /// Host node per `[sfc][vnf]`.
    pub placement: Vec<Vec<usize>>,
    /// Flow fraction per `[sfc][sfc link][infra link]`.
    pub routing: Vec<Vec<Vec<f64>>>,
    pub cost: f64,
    pub solve_time_s: f64,
}

/// A built embedding ILP with its variable layout.
#[derive(Clone, Debug)]
pub struct EmbeddingModel {
    pub model: MilpModel,
    place: Vec<Vec<Vec<Option<VarId>>>>,
    route: Vec<Vec<Vec<VarId>>>,
}

impl EmbeddingModel {
    pub fn decode(&self, values: &[f64]) -> Vec<(Vec<usize>, Vec<Vec<f64>>)> {
        self.place
            .iter()
            .zip(&self.route)
            .map(|(pv, rv)| {
                let placement = pv
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter_map(|(i, x)| x.map(|x| (i, values[x.0])))
                            .fold((usize::MAX, -1.0), |best, (i, x)| if x > best.1 { (i, x) } else { best })
                            .0
                    })
                    .collect();
                let routing = rv.iter().map(|row| row.iter().map(|y| values[y.0]).collect()).collect();
                (placement, routing)
            })
            .collect()
    }
}

/// Embedding ILP for `sfcs` on top of `prior`. Nodes whose residual capacity cannot hold a VNF get no placement variable for it.
pub fn build_embedding_ilp(
    infra: &InfrastructureGraph,
    sfcs: &[SfcInstance],
    prior: &EmbeddingUsage,
) -> Result<EmbeddingModel, ProvisioningError> {
    if sfcs.is_empty() {
        return Err(ProvisioningError::Invalid("empty sfc list".into()));
    }
    if infra.nodes().is_empty() {
        return Err(ProvisioningError::Invalid("empty infrastructure".into()));
    }
    for s in sfcs {
        s.validate()?;
    }
    let nodes = infra.nodes();
    let rc: Vec<f64> = nodes.iter().enumerate().map(|(i, n)| n.compute - prior.compute[i]).collect();
    let rs: Vec<f64> = nodes.iter().enumerate().map(|(i, n)| n.storage - prior.storage[i]).collect();
    let rb: Vec<f64> = infra.links().iter().enumerate().map(|(l, k)| k.bandwidth - prior.link[l]).collect();
    // Headroom for residuals computed from solver output.
    let fits = |need: f64, have: f64| need <= have + 1e-9 * need.max(1.0);

    let mut m = MilpModel::new("embedding");
    let mut obj = Vec::new();
    let mut place = Vec::with_capacity(sfcs.len());
    let mut route = Vec::with_capacity(sfcs.len());
    for (f, sfc) in sfcs.iter().enumerate() {
        let mut pv = Vec::with_capacity(sfc.vnfs.len());
        for (v, vnf) in sfc.vnfs.iter().enumerate() {
            let mut row = Vec::with_capacity(nodes.len());
            for (i, n) in nodes.iter().enumerate() {
                if fits(vnf.compute, rc[i]) && fits(vnf.storage, rs[i]) {
                    let x = m.binary(format!("x(f{f},v{v},i{i})"))?;
                    obj.push((x, vnf.compute * n.cost.compute + vnf.storage * n.cost.storage));
                    row.push(Some(x));
                } else {
                    row.push(None);
                }
            }
            let terms: Vec<_> = row.iter().flatten().map(|&x| (x, 1.0)).collect();
            m.add_row(format!("assign(f{f},v{v})"), &terms, Sense::Eq, 1.0)?;
            pv.push(row);
        }
        let mut rv = Vec::with_capacity(sfc.links.len());
        for (e, link) in sfc.links.iter().enumerate() {
            let row = infra
                .links()
                .iter()
                .enumerate()
                .map(|(l, il)| {
                    let ub = if fits(link.bandwidth * 1e-9, rb[l]) && rb[l] > 0.0 { 1.0 } else { 0.0 };
                    let y = m.continuous(format!("y(f{f},e{e},l{l})"), 0.0, ub)?;
                    obj.push((y, link.bandwidth * il.cost));
                    Ok(y)
                })
                .collect::<Result<Vec<_>, ProvisioningError>>()?;
            rv.push(row);
        }
        place.push(pv);
        route.push(rv);
    }

    let mut used = Vec::with_capacity(nodes.len());
    for (i, n) in nodes.iter().enumerate() {
        let u = m.binary(format!("u(i{i})"))?;
        if !infra.is_rrh(i) && !prior.used[i] {
            obj.push((u, n.cost.fixed));
        }
        used.push(u);
    }

    for (i, _) in nodes.iter().enumerate() {
        let mut tc = Vec::new();
        let mut ts = Vec::new();
        for (f, sfc) in sfcs.iter().enumerate() {
            for (v, vnf) in sfc.vnfs.iter().enumerate() {
                if let Some(x) = place[f][v][i] {
                    tc.push((x, vnf.compute));
                    ts.push((x, vnf.storage));
                    m.add_row(format!("use(f{f},v{v},i{i})"), &[(used[i], 1.0), (x, -1.0)], Sense::Ge, 0.0)?;
                }
            }
        }
        if !tc.is_empty() {
            m.add_row(format!("cap_c(i{i})"), &tc, Sense::Le, rc[i].max(0.0))?;
            m.add_row(format!("cap_s(i{i})"), &ts, Sense::Le, rs[i].max(0.0))?;
        }
    }
    for l in 0..infra.links().len() {
        let t: Vec<_> = sfcs
            .iter()
            .enumerate()
            .flat_map(|(f, sfc)| sfc.links.iter().enumerate().map(move |(e, k)| (f, e, k.bandwidth)))
            .map(|(f, e, b)| (route[f][e][l], b))
            .collect();
        m.add_row(format!("cap_b(l{l})"), &t, Sense::Le, rb[l].max(0.0))?;
    }

    for (f, sfc) in sfcs.iter().enumerate() {
        for (e, link) in sfc.links.iter().enumerate() {
            for i in 0..nodes.len() {
                let xv = place[f][link.src][i];
                let xw = place[f][link.dst][i];
                let mut t = Vec::new();
                for &l in infra.out_links(i) {
                    if !infra.link(l).is_loopback() {
                        t.push((route[f][e][l], 1.0));
                    }
                }
                for &l in infra.in_links(i) {
                    if !infra.link(l).is_loopback() {
                        t.push((route[f][e][l], -1.0));
                    }
                }
                if let Some(x) = xv {
                    t.push((x, -1.0));
                }
                if let Some(x) = xw {
                    t.push((x, 1.0));
                }
                m.add_row(format!("flow(f{f},e{e},i{i})"), &t, Sense::Eq, 0.0)?;
                if let (Some(a), Some(b)) = (xv, xw) {
                    match infra.loopback(i) {
                        Some(ll) => {
                            m.add_row(format!("loop(f{f},e{e},i{i})"), &[(route[f][e][ll], 1.0), (a, -1.0), (b, -1.0)], Sense::Ge, -1.0)?;
                        }
                        None => {
                            m.add_row(format!("noloop(f{f},e{e},i{i})"), &[(a, 1.0), (b, 1.0)], Sense::Le, 1.0)?;
                        }
                    }
                }
            }
        }
    }
    m.set_objective(&obj)?;
    Ok(EmbeddingModel { model: m, place, route })
}

/// Cost of a combined embedding, charging each used non-RRH node's fixed cost once.
pub fn embedding_cost(infra: &InfrastructureGraph, sfcs: &[SfcInstance], placement: &[Vec<usize>], routing: &[Vec<Vec<f64>>]) -> f64 {
    let mut used = vec![false; infra.nodes().len()];
    let mut c = 0.0;
    for (f, sfc) in sfcs.iter().enumerate() {
        for (v, vnf) in sfc.vnfs.iter().enumerate() {
            let i = placement[f][v];
            let n = infra.node(i);
            used[i] = true;
            c += vnf.compute * n.cost.compute + vnf.storage * n.cost.storage;
        }
        for (e, link) in sfc.links.iter().enumerate() {
            for (l, &y) in routing[f][e].iter().enumerate() {
                c += y * link.bandwidth * infra.link(l).cost;
            }
        }
    }
    c + used.iter().enumerate().filter(|&(i, &u)| u && !infra.is_rrh(i)).map(|(i, _)| infra.node(i).cost.fixed).sum::<f64>()
}

fn solve_embedding(
    infra: &InfrastructureGraph,
    sfcs: &[SfcInstance],
    prior: &EmbeddingUsage,
    opts: &SolverOptions,
) -> Result<(Vec<Vec<usize>>, Vec<Vec<Vec<f64>>>), ProvisioningError> {
    let em = build_embedding_ilp(infra, sfcs, prior)?;
    let sol = solve(&em.model, opts)?;
    let names = || sfcs.iter().map(|s| s.name.clone()).collect::<Vec<_>>();
    match sol.status {
        SolveStatus::Infeasible => Err(ProvisioningError::Infeasible { step: "embedding".into(), slices: names() }),
        s if !s.has_solution() || !sol.has_assignment() => {
            Err(ProvisioningError::NoSolution { step: "embedding".into(), slices: names(), status: s.to_string() })
        }
        _ => Ok(em.decode(&sol.values).into_iter().unzip()),
    }
}

/// Embed `sfcs` jointly in one ILP or one at a time in list order.
pub fn embed(
    infra: &InfrastructureGraph,
    sfcs: &[SfcInstance],
    mode: EmbeddingMode,
    opts: &SolverOptions,
) -> Result<EmbeddingSolution, ProvisioningError> {
    let started = Instant::now();
    let (placement, routing) = match mode {
        EmbeddingMode::Joint => solve_embedding(infra, sfcs, &EmbeddingUsage::empty(infra), opts)?,
        EmbeddingMode::Sequential => {
            let mut usage = EmbeddingUsage::empty(infra);
            let mut placement = Vec::with_capacity(sfcs.len());
            let mut routing = Vec::with_capacity(sfcs.len());
            for sfc in sfcs {
                let one = std::slice::from_ref(sfc);
                let (p, r) = solve_embedding(infra, one, &usage, opts)?;
                let partial = EmbeddingSolution { placement: p.clone(), routing: r.clone(), cost: 0.0, solve_time_s: 0.0 };
                usage.add(one, &partial);
                placement.extend(p);
                routing.extend(r);
            }
            (placement, routing)
        }
    };
    let cost = embedding_cost(infra, sfcs, &placement, &routing);
    Ok(EmbeddingSolution { placement, routing, cost, solve_time_s: started.elapsed().as_secs_f64() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingViolation {
    pub what: String,
    pub amount: f64,
}

/// Independent check of placements, capacities and per-SFC flow conservation.
pub fn verify_embedding(infra: &InfrastructureGraph, sfcs: &[SfcInstance], sol: &EmbeddingSolution, tol: f64) -> Vec<EmbeddingViolation> {
    let mut out = Vec::new();
    let mut flag = |what: String, amount: f64| {
        if amount > tol || amount.is_nan() {
            out.push(EmbeddingViolation { what, amount });
        }
    };
    let n = infra.nodes().len();
    if sol.placement.len() != sfcs.len() || sol.routing.len() != sfcs.len() {
        flag("solution shape".into(), f64::INFINITY);
        return out;
    }
    let mut usage = EmbeddingUsage::empty(infra);
    for (f, sfc) in sfcs.iter().enumerate() {
        if sol.placement[f].len() != sfc.vnfs.len() || sol.placement[f].iter().any(|&i| i >= n) || sol.routing[f].len() != sfc.links.len() {
            flag(format!("{} placement", sfc.name), f64::INFINITY);
            return out;
        }
        for (e, link) in sfc.links.iter().enumerate() {
            let y = &sol.routing[f][e];
            let (hv, hw) = (sol.placement[f][link.src], sol.placement[f][link.dst]);
            for (l, &x) in y.iter().enumerate() {
                flag(format!("{} e{e} l{l} bounds", sfc.name), (-x).max(x - 1.0));
            }
            for i in 0..n {
                let out_f: f64 = infra.out_links(i).iter().filter(|&&l| !infra.link(l).is_loopback()).map(|&l| y[l]).sum();
                let in_f: f64 = infra.in_links(i).iter().filter(|&&l| !infra.link(l).is_loopback()).map(|&l| y[l]).sum();
                let supply = (hv == i) as i32 as f64 - (hw == i) as i32 as f64;
                flag(format!("{} e{e} conservation at {}", sfc.name, infra.node(i).name), (out_f - in_f - supply).abs());
            }
            if hv == hw {
                match infra.loopback(hv) {
                    Some(ll) => flag(format!("{} e{e} loopback", sfc.name), 1.0 - y[ll]),
                    None => flag(format!("{} e{e} co-located without loopback", sfc.name), 1.0),
                }
            }
        }
        let partial = EmbeddingSolution { placement: vec![sol.placement[f].clone()], routing: vec![sol.routing[f].clone()], cost: 0.0, solve_time_s: 0.0 };
        usage.add(std::slice::from_ref(sfc), &partial);
    }
    for (i, node) in infra.nodes().iter().enumerate() {
        flag(format!("{} compute", node.name), usage.compute[i] - node.compute);
        flag(format!("{} storage", node.name), usage.storage[i] - node.storage);
    }
    for (l, link) in infra.links().iter().enumerate() {
        flag(format!("link #{l} bandwidth"), usage.link[l] - link.bandwidth);
    }
    let cost = embedding_cost(infra, sfcs, &sol.placement, &sol.routing);
    flag("cost".into(), (cost - sol.cost).abs() / cost.abs().max(1.0));
    out
}

/// Graph restricted to what slice `s` was provisioned, with provisioned amounts as capacities.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedGraph {
    pub graph: InfrastructureGraph,
    /// Original node index per reduced node.
    pub nodes: Vec<usize>,
    /// Original link index per reduced link.
    pub links: Vec<usize>,
}

pub fn reduce_graph(infra: &InfrastructureGraph, prov: &ProvisioningSolution, s: usize) -> Result<ReducedGraph, ProvisioningError> {
    let w = prov.wired.get(s).ok_or_else(|| ProvisioningError::Invalid(format!("no wired shares for slice {s}")))?;
    let r = prov.radio.get(s).ok_or_else(|| ProvisioningError::Invalid(format!("no radio shares for slice {s}")))?;
    let keep: Vec<bool> = (0..infra.nodes().len())
        .map(|i| w.used[i] || infra.rrh_slot(i).is_some_and(|slot| r.used[slot]))
        .collect();
    let mut index = vec![usize::MAX; infra.nodes().len()];
    let mut nodes = Vec::new();
    let mut kept = Vec::new();
    for (i, n) in infra.nodes().iter().enumerate() {
        if keep[i] {
            index[i] = nodes.len();
            kept.push(i);
            let radio_share = infra.rrh_slot(i).map_or(0.0, |slot| r.share(slot));
            nodes.push(InfraNode {
                compute: n.compute * w.node_compute(i),
                storage: n.storage * w.node_storage(i),
                radio_blocks: n.radio_blocks * radio_share,
                ..n.clone()
            });
        }
    }
    let mut links = Vec::new();
    let mut kept_links = Vec::new();
    for (l, link) in infra.links().iter().enumerate() {
        let share = w.link_share(l);
        if share > 0.0 && keep[link.src] && keep[link.dst] {
            kept_links.push(l);
            links.push(InfraLink { src: index[link.src], dst: index[link.dst], bandwidth: link.bandwidth * share, cost: link.cost });
        }
    }
    Ok(ReducedGraph { graph: InfrastructureGraph::new(nodes, links)?, nodes: kept, links: kept_links })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "prov-joint-emb")]
    ProvJoint,
    #[serde(rename = "prov-seq-emb")]
    ProvSeq,
    #[serde(rename = "dir-joint-emb")]
    DirJoint,
    #[serde(rename = "dir-seq-emb")]
    DirSeq,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::ProvJoint, Method::ProvSeq, Method::DirJoint, Method::DirSeq];

    pub fn name(self) -> &'static str {
        match self {
            Method::ProvJoint => "prov-joint-emb",
            Method::ProvSeq => "prov-seq-emb",
            Method::DirJoint => "dir-joint-emb",
            Method::DirSeq => "dir-seq-emb",
        }
    }

    pub fn mode(self) -> EmbeddingMode {
        match self {
            Method::ProvJoint | Method::DirJoint => EmbeddingMode::Joint,
            Method::ProvSeq | Method::DirSeq => EmbeddingMode::Sequential,
        }
    }

    pub fn provisions(self) -> bool {
        matches!(self, Method::ProvJoint | Method::ProvSeq)
    }
}

/// One cell of the comparison: CSV columns `method, sfc_count, cost, time_s, status`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub method: Method,
    pub sfc_count: usize,
    pub cost: Option<f64>,
    pub time_s: f64,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonOptions {
    /// Per-SFC link bandwidth as a fraction of the template's `r_b`.
    pub link_scale: f64,
    /// Provisioning variant used by the prov-* methods.
    pub variant: Variant,
    pub solver: SolverOptions,
}

impl Default for ComparisonOptions {
    fn default() -> Self {
        ComparisonOptions { link_scale: 0.1, variant: Variant::JrJn, solver: SolverOptions::default() }
    }
}

fn status_of(e: &ProvisioningError) -> String {
    match e {
        ProvisioningError::Infeasible { .. } | ProvisioningError::DeltaFloor { .. } => "infeasible".into(),
        ProvisioningError::NoSolution { status, .. } => status.clone(),
        other => format!("error: {other}"),
    }
}

/// Provision an aggregated slice of `n` SFCs, reduce the graph, then embed.
pub fn provision_then_embed(
    infra: &InfrastructureGraph,
    template: &SrdGraph,
    n: usize,
    mode: EmbeddingMode,
    opts: &ComparisonOptions,
) -> Result<EmbeddingSolution, ProvisioningError> {
    let started = Instant::now();
    let slice = SliceSpec::new("sfc-slice", aggregate_srd(template, n, opts.link_scale), CoverageSpec::none())?;
    let rates = RateTables::without_cells(infra.rrhs().len(), 1);
    let slices = [slice];
    let prov = carp(infra, &slices, &rates, opts.variant, &CarpOptions { lambda: 0.0, solver: opts.solver.clone() })?;
    let reduced = reduce_graph(infra, &prov, 0)?;
    debug!("reduced graph: {} nodes, {} links", reduced.graph.nodes().len(), reduced.graph.links().len());
    let sfcs = replicate_sfc(template, n, opts.link_scale);
    let mut sol = embed(&reduced.graph, &sfcs, mode, &opts.solver)?;
    // Report in original indices so the solution can be checked against the full graph.
    for row in &mut sol.placement {
        for i in row.iter_mut() {
            *i = reduced.nodes[*i];
        }
    }
    for per_sfc in &mut sol.routing {
        for per_link in per_sfc.iter_mut() {
            let mut full = vec![0.0; infra.links().len()];
            for (k, &y) in per_link.iter().enumerate() {
                full[reduced.links[k]] = y;
            }
            *per_link = full;
        }
    }
    sol.solve_time_s = started.elapsed().as_secs_f64();
    Ok(sol)
}

/// Run every method for every SFC count. Failures are recorded per cell.
pub fn run_comparison(
    infra: &InfrastructureGraph,
    template: &SrdGraph,
    sfc_counts: &[usize],
    methods: &[Method],
    opts: &ComparisonOptions,
) -> Result<Vec<ComparisonRow>, ProvisioningError> {
    if sfc_counts.is_empty() || sfc_counts.contains(&0) {
        return Err(ProvisioningError::Invalid("sfc counts must be positive".into()));
    }
    template.validate().map_err(|r| ProvisioningError::Invalid(format!("sfc template: {r}")))?;
    let mut rows = Vec::new();
    for &n in sfc_counts {
        for &method in methods {
            let started = Instant::now();
            let result = if method.provisions() {
                provision_then_embed(infra, template, n, method.mode(), opts)
            } else {
                embed(infra, &replicate_sfc(template, n, opts.link_scale), method.mode(), &opts.solver)
            };
            let time_s = started.elapsed().as_secs_f64();
            let row = match result {
                Ok(sol) => ComparisonRow { method, sfc_count: n, cost: Some(sol.cost), time_s, status: "ok".into() },
                Err(e) => ComparisonRow { method, sfc_count: n, cost: None, time_s, status: status_of(&e) },
            };
            info!("{} n={n}: {:?} in {:.3}s ({})", method.name(), row.cost, row.time_s, row.status);
            rows.push(row);
        }
    }
    Ok(rows)
}
