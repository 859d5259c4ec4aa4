//! MILP builders for the radio (RP), network (NP) and joint (JRN) problems.
//!
//! Rates enter the models in Mb/s and every ratio row is normalised by its
//! demand so coefficients stay close to one.

use std::collections::HashSet;

use sliceprov_milp::{LinExpr, MilpModel, Sense, VarId, STRICT_EPSILON};

use crate::error::ProvisioningError;
use crate::radio::RateTables;
use crate::slice::SliceSpec;
use crate::topology::InfrastructureGraph;

use super::cost::radio_unit_cost;
use super::shares::{PriorUsage, RadioShares, Step, WiredShares};

const MBPS: f64 = 1e6;
/// Slack allowed on committed shares before a residual counts as negative.
const RESIDUAL_SLACK: f64 = 1e-9;

#[derive(Clone, Debug)]
struct RadioVars {
    up: Vec<Vec<VarId>>,
    down: Vec<Vec<VarId>>,
    used: Vec<VarId>,
}

#[derive(Clone, Debug)]
struct WiredVars {
    compute: Vec<Vec<VarId>>,
    storage: Vec<Vec<VarId>>,
    compute_count: Vec<Vec<Option<VarId>>>,
    storage_count: Vec<Vec<Option<VarId>>>,
    link: Vec<Vec<VarId>>,
    used: Vec<VarId>,
}

/// A built model together with the variable layout needed to decode it.
#[derive(Clone, Debug)]
pub struct ProvisioningModel {
    pub step: Step,
    pub model: MilpModel,
    /// Global slice indices, in build order.
    pub slices: Vec<usize>,
    radio: Vec<RadioVars>,
    wired: Vec<WiredVars>,
    instance_vars: usize,
}

impl ProvisioningModel {
    /// Variable count excluding the instance counts.
    pub fn num_variables(&self) -> usize {
        self.model.num_vars() - self.instance_vars
    }

    pub fn num_instance_variables(&self) -> usize {
        self.instance_vars
    }

    /// Radio shares per built slice; empty for NP models.
    pub fn decode_radio(&self, values: &[f64]) -> Vec<RadioShares> {
        self.radio
            .iter()
            .map(|v| RadioShares {
                up: v.up.iter().map(|row| row.iter().map(|x| values[x.0]).collect()).collect(),
                down: v.down.iter().map(|row| row.iter().map(|x| values[x.0]).collect()).collect(),
                used: v.used.iter().map(|x| values[x.0] > 0.5).collect(),
            })
            .collect()
    }

    /// Wired shares per built slice; empty for RP models.
    pub fn decode_wired(&self, values: &[f64]) -> Vec<WiredShares> {
        let count = |c: &Option<VarId>| c.map_or(0, |x| values[x.0].round().max(0.0) as u64);
        self.wired
            .iter()
            .map(|v| WiredShares {
                compute: v.compute.iter().map(|row| row.iter().map(|x| values[x.0]).collect()).collect(),
                storage: v.storage.iter().map(|row| row.iter().map(|x| values[x.0]).collect()).collect(),
                compute_instances: v.compute_count.iter().map(|row| row.iter().map(count).collect()).collect(),
                storage_instances: v.storage_count.iter().map(|row| row.iter().map(count).collect()).collect(),
                link: v.link.iter().map(|row| row.iter().map(|x| values[x.0]).collect()).collect(),
                used: v.used.iter().map(|x| values[x.0] > 0.5).collect(),
            })
            .collect()
    }
}

/// Where the radio shares of the coupling rows come from.
#[derive(Clone, Copy)]
enum RadioSource<'a> {
    Fixed(&'a RadioShares),
    Vars(&'a RadioVars),
}

#[derive(Clone, Copy)]
enum Dir {
    Up,
    Down,
}

fn invalid(msg: impl Into<String>) -> ProvisioningError {
    ProvisioningError::Invalid(msg.into())
}

fn prior_at(v: &[f64], i: usize) -> f64 {
    v.get(i).copied().unwrap_or(0.0)
}

/// Right-hand side `1 - prior`, rejecting over-committed resources.
fn residual(prior: f64, what: &str) -> Result<f64, ProvisioningError> {
    if !(prior.is_finite() && prior >= -RESIDUAL_SLACK) {
        return Err(invalid(format!("prior usage of {what} must be >= 0, got {prior}")));
    }
    let r = 1.0 - prior;
    if r < -RESIDUAL_SLACK {
        return Err(invalid(format!("negative residual capacity on {what} (prior usage {prior})")));
    }
    Ok(r.max(0.0))
}

fn check_subset(slices: &[SliceSpec], subset: &[usize]) -> Result<(), ProvisioningError> {
    if subset.is_empty() {
        return Err(invalid("empty slice subset"));
    }
    let mut seen = HashSet::new();
    for &s in subset {
        if s >= slices.len() {
            return Err(invalid(format!("slice index {s} out of range ({} slices)", slices.len())));
        }
        if !seen.insert(s) {
            return Err(invalid(format!("slice index {s} listed twice")));
        }
    }
    Ok(())
}

fn check_rates(infra: &InfrastructureGraph, slices: &[SliceSpec], rates: &RateTables) -> Result<(), ProvisioningError> {
    if rates.num_rrh != infra.rrhs().len() || rates.num_slices() != slices.len() {
        return Err(invalid(format!(
            "rate tables cover {} rrhs x {} slices, scenario has {} x {}",
            rates.num_rrh,
            rates.num_slices(),
            infra.rrhs().len(),
            slices.len()
        )));
    }
    for (s, sl) in slices.iter().enumerate() {
        if rates.cells[s] != sl.coverage.num_cells() {
            return Err(invalid(format!("rate tables for slice {} have {} cells, expected {}", sl.name, rates.cells[s], sl.coverage.num_cells())));
        }
    }
    Ok(())
}

fn check_radio_slice(infra: &InfrastructureGraph, slice: &SliceSpec) -> Result<(), ProvisioningError> {
    slice.validate()?;
    if slice.has_radio_demand() && infra.rrhs().is_empty() {
        return Err(invalid(format!("slice {} has radio demand but the infrastructure has no rrh", slice.name)));
    }
    Ok(())
}

fn check_wired_slice(slice: &SliceSpec) -> Result<(), ProvisioningError> {
    let g = &slice.srd;
    g.validate().map_err(|r| invalid(format!("slice {}: {r}", slice.name)))?;
    for n in &g.nodes {
        if !(n.compute > 0.0) {
            return Err(invalid(format!("slice {}: srd node {} needs a positive compute demand", slice.name, n.name)));
        }
    }
    for l in &g.links {
        if !(l.bandwidth > 0.0) {
            return Err(invalid(format!(
                "slice {}: srd link {}->{} has zero bandwidth but takes part in the flow ratios",
                slice.name, g.nodes[l.src].name, g.nodes[l.dst].name
            )));
        }
    }
    Ok(())
}

fn check_lambda(infra: &InfrastructureGraph, rates: &RateTables, subset: &[usize], lambda: f64) -> Result<(), ProvisioningError> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(invalid(format!("rate discount must be finite and >= 0, got {lambda}")));
    }
    for &s in subset {
        for (r, &i) in infra.rrhs().iter().enumerate() {
            for q in 0..rates.cells[s] {
                let b = rates.up(s, r, q).max(rates.down(s, r, q));
                if infra.node(i).cost.radio - lambda * b < 0.0 {
                    return Err(invalid(format!(
                        "rate discount {lambda} makes the radio unit cost of {} negative (b = {b})",
                        infra.node(i).name
                    )));
                }
            }
        }
    }
    Ok(())
}

struct Builder<'a> {
    infra: &'a InfrastructureGraph,
    slices: &'a [SliceSpec],
    rates: &'a RateTables,
    model: MilpModel,
    objective: Vec<(VarId, f64)>,
    instance_vars: usize,
}

impl<'a> Builder<'a> {
    fn new(name: &str, infra: &'a InfrastructureGraph, slices: &'a [SliceSpec], rates: &'a RateTables) -> Self {
        Builder { infra, slices, rates, model: MilpModel::new(name), objective: Vec::new(), instance_vars: 0 }
    }

    fn finish(mut self, step: Step, subset: &[usize], radio: Vec<RadioVars>, wired: Vec<WiredVars>) -> Result<ProvisioningModel, ProvisioningError> {
        self.model.set_objective(&self.objective)?;
        Ok(ProvisioningModel {
            step,
            model: self.model,
            slices: subset.to_vec(),
            radio,
            wired,
            instance_vars: self.instance_vars,
        })
    }

    fn radio_vars(&mut self, s: usize) -> Result<RadioVars, ProvisioningError> {
        let cells = self.rates.cells[s];
        let n = self.infra.rrhs().len();
        let slice = &self.slices[s];
        let (ru, rd) = (slice.rate_up(), slice.rate_down());
        let mut up = Vec::with_capacity(n);
        let mut down = Vec::with_capacity(n);
        let mut used = Vec::with_capacity(n);
        for r in 0..n {
            let mut u = Vec::with_capacity(cells);
            let mut d = Vec::with_capacity(cells);
            for q in 0..cells {
                // A direction without demand gets no share, the cross-multiplied ratio row would force it anyway.
                u.push(self.model.continuous(format!("eta_u(s{s},r{r},q{q})"), 0.0, if ru > 0.0 { 1.0 } else { 0.0 })?);
                d.push(self.model.continuous(format!("eta_d(s{s},r{r},q{q})"), 0.0, if rd > 0.0 { 1.0 } else { 0.0 })?);
            }
            up.push(u);
            down.push(d);
            used.push(self.model.binary(format!("eta_used(s{s},r{r})"))?);
        }
        Ok(RadioVars { up, down, used })
    }

    fn radio_rows(&mut self, s: usize, v: &RadioVars, lambda: f64) -> Result<(), ProvisioningError> {
        let infra = self.infra;
        let rates = self.rates;
        let slice = &self.slices[s];
        let (ru, rd) = (slice.rate_up(), slice.rate_down());
        let cells = rates.cells[s];
        let users = slice.coverage.cell_users();
        let ar = |r: usize| infra.node(infra.rrhs()[r]).radio_blocks;
        let n = infra.rrhs().len();

        for q in 0..cells {
            let need_u = slice.coverage.rate_up() * users[q];
            if need_u > 0.0 {
                let t: Vec<_> = (0..n).map(|r| (v.up[r][q], ar(r) * rates.up(s, r, q) / MBPS)).collect();
                self.model.add_row(format!("rate_u(s{s},q{q})"), &t, Sense::Ge, need_u / MBPS)?;
            }
            let need_d = slice.coverage.rate_down() * users[q];
            if need_d > 0.0 {
                let t: Vec<_> = (0..n).map(|r| (v.down[r][q], ar(r) * rates.down(s, r, q) / MBPS)).collect();
                self.model.add_row(format!("rate_d(s{s},q{q})"), &t, Sense::Ge, need_d / MBPS)?;
            }
        }
        if ru > 0.0 {
            let t: Vec<_> = (0..n).flat_map(|r| (0..cells).map(move |q| (r, q))).map(|(r, q)| (v.up[r][q], ar(r) * rates.up(s, r, q) / ru)).collect();
            self.model.add_row(format!("demand_u(s{s})"), &t, Sense::Ge, 1.0)?;
        }
        if rd > 0.0 {
            let t: Vec<_> = (0..n).flat_map(|r| (0..cells).map(move |q| (r, q))).map(|(r, q)| (v.down[r][q], ar(r) * rates.down(s, r, q) / rd)).collect();
            self.model.add_row(format!("demand_d(s{s})"), &t, Sense::Ge, 1.0)?;
        }
        if ru > 0.0 && rd > 0.0 {
            let rr = ru + rd;
            for r in 0..n {
                if ar(r) == 0.0 {
                    continue;
                }
                for q in 0..cells {
                    let cu = ar(r) * rates.up(s, r, q) / MBPS * (rd / rr);
                    let cd = ar(r) * rates.down(s, r, q) / MBPS * (ru / rr);
                    self.model.add_row(format!("updown(s{s},r{r},q{q})"), &[(v.up[r][q], cu), (v.down[r][q], -cd)], Sense::Eq, 0.0)?;
                }
            }
        }
        for r in 0..n {
            let mut t = vec![(v.used[r], 1.0)];
            for q in 0..cells {
                t.push((v.up[r][q], -1.0));
                t.push((v.down[r][q], -1.0));
            }
            self.model.add_row(format!("eta_link_lo(s{s},r{r})"), &t, Sense::Ge, 0.0)?;
            self.model.add_strict_lt(format!("eta_link_hi(s{s},r{r})"), &t, 1.0, STRICT_EPSILON)?;

            let i = infra.rrhs()[r];
            self.objective.push((v.used[r], infra.node(i).cost.fixed));
            for q in 0..cells {
                self.objective.push((v.up[r][q], radio_unit_cost(infra, i, rates.up(s, r, q), lambda)));
                self.objective.push((v.down[r][q], radio_unit_cost(infra, i, rates.down(s, r, q), lambda)));
            }
        }
        Ok(())
    }

    fn radio_capacity(&mut self, subset: &[usize], vars: &[RadioVars], prior: &PriorUsage) -> Result<(), ProvisioningError> {
        for (r, &i) in self.infra.rrhs().iter().enumerate() {
            let rhs = residual(prior_at(&prior.radio, r), &format!("rrh {}", self.infra.node(i).name))?;
            let mut t = Vec::new();
            for (k, _) in subset.iter().enumerate() {
                for q in 0..vars[k].up[r].len() {
                    t.push((vars[k].up[r][q], 1.0));
                    t.push((vars[k].down[r][q], 1.0));
                }
            }
            self.model.add_row(format!("rb_cap(r{r})"), &t, Sense::Le, rhs)?;
        }
        Ok(())
    }

    fn wired_vars(&mut self, s: usize) -> Result<WiredVars, ProvisioningError> {
        let infra = self.infra;
        let g = &self.slices[s].srd;
        let mut w = WiredVars {
            compute: Vec::new(),
            storage: Vec::new(),
            compute_count: Vec::new(),
            storage_count: Vec::new(),
            link: Vec::new(),
            used: Vec::new(),
        };
        for (i, node) in infra.nodes().iter().enumerate() {
            let (mut c, mut st, mut kc, mut ks) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
            for (v, d) in g.nodes.iter().enumerate() {
                let ub_c = if node.compute > 0.0 && d.compute > 0.0 { 1.0 } else { 0.0 };
                let ub_s = if node.storage > 0.0 && d.storage > 0.0 { 1.0 } else { 0.0 };
                c.push(self.model.continuous(format!("phi_c(s{s},i{i},v{v})"), 0.0, ub_c)?);
                st.push(self.model.continuous(format!("phi_s(s{s},i{i},v{v})"), 0.0, ub_s)?);
                kc.push(if d.compute > 0.0 {
                    self.instance_vars += 1;
                    let ub = (ub_c * node.compute / d.min_compute).ceil();
                    Some(self.model.integer(format!("kappa_c(s{s},i{i},v{v})"), 0.0, ub)?)
                } else {
                    None
                });
                ks.push(if d.storage > 0.0 {
                    self.instance_vars += 1;
                    let ub = (ub_s * node.storage / d.min_storage).ceil();
                    Some(self.model.integer(format!("kappa_s(s{s},i{i},v{v})"), 0.0, ub)?)
                } else {
                    None
                });
            }
            w.compute.push(c);
            w.storage.push(st);
            w.compute_count.push(kc);
            w.storage_count.push(ks);
        }
        for (l, link) in infra.links().iter().enumerate() {
            let ub = if link.bandwidth > 0.0 { 1.0 } else { 0.0 };
            let row = (0..g.links.len())
                .map(|e| self.model.continuous(format!("phi_b(s{s},l{l},e{e})"), 0.0, ub))
                .collect::<Result<Vec<_>, _>>()?;
            w.link.push(row);
        }
        for i in 0..infra.nodes().len() {
            w.used.push(self.model.binary(format!("phi_used(s{s},i{i})"))?);
        }
        Ok(w)
    }

    /// `sum_q eta b` for one RRH and direction, scaled by `scale`.
    fn radio_sum(&self, s: usize, r: usize, dir: Dir, src: RadioSource<'_>, scale: f64) -> LinExpr {
        let mut e = LinExpr::new();
        for q in 0..self.rates.cells[s] {
            let b = match dir {
                Dir::Up => self.rates.up(s, r, q),
                Dir::Down => self.rates.down(s, r, q),
            };
            match src {
                RadioSource::Fixed(sh) => {
                    let eta = match dir {
                        Dir::Up => sh.up[r][q],
                        Dir::Down => sh.down[r][q],
                    };
                    e.add_constant(scale * b * eta);
                }
                RadioSource::Vars(rv) => {
                    let x = match dir {
                        Dir::Up => rv.up[r][q],
                        Dir::Down => rv.down[r][q],
                    };
                    e.add(x, scale * b);
                }
            }
        }
        e
    }

    fn wired_rows(&mut self, s: usize, w: &WiredVars, radio: RadioSource<'_>) -> Result<(), ProvisioningError> {
        let infra = self.infra;
        let slice = &self.slices[s];
        let g = &slice.srd;
        let nv = g.nodes.len();

        // Demand satisfaction, normalised by the demand.
        for (v, d) in g.nodes.iter().enumerate() {
            let t: Vec<_> = infra.nodes().iter().enumerate().map(|(i, n)| (w.compute[i][v], n.compute / d.compute)).collect();
            self.model.add_row(format!("demand_c(s{s},v{v})"), &t, Sense::Ge, 1.0)?;
            if d.storage > 0.0 {
                let t: Vec<_> = infra.nodes().iter().enumerate().map(|(i, n)| (w.storage[i][v], n.storage / d.storage)).collect();
                self.model.add_row(format!("demand_s(s{s},v{v})"), &t, Sense::Ge, 1.0)?;
            }
        }

        // Instance multiples and compute/storage balance.
        for (i, n) in infra.nodes().iter().enumerate() {
            for (v, d) in g.nodes.iter().enumerate() {
                if let Some(k) = w.compute_count[i][v] {
                    self.model.add_row(format!("inst_c(s{s},i{i},v{v})"), &[(w.compute[i][v], n.compute / d.min_compute), (k, -1.0)], Sense::Eq, 0.0)?;
                }
                if let Some(k) = w.storage_count[i][v] {
                    self.model.add_row(format!("inst_s(s{s},i{i},v{v})"), &[(w.storage[i][v], n.storage / d.min_storage), (k, -1.0)], Sense::Eq, 0.0)?;
                }
                if d.storage > 0.0 && (n.compute > 0.0 || n.storage > 0.0) {
                    self.model.add_row(
                        format!("balance(s{s},i{i},v{v})"),
                        &[(w.compute[i][v], n.compute / d.compute), (w.storage[i][v], -n.storage / d.storage)],
                        Sense::Eq,
                        0.0,
                    )?;
                }
            }
        }

        let vr = g.radio_node();
        let rad = g.nodes[vr].clone();
        let (ru, rd) = (rad.rate_up, rad.rate_down);
        let rr = ru + rd;
        let flow = |l: usize, e: usize| (w.link[l][e], infra.link(l).bandwidth / g.links[e].bandwidth);
        let share_c = |i: usize, v: usize| infra.node(i).compute / g.nodes[v].compute;

        // Radio-node compute commensurate with the radio share of each RRH.
        if rr > 0.0 {
            for (r, &i) in infra.rrhs().iter().enumerate() {
                let ar = infra.node(i).radio_blocks;
                let mut need = self.radio_sum(s, r, Dir::Up, radio, ar / rr);
                need.add_expr(&self.radio_sum(s, r, Dir::Down, radio, ar / rr), 1.0);
                let lhs = LinExpr::term(w.compute[i][vr], share_c(i, vr));
                self.model.add_constraint(format!("radio_node(s{s},r{r})"), &lhs, Sense::Ge, &need)?;
            }
        }
        // Downlink: wired traffic into each RRH for the links feeding v_r.
        if rd > 0.0 {
            let feed: f64 = g.in_bandwidth(vr);
            for e in g.in_links(vr) {
                let ratio = g.links[e].bandwidth / feed;
                for (r, &j) in infra.rrhs().iter().enumerate() {
                    let ar = infra.node(j).radio_blocks;
                    let need = self.radio_sum(s, r, Dir::Down, radio, ratio * ar / rd);
                    let mut lhs = LinExpr::new();
                    for &l in infra.in_links(j) {
                        if !infra.is_rrh(infra.link(l).src) {
                            let (x, c) = flow(l, e);
                            lhs.add(x, c);
                        }
                    }
                    self.model.add_constraint(format!("radio_dl(s{s},e{e},r{r})"), &lhs, Sense::Ge, &need)?;
                }
            }
        }
        // Uplink: wired traffic out of each RRH for the links leaving v_r.
        if ru > 0.0 {
            let spread: f64 = g.out_bandwidth(vr);
            for e in g.out_links(vr) {
                let ratio = g.links[e].bandwidth / spread;
                for (r, &i) in infra.rrhs().iter().enumerate() {
                    let ar = infra.node(i).radio_blocks;
                    let need = self.radio_sum(s, r, Dir::Up, radio, ratio * ar / ru);
                    let mut lhs = LinExpr::new();
                    for &l in infra.out_links(i) {
                        if !infra.is_rrh(infra.link(l).dst) {
                            let (x, c) = flow(l, e);
                            lhs.add(x, c);
                        }
                    }
                    self.model.add_constraint(format!("radio_ul(s{s},e{e},r{r})"), &lhs, Sense::Ge, &need)?;
                }
            }
        }

        // Flow conservation and loopback rows for every (node, srd link).
        for (e, link) in g.links.iter().enumerate() {
            let (v, wn) = (link.src, link.dst);
            let rho_out = link.bandwidth / g.out_bandwidth(v);
            let rho_in = link.bandwidth / g.in_bandwidth(wn);
            for i in 0..infra.nodes().len() {
                let out_t = (w.compute[i][v], rho_out * share_c(i, v));
                let in_t = (w.compute[i][wn], rho_in * share_c(i, wn));
                let mut cons = vec![(out_t.0, -out_t.1), (in_t.0, in_t.1)];
                let mut out_all = vec![(out_t.0, -out_t.1)];
                let mut in_all = vec![(in_t.0, -in_t.1)];
                for &l in infra.out_links(i) {
                    let (x, c) = flow(l, e);
                    out_all.push((x, c));
                    if !infra.link(l).is_loopback() {
                        cons.push((x, c));
                    }
                }
                for &l in infra.in_links(i) {
                    let (x, c) = flow(l, e);
                    in_all.push((x, c));
                    if !infra.link(l).is_loopback() {
                        cons.push((x, -c));
                    }
                }
                self.model.add_row(format!("flow(s{s},i{i},e{e})"), &cons, Sense::Eq, 0.0)?;
                self.model.add_row(format!("carry_out(s{s},i{i},e{e})"), &out_all, Sense::Ge, 0.0)?;
                self.model.add_row(format!("carry_in(s{s},i{i},e{e})"), &in_all, Sense::Ge, 0.0)?;
                if let Some(ll) = infra.loopback(i) {
                    let (x, c) = flow(ll, e);
                    self.model.add_row(format!("loop_out(s{s},i{i},e{e})"), &[(x, c), (out_t.0, -out_t.1)], Sense::Le, 0.0)?;
                    self.model.add_row(format!("loop_in(s{s},i{i},e{e})"), &[(x, c), (in_t.0, -in_t.1)], Sense::Le, 0.0)?;
                }
            }
        }

        // Node-used indicator.
        let scale = 1.0 / (2.0 * nv as f64);
        for i in 0..infra.nodes().len() {
            let mut t = vec![(w.used[i], 1.0)];
            for v in 0..nv {
                t.push((w.compute[i][v], -scale));
                t.push((w.storage[i][v], -scale));
            }
            self.model.add_row(format!("phi_link_lo(s{s},i{i})"), &t, Sense::Ge, 0.0)?;
            self.model.add_strict_lt(format!("phi_link_hi(s{s},i{i})"), &t, 1.0, STRICT_EPSILON)?;
        }

        // Wired cost; RRH fixed costs are charged on the radio side.
        for (i, n) in infra.nodes().iter().enumerate() {
            if !infra.is_rrh(i) {
                self.objective.push((w.used[i], n.cost.fixed));
            }
            for v in 0..nv {
                self.objective.push((w.compute[i][v], n.compute * n.cost.compute));
                self.objective.push((w.storage[i][v], n.storage * n.cost.storage));
            }
        }
        for (l, il) in infra.links().iter().enumerate() {
            for e in 0..g.links.len() {
                self.objective.push((w.link[l][e], il.bandwidth * il.cost));
            }
        }
        Ok(())
    }

    fn wired_capacity(&mut self, vars: &[WiredVars], prior: &PriorUsage) -> Result<(), ProvisioningError> {
        let infra = self.infra;
        for (i, n) in infra.nodes().iter().enumerate() {
            let rc = residual(prior_at(&prior.compute, i), &format!("compute of {}", n.name))?;
            let rs = residual(prior_at(&prior.storage, i), &format!("storage of {}", n.name))?;
            let tc: Vec<_> = vars.iter().flat_map(|w| w.compute[i].iter().map(|&x| (x, 1.0))).collect();
            let ts: Vec<_> = vars.iter().flat_map(|w| w.storage[i].iter().map(|&x| (x, 1.0))).collect();
            self.model.add_row(format!("cap_c(i{i})"), &tc, Sense::Le, rc)?;
            self.model.add_row(format!("cap_s(i{i})"), &ts, Sense::Le, rs)?;
        }
        for l in 0..infra.links().len() {
            let rb = residual(prior_at(&prior.link, l), &format!("link #{l}"))?;
            let t: Vec<_> = vars.iter().flat_map(|w| w.link[l].iter().map(|&x| (x, 1.0))).collect();
            self.model.add_row(format!("cap_b(l{l})"), &t, Sense::Le, rb)?;
        }
        Ok(())
    }
}

/// Radio provisioning for `subset` (global slice indices) on top of `prior.radio`.
pub fn build_rp(
    infra: &InfrastructureGraph,
    slices: &[SliceSpec],
    rates: &RateTables,
    subset: &[usize],
    lambda: f64,
    prior: &PriorUsage,
) -> Result<ProvisioningModel, ProvisioningError> {
    check_subset(slices, subset)?;
    check_rates(infra, slices, rates)?;
    check_lambda(infra, rates, subset, lambda)?;
    for &s in subset {
        check_radio_slice(infra, &slices[s])?;
    }
    let mut b = Builder::new("rp", infra, slices, rates);
    let mut vars = Vec::with_capacity(subset.len());
    for &s in subset {
        let v = b.radio_vars(s)?;
        b.radio_rows(s, &v, lambda)?;
        vars.push(v);
    }
    b.radio_capacity(subset, &vars, prior)?;
    b.finish(Step::Rp, subset, vars, Vec::new())
}

/// Network provisioning for `subset` with radio shares fixed. `radio` is indexed by global slice.
pub fn build_np(
    infra: &InfrastructureGraph,
    slices: &[SliceSpec],
    rates: &RateTables,
    subset: &[usize],
    radio: &[RadioShares],
    prior: &PriorUsage,
) -> Result<ProvisioningModel, ProvisioningError> {
    check_subset(slices, subset)?;
    check_rates(infra, slices, rates)?;
    for &s in subset {
        check_wired_slice(&slices[s])?;
        let sh = radio.get(s);
        let ok = sh.is_some_and(|sh| sh.num_rrh() == infra.rrhs().len() && sh.up.iter().all(|row| row.len() == rates.cells[s]));
        if !ok && slices[s].has_radio_demand() {
            return Err(invalid(format!("radio shares missing for slice {}", slices[s].name)));
        }
    }
    let zeros: Vec<RadioShares> = subset.iter().map(|&s| RadioShares::zeros(infra.rrhs().len(), rates.cells[s])).collect();
    let mut b = Builder::new("np", infra, slices, rates);
    let mut vars = Vec::with_capacity(subset.len());
    for (k, &s) in subset.iter().enumerate() {
        let w = b.wired_vars(s)?;
        let src = if slices[s].has_radio_demand() { &radio[s] } else { &zeros[k] };
        b.wired_rows(s, &w, RadioSource::Fixed(src))?;
        vars.push(w);
    }
    b.wired_capacity(&vars, prior)?;
    b.finish(Step::Np, subset, Vec::new(), vars)
}

/// Joint radio and network provisioning of all slices.
pub fn build_jrn(
    infra: &InfrastructureGraph,
    slices: &[SliceSpec],
    rates: &RateTables,
    lambda: f64,
) -> Result<ProvisioningModel, ProvisioningError> {
    let subset: Vec<usize> = (0..slices.len()).collect();
    check_subset(slices, &subset)?;
    check_rates(infra, slices, rates)?;
    check_lambda(infra, rates, &subset, lambda)?;
    for s in slices {
        check_radio_slice(infra, s)?;
        check_wired_slice(s)?;
    }
    let prior = PriorUsage::empty(infra);
    let mut b = Builder::new("jrn", infra, slices, rates);
    let mut rv = Vec::with_capacity(slices.len());
    let mut wv = Vec::with_capacity(slices.len());
    for &s in &subset {
        let v = b.radio_vars(s)?;
        b.radio_rows(s, &v, lambda)?;
        let w = b.wired_vars(s)?;
        b.wired_rows(s, &w, RadioSource::Vars(&v))?;
        rv.push(v);
        wv.push(w);
    }
    b.radio_capacity(&subset, &rv, &prior)?;
    b.wired_capacity(&wv, &prior)?;
    b.finish(Step::Jrn, &subset, rv, wv)
}
