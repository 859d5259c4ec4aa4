//! Independent predicate checks of a provisioning solution.
//!
//! Nothing here goes through [`sliceprov_milp::MilpModel`]: every family is
//! recomputed from the shares with plain arithmetic, each in its natural
//! dimensionless form (fractions of demand, fractions of capacity, instance
//! counts).

use std::fmt;

use serde::{Deserialize, Serialize};
use sliceprov_milp::STRICT_EPSILON;

use crate::radio::RateTables;
use crate::slice::SliceSpec;
use crate::topology::InfrastructureGraph;

use super::cost::{radio_cost, wired_cost};
use super::shares::ProvisioningSolution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Shape,
    Bounds,
    RadioCapacity,
    CellRate,
    RadioDemand,
    UpDownRatio,
    RadioIndicator,
    NodeDemand,
    NodeCapacity,
    LinkCapacity,
    InstanceMultiple,
    Proportionality,
    RadioNode,
    RadioDownlink,
    RadioUplink,
    Loopback,
    FlowConservation,
    NodeIndicator,
    Cost,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionViolation {
    pub family: Family,
    pub slice: Option<usize>,
    pub at: String,
    pub amount: f64,
}

impl fmt::Display for SolutionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slice {
            Some(s) => write!(f, "{:?} slice {s} at {}: {:.3e}", self.family, self.at, self.amount),
            None => write!(f, "{:?} at {}: {:.3e}", self.family, self.at, self.amount),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub violations: Vec<SolutionViolation>,
}

impl VerificationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, family: Family) -> bool {
        self.violations.iter().any(|v| v.family == family)
    }

    pub fn max_violation(&self) -> f64 {
        self.violations.iter().map(|v| v.amount).fold(0.0, f64::max)
    }
}

struct Checker {
    tol: f64,
    out: Vec<SolutionViolation>,
}

impl Checker {
    fn flag(&mut self, family: Family, slice: Option<usize>, at: impl FnOnce() -> String, amount: f64) {
        if amount > self.tol || amount.is_nan() {
            self.out.push(SolutionViolation { family, slice, at: at(), amount });
        }
    }

    fn ge(&mut self, family: Family, slice: usize, at: impl FnOnce() -> String, lhs: f64, rhs: f64) {
        self.flag(family, Some(slice), at, rhs - lhs);
    }

    fn le(&mut self, family: Family, slice: Option<usize>, at: impl FnOnce() -> String, lhs: f64, rhs: f64) {
        self.flag(family, slice, at, lhs - rhs);
    }

    fn eq(&mut self, family: Family, slice: usize, at: impl FnOnce() -> String, lhs: f64, rhs: f64) {
        self.flag(family, Some(slice), at, (lhs - rhs).abs());
    }

    fn unit(&mut self, slice: usize, at: impl FnOnce() -> String, x: f64) {
        self.flag(Family::Bounds, Some(slice), at, (-x).max(x - 1.0));
    }
}

/// Check `sol` against the full constraint set for `slices` at absolute tolerance `tol`.
///
/// The slices are scaled by `sol.delta` before checking, so solutions from the
/// demand bisection are judged against the demand they were computed for.
pub fn verify_solution(
    infra: &InfrastructureGraph,
    slices: &[SliceSpec],
    rates: &RateTables,
    sol: &ProvisioningSolution,
    tol: f64,
) -> VerificationReport {
    let scaled: Vec<SliceSpec> = if sol.delta == 1.0 { slices.to_vec() } else { slices.iter().map(|s| s.scaled(sol.delta)).collect() };
    let slices = &scaled[..];
    let mut c = Checker { tol, out: Vec::new() };
    let shape_ok = sol.radio.len() == slices.len()
        && sol.wired.len() == slices.len()
        && sol.slice_costs.len() == slices.len()
        && rates.num_slices() == slices.len()
        && rates.num_rrh == infra.rrhs().len()
        && slices.iter().enumerate().all(|(s, sl)| {
            let r = &sol.radio[s];
            let w = &sol.wired[s];
            let (nv, ne) = (sl.srd.nodes.len(), sl.srd.links.len());
            rates.cells[s] == sl.coverage.num_cells()
                && r.used.len() == infra.rrhs().len()
                && r.up.iter().chain(&r.down).all(|row| row.len() == sl.coverage.num_cells())
                && r.up.len() == infra.rrhs().len()
                && r.down.len() == infra.rrhs().len()
                && w.used.len() == infra.nodes().len()
                && [&w.compute, &w.storage].iter().all(|t| t.len() == infra.nodes().len() && t.iter().all(|row| row.len() == nv))
                && [&w.compute_instances, &w.storage_instances].iter().all(|t| t.len() == infra.nodes().len() && t.iter().all(|row| row.len() == nv))
                && w.link.len() == infra.links().len()
                && w.link.iter().all(|row| row.len() == ne)
        });
    if !shape_ok {
        c.out.push(SolutionViolation { family: Family::Shape, slice: None, at: "solution dimensions".into(), amount: f64::INFINITY });
        return VerificationReport { violations: c.out };
    }

    check_radio(&mut c, infra, slices, rates, sol);
    check_wired(&mut c, infra, slices, rates, sol);

    for (s, _) in slices.iter().enumerate() {
        let rc = radio_cost(infra, rates, s, sol.lambda, &sol.radio[s]);
        let wc = wired_cost(infra, &sol.wired[s]);
        let sc = &sol.slice_costs[s];
        c.flag(Family::Cost, Some(s), || "radio cost".into(), (rc - sc.radio).abs() / rc.abs().max(1.0));
        c.flag(Family::Cost, Some(s), || "wired cost".into(), (wc - sc.wired).abs() / wc.abs().max(1.0));
    }
    let rsum: f64 = sol.slice_costs.iter().map(|x| x.radio).sum();
    let wsum: f64 = sol.slice_costs.iter().map(|x| x.wired).sum();
    let scale = sol.costs.total.abs().max(1.0);
    c.flag(Family::Cost, None, || "c_rr sum".into(), (rsum - sol.costs.radio).abs() / scale);
    c.flag(Family::Cost, None, || "c_wr sum".into(), (wsum - sol.costs.wired).abs() / scale);
    c.flag(Family::Cost, None, || "c_tot".into(), (sol.costs.radio + sol.costs.wired - sol.costs.total).abs() / scale);
    VerificationReport { violations: c.out }
}

fn check_radio(c: &mut Checker, infra: &InfrastructureGraph, slices: &[SliceSpec], rates: &RateTables, sol: &ProvisioningSolution) {
    let rrhs = infra.rrhs();
    for (r, &i) in rrhs.iter().enumerate() {
        let total: f64 = sol.radio.iter().map(|sh| sh.share(r)).sum();
        c.le(Family::RadioCapacity, None, || infra.node(i).name.clone(), total, 1.0);
    }
    for (s, sl) in slices.iter().enumerate() {
        let sh = &sol.radio[s];
        let users = sl.coverage.cell_users();
        let (ru, rd) = (sl.rate_up(), sl.rate_down());
        let cells = sl.coverage.num_cells();
        let mut got_u = 0.0;
        let mut got_d = 0.0;
        for q in 0..cells {
            let mut cell_u = 0.0;
            let mut cell_d = 0.0;
            for (r, &i) in rrhs.iter().enumerate() {
                let ar = infra.node(i).radio_blocks;
                c.unit(s, || format!("eta_u r{r} q{q}"), sh.up[r][q]);
                c.unit(s, || format!("eta_d r{r} q{q}"), sh.down[r][q]);
                cell_u += ar * rates.up(s, r, q) * sh.up[r][q];
                cell_d += ar * rates.down(s, r, q) * sh.down[r][q];
                let fu = ar * rates.up(s, r, q) * sh.up[r][q];
                let fd = ar * rates.down(s, r, q) * sh.down[r][q];
                match (ru > 0.0, rd > 0.0) {
                    (true, true) => c.eq(Family::UpDownRatio, s, || format!("r{r} q{q}"), fu / ru, fd / rd),
                    (false, true) => c.flag(Family::UpDownRatio, Some(s), || format!("r{r} q{q} uplink"), fu / rd),
                    (true, false) => c.flag(Family::UpDownRatio, Some(s), || format!("r{r} q{q} downlink"), fd / ru),
                    (false, false) => {}
                }
            }
            let need_u = sl.coverage.rate_up() * users[q];
            let need_d = sl.coverage.rate_down() * users[q];
            if need_u > 0.0 {
                c.ge(Family::CellRate, s, || format!("q{q} uplink"), cell_u / need_u, 1.0);
            }
            if need_d > 0.0 {
                c.ge(Family::CellRate, s, || format!("q{q} downlink"), cell_d / need_d, 1.0);
            }
            got_u += cell_u;
            got_d += cell_d;
        }
        if ru > 0.0 {
            c.ge(Family::RadioDemand, s, || "uplink".into(), got_u / ru, 1.0);
        }
        if rd > 0.0 {
            c.ge(Family::RadioDemand, s, || "downlink".into(), got_d / rd, 1.0);
        }
        for r in 0..rrhs.len() {
            let share = sh.share(r);
            if sh.used[r] {
                c.ge(Family::RadioIndicator, s, || format!("r{r} used without share"), share, STRICT_EPSILON);
                c.le(Family::RadioIndicator, Some(s), || format!("r{r} share above indicator"), share, 1.0);
            } else {
                c.le(Family::RadioIndicator, Some(s), || format!("r{r} share without indicator"), share, 0.0);
            }
        }
    }
}

fn check_wired(c: &mut Checker, infra: &InfrastructureGraph, slices: &[SliceSpec], rates: &RateTables, sol: &ProvisioningSolution) {
    let n_nodes = infra.nodes().len();
    for (i, n) in infra.nodes().iter().enumerate() {
        let tc: f64 = sol.wired.iter().map(|w| w.node_compute(i)).sum();
        let ts: f64 = sol.wired.iter().map(|w| w.node_storage(i)).sum();
        c.le(Family::NodeCapacity, None, || format!("{} compute", n.name), tc, 1.0);
        c.le(Family::NodeCapacity, None, || format!("{} storage", n.name), ts, 1.0);
    }
    for l in 0..infra.links().len() {
        let t: f64 = sol.wired.iter().map(|w| w.link_share(l)).sum();
        c.le(Family::LinkCapacity, None, || format!("link #{l}"), t, 1.0);
    }

    for (s, sl) in slices.iter().enumerate() {
        let w = &sol.wired[s];
        let g = &sl.srd;
        for (i, row) in w.compute.iter().enumerate() {
            for v in 0..row.len() {
                c.unit(s, || format!("phi_c i{i} v{v}"), w.compute[i][v]);
                c.unit(s, || format!("phi_s i{i} v{v}"), w.storage[i][v]);
            }
        }
        for (l, row) in w.link.iter().enumerate() {
            for (e, &x) in row.iter().enumerate() {
                c.unit(s, || format!("phi_b l{l} e{e}"), x);
            }
        }

        for (v, d) in g.nodes.iter().enumerate() {
            let pc: f64 = (0..n_nodes).map(|i| infra.node(i).compute * w.compute[i][v]).sum();
            let ps: f64 = (0..n_nodes).map(|i| infra.node(i).storage * w.storage[i][v]).sum();
            if d.compute > 0.0 {
                c.ge(Family::NodeDemand, s, || format!("{} compute", d.name), pc / d.compute, 1.0);
            }
            if d.storage > 0.0 {
                c.ge(Family::NodeDemand, s, || format!("{} storage", d.name), ps / d.storage, 1.0);
            }
            for (i, n) in infra.nodes().iter().enumerate() {
                for (amount, min, kappa, label) in [
                    (n.compute * w.compute[i][v], d.min_compute, w.compute_instances[i][v], "compute"),
                    (n.storage * w.storage[i][v], d.min_storage, w.storage_instances[i][v], "storage"),
                ] {
                    if min > 0.0 {
                        c.eq(Family::InstanceMultiple, s, || format!("{} {label} on {}", d.name, n.name), amount / min, kappa as f64);
                    } else {
                        c.flag(Family::InstanceMultiple, Some(s), || format!("{} {label} on {} without minimum", d.name, n.name), amount.abs() + kappa as f64);
                    }
                }
                let fc = n.compute * w.compute[i][v] / d.compute;
                if d.storage > 0.0 {
                    let fs = n.storage * w.storage[i][v] / d.storage;
                    c.eq(Family::Proportionality, s, || format!("{} on {}", d.name, n.name), fc, fs);
                }
            }
        }

        check_radio_coupling(c, infra, sl, s, rates, sol);
        check_flows(c, infra, sl, s, sol);

        let nv = g.nodes.len() as f64;
        for i in 0..n_nodes {
            let avg = (w.node_compute(i) + w.node_storage(i)) / (2.0 * nv);
            if w.used[i] {
                c.ge(Family::NodeIndicator, s, || format!("i{i} used without share"), avg, STRICT_EPSILON);
                c.le(Family::NodeIndicator, Some(s), || format!("i{i} share above indicator"), avg, 1.0);
            } else {
                c.le(Family::NodeIndicator, Some(s), || format!("i{i} share without indicator"), avg, 0.0);
            }
        }
    }
}

/// Radio-node compute and the downlink/uplink wired traffic at each RRH.
fn check_radio_coupling(c: &mut Checker, infra: &InfrastructureGraph, sl: &SliceSpec, s: usize, rates: &RateTables, sol: &ProvisioningSolution) {
    let g = &sl.srd;
    let vr = g.radio_node();
    let (ru, rd) = (sl.rate_up(), sl.rate_down());
    let rr = ru + rd;
    if rr <= 0.0 {
        return;
    }
    let radio = &sol.radio[s];
    let w = &sol.wired[s];
    let cells = sl.coverage.num_cells();
    for (r, &i) in infra.rrhs().iter().enumerate() {
        let ar = infra.node(i).radio_blocks;
        let bits_u: f64 = (0..cells).map(|q| radio.up[r][q] * rates.up(s, r, q)).sum::<f64>() * ar;
        let bits_d: f64 = (0..cells).map(|q| radio.down[r][q] * rates.down(s, r, q)).sum::<f64>() * ar;
        let fc = infra.node(i).compute * w.compute[i][vr] / g.nodes[vr].compute;
        c.ge(Family::RadioNode, s, || infra.node(i).name.clone(), fc, (bits_u + bits_d) / rr);

        if rd > 0.0 {
            let feed = g.in_bandwidth(vr);
            for (e, link) in g.links.iter().enumerate().filter(|(_, l)| l.dst == vr) {
                let carried: f64 = infra
                    .links()
                    .iter()
                    .enumerate()
                    .filter(|(_, il)| il.dst == i && !infra.is_rrh(il.src))
                    .map(|(l, il)| il.bandwidth * w.link[l][e] / link.bandwidth)
                    .sum();
                c.ge(Family::RadioDownlink, s, || format!("{} e{e}", infra.node(i).name), carried, link.bandwidth / feed * bits_d / rd);
            }
        }
        if ru > 0.0 {
            let spread = g.out_bandwidth(vr);
            for (e, link) in g.links.iter().enumerate().filter(|(_, l)| l.src == vr) {
                let carried: f64 = infra
                    .links()
                    .iter()
                    .enumerate()
                    .filter(|(_, il)| il.src == i && !infra.is_rrh(il.dst))
                    .map(|(l, il)| il.bandwidth * w.link[l][e] / link.bandwidth)
                    .sum();
                c.ge(Family::RadioUplink, s, || format!("{} e{e}", infra.node(i).name), carried, link.bandwidth / spread * bits_u / ru);
            }
        }
    }
}

fn check_flows(c: &mut Checker, infra: &InfrastructureGraph, sl: &SliceSpec, s: usize, sol: &ProvisioningSolution) {
    let g = &sl.srd;
    let w = &sol.wired[s];
    for (e, link) in g.links.iter().enumerate() {
        let out_bw: f64 = g.links.iter().filter(|x| x.src == link.src).map(|x| x.bandwidth).sum();
        let in_bw: f64 = g.links.iter().filter(|x| x.dst == link.dst).map(|x| x.bandwidth).sum();
        for (i, n) in infra.nodes().iter().enumerate() {
            let out_t = link.bandwidth / out_bw * n.compute * w.compute[i][link.src] / g.nodes[link.src].compute;
            let in_t = link.bandwidth / in_bw * n.compute * w.compute[i][link.dst] / g.nodes[link.dst].compute;
            let (mut ext_out, mut ext_in, mut lo) = (0.0, 0.0, 0.0);
            for (l, il) in infra.links().iter().enumerate() {
                let f = il.bandwidth * w.link[l][e] / link.bandwidth;
                if il.src == i && il.dst == i {
                    lo += f;
                } else if il.src == i {
                    ext_out += f;
                } else if il.dst == i {
                    ext_in += f;
                }
            }
            c.eq(Family::FlowConservation, s, || format!("{} e{e}", n.name), ext_out - ext_in, out_t - in_t);
            c.ge(Family::Loopback, s, || format!("{} e{e} outgoing carried", n.name), ext_out + lo, out_t);
            c.ge(Family::Loopback, s, || format!("{} e{e} incoming carried", n.name), ext_in + lo, in_t);
            c.le(Family::Loopback, Some(s), || format!("{} e{e} loopback above source", n.name), lo, out_t);
            c.le(Family::Loopback, Some(s), || format!("{} e{e} loopback above sink", n.name), lo, in_t);
        }
    }
}
