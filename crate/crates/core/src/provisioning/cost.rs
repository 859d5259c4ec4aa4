use crate::radio::RateTables;
use crate::topology::InfrastructureGraph;

use super::shares::{RadioShares, WiredShares};

/// Unit cost `[c_r - lambda b] a_r` of one radio share, per direction.
pub(crate) fn radio_unit_cost(infra: &InfrastructureGraph, rrh_node: usize, bits_per_rb: f64, lambda: f64) -> f64 {
    let n = infra.node(rrh_node);
    (n.cost.radio - lambda * bits_per_rb) * n.radio_blocks
}

/// Radio cost of slice `s` (global index into `rates`).
pub fn radio_cost(infra: &InfrastructureGraph, rates: &RateTables, s: usize, lambda: f64, shares: &RadioShares) -> f64 {
    let mut c = 0.0;
    for (r, &i) in infra.rrhs().iter().enumerate() {
        if shares.used[r] {
            c += infra.node(i).cost.fixed;
        }
        for q in 0..shares.up[r].len() {
            c += radio_unit_cost(infra, i, rates.up(s, r, q), lambda) * shares.up[r][q];
            c += radio_unit_cost(infra, i, rates.down(s, r, q), lambda) * shares.down[r][q];
        }
    }
    c
}

/// Wired cost of one slice. RRH fixed costs are charged on the radio side only.
pub fn wired_cost(infra: &InfrastructureGraph, shares: &WiredShares) -> f64 {
    let mut c = 0.0;
    for (i, n) in infra.nodes().iter().enumerate() {
        if shares.used[i] && !infra.is_rrh(i) {
            c += n.cost.fixed;
        }
        c += n.compute * n.cost.compute * shares.node_compute(i);
        c += n.storage * n.cost.storage * shares.node_storage(i);
    }
    for (l, link) in infra.links().iter().enumerate() {
        c += link.bandwidth * link.cost * shares.link_share(l);
    }
    c
}
