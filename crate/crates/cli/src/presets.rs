//! Reference slice catalog, slice mixes and costs.

use sliceprov_core::{CostTable, SrdGraph, SrdLink, SrdNode};

/// Preset names accepted by scenario files.
pub const PRESET_NAMES: [&str; 3] = ["slice1", "slice2", "slice3"];

fn node(name: &str, c: f64, min_c: f64, s: f64, min_s: f64) -> SrdNode {
    SrdNode::new(name, c, min_c, s, min_s)
}

fn chain(nodes: Vec<SrdNode>, bandwidth: f64) -> SrdGraph {
    let links = (1..nodes.len()).map(|v| SrdLink { src: v - 1, dst: v, bandwidth }).collect();
    SrdGraph { nodes, links }
}

/// SRD rows of a preset, in CPUs, GBytes and Gbps. The last node is the vBBU.
pub fn preset_srd(name: &str) -> Option<SrdGraph> {
    let g = match name {
        "slice1" => chain(
            vec![
                node("vVOC", 1.35, 0.14, 3.75, 0.38),
                node("vGW", 0.23, 0.02, 0.13, 0.01),
                node("vBBU", 1.00, 0.10, 0.13, 0.01).radio(),
            ],
            1.0,
        ),
        "slice2" => chain(
            vec![
                node("vVOC", 1.08, 0.11, 1.88, 0.19),
                node("vGW", 0.18, 0.02, 0.06, 0.01),
                node("vBBU", 4.00, 0.40, 0.06, 0.01).radio(),
            ],
            0.5,
        ),
        "slice3" => chain(
            vec![
                node("vIDPS", 0.535, 0.054, 0.006, 0.001),
                node("vVOC", 0.270, 0.027, 0.188, 0.019),
                node("vTM", 0.665, 0.067, 0.006, 0.001),
                node("vGW", 0.045, 0.005, 0.006, 0.001),
                node("vBBU", 0.200, 0.020, 0.006, 0.001).radio(),
            ],
            0.05,
        ),
        _ => return None,
    };
    Some(g)
}

/// Replaces every per-instance minimum by `demand / n`.
pub fn with_granularity(mut g: SrdGraph, n: u32) -> SrdGraph {
    let n = f64::from(n);
    for v in &mut g.nodes {
        v.min_compute = v.compute / n;
        v.min_storage = v.storage / n;
    }
    g
}

/// Default traffic of a preset: `(users, uplink bit/s per user, downlink bit/s per user)`.
pub fn preset_traffic(name: &str) -> Option<(f64, f64, f64)> {
    match name {
        "slice1" => Some((200.0, 0.0, 4e6)),
        "slice2" => Some((400.0, 0.0, 0.5e6)),
        "slice3" => Some((50.0, 1e6, 0.0)),
        _ => None,
    }
}

/// Slices of types 1, 2 and 3 for a total of `total` slices.
pub fn type_counts(total: usize) -> Option<[usize; 3]> {
    match total {
        4 => Some([2, 1, 1]),
        6 => Some([2, 2, 2]),
        8 => Some([4, 1, 3]),
        _ => None,
    }
}

/// Leasing costs of cloud nodes and RRHs.
pub fn reference_costs() -> CostTable {
    CostTable::default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in PRESET_NAMES {
            let g = preset_srd(name).unwrap();
            g.validate().unwrap();
            g.check_minima().unwrap();
            assert_eq!(g.radio_node(), g.nodes.len() - 1);
            assert!(preset_traffic(name).is_some());
        }
        assert!(preset_srd("slice4").is_none());
    }

    #[test]
    fn granularity_divides_demand() {
        let g = with_granularity(preset_srd("slice2").unwrap(), 10);
        assert!((g.nodes[2].min_compute - 0.4).abs() < 1e-12);
        assert!((g.nodes[0].min_storage - 0.188).abs() < 1e-12);
    }

    #[test]
    fn counts_sum_to_total() {
        for total in [4, 6, 8] {
            assert_eq!(type_counts(total).unwrap().iter().sum::<usize>(), total);
        }
        assert!(type_counts(5).is_none());
    }
}
