mod common;

use common::*;
use sliceprov_core::embedding::{
    aggregate_srd, build_embedding_ilp, embed, embedding_cost, provision_then_embed, reduce_graph, replicate_sfc, run_comparison,
    verify_embedding, ComparisonOptions, EmbeddingMode, EmbeddingUsage, Method, SfcInstance, SfcLink, Vnf,
};
use sliceprov_core::provisioning::{carp, CarpOptions, Costs, ProvisioningSolution, RadioShares, Variant, WiredShares};
use sliceprov_core::{CostTable, InfrastructureGraph, RateTables, SrdGraph};
use sliceprov_milp::{brute_force_solve, solve, BruteForceGrid, SolveStatus};

/// Per-instance minima of the HD streaming chain.
fn type1_template() -> SrdGraph {
    let mut bbu = sliceprov_core::SrdNode::new("vBBU", 1.00, 0.10, 0.13, 0.01);
    bbu.is_radio = true;
    SrdGraph {
        nodes: vec![sliceprov_core::SrdNode::new("vVOC", 1.35, 0.14, 3.75, 0.38), sliceprov_core::SrdNode::new("vGW", 0.23, 0.02, 0.13, 0.01), bbu],
        links: vec![srd_link(0, 1, 1.0), srd_link(1, 2, 1.0)],
    }
}

fn two_vnf_sfc(name: &str, c: f64, bw: f64) -> SfcInstance {
    SfcInstance {
        name: name.into(),
        vnfs: vec![Vnf { name: "a".into(), compute: c, storage: c }, Vnf { name: "b".into(), compute: c, storage: c }],
        links: vec![SfcLink { src: 0, dst: 1, bandwidth: bw }],
    }
}

#[test]
fn exact_fit_two_nodes() {
    let infra = InfrastructureGraph::new(
        vec![cloud("i0", 1.0, 1.0, unit_cost(1.0)), cloud("i1", 1.0, 1.0, unit_cost(1.0))],
        vec![link(0, 1, 1.0, 1.0)],
    )
    .unwrap();
    let sfcs = [two_vnf_sfc("f", 1.0, 1.0)];
    let sol = embed(&infra, &sfcs, EmbeddingMode::Joint, &solver()).unwrap();
    assert_eq!(sol.placement, vec![vec![0, 1]]);
    assert!((sol.routing[0][0][0] - 1.0).abs() < 1e-9);
    assert!((sol.cost - 5.0).abs() < 1e-9);
    assert!(verify_embedding(&infra, &sfcs, &sol, 1e-6).is_empty());
}

#[test]
fn exact_capacity_for_n_sfcs() {
    let n = 4;
    let infra = InfrastructureGraph::new(
        vec![cloud("i0", n as f64, n as f64, unit_cost(1.0)), cloud("i1", n as f64, n as f64, unit_cost(1.0))],
        vec![link(0, 1, n as f64, 1.0), link(1, 0, n as f64, 1.0)],
    )
    .unwrap();
    let sfcs: Vec<_> = (0..n + 1).map(|f| two_vnf_sfc(&format!("f{f}"), 1.0, 1.0)).collect();
    for mode in [EmbeddingMode::Joint, EmbeddingMode::Sequential] {
        let sol = embed(&infra, &sfcs[..n], mode, &solver()).unwrap();
        assert!(verify_embedding(&infra, &sfcs[..n], &sol, 1e-6).is_empty(), "{mode:?}");
        let err = embed(&infra, &sfcs, mode, &solver()).unwrap_err();
        assert!(err.is_infeasible(), "{mode:?}: {err}");
    }
}

#[test]
fn colocation_needs_loopback() {
    // A single node without loopback cannot host both ends of a link.
    let infra = InfrastructureGraph::new(vec![cloud("i0", 10.0, 10.0, unit_cost(1.0))], vec![]).unwrap();
    let sfcs = [two_vnf_sfc("f", 1.0, 1.0)];
    assert!(embed(&infra, &sfcs, EmbeddingMode::Joint, &solver()).unwrap_err().is_infeasible());
    let infra = InfrastructureGraph::new(vec![cloud("i0", 10.0, 10.0, unit_cost(1.0))], vec![link(0, 0, 1.0, 0.0)]).unwrap();
    let sol = embed(&infra, &sfcs, EmbeddingMode::Joint, &solver()).unwrap();
    assert!((sol.routing[0][0][0] - 1.0).abs() < 1e-9);
}

#[test]
fn rejects_bad_input() {
    let infra = InfrastructureGraph::new(vec![cloud("i0", 10.0, 10.0, unit_cost(1.0))], vec![]).unwrap();
    assert!(build_embedding_ilp(&infra, &[], &EmbeddingUsage::empty(&infra)).is_err());
    let mut bad = two_vnf_sfc("f", 1.0, 1.0);
    bad.vnfs[0].compute = 0.0;
    assert!(build_embedding_ilp(&infra, &[bad], &EmbeddingUsage::empty(&infra)).is_err());
    let empty = InfrastructureGraph::new(vec![], vec![]).unwrap();
    assert!(build_embedding_ilp(&empty, &[two_vnf_sfc("f", 1.0, 1.0)], &EmbeddingUsage::empty(&empty)).is_err());
    let infra = k2_infra(&CostTable::default());
    assert!(run_comparison(&infra, &type1_template(), &[0, 2], &Method::ALL, &ComparisonOptions::default()).is_err());
}

#[test]
fn verify_catches_overload() {
    let infra = InfrastructureGraph::new(
        vec![cloud("i0", 1.0, 1.0, unit_cost(1.0)), cloud("i1", 1.0, 1.0, unit_cost(1.0))],
        vec![link(0, 1, 1.0, 1.0)],
    )
    .unwrap();
    let sfcs = [two_vnf_sfc("f", 1.0, 1.0)];
    let mut sol = embed(&infra, &sfcs, EmbeddingMode::Joint, &solver()).unwrap();
    sol.placement[0][1] = 0;
    let v = verify_embedding(&infra, &sfcs, &sol, 1e-6);
    assert!(v.iter().any(|x| x.what.contains("compute")), "{v:?}");
    assert!(v.iter().any(|x| x.what.contains("conservation")), "{v:?}");
}

#[test]
fn reduced_graph_keeps_provisioned_elements() {
    let infra = k2_infra(&CostTable::default());
    let template = type1_template();
    let slices = [sliceprov_core::SliceSpec::new("s", aggregate_srd(&template, 4, 0.1), sliceprov_core::CoverageSpec::none()).unwrap()];
    let rates = RateTables::without_cells(infra.rrhs().len(), 1);
    let prov = carp(&infra, &slices, &rates, Variant::JrJn, &CarpOptions { lambda: 0.0, solver: solver() }).unwrap();
    let reduced = reduce_graph(&infra, &prov, 0).unwrap();
    let used = prov.wired[0].used.iter().filter(|&&u| u).count();
    assert_eq!(reduced.graph.nodes().len(), used);
    for (k, &i) in reduced.nodes.iter().enumerate() {
        let cap = infra.node(i).compute * prov.wired[0].node_compute(i);
        assert!((reduced.graph.node(k).compute - cap).abs() < 1e-12);
    }
    for &l in &reduced.links {
        assert!(prov.wired[0].link_share(l) > 0.0);
    }

    let zero = ProvisioningSolution {
        variant: Variant::JrJn,
        lambda: 0.0,
        delta: 1.0,
        radio: vec![RadioShares::zeros(infra.rrhs().len(), 0)],
        wired: vec![WiredShares::zeros(infra.nodes().len(), 3, infra.links().len(), 2)],
        slice_costs: vec![Costs::new(0.0, 0.0)],
        costs: Costs::new(0.0, 0.0),
        problems: vec![],
    };
    let empty = reduce_graph(&infra, &zero, 0).unwrap();
    assert!(empty.graph.nodes().is_empty() && empty.graph.links().is_empty());
    assert!(reduce_graph(&infra, &zero, 1).is_err());
}

#[test]
fn provision_then_embed_is_feasible() {
    let infra = k2_infra(&CostTable::default());
    let template = type1_template();
    let opts = ComparisonOptions { solver: solver(), ..ComparisonOptions::default() };
    for n in [1, 2, 3, 5] {
        let sfcs = replicate_sfc(&template, n, opts.link_scale);
        for mode in [EmbeddingMode::Joint, EmbeddingMode::Sequential] {
            let sol = provision_then_embed(&infra, &template, n, mode, &opts).unwrap_or_else(|e| panic!("n = {n} {mode:?}: {e}"));
            let v = verify_embedding(&infra, &sfcs, &sol, 1e-6);
            assert!(v.is_empty(), "n = {n} {mode:?}: {v:?}");
            let direct = embed(&infra, &sfcs, mode, &opts.solver).unwrap();
            assert!(verify_embedding(&infra, &sfcs, &direct, 1e-6).is_empty());
            if mode == EmbeddingMode::Joint {
                assert!(direct.cost <= sol.cost + 1e-6, "n = {n}: direct {} > reduced {}", direct.cost, sol.cost);
            }
        }
    }
}

#[test]
fn sequential_cost_counts_fixed_cost_once() {
    let infra = InfrastructureGraph::new(
        vec![cloud("i0", 10.0, 10.0, sliceprov_core::NodeCost { fixed: 20.0, compute: 1.0, storage: 1.0, radio: 0.0 })],
        vec![link(0, 0, 10.0, 0.0)],
    )
    .unwrap();
    let sfcs: Vec<_> = (0..3).map(|f| two_vnf_sfc(&format!("f{f}"), 1.0, 1.0)).collect();
    let seq = embed(&infra, &sfcs, EmbeddingMode::Sequential, &solver()).unwrap();
    assert!((seq.cost - (20.0 + 12.0)).abs() < 1e-9, "{}", seq.cost);
    assert!((embedding_cost(&infra, &sfcs, &seq.placement, &seq.routing) - seq.cost).abs() < 1e-12);
}

#[test]
fn tiny_models_match_brute_force() {
    let infra = InfrastructureGraph::new(
        vec![cloud("i0", 2.0, 2.0, unit_cost(1.0)), cloud("i1", 3.0, 3.0, unit_cost(2.0))],
        vec![link(0, 1, 1.0, 3.0), link(1, 0, 1.0, 1.0), link(0, 0, 1.0, 0.0)],
    )
    .unwrap();
    for c in [0.5, 1.0, 1.5, 2.0] {
        let sfcs = [two_vnf_sfc("f", c, 0.5)];
        let em = build_embedding_ilp(&infra, &sfcs, &EmbeddingUsage::empty(&infra)).unwrap();
        assert!(em.model.num_integral() <= 8);
        let a = solve(&em.model, &solver()).unwrap();
        let b = brute_force_solve(&em.model, &BruteForceGrid::default()).unwrap();
        assert_eq!(a.status == SolveStatus::Infeasible, b.status == SolveStatus::Infeasible, "c = {c}");
        if let (Some(x), Some(y)) = (a.objective, b.objective) {
            assert!((x - y).abs() < 1e-6, "c = {c}: {x} vs {y}");
        }
    }
}

#[test]
fn comparison_is_deterministic() {
    let infra = k2_infra(&CostTable::default());
    let opts = ComparisonOptions { solver: solver(), ..ComparisonOptions::default() };
    let run = || run_comparison(&infra, &type1_template(), &[2, 3], &Method::ALL, &opts).unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a.len(), 8);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!((x.method, x.sfc_count, x.cost, &x.status), (y.method, y.sfc_count, y.cost, &y.status));
        assert_eq!(x.status, "ok");
    }
}
