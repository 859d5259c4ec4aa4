use std::fs;
use std::path::{Path, PathBuf};

use sliceprov_cli::experiment::{max_rate_multiplier, solution_file, write_experiment};
use sliceprov_cli::metrics::active_rrhs;
use sliceprov_cli::testbed::{eight_rrh_instance, exact_solver};
use sliceprov_cli::{
    compare_embedding, emit_rb_breakdown, load_scenario, parse_scenario, run_experiment, solution_metrics, Outcome, Scenario,
};
use sliceprov_core::provisioning::{carp, CarpOptions, ProvisioningSolution, Variant};
use sliceprov_core::radio::bits_per_rb_down;

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

/// One cloud node, one RRH at the origin and one slice-1 type covering a single cell.
fn single_rrh(users: f64, extra: &str) -> Scenario {
    let text = format!(
        r#"{{
  "name": "single",
  {extra}
  "topology": {{
    "type": "graph",
    "nodes": [
      {{ "name": "dc", "kind": "cloud", "compute": 100, "storage": 100, "cost": {{ "fixed": 20, "compute": 1, "storage": 1 }} }},
      {{ "name": "r0", "kind": "rrh", "compute": 50, "storage": 50, "radio_blocks": 100, "position": {{ "x": 0, "y": 0 }},
         "cost": {{ "fixed": 25, "compute": 1, "storage": 1, "radio": 0.05 }} }}
    ],
    "links": [
      {{ "src": 0, "dst": 1, "bandwidth": 100, "cost": 1 }}, {{ "src": 1, "dst": 0, "bandwidth": 100, "cost": 1 }},
      {{ "src": 0, "dst": 0, "bandwidth": 100, "cost": 0 }}, {{ "src": 1, "dst": 1, "bandwidth": 100, "cost": 0 }}
    ]
  }},
  "slice_types": [{{ "name": "hd", "preset": "slice1", "instance_granularity": 10,
                    "coverage": {{ "area": [{{ "x0": 0, "y0": 0, "x1": 90, "y1": 103 }}], "users": {users} }} }}],
  "slices": {{ "total": 1, "counts": [1] }},
  "solver": {{ "mip_gap": 1e-9 }}
}}"#
    );
    parse_scenario(&text, Path::new(".")).unwrap()
}

#[test]
fn single_rrh_utilization_matches_closed_form() {
    let users = 5.0;
    let scn = single_rrh(users, "");
    let cell = &scn.slices[0].coverage.cells()[0];
    let b = bits_per_rb_down(&scn.infra.node(1).position.unwrap(), cell, &scn.radio);
    let expected = users * 4e6 / (b * 100.0);
    assert!(expected > 0.0 && expected < 1.0, "{expected}");
    let out = run_experiment(&scn);
    assert_eq!(out.report.variants.len(), Variant::ALL.len());
    for v in &out.report.variants {
        assert!(v.is_optimal(), "{}: {}", v.variant, v.status);
        let m = v.metrics.unwrap();
        assert!((m.rb_utilization - expected).abs() < 1e-6, "{}: {} vs {expected}", v.variant, m.rb_utilization);
    }
}

#[test]
fn infeasible_run_is_recorded_and_scaling_recovers() {
    let scn = single_rrh(2000.0, "");
    let out = run_experiment(&scn);
    assert_eq!(out.report.variants.len(), Variant::ALL.len());
    assert!(out.report.variants.iter().all(|v| v.outcome == Outcome::Infeasible && v.metrics.is_none()));
    assert!(out.report.all_acceptable());
    assert!(out.runs.iter().all(|r| r.solution.is_none()));

    let scn = single_rrh(2000.0, r#""delta_scaling": true,"#);
    let out = run_experiment(&scn);
    for v in &out.report.variants {
        assert_eq!(v.outcome, Outcome::Solved, "{}", v.variant);
        let d = v.delta.unwrap();
        assert!(d > 0.0 && d < 1.0, "{d}");
    }
}

#[test]
fn multiplier_is_capped_at_the_upper_bound() {
    let scn = single_rrh(1.0, "");
    let m = max_rate_multiplier(&scn.infra, &scn.slices, &scn.rates, true, &scn.solver, 2.0, 1e-3).unwrap();
    assert_eq!(m, 2.0);
    let m = max_rate_multiplier(&scn.infra, &scn.slices, &scn.rates, true, &scn.solver, 1e4, 1e-3).unwrap();
    assert!(m > 2.0 && m < 1e4);
}

#[test]
fn embedding_comparison_needs_a_section() {
    assert!(compare_embedding(&single_rrh(1.0, ""), None).is_err());
}

fn csv_header(path: &Path) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.headers().unwrap().iter().map(String::from).collect()
}

#[test]
fn desk_reports_are_consistent_and_reproducible() {
    let scn = load_scenario(&scenarios_dir().join("desk-k2.json")).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run_experiment(&scn);
    write_experiment(a.path(), &first).unwrap();
    write_experiment(b.path(), &run_experiment(&scn)).unwrap();
    for name in ["metrics.csv", "rb_breakdown.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }

    let header = csv_header(&a.path().join("metrics.csv"));
    for col in ["c_rr", "c_wr", "c_tot", "rb_utilization", "node_utilization", "link_utilization"] {
        assert!(header.iter().any(|h| h == col), "{col}");
    }
    let rows = csv::Reader::from_path(a.path().join("metrics.csv")).unwrap().records().count();
    assert_eq!(rows, scn.variants.len());

    let n_nodes = scn.infra.nodes().len();
    for v in &first.report.variants {
        assert!(v.is_optimal(), "{}: {}", v.variant, v.status);
        let text = fs::read_to_string(a.path().join(solution_file(v.variant))).unwrap();
        let sol: ProvisioningSolution = serde_json::from_str(&text).unwrap();
        let again = solution_metrics(&scn.infra, &sol);
        let m = v.metrics.unwrap();
        for (x, y) in [(m.c_tot, again.c_tot), (m.c_rr, again.c_rr), (m.c_wr, again.c_wr), (m.rb_used, again.rb_used)] {
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{x} vs {y}");
        }
        assert_eq!((m.used_nodes, m.used_links), (again.used_nodes, again.used_links));
        for u in [m.rb_utilization, m.node_utilization, m.link_utilization] {
            assert!((0.0..=1.0 + 1e-9).contains(&u), "{u}");
        }
        assert!(m.used_nodes <= n_nodes);

        let rb: Vec<_> = first.report.rb_breakdown.iter().filter(|r| r.variant == v.variant.name()).collect();
        assert_eq!(rb.len(), scn.infra.rrhs().len() * scn.slices.len());
        let total: f64 = rb.iter().map(|r| r.rb_total).sum();
        assert!((total - m.rb_used).abs() < 1e-6, "{total} vs {}", m.rb_used);
        for rrh in scn.infra.rrhs().iter().map(|&i| &scn.infra.node(i).name) {
            let used: f64 = rb.iter().filter(|r| &r.rrh == rrh).map(|r| r.rb_total).sum();
            assert!(used <= 100.0 + 1e-6, "{rrh}: {used}");
        }
    }
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["variants"].as_array().unwrap().len(), scn.variants.len());
}

#[test]
fn zero_demand_slice_has_zero_rows() {
    let text = fs::read_to_string(scenarios_dir().join("desk-k2.json"))
        .unwrap()
        .replace(r#""users": 20"#, r#""users": 0"#)
        .replace(r#""variants": ["JRN", "SR-SN", "SR-JN", "JR-SN", "JR-JN"]"#, r#""variants": ["SR-SN", "JR-JN"]"#);
    let scn = parse_scenario(&text, &scenarios_dir()).unwrap();
    assert!(!scn.slices[2].has_radio_demand());
    let out = run_experiment(&scn);
    assert!(out.report.variants.iter().all(|v| v.is_optimal()));
    let zero: Vec<_> = out.report.rb_breakdown.iter().filter(|r| r.slice == scn.slices[2].name).collect();
    assert_eq!(zero.len(), 2 * scn.infra.rrhs().len());
    assert!(zero.iter().all(|r| r.rb_up == 0.0 && r.rb_down == 0.0 && r.rb_total == 0.0));
}

#[test]
fn joint_radio_uses_no_more_rrhs_on_the_eight_rrh_layout() {
    let inst = eight_rrh_instance();
    let opts = CarpOptions { lambda: 0.0, solver: exact_solver() };
    let names: Vec<String> = inst.slices.iter().map(|s| s.name.clone()).collect();
    let sols: Vec<ProvisioningSolution> = [Variant::SrSn, Variant::JrJn]
        .iter()
        .map(|&v| carp(&inst.infra, &inst.slices, &inst.rates, v, &opts).unwrap())
        .collect();
    let rows = emit_rb_breakdown(&inst.infra, &names, &sols.iter().collect::<Vec<_>>());
    let (sr, jr) = (active_rrhs(&rows, Variant::SrSn), active_rrhs(&rows, Variant::JrJn));
    assert!(jr <= sr, "JR-JN {jr} active RRHs, SR-SN {sr}");
    assert!(sols[1].costs.total <= sols[0].costs.total + 1e-6);
}
