mod common;

use common::*;
use sliceprov_core::provisioning::{
    build_jrn, build_np, build_rp, carp, count_problem_size, delta_scaling, verify_solution, CarpOptions, Family, PriorUsage,
    RadioShares, ScenarioDims, Step, Variant, DELTA_TOLERANCE,
};
use sliceprov_core::{CostTable, InfrastructureGraph, NodeCost, RateTables, Rect, SliceSpec};

fn opts() -> CarpOptions {
    CarpOptions { lambda: 0.0, solver: solver() }
}

#[test]
fn random_scenarios_verify_and_dominate() {
    for seed in 0..6 {
        let n = [1, 2, 2][seed as usize % 3];
        let (infra, slices, rates) = random_k2(seed, n);
        let mut totals = Vec::new();
        for v in Variant::ALL {
            let sol = match carp(&infra, &slices, &rates, v, &opts()) {
                Ok(sol) => sol,
                // Two-step variants can run out of room where the joint model does not.
                Err(e) if e.is_infeasible() && v != Variant::Jrn => continue,
                Err(e) => panic!("seed {seed} {v}: {e}"),
            };
            let report = verify_solution(&infra, &slices, &rates, &sol, 1e-6);
            assert!(report.is_empty(), "seed {seed} {v}: {:?}", report.violations);
            totals.push((v, sol.costs.total, sol.costs.radio));
        }
        assert_eq!(totals[0].0, Variant::Jrn);
        let jrn = totals[0].1;
        for &(v, total, _) in &totals {
            assert!(jrn <= total + 1e-6, "seed {seed}: JRN {jrn} > {v} {total}");
        }
    }
}

/// Builds every model a variant solves, with zero radio shares standing in for the first step.
fn built_sizes(infra: &InfrastructureGraph, slices: &[SliceSpec], rates: &RateTables, v: Variant) -> Vec<(Step, Vec<usize>, usize)> {
    let prior = PriorUsage::empty(infra);
    let radio: Vec<RadioShares> = (0..slices.len()).map(|s| RadioShares::zeros(infra.rrhs().len(), rates.cells[s])).collect();
    count_problem_size(v, &ScenarioDims::of(infra, slices))
        .into_iter()
        .map(|p| {
            let pm = match p.step {
                Step::Jrn => build_jrn(infra, slices, rates, 0.0),
                Step::Rp => build_rp(infra, slices, rates, &p.slices, 0.0, &prior),
                Step::Np => build_np(infra, slices, rates, &p.slices, &radio, &prior),
            }
            .unwrap();
            (pm.step, pm.slices.clone(), pm.num_variables())
        })
        .collect()
}

#[test]
fn built_sizes_match_counts() {
    for (seed, n) in [(1, 1), (2, 2), (3, 3)] {
        let (infra, slices, rates) = random_k2(seed, n);
        let dims = ScenarioDims::of(&infra, &slices);
        for v in Variant::ALL {
            let want: Vec<_> = count_problem_size(v, &dims).into_iter().map(|p| (p.step, p.slices, p.variables)).collect();
            assert_eq!(built_sizes(&infra, &slices, &rates, v), want, "{v}");
        }
    }
}

#[test]
fn solved_records_match_counts() {
    let (infra, slices, rates) = random_k2(2, 2);
    let dims = ScenarioDims::of(&infra, &slices);
    for v in Variant::ALL {
        let sol = carp(&infra, &slices, &rates, v, &opts()).unwrap();
        let got: Vec<_> = sol.problems.iter().map(|p| (p.step, p.slices.clone(), p.variables)).collect();
        let want: Vec<_> = count_problem_size(v, &dims).into_iter().map(|p| (p.step, p.slices, p.variables)).collect();
        assert_eq!(got, want, "{v}");
    }
}

#[test]
fn rp_alone_matches_count() {
    let (infra, slices, rates) = random_k2(4, 2);
    let pm = build_rp(&infra, &slices, &rates, &[1], 0.0, &PriorUsage::empty(&infra)).unwrap();
    let dims = ScenarioDims::of(&infra, &slices);
    assert_eq!(pm.num_variables(), infra.rrhs().len() * (1 + 2 * dims.slices[1].cells));
    assert_eq!(pm.num_instance_variables(), 0);
}

#[test]
fn two_times_oversubscribed_halves_delta() {
    // One node, one VNF: the slice needs twice the node.
    let infra = InfrastructureGraph::new(vec![cloud("i0", 8.0, 8.0, unit_cost(1.0))], vec![link(0, 0, 100.0, 0.0)]).unwrap();
    let slices = [wired_slice("big", vec![vnf("a", 16.0, 16.0, 64.0)], vec![], 0)];
    let rates = RateTables::without_cells(0, 1);
    assert!(carp(&infra, &slices, &rates, Variant::Jrn, &opts()).unwrap_err().is_infeasible());
    for v in Variant::ALL {
        let (delta, sol) = delta_scaling(&infra, &slices, &rates, v, &opts(), DELTA_TOLERANCE).unwrap();
        assert!((0.5 - DELTA_TOLERANCE..=0.5).contains(&delta), "{v}: {delta}");
        assert_eq!(sol.delta, delta);
        assert!(verify_solution(&infra, &slices, &rates, &sol, 1e-6).is_empty());
    }
}

#[test]
fn delta_floor_when_nothing_fits() {
    let infra = InfrastructureGraph::new(vec![cloud("i0", 0.0, 0.0, unit_cost(1.0))], vec![]).unwrap();
    let slices = [wired_slice("x", vec![vnf("a", 1.0, 1.0, 1.0)], vec![], 0)];
    let rates = RateTables::without_cells(0, 1);
    let err = delta_scaling(&infra, &slices, &rates, Variant::Jrn, &opts(), DELTA_TOLERANCE).unwrap_err();
    assert!(matches!(err, sliceprov_core::ProvisioningError::DeltaFloor { delta } if delta <= DELTA_TOLERANCE), "{err:?}");
}

#[test]
fn full_demand_returns_delta_one() {
    let (infra, slices, rates) = random_k2(7, 1);
    let (delta, _) = delta_scaling(&infra, &slices, &rates, Variant::SrSn, &opts(), DELTA_TOLERANCE).unwrap();
    assert_eq!(delta, 1.0);
}

fn perturbed(family: Family, f: impl FnOnce(&mut sliceprov_core::provisioning::ProvisioningSolution)) {
    let (infra, slices, rates) = random_k2(11, 2);
    let mut sol = carp(&infra, &slices, &rates, Variant::JrJn, &opts()).unwrap();
    f(&mut sol);
    let report = verify_solution(&infra, &slices, &rates, &sol, 1e-6);
    assert!(report.has(family), "{family:?} not flagged: {:?}", report.violations);
}

#[test]
fn verify_flags_perturbations() {
    perturbed(Family::Cost, |s| s.costs.total += 1.0);
    perturbed(Family::RadioDemand, |s| {
        for row in s.radio[0].down.iter_mut() {
            for x in row.iter_mut() {
                *x *= 0.5;
            }
        }
    });
    perturbed(Family::NodeDemand, |s| {
        for row in s.wired[0].compute.iter_mut() {
            for x in row.iter_mut() {
                *x *= 0.5;
            }
        }
    });
    perturbed(Family::Bounds, |s| s.wired[1].link[0][0] = -0.5);
    perturbed(Family::InstanceMultiple, |s| {
        let w = &mut s.wired[0];
        let (i, v) = (0..w.compute.len())
            .flat_map(|i| (0..w.compute[i].len()).map(move |v| (i, v)))
            .find(|&(i, v)| w.compute_instances[i][v] > 0)
            .unwrap();
        w.compute_instances[i][v] += 1;
    });
    perturbed(Family::RadioIndicator, |s| {
        for u in s.radio[0].used.iter_mut() {
            *u = false;
        }
    });
}

#[test]
fn radio_step_respects_prior() {
    let (infra, slices, rates) = random_k2(5, 1);
    let mut prior = PriorUsage::empty(&infra);
    for r in prior.radio.iter_mut() {
        *r = 1.0;
    }
    let pm = build_rp(&infra, &slices, &rates, &[0], 0.0, &prior).unwrap();
    let sol = sliceprov_milp::solve(&pm.model, &solver()).unwrap();
    assert_eq!(sol.status, sliceprov_milp::SolveStatus::Infeasible);
}

#[test]
fn builder_rejections() {
    let (infra, slices, rates) = random_k2(9, 2);
    let prior = PriorUsage::empty(&infra);
    assert!(build_rp(&infra, &slices, &rates, &[], 0.0, &prior).is_err());
    assert!(build_rp(&infra, &slices, &rates, &[0, 0], 0.0, &prior).is_err());
    assert!(build_rp(&infra, &slices, &rates, &[2], 0.0, &prior).is_err());
    // Discount larger than the unit radio cost over the best per-RB rate.
    assert!(build_rp(&infra, &slices, &rates, &[0], 1.0, &prior).is_err());
    assert!(build_jrn(&infra, &slices, &rates.select(&[0]), 0.0).is_err());
    assert!(build_np(&infra, &slices, &rates, &[0], &[], &prior).is_err());
}

#[test]
fn radio_demand_without_rrh_is_rejected() {
    let infra = InfrastructureGraph::new(vec![cloud("i0", 8.0, 8.0, unit_cost(1.0))], vec![link(0, 0, 100.0, 0.0)]).unwrap();
    let cov = coverage(Rect::with_size(0.0, 0.0, 100.0, 100.0), 10.0, 1e5, 1e5, 50.0);
    let slices = [radio_slice("r", 1.0, cov)];
    let rates = rates(&infra, &slices);
    assert!(build_jrn(&infra, &slices, &rates, 0.0).is_err());
}

#[test]
fn joint_radio_uses_no_more_blocks() {
    // With lambda = 0, uniform radio cost and no RRH fixed cost, RP minimises the RB count.
    let costs = CostTable { rrh: NodeCost { fixed: 0.0, ..CostTable::default().rrh }, ..CostTable::default() };
    let infra = k2_infra(&costs);
    for seed in 0..4u64 {
        let (_, slices, _) = random_k2(100 + seed, 3);
        let rates = rates(&infra, &slices);
        let blocks = |v: Variant| {
            let sol = carp(&infra, &slices, &rates, v, &opts()).unwrap();
            sol.radio.iter().map(|r| {
                let (u, d) = r.blocks(&infra);
                u + d
            }).sum::<f64>()
        };
        let (jr, sr) = (blocks(Variant::JrJn), blocks(Variant::SrSn));
        assert!(jr <= sr + 1e-6, "seed {seed}: JR {jr} > SR {sr}");
    }
}
