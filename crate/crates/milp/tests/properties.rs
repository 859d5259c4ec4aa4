use proptest::prelude::*;
use sliceprov_milp::{
    brute_force_solve, check_feasibility, parse_lp, solve, write_lp, BruteForceGrid, MilpModel, Sense, SolveStatus, SolverOptions,
};

#[derive(Clone, Debug)]
struct Spec {
    ints: Vec<(bool, f64)>,
    conts: Vec<f64>,
    rows: Vec<(Vec<f64>, u8, f64)>,
    obj: Vec<f64>,
}

fn spec() -> impl Strategy<Value = Spec> {
    (1usize..=4, 0usize..=3).prop_flat_map(|(ni, nc)| {
        let n = ni + nc;
        (
            prop::collection::vec((any::<bool>(), 1.0f64..4.0), ni),
            prop::collection::vec(0.5f64..5.0, nc),
            prop::collection::vec((prop::collection::vec(-3i32..=3, n), 0u8..3, -4i32..=8), 1..=4),
            prop::collection::vec(-5i32..=5, n),
        )
            .prop_map(|(ints, conts, rows, obj)| Spec {
                ints: ints.into_iter().map(|(b, u)| (b, u.floor())).collect(),
                conts,
                rows: rows.into_iter().map(|(c, s, r)| (c.into_iter().map(f64::from).collect(), s, f64::from(r) * 0.5)).collect(),
                obj: obj.into_iter().map(f64::from).collect(),
            })
    })
}

fn build(s: &Spec) -> MilpModel {
    let mut m = MilpModel::new("tiny");
    let mut vars = Vec::new();
    for (k, &(binary, ub)) in s.ints.iter().enumerate() {
        vars.push(if binary { m.binary(format!("b{k}")) } else { m.integer(format!("n{k}"), 0.0, ub) }.unwrap());
    }
    for (k, &ub) in s.conts.iter().enumerate() {
        vars.push(m.continuous(format!("x{k}"), 0.0, ub).unwrap());
    }
    for (r, (coefs, sense, rhs)) in s.rows.iter().enumerate() {
        let terms: Vec<_> = vars.iter().zip(coefs).filter(|(_, &c)| c != 0.0).map(|(&v, &c)| (v, c)).collect();
        let sense = [Sense::Le, Sense::Ge, Sense::Eq][*sense as usize];
        m.add_row(format!("r{r}"), &terms, sense, *rhs).unwrap();
    }
    let obj: Vec<_> = vars.iter().zip(&s.obj).map(|(&v, &c)| (v, c)).collect();
    m.set_objective(&obj).unwrap();
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_matches_oracle(s in spec()) {
        let m = build(&s);
        let a = solve(&m, &SolverOptions { mip_gap: 1e-9, ..SolverOptions::default() }).unwrap();
        let b = brute_force_solve(&m, &BruteForceGrid::default()).unwrap();
        prop_assert_eq!(a.status == SolveStatus::Infeasible, b.status == SolveStatus::Infeasible);
        if a.status == SolveStatus::Optimal && b.status == SolveStatus::Optimal {
            let (x, y) = (a.objective.unwrap(), b.objective.unwrap());
            prop_assert!((x - y).abs() <= 1e-6, "solver {} oracle {}", x, y);
        }
    }

    #[test]
    fn optimal_assignments_pass_the_checker(s in spec()) {
        let m = build(&s);
        let a = solve(&m, &SolverOptions::default()).unwrap();
        if a.status == SolveStatus::Optimal {
            let report = check_feasibility(&m, &a.values, 1e-6).unwrap();
            prop_assert!(report.is_feasible(), "{:?}", report);
        }
    }

    #[test]
    fn lp_text_round_trips(s in spec()) {
        let text = write_lp(&build(&s));
        let again = write_lp(&parse_lp(&text).unwrap());
        prop_assert_eq!(text, again);
    }
}

#[test]
fn trivial_models() {
    let mut m = MilpModel::new("t");
    let x = m.continuous("x", 0.0, f64::INFINITY).unwrap();
    m.add_row("lo", &[(x, 1.0)], Sense::Ge, 3.0).unwrap();
    m.set_objective(&[(x, 1.0)]).unwrap();
    let s = solve(&m, &SolverOptions::default()).unwrap();
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.values[0] - 3.0).abs() < 1e-9);

    let mut m = MilpModel::new("b");
    let x = m.binary("x").unwrap();
    let y = m.binary("y").unwrap();
    m.add_row("cover", &[(x, 1.0), (y, 1.0)], Sense::Ge, 1.0).unwrap();
    m.set_objective(&[(x, 1.0), (y, 1.0)]).unwrap();
    assert_eq!(solve(&m, &SolverOptions::default()).unwrap().objective, Some(1.0));
    assert_eq!(brute_force_solve(&m, &BruteForceGrid::default()).unwrap().objective, Some(1.0));

    // All-zero assignment violates the demand row.
    let report = check_feasibility(&m, &[0.0, 0.0], 1e-6).unwrap();
    assert!(!report.is_feasible());
}

#[test]
fn perturbed_tight_row_is_reported() {
    let mut m = MilpModel::new("p");
    let x = m.continuous("x", 0.0, 10.0).unwrap();
    m.add_row("cap", &[(x, 1.0)], Sense::Le, 2.0).unwrap();
    m.set_objective(&[(x, -1.0)]).unwrap();
    let s = solve(&m, &SolverOptions::default()).unwrap();
    assert!(check_feasibility(&m, &s.values, 1e-6).unwrap().is_feasible());
    let report = check_feasibility(&m, &[s.values[0] + 1e-5], 1e-6).unwrap();
    assert!(!report.is_feasible());
}

#[test]
fn empty_model_is_trivially_optimal() {
    let m = MilpModel::new("empty");
    let s = solve(&m, &SolverOptions::default()).unwrap();
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!(s.has_assignment());
}
