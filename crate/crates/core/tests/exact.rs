mod common;

use common::{bundled, load, naive_optimum, parse};
use symloc::eval::{check_model, objective_value};
use symloc::exact::{initial_model, optimize_exact, Budget, ExactStatus};
use symloc::model::SpaceSize;

fn k3_two_colors() -> symloc::Mop {
    let text = std::fs::read_to_string(common::data_path("cnp_k3.mop")).unwrap();
    parse(&text.replace("{red, green, blue}", "{red, green}"))
}

#[test]
fn optimum_matches_enumeration_on_bundled() {
    for name in bundled() {
        let mop = load(&name);
        if !mop.assignment_space_size().fits(100_000) {
            continue;
        }
        let oracle = naive_optimum(&mop);
        let r = optimize_exact(&mop, &Budget::default()).unwrap();
        match oracle {
            Some((v, first)) => {
                assert_eq!(r.status, ExactStatus::Sat, "{name}");
                assert_eq!(r.objective, Some(v), "{name}");
                // ties go to the first model in canonical order
                assert_eq!(r.assignment.as_ref(), Some(&first), "{name}");
            }
            None => assert_eq!(r.status, ExactStatus::Unsat, "{name}"),
        }
    }
}

#[test]
fn known_optima() {
    let cases = [
        ("tsp4.mop", 10),
        ("knapsack3.mop", 16),
        ("assignment2.mop", 2),
        ("cnp_k3.mop", 3),
    ];
    for (name, want) in cases {
        let r = optimize_exact(&load(name), &Budget::default()).unwrap();
        assert_eq!(r.objective, Some(want), "{name}");
    }
}

#[test]
fn triangle_with_two_colors_is_unsat() {
    let mop = k3_two_colors();
    let r = optimize_exact(&mop, &Budget::default()).unwrap();
    assert_eq!(r.status, ExactStatus::Unsat);
    assert!(r.assignment.is_none() && r.objective.is_none());
    let f = initial_model(&mop, &Budget::default(), 3).unwrap();
    assert_eq!(f.status, ExactStatus::Unsat);
}

#[test]
fn tiny_budget_exhausts() {
    let mop = load("tsp4.mop");
    let r = optimize_exact(&mop, &Budget::nodes(1)).unwrap();
    assert_eq!(r.status, ExactStatus::Exhausted);
    assert!(r.nodes_explored <= 1);
}

#[test]
#[should_panic]
fn zero_node_budget_is_rejected() {
    Budget::nodes(0);
}

#[test]
fn pruning_beats_enumeration() {
    let mop = load("tsp4.mop");
    let r = optimize_exact(&mop, &Budget::default()).unwrap();
    // 4 + 16 + 64 + 256 nodes would be a full tree with no pruning
    assert!(r.nodes_explored < 340, "{}", r.nodes_explored);
}

#[test]
fn initial_models_are_models() {
    for name in bundled() {
        let mop = load(&name);
        for seed in 0..5 {
            let r = initial_model(&mop, &Budget::default(), seed).unwrap();
            if r.status == ExactStatus::Sat {
                let a = r.assignment.unwrap();
                assert!(check_model(&mop, &a).unwrap(), "{name} seed {seed}");
                assert_eq!(r.objective, Some(objective_value(&mop, &a).unwrap()));
            }
        }
    }
}

#[test]
fn initial_model_depends_only_on_seed() {
    let mop = load("tsp5.mop");
    let a = initial_model(&mop, &Budget::default(), 9).unwrap();
    let b = initial_model(&mop, &Budget::default(), 9).unwrap();
    assert_eq!(a, b);
    let distinct: std::collections::BTreeSet<_> = (0..10)
        .map(|s| initial_model(&mop, &Budget::default(), s).unwrap().assignment)
        .collect();
    assert!(distinct.len() > 1, "seed should vary the value order");
}

#[test]
fn space_sizes() {
    assert_eq!(load("tsp4.mop").assignment_space_size(), SpaceSize::Exact(256));
    assert_eq!(load("knapsack3.mop").assignment_space_size(), SpaceSize::Exact(8));
    let two = parse(
        "mop t { type City = {c1, c2}; var func Map(City) -> City;
         minimize count{x in City | Map(x) = x}; }",
    );
    assert_eq!(two.assignment_space_size(), SpaceSize::Exact(4));
    assert_eq!(two.enumerate_assignments().unwrap().count(), 4);
    // 10^10 fits in u128, but a 10-node 10-color relation does not
    let mut nodes = Vec::new();
    for i in 0..10 {
        nodes.push(format!("n{i}"));
    }
    let big = parse(&format!(
        "mop big {{ type N = {{{}}}; var pred R(N, N, N, N); minimize count{{x in N | R(x, x, x, x)}}; }}",
        nodes.join(", ")
    ));
    assert_eq!(big.assignment_space_size(), SpaceSize::Overflow);
    assert!(big.enumerate_assignments().is_err());
}

#[test]
fn knapsack_enumeration_order() {
    let mop = load("knapsack3.mop");
    let all: Vec<_> = mop.enumerate_assignments().unwrap().collect();
    assert_eq!(all.len(), 8);
    assert_eq!(all[0], common::subset(&mop, "In", "Object", &[]));
    assert_eq!(all[7], common::subset(&mop, "In", "Object", &["o1", "o2", "o3"]));
}
