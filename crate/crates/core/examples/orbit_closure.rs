//! Neighbors and orbits under the symmetry generators.

use symloc::neighborhood::{build_neighborhood, build_neighborhood_with, GeneratorSet};
use symloc::parser::{parse_model, read_assignment, write_assignment};
use symloc::symmetry::{detect, Policy};

fn main() {
    let mop = parse_model(include_str!("../data/knapsack3.mop")).unwrap();
    let n = build_neighborhood(&detect(&mop, Policy::Exhaustive).unwrap()).unwrap();
    let a = read_assignment(&mop, r#"{"In": [["o1"], ["o3"]]}"#).unwrap();
    for (m, b) in n.neighbors(&mop, &a) {
        println!("knapsack3 {} -> {}", m.description, write_assignment(&mop, &b).replace(['\n', ' '], ""));
    }
    println!("orbit of {{o1, o3}}: {} assignments", n.orbit_closure(&mop, &a, 100).unwrap().len());

    let tsp = parse_model(include_str!("../data/tsp4.mop")).unwrap();
    let report = detect(&tsp, Policy::Exhaustive).unwrap();
    let start = read_assignment(&tsp, r#"{"Map": {"0":"c1","1":"c2","2":"c3","3":"c4"}}"#).unwrap();
    for set in [GeneratorSet::AllPairs, GeneratorSet::Adjacent] {
        let n = build_neighborhood_with(&report, set).unwrap();
        let orbit = n.orbit_closure(&tsp, &start, 1_000).unwrap();
        println!("tsp4 {:?}: {} generators reach {} tours", set, n.len(), orbit.len());
    }
}
