//! Generate one instance per problem family and compare detection with the
//! expected outcome shipped alongside it.

use symloc::instances::{generate, GraphKind, InstanceSpec, Problem};
use symloc::parser::parse_model;
use symloc::symmetry::{detect, Policy};

fn main() {
    let mut specs: Vec<InstanceSpec> = Problem::ALL
        .into_iter()
        .map(|p| InstanceSpec::new(p, 5, 3))
        .collect();
    let mut twins = InstanceSpec::new(Problem::MaxClique, 7, 3);
    twins.graph = GraphKind::WithTwins;
    specs.push(twins);
    let mut knapsack = InstanceSpec::new(Problem::Knapsack, 6, 9);
    knapsack.equal_volume_pairs = 2;
    knapsack.identical_pairs = 1;
    specs.push(knapsack);

    for spec in specs {
        let inst = generate(&spec).unwrap();
        let mop = parse_model(&inst.text).unwrap();
        let r = detect(&mop, Policy::auto(&mop, 1_000_000, 256, 0)).unwrap();
        let diff = inst.expectation.compare(&mop, &r);
        println!(
            "{:<20} detected {:>2}, kept {:>2}, {}",
            mop.name,
            r.detected_count(),
            r.symmetries.len(),
            if diff.is_empty() { "as expected".to_string() } else { diff.join("; ") }
        );
    }
}
