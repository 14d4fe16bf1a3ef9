//! Exact optimization by backtracking, and seeded first models.

use symloc::exact::{initial_model, optimize_exact, Budget};
use symloc::parser::{parse_model, write_assignment};

fn main() {
    for text in [
        include_str!("../data/knapsack3.mop"),
        include_str!("../data/tsp4.mop"),
        include_str!("../data/assignment3.mop"),
        include_str!("../data/cnp_k3.mop"),
    ] {
        let mop = parse_model(text).unwrap();
        let r = optimize_exact(&mop, &Budget::default()).unwrap();
        println!(
            "{:<12} {:?} objective {:?} after {} nodes",
            mop.name, r.status, r.objective, r.nodes_explored
        );
        if let Some(a) = &r.assignment {
            println!("  {}", write_assignment(&mop, a).replace('\n', "").replace("  ", ""));
        }
    }

    // a triangle cannot be colored with two colors
    let two = include_str!("../data/cnp_k3.mop").replace("{red, green, blue}", "{red, green}");
    let mop = parse_model(&two).unwrap();
    println!("K3 with 2 colors: {:?}", optimize_exact(&mop, &Budget::default()).unwrap().status);

    // tiny budgets run out
    let tsp = parse_model(include_str!("../data/tsp4.mop")).unwrap();
    let r = optimize_exact(&tsp, &Budget::nodes(3)).unwrap();
    println!("tsp4 with 3 nodes: {:?}", r.status);

    // the seed only changes value order, so every run finds some tour
    for seed in 0..4 {
        let r = initial_model(&tsp, &Budget::default(), seed).unwrap();
        println!("seed {seed}: first tour has length {:?}", r.objective);
    }
}
