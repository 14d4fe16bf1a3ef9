//! Local search strategies over a symmetry neighborhood.

use symloc::exact::{initial_model, optimize_exact, Budget};
use symloc::neighborhood::build_neighborhood;
use symloc::parser::{parse_model, read_assignment};
use symloc::search::{local_search, SearchConfig, Strategy};
use symloc::symmetry::{detect, Policy};

fn main() {
    // one swap fixes a crossed assignment
    let mop = parse_model(include_str!("../data/assignment2.mop")).unwrap();
    let n = build_neighborhood(&detect(&mop, Policy::Exhaustive).unwrap()).unwrap();
    let crossed = read_assignment(&mop, r#"{"Assign": {"a1": "t2", "a2": "t1"}}"#).unwrap();
    let r = local_search(&mop, &n, &crossed, &SearchConfig::default()).unwrap();
    println!("assignment2: trajectory {:?}", r.trajectory);

    let tsp = parse_model(include_str!("../data/tsp5.mop")).unwrap();
    let n = build_neighborhood(&detect(&tsp, Policy::Exhaustive).unwrap()).unwrap();
    let init = initial_model(&tsp, &Budget::default(), 0).unwrap().assignment.unwrap();
    let optimum = optimize_exact(&tsp, &Budget::default()).unwrap().objective.unwrap();
    println!("tsp5: optimum {optimum}");
    for strategy in [Strategy::BestImprovement, Strategy::FirstImprovement, Strategy::Annealing] {
        for restarts in [0, 4] {
            let mut cfg = SearchConfig {
                strategy,
                restarts,
                seed: 7,
                ..Default::default()
            };
            // distances here are in the hundreds
            cfg.annealing.initial_temperature = 400.0;
            let r = local_search(&tsp, &n, &init, &cfg).unwrap();
            println!(
                "  {:<18} restarts {restarts}: best {} after {} moves ({}, run {})",
                strategy.as_str(),
                r.best_objective,
                r.moves_executed,
                r.termination.as_str(),
                r.restart
            );
        }
    }
}
