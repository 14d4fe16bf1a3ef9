//! Evaluate constraints and the objective on hand-built assignments.

use symloc::eval::{check_model, objective_value};
use symloc::parser::{parse_model, read_assignment, write_assignment};

const TSP4: &str = include_str!("../data/tsp4.mop");

fn main() {
    let mop = parse_model(TSP4).expect("bundled model parses");
    let tours = [
        r#"{"Map": {"0": "c1", "1": "c2", "2": "c3", "3": "c4"}}"#,
        r#"{"Map": {"0": "c1", "1": "c4", "2": "c3", "3": "c2"}}"#,
        // c1 twice: not a tour
        r#"{"Map": {"0": "c1", "1": "c1", "2": "c3", "3": "c4"}}"#,
    ];
    for json in tours {
        let a = read_assignment(&mop, json).expect("well-formed assignment");
        let cities: Vec<String> = (0..4)
            .map(|i| {
                let city = mop.vocabulary.type_id("City").unwrap();
                let map = mop.vocabulary.symbol_id("Map").unwrap();
                mop.domain(city).label(a.cell(map, i) as u32)
            })
            .collect();
        println!(
            "{:<16} model: {:<5} length: {}",
            cities.join(" -> "),
            check_model(&mop, &a).unwrap(),
            objective_value(&mop, &a).unwrap()
        );
    }

    let knapsack = parse_model(include_str!("../data/knapsack3.mop")).unwrap();
    for a in knapsack.enumerate_assignments().unwrap() {
        let fits = check_model(&knapsack, &a).unwrap();
        let value = objective_value(&knapsack, &a).unwrap();
        let json: serde_json::Value = serde_json::from_str(&write_assignment(&knapsack, &a)).unwrap();
        println!("{:<28} fits: {fits:<5} value: {value}", json["In"].to_string());
    }
}
