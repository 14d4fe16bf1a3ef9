//! Check detected symmetries semantically, and watch a wrong one fail.

use symloc::eval::check_model;
use symloc::parser::{parse_model, write_assignment};
use symloc::symmetry::{
    apply_symmetry, detect, verify_symmetry, Classification, DesSymmetry, Policy, VerifyBudget,
};

fn main() {
    let mop = parse_model(include_str!("../data/max_clique6_twins.mop")).unwrap();
    let r = detect(&mop, Policy::Exhaustive).unwrap();
    for s in r.detected(&mop) {
        let v = verify_symmetry(&mop, &s, &VerifyBudget::default()).unwrap();
        println!("{} passed={} ({:?}, {} assignments)", s.describe(&mop), v.passed, v.mode, v.checked);
    }

    // v1 and v2 do not have the same neighbors, so this swap is no symmetry
    let node = mop.vocabulary.type_id("Node").unwrap();
    let bogus = DesSymmetry {
        ty: node,
        a: 0,
        b: 1,
        sigma: vec![mop.vocabulary.symbol_id("Clique").unwrap()],
        classification: Classification::Unclassified,
    };
    let v = verify_symmetry(&mop, &bogus, &VerifyBudget::default()).unwrap();
    println!("{} passed={}", bogus.describe(&mop), v.passed);
    if let Some(c) = v.counterexample {
        let image = apply_symmetry(&mop, &bogus, &c);
        println!(
            "  {} is a model: {}",
            write_assignment(&mop, &c).replace(['\n', ' '], ""),
            check_model(&mop, &c).unwrap()
        );
        println!(
            "  {} is a model: {}",
            write_assignment(&mop, &image).replace(['\n', ' '], ""),
            check_model(&mop, &image).unwrap()
        );
    }
}
