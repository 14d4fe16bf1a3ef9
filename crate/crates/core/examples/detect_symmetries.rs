//! Detect swap symmetries and show why candidates are kept or dropped.
//!
//! cargo run --example detect_symmetries -- [FILE...]

use symloc::parser::parse_model_file;
use symloc::symmetry::{detect, Policy};

fn main() {
    let mut files: Vec<String> = std::env::args().skip(1).collect();
    if files.is_empty() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data/");
        files = ["tsp4.mop", "tsp_alt4.mop", "knapsack5.mop", "cnp_k3.mop", "max_clique6.mop"]
            .iter()
            .map(|f| format!("{dir}{f}"))
            .collect();
    }
    for f in files {
        let mop = parse_model_file(f.as_ref()).unwrap_or_else(|e| {
            eprintln!("{e}");
            std::process::exit(1)
        });
        // exhaustive up to a million assignments, sampled beyond
        let policy = Policy::auto(&mop, 1_000_000, 256, 0);
        let r = detect(&mop, policy).unwrap();
        println!(
            "{} [{}]: {} candidates, {} detected, {} in the neighborhood",
            mop.name,
            r.policy,
            r.candidates_checked,
            r.detected_count(),
            r.symmetries.len()
        );
        for s in &r.symmetries {
            println!("  keep {} {}", s.describe(&mop), s.classification.label());
        }
        for x in &r.rejected {
            let d = mop.domain(x.pair.ty);
            println!("  drop ({}, {}) {}", d.label(x.pair.a), d.label(x.pair.b), x.reason);
        }
    }
}
