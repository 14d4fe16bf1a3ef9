//! The whole pipeline on one file, printed as a JSON report.
//!
//! cargo run --example pipeline -- [FILE]

use symloc::parser::parse_model_file;
use symloc::report::{CliReport, DetectionJson, SearchJson};
use symloc::search::{run_pipeline, SearchConfig};
use symloc::symmetry::Policy;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/tsp5.mop").to_string());
    let mop = parse_model_file(path.as_ref()).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(1)
    });
    let cfg = SearchConfig {
        restarts: 2,
        ..Default::default()
    };
    let p = match run_pipeline(&mop, &cfg, Policy::auto(&mop, 1_000_000, 256, 0)) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2)
        }
    };
    eprintln!(
        "{}: initial {} -> best {} with {} generators",
        mop.name, p.initial_objective, p.search.best_objective, p.neighborhood_size
    );
    let mut rep = CliReport::new(&mop, vec!["pipeline".into(), path]);
    rep.detection = Some(DetectionJson::new(&mop, &p.detection));
    rep.search = Some(SearchJson::from_pipeline(&mop, cfg.strategy.as_str(), cfg.seed, &p));
    print!("{}", rep.to_json());
}
