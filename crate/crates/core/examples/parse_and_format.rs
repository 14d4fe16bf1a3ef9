//! Parse a model, validate it and print its canonical form.
//!
//! cargo run --example parse_and_format -- [FILE]

use std::path::PathBuf;

use symloc::parser::{format_model, parse_model, parse_model_file};
use symloc::validate::validate;

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/tsp4.mop")));
    let mop = match parse_model_file(&path) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    println!(
        "{}: {} types, {} symbols, {} constraints, {} total assignments",
        mop.name,
        mop.vocabulary.types.len(),
        mop.vocabulary.symbols.len(),
        mop.theory.len(),
        mop.assignment_space_size()
    );
    let v = validate(&mop);
    println!("validation: {}", if v.is_ok() { "ok" } else { "failed" });
    println!();
    print!("{}", format_model(&mop));

    // diagnostics carry a line and column
    let broken = "mop m {\n  type T = {a, b};\n  var pred P(T);\n  minimize count{x in T | Q(x)};\n}";
    println!();
    for d in parse_model(broken).unwrap_err() {
        println!("{d}");
    }
}
