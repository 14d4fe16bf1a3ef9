#![allow(dead_code)]

use std::path::PathBuf;

use symloc::eval::{check_model, objective_value};
use symloc::parser::parse_model;
use symloc::{Assignment, Mop, Sense};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn data_path(name: &str) -> PathBuf {
    data_dir().join(name)
}

pub fn load(name: &str) -> Mop {
    let text = std::fs::read_to_string(data_path(name)).expect("bundled file");
    parse(&text)
}

pub fn parse(text: &str) -> Mop {
    match parse_model(text) {
        Ok(m) => m,
        Err(ds) => panic!(
            "parse failed:\n{}",
            ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n")
        ),
    }
}

/// Every bundled model file name, sorted.
pub fn bundled() -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(data_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".mop"))
        .collect();
    v.sort();
    v
}

/// Naive optimum: enumerate every assignment, keep models, take the best
/// in the user's sense; ties go to the first in enumeration order.
pub fn naive_optimum(mop: &Mop) -> Option<(i64, Assignment)> {
    let mut best: Option<(i64, Assignment)> = None;
    for a in mop.enumerate_assignments().unwrap() {
        if !check_model(mop, &a).unwrap() {
            continue;
        }
        let v = objective_value(mop, &a).unwrap();
        let better = match (&best, mop.sense) {
            (None, _) => true,
            (Some((b, _)), Sense::Minimize) => v < *b,
            (Some((b, _)), Sense::Maximize) => v > *b,
        };
        if better {
            best = Some((v, a));
        }
    }
    best
}

/// All models of `mop` by enumeration.
pub fn all_models(mop: &Mop) -> Vec<Assignment> {
    mop.enumerate_assignments()
        .unwrap()
        .filter(|a| check_model(mop, a).unwrap())
        .collect()
}

/// Builds the TSP assignment `Map(i) = tour[i]` from city labels.
pub fn tour(mop: &Mop, cities: &[&str]) -> Assignment {
    let map = mop.vocabulary.symbol_id("Map").unwrap();
    let city = mop.vocabulary.type_id("City").unwrap();
    let mut a = Assignment::empty(mop);
    for (i, c) in cities.iter().enumerate() {
        a.set_cell(map, i, mop.domain(city).code_of(c).unwrap() as i64);
    }
    a
}

/// Builds an assignment for a unary var predicate from element labels.
pub fn subset(mop: &Mop, pred: &str, ty: &str, elems: &[&str]) -> Assignment {
    let p = mop.vocabulary.symbol_id(pred).unwrap();
    let t = mop.vocabulary.type_id(ty).unwrap();
    let mut a = Assignment::empty(mop);
    for e in elems {
        a.set_cell(p, mop.domain(t).code_of(e).unwrap() as usize, 1);
    }
    a
}
