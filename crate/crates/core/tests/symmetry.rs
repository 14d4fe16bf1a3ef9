mod common;

use std::collections::BTreeSet;

use common::{bundled, load, parse};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value as Json;
use symloc::eval::{check_model, objective_value};
use symloc::model::Domain;
use symloc::parser::{read_assignment, write_assignment};
use symloc::symmetry::{
    apply_symmetry, candidate_pairs, check_des_pair, classify_variance, detect, detect_with,
    verify_symmetry, CandidatePair, Classification, DesSymmetry, DetectOptions, Policy,
    RejectionReason, VerifyBudget, VerifyMode,
};
use symloc::{Assignment, Mop};

/// Swap two element labels everywhere in the JSON of the given symbols.
/// Only sound when no other type shares these labels.
fn oracle_swap(mop: &Mop, s: &DesSymmetry, a: &Assignment) -> Assignment {
    let d = mop.domain(s.ty);
    let (la, lb) = (d.label(s.a), d.label(s.b));
    for (i, _) in mop.vocabulary.types.iter().enumerate() {
        if i != s.ty.0 {
            let other = mop.domain(symloc::model::TypeId(i));
            assert!(other.code_of(&la).is_none() && other.code_of(&lb).is_none());
        }
    }
    let flip = |x: &str| -> String {
        if x == la {
            lb.clone()
        } else if x == lb {
            la.clone()
        } else {
            x.to_string()
        }
    };
    let names: BTreeSet<String> = s.sigma.iter().map(|x| mop.symbol(*x).name.clone()).collect();
    let mut v: Json = serde_json::from_str(&write_assignment(mop, a)).unwrap();
    for (name, table) in v.as_object_mut().unwrap() {
        if !names.contains(name) {
            continue;
        }
        *table = match table.take() {
            Json::Array(rows) => Json::Array(
                rows.into_iter()
                    .map(|r| {
                        Json::Array(
                            r.as_array()
                                .unwrap()
                                .iter()
                                .map(|x| Json::String(flip(x.as_str().unwrap())))
                                .collect(),
                        )
                    })
                    .collect(),
            ),
            Json::Object(m) => Json::Object(
                m.into_iter()
                    .map(|(k, x)| {
                        let key: Vec<String> = k.split(',').map(flip).collect();
                        (key.join(","), Json::String(flip(x.as_str().unwrap())))
                    })
                    .collect(),
            ),
            other => other,
        };
    }
    read_assignment(mop, &v.to_string()).unwrap()
}

fn small(mop: &Mop) -> bool {
    mop.assignment_space_size().fits(20_000)
}

fn pair(mop: &Mop, ty: &str, a: &str, b: &str) -> CandidatePair {
    let t = mop.vocabulary.type_id(ty).unwrap();
    let d = mop.domain(t);
    CandidatePair {
        ty: t,
        a: d.code_of(a).unwrap(),
        b: d.code_of(b).unwrap(),
    }
}

/// Brute-force verdict: does some assignment change value under the swap?
fn oracle_variant(mop: &Mop, s: &DesSymmetry) -> bool {
    mop.enumerate_assignments().unwrap().any(|a| {
        objective_value(mop, &a).unwrap() != objective_value(mop, &oracle_swap(mop, s, &a)).unwrap()
    })
}

fn labels(mop: &Mop, s: &DesSymmetry) -> (String, String) {
    let d = mop.domain(s.ty);
    (d.label(s.a), d.label(s.b))
}

#[test]
fn tsp4_detects_twelve_variant_swaps() {
    let mop = load("tsp4.mop");
    let r = detect(&mop, Policy::Exhaustive).unwrap();
    assert_eq!(r.candidates_checked, 12);
    assert_eq!(r.symmetries.len(), 12);
    assert!(r.rejected.is_empty());
    for s in &r.symmetries {
        assert!(matches!(s.classification, Classification::Variant { .. }));
        assert!(s.describe(&mop).ends_with("{Map})"));
    }
}

#[test]
fn pinned_start_city() {
    let mop = load("tsp_alt4.mop");
    let r = detect(&mop, Policy::Exhaustive).unwrap();
    assert_eq!(r.symmetries.len(), 3);
    for s in &r.symmetries {
        let (a, b) = labels(&mop, s);
        assert!(a != "c1" && b != "c1");
    }
    let pinned: Vec<_> = r
        .rejected
        .iter()
        .filter(|x| matches!(&x.reason, RejectionReason::PinnedByConstant { symbol } if symbol == "Start"))
        .collect();
    assert_eq!(pinned.len(), 3);
}

#[test]
fn clique_edge_breaks_swap() {
    let mop = parse(
        "mop mc { type Node = {n1, n2, n3}; pred Edge(Node, Node); var pred Clique(Node);
         constraint forall x in Node: forall y in Node: Clique(x) & Clique(y) & x != y => Edge(x, y);
         maximize count{x in Node | Clique(x)};
         Edge = {(n1, n2), (n2, n1)}; }",
    );
    let err = check_des_pair(&mop, pair(&mop, "Node", "n1", "n3")).unwrap_err();
    assert_eq!(
        err,
        RejectionReason::InterpretedNotInvariant {
            symbol: "Edge".into()
        }
    );
    assert_eq!(err.code(), "interpreted-not-invariant");
    // swapping the two ends of the only edge keeps it
    let s = check_des_pair(&mop, pair(&mop, "Node", "n1", "n2")).unwrap();
    assert_eq!(classify_variance(&mop, &s, Policy::Exhaustive).unwrap(), Classification::InvariantProved);

    // forcing the bad swap through is caught by verification
    let bogus = DesSymmetry {
        ty: mop.vocabulary.type_id("Node").unwrap(),
        a: 0,
        b: 2,
        sigma: vec![mop.vocabulary.symbol_id("Clique").unwrap()],
        classification: Classification::Unclassified,
    };
    let v = verify_symmetry(&mop, &bogus, &VerifyBudget::default()).unwrap();
    assert!(!v.passed);
    assert_eq!(v.mode, VerifyMode::Exhaustive);
    let c = v.counterexample.unwrap();
    assert_ne!(
        check_model(&mop, &c).unwrap(),
        check_model(&mop, &apply_symmetry(&mop, &bogus, &c)).unwrap()
    );

    let identity = DesSymmetry { sigma: vec![], ..bogus };
    let a = Assignment::random(&mop, &mut ChaCha8Rng::seed_from_u64(4));
    assert_eq!(apply_symmetry(&mop, &identity, &a), a);
    assert!(verify_symmetry(&mop, &identity, &VerifyBudget::default()).unwrap().passed);
}

#[test]
fn literal_and_numeric_rejections() {
    let lit = parse(
        "mop l { type T = {a, b, c}; var func F(T) -> T;
         constraint F(a) = a; minimize count{x in T | F(x) = x}; }",
    );
    let r = detect(&lit, Policy::Exhaustive).unwrap();
    let reasons: Vec<(String, String)> = r
        .rejected
        .iter()
        .map(|x| {
            let d = lit.domain(x.pair.ty);
            (format!("{}-{}", d.label(x.pair.a), d.label(x.pair.b)), x.reason.code().to_string())
        })
        .collect();
    assert!(reasons.contains(&("a-b".into(), "literal-in-theory".into())), "{reasons:?}");
    assert!(reasons.contains(&("a-c".into(), "literal-in-theory".into())));
    // b and c are untouched by the literal
    assert_eq!(r.symmetries.len() + r.objective_invariant().count(), 1);

    let num = parse(
        "mop n { type Slot = 1..3; var func F(Slot) -> Slot;
         constraint forall s in Slot: F(s) >= s; minimize sum{F(s) | s in Slot}; }",
    );
    let r = detect(&num, Policy::Exhaustive).unwrap();
    assert_eq!(r.symmetries.len(), 0);
    assert!(r.rejected.iter().all(|x| x.reason == RejectionReason::NumericType));
    assert_eq!(r.rejected.len(), 3);
}

#[test]
fn constant_outside_theory_does_not_pin() {
    let mop = parse(
        "mop c { type T = {a, b, c}; const Home() -> T; var func F(T) -> T;
         constraint forall x in T: F(F(x)) = x;
         minimize count{x in T | F(x) = Home};
         Home = {() -> a}; }",
    );
    let r = detect(&mop, Policy::Exhaustive).unwrap();
    assert_eq!(r.detected_count(), 3);
}

#[test]
fn syntactic_policy() {
    // U is mentioned by no objective symbol, so it is not a candidate type
    let mop = parse(
        "mop s { type T = {a, b}; type U = {u, v}; var pred P(T); var pred Q(U);
         minimize count{x in T | P(x)}; }",
    );
    let u = mop.vocabulary.type_id("U").unwrap();
    let r = detect(&mop, Policy::Syntactic).unwrap();
    assert_eq!(r.candidate_types, vec![mop.vocabulary.type_id("T").unwrap()]);
    assert_eq!(r.symmetries.len(), 1);
    assert_eq!(r.symmetries[0].classification, Classification::Unclassified);
    // a swap on U leaves the objective alone by inspection
    let s = DesSymmetry {
        ty: u,
        a: 0,
        b: 1,
        sigma: vec![mop.vocabulary.symbol_id("Q").unwrap()],
        classification: Classification::Unclassified,
    };
    assert_eq!(classify_variance(&mop, &s, Policy::Syntactic).unwrap(), Classification::InvariantProved);

    let cnp = load("cnp_k3.mop");
    let r = detect(&cnp, Policy::Syntactic).unwrap();
    assert_eq!(r.symmetries.len(), 6);
    assert!(r.symmetries.iter().all(|s| s.classification == Classification::Unclassified));
}

#[test]
fn exhaustive_request_on_huge_space_samples() {
    let spec = symloc::instances::InstanceSpec::new(symloc::instances::Problem::Tsp, 8, 0);
    let mop = parse(&symloc::instances::generate(&spec).unwrap().text);
    let r = detect(&mop, Policy::Exhaustive).unwrap();
    assert!(matches!(r.policy, Policy::Sample { n: 256, seed: 0 }));
    assert_eq!(r.policy.to_string(), "sample(n=256, seed=0)");
    let s = r.symmetries[0].clone();
    assert!(classify_variance(&mop, &s, Policy::Exhaustive).is_err());
}

#[test]
fn sampled_detection_is_deterministic() {
    let mop = load("tsp5.mop");
    let p = Policy::Sample { n: 64, seed: 7 };
    let a = detect(&mop, p).unwrap();
    let b = detect(&mop, p).unwrap();
    assert_eq!(a.symmetries, b.symmetries);
    assert_eq!(a.rejected, b.rejected);
}

#[test]
fn cnp_all_swaps_objective_invariant() {
    let mop = load("cnp_k3.mop");
    let r = detect(&mop, Policy::Exhaustive).unwrap();
    assert_eq!(r.symmetries.len(), 0);
    assert_eq!(r.detected_count(), 6);
    assert!(r
        .objective_invariant()
        .all(|x| x.reason == RejectionReason::ObjectiveInvariant { verdict: Classification::InvariantProved }));
}

#[test]
fn library_swap_matches_label_swap() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in bundled() {
        let mop = load(&name);
        let r = detect_with(&mop, Policy::Syntactic, DetectOptions { skip_structural_check: true }).unwrap();
        let all = r.detected(&mop);
        assert_eq!(all.len(), candidate_pairs(&mop).len(), "{name}");
        for s in &all {
            for _ in 0..20 {
                let a = Assignment::random(&mop, &mut rng);
                assert_eq!(apply_symmetry(&mop, s, &a), oracle_swap(&mop, s, &a), "{name} {}", s.describe(&mop));
            }
        }
    }
}

#[test]
fn detected_symmetries_preserve_models() {
    for name in bundled() {
        let mop = load(&name);
        if !small(&mop) {
            continue;
        }
        let r = detect(&mop, Policy::Exhaustive).unwrap();
        for s in r.detected(&mop) {
            for a in mop.enumerate_assignments().unwrap() {
                let img = oracle_swap(&mop, &s, &a);
                assert_eq!(check_model(&mop, &a).unwrap(), check_model(&mop, &img).unwrap(), "{name}");
            }
            assert!(verify_symmetry(&mop, &s, &VerifyBudget::default()).unwrap().passed);
        }
    }
}

#[test]
fn exhaustive_verdicts_match_brute_force() {
    for name in bundled() {
        let mop = load(&name);
        if !small(&mop) {
            continue;
        }
        let r = detect(&mop, Policy::Exhaustive).unwrap();
        for s in r.detected(&mop) {
            let variant = matches!(s.classification, Classification::Variant { .. });
            assert_eq!(variant, oracle_variant(&mop, &s), "{name} {}", s.describe(&mop));
            if let Classification::Variant { witness } = &s.classification {
                assert_ne!(
                    objective_value(&mop, witness).unwrap(),
                    objective_value(&mop, &oracle_swap(&mop, &s, witness)).unwrap()
                );
                // the witness is the first differing assignment
                let first = mop
                    .enumerate_assignments()
                    .unwrap()
                    .find(|a| {
                        objective_value(&mop, a).unwrap()
                            != objective_value(&mop, &oracle_swap(&mop, &s, a)).unwrap()
                    })
                    .unwrap();
                assert_eq!(&first, witness);
            }
        }
    }
}

/// Four-city tour with a symmetric distance matrix.
fn symmetric_tsp4() -> Mop {
    let d = [[0, 5, 9, 4], [5, 0, 3, 8], [9, 3, 0, 7], [4, 8, 7, 0]];
    let mut rows = Vec::new();
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            rows.push(format!("(c{}, c{}) -> {x}", i + 1, j + 1));
        }
    }
    parse(&format!(
        "mop sym4 {{
          type City = {{c1, c2, c3, c4}}; type Index = 0..3;
          func Distance(City, City) -> int; func Next(Index) -> Index;
          var func Map(Index) -> City;
          constraint forall x in Index: forall y in Index: x != y => Map(x) != Map(y);
          minimize sum{{Distance(Map(z), Map(Next(z))) | z in Index}};
          Distance = {{{}}};
          Next = {{(0) -> 1, (1) -> 2, (2) -> 3, (3) -> 0}}; }}",
        rows.join(", ")
    ))
}

#[test]
fn symmetric_tsp_opposite_positions_are_invariant() {
    let mop = symmetric_tsp4();
    let r = detect(&mop, Policy::Exhaustive).unwrap();
    let inv: BTreeSet<(String, String)> = r
        .objective_invariant()
        .map(|x| {
            let d = mop.domain(x.pair.ty);
            (d.label(x.pair.a), d.label(x.pair.b))
        })
        .collect();
    let mut want = BTreeSet::new();
    for s in r.detected(&mop) {
        if !oracle_variant(&mop, &s) {
            want.insert(labels(&mop, &s));
        }
    }
    assert_eq!(inv, want);
    assert!(inv.contains(&("0".into(), "2".into())));
    assert!(inv.contains(&("1".into(), "3".into())));
}

#[test]
fn empty_type_domains_produce_no_candidates() {
    let mop = parse(
        "mop e { type T = {a}; type U = {u, v}; var pred P(T); minimize count{x in T | P(x)}; }",
    );
    let pairs = candidate_pairs(&mop);
    // U is not mentioned by any var symbol
    assert!(pairs.is_empty());
    assert!(matches!(mop.domain(mop.vocabulary.type_id("T").unwrap()), Domain::Labels(_)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swaps_are_involutions(file in 0usize..64, seed in any::<u64>()) {
        let names = bundled();
        let mop = load(&names[file % names.len()]);
        let r = detect_with(&mop, Policy::Syntactic, DetectOptions { skip_structural_check: true }).unwrap();
        let all = r.detected(&mop);
        prop_assume!(!all.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = &all[rng.gen_range(0..all.len())];
        let a = Assignment::random(&mop, &mut rng);
        let once = apply_symmetry(&mop, s, &a);
        prop_assert_eq!(apply_symmetry(&mop, s, &once), a);
    }

    #[test]
    fn sampled_variant_witness_is_genuine(seed in any::<u64>(), n in 1usize..64) {
        let mop = load("tsp5.mop");
        let r = detect(&mop, Policy::Sample { n, seed }).unwrap();
        for s in &r.symmetries {
            if let Classification::Variant { witness } = &s.classification {
                prop_assert_ne!(
                    objective_value(&mop, witness).unwrap(),
                    objective_value(&mop, &apply_symmetry(&mop, s, witness)).unwrap()
                );
            }
        }
    }
}
