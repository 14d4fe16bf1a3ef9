mod common;

use common::{load, parse, subset, tour};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symloc::eval::{check_model, eval_formula, eval_term, objective_value, Env, Value};
use symloc::{Assignment, Error};

#[test]
fn tsp_constraint_on_tours() {
    let mop = load("tsp4.mop");
    let ok = tour(&mop, &["c1", "c2", "c3", "c4"]);
    let bad = tour(&mop, &["c1", "c1", "c3", "c4"]);
    assert!(eval_formula(&mop.theory[0], &mop, &ok, &Env::new()).unwrap());
    assert!(!eval_formula(&mop.theory[0], &mop, &bad, &Env::new()).unwrap());
    assert!(check_model(&mop, &ok).unwrap());
    assert!(!check_model(&mop, &bad).unwrap());
}

#[test]
fn tsp_objective_by_hand() {
    let mop = load("tsp4.mop");
    // d(c1,c2) + d(c2,c3) + d(c3,c4) + d(c4,c1) = 1 + 4 + 6 + 3
    let a = tour(&mop, &["c1", "c2", "c3", "c4"]);
    assert_eq!(objective_value(&mop, &a).unwrap(), 14);
    assert_eq!(
        eval_term(&mop.objective, &mop, &a, &Env::new()).unwrap(),
        Value::Int(14)
    );
    // reversed: d(c1,c4) + d(c4,c3) + d(c3,c2) + d(c2,c1) = 2 + 3 + 2 + 3
    let r = tour(&mop, &["c1", "c4", "c3", "c2"]);
    assert_eq!(objective_value(&mop, &r).unwrap(), 10);
}

#[test]
fn tsp_objective_zero_matrix() {
    let mut text = std::fs::read_to_string(common::data_path("tsp4.mop")).unwrap();
    let start = text.find("Distance = {").unwrap();
    let end = start + text[start..].find("};").unwrap() + 2;
    let mut entries = Vec::new();
    for a in 1..=4 {
        for b in 1..=4 {
            entries.push(format!("(c{a}, c{b}) -> 0"));
        }
    }
    text.replace_range(start..end, &format!("Distance = {{{}}};", entries.join(", ")));
    let mop = parse(&text);
    let a = tour(&mop, &["c2", "c4", "c1", "c3"]);
    assert_eq!(objective_value(&mop, &a).unwrap(), 0);
}

#[test]
fn cnp_single_color_counts_one() {
    let mop = load("cnp_k3.mop");
    let a = Assignment::empty(&mop);
    assert_eq!(objective_value(&mop, &a).unwrap(), 1);
    assert!(!check_model(&mop, &a).unwrap());
}

#[test]
fn knapsack_examples() {
    let mop = load("knapsack3.mop");
    let all = subset(&mop, "In", "Object", &["o1", "o2", "o3"]);
    assert!(!check_model(&mop, &all).unwrap(), "3 + 3 + 4 > 7");
    let best = subset(&mop, "In", "Object", &["o2", "o3"]);
    assert!(check_model(&mop, &best).unwrap());
    assert_eq!(objective_value(&mop, &best).unwrap(), 16);
    let empty = subset(&mop, "In", "Object", &[]);
    assert_eq!(objective_value(&mop, &empty).unwrap(), 0);
}

#[test]
fn empty_theory_accepts_everything() {
    let mop = parse("mop m { type T = {a, b}; var pred P(T); minimize count{x in T | P(x)}; }");
    for a in mop.enumerate_assignments().unwrap() {
        assert!(check_model(&mop, &a).unwrap());
    }
}

const REACH: &str = "mop r {
  type City = {c1, c2, c3};
  const Start() -> City;
  var pred Following(City, City);
  constraint reachable(Start, Following, City);
  minimize count{x in City | Following(x, x)};
  Start = {() -> c1};
}";

fn relation(mop: &symloc::Mop, edges: &[(u32, u32)]) -> Assignment {
    let f = mop.vocabulary.symbol_id("Following").unwrap();
    let mut a = Assignment::empty(mop);
    for &(x, y) in edges {
        a.set_cell(f, (x * 3 + y) as usize, 1);
    }
    a
}

#[test]
fn reachable_on_cycle_and_gap() {
    let mop = parse(REACH);
    assert!(check_model(&mop, &relation(&mop, &[(0, 1), (1, 2), (2, 0)])).unwrap());
    // c3 only points back at c1; nothing leads to it
    assert!(!check_model(&mop, &relation(&mop, &[(0, 1), (1, 0), (2, 0)])).unwrap());
    // chain is enough
    assert!(check_model(&mop, &relation(&mop, &[(0, 1), (1, 2)])).unwrap());
    assert!(!check_model(&mop, &relation(&mop, &[])).unwrap());
}

/// Reachability by plain graph search, for comparison.
fn reaches_all(edges: &[bool], n: usize) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for y in 0..n {
            if edges[x * n + y] && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[test]
fn reachable_agrees_with_graph_search() {
    let mop = parse(REACH);
    for a in mop.enumerate_assignments().unwrap() {
        let f = mop.vocabulary.symbol_id("Following").unwrap();
        let edges: Vec<bool> = (0..9).map(|i| a.cell(f, i) == 1).collect();
        assert_eq!(check_model(&mop, &a).unwrap(), reaches_all(&edges, 3));
    }
}

#[test]
fn exists1_means_exactly_one() {
    let mop = parse(
        "mop m { type T = {a, b, c}; var pred P(T);
         constraint exists1 x in T: P(x); minimize count{x in T | P(x)}; }",
    );
    for a in mop.enumerate_assignments().unwrap() {
        let n = objective_value(&mop, &a).unwrap();
        assert_eq!(check_model(&mop, &a).unwrap(), n == 1);
    }
}

#[test]
fn overflow_is_an_error() {
    let mop = parse(
        "mop m { type T = {a, b}; func Big(T) -> int; var pred P(T);
         minimize sum{Big(x) | x in T}; Big = {(a) -> 9223372036854775807, (b) -> 1}; }",
    );
    let a = Assignment::empty(&mop);
    assert_eq!(objective_value(&mop, &a), Err(Error::Overflow));
}

#[test]
fn range_types_evaluate_as_integers() {
    let mop = parse(
        "mop m { type Slot = 3..5; var func F(Slot) -> Slot;
         constraint forall s in Slot: F(s) >= s;
         minimize sum{F(s) - s | s in Slot}; }",
    );
    let models = common::all_models(&mop);
    // F(3) in {3,4,5}, F(4) in {4,5}, F(5) = 5
    assert_eq!(models.len(), 6);
    let best = models
        .iter()
        .map(|a| objective_value(&mop, a).unwrap())
        .min()
        .unwrap();
    assert_eq!(best, 0);
}

/// Random formula text over `P(T)`, `Q(T, T)` and `F(T) -> T` with the
/// given variables in scope.
fn random_formula(rng: &mut ChaCha8Rng, vars: &mut Vec<String>, depth: u32) -> String {
    let pick = |rng: &mut ChaCha8Rng, vars: &[String]| vars[rng.gen_range(0..vars.len())].clone();
    if depth == 0 || rng.gen_bool(0.3) {
        let v = pick(rng, vars);
        let w = pick(rng, vars);
        return match rng.gen_range(0..4) {
            0 => format!("P({v})"),
            1 => format!("Q({v}, {w})"),
            2 => format!("F({v}) = {w}"),
            _ => format!("{v} != {w}"),
        };
    }
    match rng.gen_range(0..6) {
        0 => format!("!({})", random_formula(rng, vars, depth - 1)),
        1 => format!(
            "({} & {})",
            random_formula(rng, vars, depth - 1),
            random_formula(rng, vars, depth - 1)
        ),
        2 => format!(
            "({} | {})",
            random_formula(rng, vars, depth - 1),
            random_formula(rng, vars, depth - 1)
        ),
        3 => format!(
            "({} => {})",
            random_formula(rng, vars, depth - 1),
            random_formula(rng, vars, depth - 1)
        ),
        _ => {
            let q = ["forall", "exists", "exists1"][rng.gen_range(0..3)];
            let name = format!("v{}", vars.len());
            vars.push(name.clone());
            let body = random_formula(rng, vars, depth - 1);
            vars.pop();
            format!("({q} {name} in T: {body})")
        }
    }
}

fn model_with(constraints: &[String]) -> symloc::Mop {
    let mut text = String::from(
        "mop p { type T = {a, b, c}; var pred P(T); var pred Q(T, T); var func F(T) -> T;\n",
    );
    for c in constraints {
        text += &format!("constraint {c};\n");
    }
    text += "minimize count{z in T | P(z)}; }";
    parse(&text)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn quantifier_duality(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_formula(&mut rng, &mut vec!["x".to_string()], 3);
        let mop = model_with(&[
            format!("!(forall x in T: {phi})"),
            format!("exists x in T: !({phi})"),
            format!("!(exists x in T: {phi})"),
            format!("forall x in T: !({phi})"),
        ]);
        for _ in 0..8 {
            let a = Assignment::random(&mop, &mut rng);
            let e: Vec<bool> = mop
                .theory
                .iter()
                .map(|f| eval_formula(f, &mop, &a, &Env::new()).unwrap())
                .collect();
            prop_assert_eq!(e[0], e[1], "{}", phi);
            prop_assert_eq!(e[2], e[3], "{}", phi);
        }
    }

    #[test]
    fn count_equals_sum_of_ones(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_formula(&mut rng, &mut vec!["x".to_string()], 3);
        let mop = model_with(&[format!("count{{x in T | {phi}}} = sum{{1 | x in T, {phi}}}")]);
        let single = model_with(&[format!("forall x in T: {phi}")]);
        for _ in 0..8 {
            let a = Assignment::random(&mop, &mut rng);
            prop_assert!(check_model(&mop, &a).unwrap(), "{}", phi);
            // count = 3 exactly when the guard holds everywhere
            let count = eval_term(
                &parse(&format!(
                    "mop c {{ type T = {{a, b, c}}; var pred P(T); var pred Q(T, T); var func F(T) -> T;
                     minimize count{{x in T | {phi}}}; }}"
                )).objective,
                &mop, &a, &Env::new(),
            ).unwrap();
            prop_assert_eq!(count == Value::Int(3), check_model(&single, &a).unwrap());
        }
    }

    #[test]
    fn evaluation_is_deterministic(seed in any::<u64>()) {
        let mop = load("tsp4.mop");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Assignment::random(&mop, &mut rng);
        prop_assert_eq!(objective_value(&mop, &a).unwrap(), objective_value(&mop, &a).unwrap());
        prop_assert_eq!(check_model(&mop, &a).unwrap(), check_model(&mop, &a).unwrap());
    }
}
