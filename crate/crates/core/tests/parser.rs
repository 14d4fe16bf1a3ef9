mod common;

use common::{bundled, load, parse};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symloc::model::{Binding, SymbolKind};
use symloc::parser::{format_model, parse_model, read_assignment, write_assignment};
use symloc::validate::validate;
use symloc::{Assignment, Sense};

fn errors(text: &str) -> Vec<String> {
    match parse_model(text) {
        Ok(_) => panic!("expected a parse error"),
        Err(ds) => ds.into_iter().map(|d| d.message).collect(),
    }
}

#[test]
fn tsp4_shape() {
    let mop = load("tsp4.mop");
    let var: Vec<&str> = mop
        .vocabulary
        .symbols
        .iter()
        .filter(|s| s.binding == Binding::Var)
        .map(|s| s.name.as_str())
        .collect();
    assert_eq!(var, ["Map"]);
    let map = mop.symbol(mop.vocabulary.symbol_id("Map").unwrap());
    assert_eq!(map.kind, SymbolKind::Function);
    for name in ["Distance", "Next"] {
        let id = mop.vocabulary.symbol_id(name).unwrap();
        assert_eq!(mop.symbol(id).binding, Binding::Interpreted);
        assert!(mop.structure.tables[id.0].is_some());
    }
    assert_eq!(mop.theory.len(), 1);
    assert_eq!(mop.sense, Sense::Minimize);
    assert!(validate(&mop).is_ok());
}

#[test]
fn empty_input_expects_mop() {
    let e = errors("");
    assert!(e[0].contains("expected 'mop'"), "{e:?}");
}

#[test]
fn function_used_as_formula() {
    let text = "mop m { type City = {a, b}; var func Map(City) -> City;
        constraint forall x in City: Map(x);
        minimize count{x in City | Map(x) = x}; }";
    let e = errors(text);
    assert!(e.iter().any(|m| m.contains("expected formula, found term")), "{e:?}");
}

#[test]
fn distinct_error_messages() {
    let dup = "mop m { type T = {a}; type T = {b}; var pred P(T); minimize count{x in T | P(x)}; }";
    assert!(errors(dup)[0].contains("duplicate declaration"));
    let unknown = "mop m { type T = {a}; var pred P(T); minimize count{x in T | Q(x)}; }";
    assert!(errors(unknown)[0].contains("unknown symbol `Q`"));
    let ident = "mop m { type T = {a}; var pred P(T); minimize count{x in T | P(y)}; }";
    assert!(errors(ident)[0].contains("unknown identifier `y`"));
    let ty = "mop m { type T = {a}; type U = {b}; var pred P(T);
        constraint forall u in U: P(u); minimize count{x in T | P(x)}; }";
    assert!(errors(ty)[0].contains("type error"), "{:?}", errors(ty));
    let arity = "mop m { type T = {a}; var pred P(T); minimize count{x in T | P(x, x)}; }";
    assert!(errors(arity)[0].contains("arity mismatch"));
}

#[test]
fn undeclared_symbol_in_objective() {
    let text = "mop m { type City = {a, b}; var func Map(City) -> City;
        minimize sum{Dist2(x, Map(x)) | x in City}; }";
    let e = errors(text);
    assert!(e[0].contains("unknown symbol `Dist2`"), "{e:?}");
}

#[test]
fn partial_function_table_rejected() {
    let text = "mop m { type T = {a, b}; func F(T) -> int; var pred P(T);
        minimize sum{F(x) | x in T, P(x)}; F = {(a) -> 1}; }";
    let e = errors(text);
    assert!(e[0].contains("partial function table for `F`"), "{e:?}");
}

#[test]
fn order_on_non_integer_type_rejected() {
    let text = "mop m { type T = {a, b}; var func F(T) -> T;
        constraint forall x in T: F(x) < x; minimize count{x in T | F(x) = x}; }";
    assert!(errors(text)[0].contains("type error"));
}

#[test]
fn error_spans_point_into_the_token() {
    let text = "mop m {\n  type T = {a};\n  var pred P(T);\n  minimize count{x in T | Qq(x)};\n}";
    let ds = parse_model(text).unwrap_err();
    let d = &ds[0];
    assert_eq!(d.span.line, 4);
    let line = text.lines().nth(3).unwrap();
    let start = d.span.column - 1;
    assert_eq!(&line[start..start + d.span.length], "Qq");
    assert!(d.to_string().starts_with("<input>:4:"));
}

#[test]
fn syntax_error_has_span() {
    let ds = parse_model("mop m {\n  type T = {a,, b};\n}").unwrap_err();
    assert_eq!(ds[0].span.line, 2);
    assert!(ds[0].span.column >= 1);
    assert!(ds[0].message.contains("syntax error"), "{}", ds[0].message);
}

#[test]
fn comments_are_ignored() {
    let a = parse("mop m { // c\n type T = {a}; // more\n var pred P(T); minimize count{x in T | P(x)}; }");
    let b = parse("mop m { type T = {a}; var pred P(T); minimize count{x in T | P(x)}; }");
    assert_eq!(a, b);
}

#[test]
fn round_trip_all_bundled() {
    for name in bundled() {
        let mop = load(&name);
        let text = format_model(&mop);
        let again = parse(&text);
        assert_eq!(again, mop, "{name}");
        assert_eq!(format_model(&again), text, "{name}: format not deterministic");
    }
}

#[test]
fn format_keeps_declaration_order() {
    let mop = load("cnp_k3.mop");
    let text = format_model(&mop);
    let node = text.find("type Node").unwrap();
    let color = text.find("type Color").unwrap();
    let edge = text.find("pred Edge").unwrap();
    let coloring = text.find("var func Coloring").unwrap();
    assert!(node < color && color < edge && edge < coloring);
}

#[test]
fn maximize_round_trips_in_user_sense() {
    let mop = load("knapsack3.mop");
    assert_eq!(mop.sense, Sense::Maximize);
    let text = format_model(&mop);
    assert!(text.contains("maximize sum{Value(x) | x in Object, In(x)};"), "{text}");
}

#[test]
fn read_hand_written_tsp_assignment() {
    let mop = load("tsp4.mop");
    let a = read_assignment(&mop, r#"{"Map": {"0":"c1","1":"c2","2":"c3","3":"c4"}}"#).unwrap();
    assert_eq!(a, common::tour(&mop, &["c1", "c2", "c3", "c4"]));
}

#[test]
fn unknown_element_in_json() {
    let mop = load("tsp4.mop");
    let e = read_assignment(&mop, r#"{"Map": {"0":"c1","1":"c2","2":"c3","3":"c9"}}"#).unwrap_err();
    assert!(e.to_string().contains("unknown element"), "{e}");
}

#[test]
fn json_schema_errors() {
    let mop = load("tsp4.mop");
    assert!(read_assignment(&mop, "[1]").is_err());
    assert!(read_assignment(&mop, "{").is_err());
    let e = read_assignment(&mop, r#"{"Map": {"0":"c1"}}"#).unwrap_err();
    assert!(e.to_string().contains("partial"), "{e}");
    let e = read_assignment(&mop, r#"{"Distance": {}}"#).unwrap_err();
    assert!(e.to_string().contains("not a var symbol"), "{e}");
    let e = read_assignment(&mop, "{}").unwrap_err();
    assert!(e.to_string().contains("missing"), "{e}");
}

#[test]
fn predicate_assignment_json() {
    let mop = load("knapsack3.mop");
    let a = common::subset(&mop, "In", "Object", &["o2", "o3"]);
    let json = write_assignment(&mop, &a);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v, serde_json::json!({"In": [["o2"], ["o3"]]}));
    assert_eq!(read_assignment(&mop, &json).unwrap(), a);
}

#[test]
fn json_round_trip_random_assignments() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in bundled() {
        let mop = load(&name);
        for _ in 0..100 {
            let a = Assignment::random(&mop, &mut rng);
            let back = read_assignment(&mop, &write_assignment(&mop, &a)).unwrap();
            assert_eq!(back, a, "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn generated_models_round_trip(n in 3usize..7, seed in 0u64..1000) {
        for problem in symloc::instances::Problem::ALL {
            let spec = symloc::instances::InstanceSpec::new(problem, n.max(4), seed);
            let inst = symloc::instances::generate(&spec).unwrap();
            let mop = parse(&inst.text);
            prop_assert_eq!(parse(&format_model(&mop)), mop);
        }
    }
}
