//! Seeded generators for the benchmark problems, with the detection outcome
//! each instance is expected to produce.
//!
//! Expectations are worked out from the generator parameters (which pairs
//! of elements are pinned, which graph nodes are twins, which objects share
//! a volume), never by running detection. [`Expectation::compare`] then
//! checks a [`DetectionReport`] against them.

use std::fmt::Write;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::Mop;
use crate::symmetry::{Classification, DetectionReport, RejectionReason};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Tsp,
    TspAlt,
    ShortestPath,
    MaxClique,
    Cnp,
    Knapsack,
    Assignment,
}

impl Problem {
    pub const ALL: [Problem; 7] = [
        Problem::Tsp,
        Problem::TspAlt,
        Problem::ShortestPath,
        Problem::MaxClique,
        Problem::Cnp,
        Problem::Knapsack,
        Problem::Assignment,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Tsp => "tsp",
            Problem::TspAlt => "tsp-alt",
            Problem::ShortestPath => "shortest-path",
            Problem::MaxClique => "max-clique",
            Problem::Cnp => "cnp",
            Problem::Knapsack => "knapsack",
            Problem::Assignment => "assignment",
        }
    }
}

impl FromStr for Problem {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Problem::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| InstanceError::UnknownProblem(s.to_string()))
    }
}

/// Graph shape for the graph problems.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GraphKind {
    /// Random graph without twin nodes, so no node swap is an automorphism.
    #[default]
    Asymmetric,
    /// Random twin-free graph plus one node cloned from another.
    WithTwins,
    Complete,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub problem: Problem,
    /// Cities, nodes, objects or agents depending on the problem.
    pub size: usize,
    /// Colors for `cnp`.
    pub colors: usize,
    /// Knapsack object pairs sharing a volume but not a value.
    pub equal_volume_pairs: usize,
    /// Knapsack object pairs sharing both volume and value.
    pub identical_pairs: usize,
    pub graph: GraphKind,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(problem: Problem, size: usize, seed: u64) -> Self {
        InstanceSpec {
            problem,
            size,
            colors: 3,
            equal_volume_pairs: 0,
            identical_pairs: 0,
            graph: GraphKind::Asymmetric,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        let (lo, hi) = match self.problem {
            Problem::Tsp => (3, 200),
            Problem::TspAlt | Problem::ShortestPath => (3, 12),
            Problem::MaxClique => (4, 16),
            Problem::Cnp => (2, 12),
            Problem::Knapsack => (2, 16),
            Problem::Assignment => (2, 8),
        };
        if self.size < lo || self.size > hi {
            return Err(InstanceError::InvalidParams(format!(
                "{} size must be in {lo}..={hi}, got {}",
                self.problem.as_str(),
                self.size
            )));
        }
        if self.problem == Problem::Cnp && !(2..=6).contains(&self.colors) {
            return Err(InstanceError::InvalidParams(format!(
                "colors must be in 2..=6, got {}",
                self.colors
            )));
        }
        if self.problem == Problem::Cnp && self.graph == GraphKind::Complete && self.colors < self.size {
            return Err(InstanceError::InvalidParams(
                "a complete graph needs at least as many colors as nodes".into(),
            ));
        }
        if self.problem == Problem::Knapsack
            && 2 * (self.equal_volume_pairs + self.identical_pairs) > self.size
        {
            return Err(InstanceError::InvalidParams(
                "more forced pairs than objects allow".into(),
            ));
        }
        if self.problem == Problem::MaxClique && self.graph == GraphKind::WithTwins && self.size < 5 {
            return Err(InstanceError::InvalidParams(
                "twin graphs need at least 5 nodes".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no graph without twin nodes found after {0} attempts")]
    GraphAttempts(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Detected and objective-variant: becomes a neighborhood move.
    Variant,
    /// Detected but objective-invariant.
    Invariant,
    /// Fails the structural symmetry test.
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairOverride {
    pub a: String,
    pub b: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeExpectation {
    #[serde(rename = "type")]
    pub type_name: String,
    pub default: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<PairOverride>,
}

/// Expected verdict for every candidate pair. Types not listed must not be
/// candidate types.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub problem: Problem,
    pub types: Vec<TypeExpectation>,
}

impl Expectation {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    fn verdict(&self, ty: &str, a: &str, b: &str) -> Option<Verdict> {
        let t = self.types.iter().find(|t| t.type_name == ty)?;
        Some(
            t.overrides
                .iter()
                .find(|o| (o.a == a && o.b == b) || (o.a == b && o.b == a))
                .map_or(t.default, |o| o.verdict),
        )
    }

    /// Differences between the report and the expectation, one line each.
    /// Empty means exact agreement.
    pub fn compare(&self, mop: &Mop, report: &DetectionReport) -> Vec<String> {
        let mut out = Vec::new();
        let got_types: Vec<&str> = report
            .candidate_types
            .iter()
            .map(|t| mop.vocabulary.type_name(*t))
            .collect();
        let want_types: Vec<&str> = self.types.iter().map(|t| t.type_name.as_str()).collect();
        if got_types != want_types {
            out.push(format!("candidate types {got_types:?}, expected {want_types:?}"));
        }
        let mut actual = Vec::new();
        for s in &report.symmetries {
            let v = match s.classification {
                Classification::Variant { .. } => Ok(Verdict::Variant),
                _ => Err(s.classification.label()),
            };
            actual.push((s.pair(), v));
        }
        for r in &report.rejected {
            let v = match r.reason {
                RejectionReason::ObjectiveInvariant { .. } => Verdict::Invariant,
                _ => Verdict::Rejected,
            };
            actual.push((r.pair, Ok(v)));
        }
        actual.sort_by_key(|(p, _)| *p);
        for (p, v) in actual {
            let ty = mop.vocabulary.type_name(p.ty);
            let d = mop.domain(p.ty);
            let (a, b) = (d.label(p.a), d.label(p.b));
            let want = self.verdict(ty, &a, &b);
            match (v, want) {
                (Ok(got), Some(w)) if got == w => {}
                (got, w) => out.push(format!("{ty} ({a}, {b}): got {got:?}, expected {w:?}")),
            }
        }
        out
    }
}

/// A generated model and its expected detection outcome.
#[derive(Clone, Debug)]
pub struct Instance {
    pub text: String,
    pub expectation: Expectation,
}

pub fn generate(spec: &InstanceSpec) -> Result<Instance, InstanceError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.problem {
        Problem::Tsp => Ok(tsp(spec, &mut rng)),
        Problem::TspAlt => Ok(tsp_alt(spec, &mut rng)),
        Problem::ShortestPath => Ok(shortest_path(spec, &mut rng)),
        Problem::MaxClique => max_clique(spec, &mut rng),
        Problem::Cnp => cnp(spec, &mut rng),
        Problem::Knapsack => Ok(knapsack(spec, &mut rng)),
        Problem::Assignment => Ok(assignment(spec, &mut rng)),
    }
}

/// The outcome every instance of `problem` with default parameters shares,
/// ignoring instance-specific overrides.
pub fn expected_detection(problem: Problem) -> Vec<(&'static str, Verdict)> {
    match problem {
        Problem::Tsp => vec![("City", Verdict::Variant), ("Index", Verdict::Variant)],
        Problem::TspAlt | Problem::ShortestPath => vec![("City", Verdict::Variant)],
        Problem::MaxClique => vec![("Node", Verdict::Rejected)],
        Problem::Cnp => vec![("Node", Verdict::Rejected), ("Color", Verdict::Invariant)],
        Problem::Knapsack => vec![("Object", Verdict::Rejected)],
        Problem::Assignment => vec![("Agent", Verdict::Variant), ("Task", Verdict::Variant)],
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// `n` distinct values from `1..=hi`, in random order.
fn distinct(rng: &mut ChaCha8Rng, hi: usize, n: usize) -> Vec<i64> {
    sample(rng, hi, n).into_iter().map(|v| v as i64 + 1).collect()
}

/// Off-diagonal distances all distinct and asymmetric; zero diagonal.
fn distance_table(rng: &mut ChaCha8Rng, cities: &[String]) -> String {
    let n = cities.len();
    let values = distinct(rng, (n * n).max(100) * 10, n * (n - 1));
    let mut it = values.into_iter();
    let mut entries = Vec::new();
    for (i, a) in cities.iter().enumerate() {
        for (j, b) in cities.iter().enumerate() {
            let d = if i == j { 0 } else { it.next().expect("enough values") };
            entries.push(format!("({a}, {b}) -> {d}"));
        }
    }
    format!("  Distance = {{\n    {}\n  }};\n", entries.join(",\n    "))
}

fn type_decl(name: &str, elems: &[String]) -> String {
    format!("  type {name} = {{{}}};\n", elems.join(", "))
}

fn all(ty: &str, v: Verdict) -> TypeExpectation {
    TypeExpectation {
        type_name: ty.to_string(),
        default: v,
        overrides: Vec::new(),
    }
}

fn tsp(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Instance {
    let n = spec.size;
    let cities = labels("c", n);
    let mut t = String::new();
    writeln!(t, "// Travelling salesman, {n} cities, seed {}.", spec.seed).unwrap();
    writeln!(t, "mop tsp{n} {{").unwrap();
    t += &type_decl("City", &cities);
    writeln!(t, "  type Index = 0..{};", n - 1).unwrap();
    t += "  func Distance(City, City) -> int;\n";
    t += "  func Next(Index) -> Index;\n";
    t += "  var func Map(Index) -> City;\n";
    t += "  constraint forall x in Index: forall y in Index: x != y => Map(x) != Map(y);\n";
    t += "  minimize sum{Distance(Map(z), Map(Next(z))) | z in Index};\n";
    t += &distance_table(rng, &cities);
    let next: Vec<String> = (0..n).map(|i| format!("({i}) -> {}", (i + 1) % n)).collect();
    writeln!(t, "  Next = {{{}}};", next.join(", ")).unwrap();
    t += "}\n";
    Instance {
        text: t,
        expectation: Expectation {
            problem: Problem::Tsp,
            types: vec![all("City", Verdict::Variant), all("Index", Verdict::Variant)],
        },
    }
}

/// Overrides rejecting every pair that involves one of `pinned`.
fn pinned_overrides(elems: &[String], pinned: &[usize]) -> Vec<PairOverride> {
    let mut out = Vec::new();
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            if pinned.contains(&i) || pinned.contains(&j) {
                out.push(PairOverride {
                    a: elems[i].clone(),
                    b: elems[j].clone(),
                    verdict: Verdict::Rejected,
                });
            }
        }
    }
    out
}

fn tsp_alt(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Instance {
    let n = spec.size;
    let cities = labels("c", n);
    let mut t = String::new();
    writeln!(t, "// Travelling salesman as a successor relation, {n} cities, seed {}.", spec.seed).unwrap();
    writeln!(t, "mop tsp_alt{n} {{").unwrap();
    t += &type_decl("City", &cities);
    t += "  func Distance(City, City) -> int;\n";
    t += "  const Start() -> City;\n";
    t += "  var pred Following(City, City);\n";
    t += "  constraint forall x in City: exists1 y in City: Following(x, y);\n";
    t += "  constraint forall y in City: exists1 x in City: Following(x, y);\n";
    t += "  constraint reachable(Start, Following, City);\n";
    t += "  minimize sum{Distance(x, y) | x in City, y in City, Following(x, y)};\n";
    t += &distance_table(rng, &cities);
    writeln!(t, "  Start = {{() -> {}}};", cities[0]).unwrap();
    t += "}\n";
    Instance {
        text: t,
        expectation: Expectation {
            problem: Problem::TspAlt,
            types: vec![TypeExpectation {
                type_name: "City".into(),
                default: Verdict::Variant,
                overrides: pinned_overrides(&cities, &[0]),
            }],
        },
    }
}

fn shortest_path(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Instance {
    let n = spec.size;
    let cities = labels("c", n);
    let mut t = String::new();
    writeln!(t, "// Shortest path from c1 to c{n}, seed {}. Nodes off the path hang", spec.seed).unwrap();
    t += "// below End, whose outgoing edges do not count.\n";
    writeln!(t, "mop shortest_path{n} {{").unwrap();
    t += &type_decl("City", &cities);
    t += "  func Distance(City, City) -> int;\n";
    t += "  const Start() -> City;\n";
    t += "  const End() -> City;\n";
    t += "  var pred Following(City, City);\n";
    t += "  constraint forall x in City: !Following(x, Start);\n";
    t += "  constraint forall y in City: y != Start => exists1 x in City: Following(x, y);\n";
    t += "  constraint forall x in City: forall y in City: forall z in City: \
          x != End & Following(x, y) & Following(x, z) => y = z;\n";
    t += "  constraint forall x in City: forall y in City: Following(End, x) => !Following(x, y);\n";
    t += "  constraint reachable(Start, Following, City);\n";
    t += "  minimize sum{Distance(x, y) | x in City, y in City, Following(x, y) & x != End};\n";
    t += &distance_table(rng, &cities);
    writeln!(t, "  Start = {{() -> {}}};", cities[0]).unwrap();
    writeln!(t, "  End = {{() -> {}}};", cities[n - 1]).unwrap();
    t += "}\n";
    Instance {
        text: t,
        expectation: Expectation {
            problem: Problem::ShortestPath,
            types: vec![TypeExpectation {
                type_name: "City".into(),
                default: Verdict::Variant,
                overrides: pinned_overrides(&cities, &[0, n - 1]),
            }],
        },
    }
}

type Graph = Vec<Vec<bool>>;

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut g = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let e = rng.gen_bool(0.5);
            g[i][j] = e;
            g[j][i] = e;
        }
    }
    g
}

/// Swapping `a` and `b` is an automorphism iff their neighborhoods agree
/// outside `{a, b}`.
fn twins(g: &Graph, a: usize, b: usize) -> bool {
    (0..g.len())
        .filter(|&x| x != a && x != b)
        .all(|x| g[a][x] == g[b][x])
}

fn twin_free(g: &Graph) -> bool {
    let n = g.len();
    (0..n).all(|a| (a + 1..n).all(|b| !twins(g, a, b)))
}

const GRAPH_ATTEMPTS: usize = 10_000;

fn graph(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<Graph, InstanceError> {
    let n = spec.size;
    match spec.graph {
        GraphKind::Complete => {
            let mut g = vec![vec![true; n]; n];
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = false;
            }
            Ok(g)
        }
        GraphKind::Asymmetric => (0..GRAPH_ATTEMPTS)
            .map(|_| random_graph(rng, n))
            .find(twin_free)
            .ok_or(InstanceError::GraphAttempts(GRAPH_ATTEMPTS)),
        GraphKind::WithTwins => {
            let base = (0..GRAPH_ATTEMPTS)
                .map(|_| random_graph(rng, n - 1))
                .find(twin_free)
                .ok_or(InstanceError::GraphAttempts(GRAPH_ATTEMPTS))?;
            let mut g = vec![vec![false; n]; n];
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    g[i][j] = base[i][j];
                }
            }
            // node n-1 copies node n-2
            for x in 0..n - 2 {
                g[n - 1][x] = base[n - 2][x];
                g[x][n - 1] = base[n - 2][x];
            }
            let e = rng.gen_bool(0.5);
            g[n - 1][n - 2] = e;
            g[n - 2][n - 1] = e;
            Ok(g)
        }
    }
}

fn edge_table(g: &Graph, nodes: &[String]) -> String {
    let mut edges = Vec::new();
    for (i, row) in g.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if *e {
                edges.push(format!("({}, {})", nodes[i], nodes[j]));
            }
        }
    }
    format!("  Edge = {{{}}};\n", edges.join(", "))
}

/// Twin pairs get `twin`, all other pairs `Rejected`.
fn graph_expectation(g: &Graph, nodes: &[String], twin: Verdict) -> TypeExpectation {
    let n = nodes.len();
    let mut overrides = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if twins(g, a, b) {
                overrides.push(PairOverride {
                    a: nodes[a].clone(),
                    b: nodes[b].clone(),
                    verdict: twin,
                });
            }
        }
    }
    TypeExpectation {
        type_name: "Node".into(),
        default: Verdict::Rejected,
        overrides,
    }
}

fn max_clique(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<Instance, InstanceError> {
    let n = spec.size;
    let nodes = labels("v", n);
    let g = graph(spec, rng)?;
    let mut t = String::new();
    writeln!(t, "// Maximum clique, {n} nodes, seed {}.", spec.seed).unwrap();
    let suffix = match spec.graph {
        GraphKind::Asymmetric => "",
        GraphKind::WithTwins => "_twins",
        GraphKind::Complete => "_complete",
    };
    writeln!(t, "mop max_clique{n}{suffix} {{").unwrap();
    t += &type_decl("Node", &nodes);
    t += "  pred Edge(Node, Node);\n";
    t += "  var pred Clique(Node);\n";
    t += "  constraint forall x in Node: forall y in Node: Clique(x) & Clique(y) & x != y => Edge(x, y);\n";
    t += "  maximize count{x in Node | Clique(x)};\n";
    t += &edge_table(&g, &nodes);
    t += "}\n";
    // a node swap keeps the clique size, so automorphic swaps are invariant
    Ok(Instance {
        text: t,
        expectation: Expectation {
            problem: Problem::MaxClique,
            types: vec![graph_expectation(&g, &nodes, Verdict::Invariant)],
        },
    })
}

/// Random graph that keeps a hidden coloring proper, so the instance is
/// satisfiable with `colors` colors.
fn colorable_graph(rng: &mut ChaCha8Rng, n: usize, colors: usize) -> Graph {
    let hidden: Vec<usize> = (0..n).map(|_| rng.gen_range(0..colors)).collect();
    let mut g = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let e = hidden[i] != hidden[j] && rng.gen_bool(0.5);
            g[i][j] = e;
            g[j][i] = e;
        }
    }
    g
}

fn cnp(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Result<Instance, InstanceError> {
    let n = spec.size;
    let nodes = labels("v", n);
    let colors = labels("k", spec.colors);
    let g = if spec.graph == GraphKind::Complete {
        graph(spec, rng)?
    } else {
        colorable_graph(rng, n, spec.colors)
    };
    let mut t = String::new();
    writeln!(t, "// Graph coloring, {n} nodes, {} colors, seed {}.", spec.colors, spec.seed).unwrap();
    writeln!(t, "mop cnp{n}_{} {{", spec.colors).unwrap();
    t += &type_decl("Node", &nodes);
    t += &type_decl("Color", &colors);
    t += "  pred Edge(Node, Node);\n";
    t += "  var func Coloring(Node) -> Color;\n";
    t += "  constraint forall x in Node: forall y in Node: Edge(x, y) => Coloring(x) != Coloring(y);\n";
    t += "  minimize count{z in Color | exists x in Node: Coloring(x) = z};\n";
    t += &edge_table(&g, &nodes);
    t += "}\n";
    Ok(Instance {
        text: t,
        expectation: Expectation {
            problem: Problem::Cnp,
            types: vec![
                graph_expectation(&g, &nodes, Verdict::Invariant),
                all("Color", Verdict::Invariant),
            ],
        },
    })
}

fn knapsack(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Instance {
    let n = spec.size;
    let objects = labels("o", n);
    let forced = spec.equal_volume_pairs + spec.identical_pairs;
    // one volume per forced pair, one per remaining object, all distinct
    let volumes_pool = distinct(rng, 50, n - forced);
    let values_pool = distinct(rng, 100, n);
    let mut volume = vec![0i64; n];
    let mut value = vec![0i64; n];
    let mut overrides = Vec::new();
    for p in 0..forced {
        let (a, b) = (2 * p, 2 * p + 1);
        volume[a] = volumes_pool[p];
        volume[b] = volumes_pool[p];
        value[a] = values_pool[a];
        value[b] = if p < spec.equal_volume_pairs {
            values_pool[b]
        } else {
            values_pool[a]
        };
        overrides.push(PairOverride {
            a: objects[a].clone(),
            b: objects[b].clone(),
            verdict: if p < spec.equal_volume_pairs {
                Verdict::Variant
            } else {
                Verdict::Invariant
            },
        });
    }
    for (k, i) in (2 * forced..n).enumerate() {
        volume[i] = volumes_pool[forced + k];
        value[i] = values_pool[i];
    }
    let capacity = volume.iter().sum::<i64>() / 2;
    let mut t = String::new();
    writeln!(t, "// 0/1 knapsack, {n} objects, seed {}.", spec.seed).unwrap();
    writeln!(t, "mop knapsack{n} {{").unwrap();
    t += &type_decl("Object", &objects);
    t += "  func Volume(Object) -> int;\n";
    t += "  func Value(Object) -> int;\n";
    t += "  const Capacity() -> int;\n";
    t += "  var pred In(Object);\n";
    t += "  constraint sum{Volume(x) | x in Object, In(x)} <= Capacity;\n";
    t += "  maximize sum{Value(x) | x in Object, In(x)};\n";
    let table = |f: &[i64]| -> String {
        let e: Vec<String> = objects
            .iter()
            .zip(f)
            .map(|(o, v)| format!("({o}) -> {v}"))
            .collect();
        e.join(", ")
    };
    writeln!(t, "  Volume = {{{}}};", table(&volume)).unwrap();
    writeln!(t, "  Value = {{{}}};", table(&value)).unwrap();
    writeln!(t, "  Capacity = {{() -> {capacity}}};").unwrap();
    t += "}\n";
    Instance {
        text: t,
        expectation: Expectation {
            problem: Problem::Knapsack,
            types: vec![TypeExpectation {
                type_name: "Object".into(),
                default: Verdict::Rejected,
                overrides,
            }],
        },
    }
}

fn assignment(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Instance {
    let n = spec.size;
    let agents = labels("a", n);
    let tasks = labels("t", n);
    let costs = distinct(rng, 100.max(n * n * 4), n * n);
    let mut t = String::new();
    writeln!(t, "// Assignment, {n} agents and tasks, seed {}.", spec.seed).unwrap();
    writeln!(t, "mop assignment{n} {{").unwrap();
    t += &type_decl("Agent", &agents);
    t += &type_decl("Task", &tasks);
    t += "  func Cost(Agent, Task) -> int;\n";
    t += "  var func Assign(Agent) -> Task;\n";
    t += "  constraint forall x in Agent: forall y in Agent: x != y => Assign(x) != Assign(y);\n";
    t += "  minimize sum{Cost(x, Assign(x)) | x in Agent};\n";
    let mut entries = Vec::new();
    for (i, a) in agents.iter().enumerate() {
        for (j, k) in tasks.iter().enumerate() {
            entries.push(format!("({a}, {k}) -> {}", costs[i * n + j]));
        }
    }
    writeln!(t, "  Cost = {{\n    {}\n  }};", entries.join(",\n    ")).unwrap();
    t += "}\n";
    Instance {
        text: t,
        expectation: Expectation {
            problem: Problem::Assignment,
            types: vec![all("Agent", Verdict::Variant), all("Task", Verdict::Variant)],
        },
    }
}
