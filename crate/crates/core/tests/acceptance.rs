//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{all_models, bundled, load, naive_optimum, parse};
use symloc::cli;
use symloc::eval::check_model;
use symloc::exact::{initial_model, optimize_exact, Budget, ExactStatus};
use symloc::instances::{generate, InstanceSpec, Problem};
use symloc::neighborhood::build_neighborhood;
use symloc::search::{run_pipeline, SearchConfig, Termination};
use symloc::symmetry::{
    candidate_types, detect, verify_symmetry, Classification, DetectionReport, Policy,
    RejectionReason, VerifyBudget, VerifyMode,
};
use symloc::Mop;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn choose2(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Default detection policy: exhaustive up to 10^6 assignments, else 256
/// samples with seed 0.
fn default_policy(mop: &Mop) -> Policy {
    Policy::auto(mop, 1_000_000, 256, 0)
}

fn instance(spec: &InstanceSpec) -> (Mop, symloc::instances::Expectation) {
    let inst = generate(spec).expect("valid spec");
    (parse(&inst.text), inst.expectation)
}

fn detect_default(mop: &Mop) -> DetectionReport {
    detect(mop, default_policy(mop)).expect("detection")
}

fn label_pair(mop: &Mop, ty: symloc::model::TypeId, a: u32, b: u32) -> (String, String, String) {
    let d = mop.domain(ty);
    (mop.vocabulary.type_name(ty).to_string(), d.label(a), d.label(b))
}

fn all_variant(r: &DetectionReport) -> bool {
    r.symmetries
        .iter()
        .all(|s| matches!(s.classification, Classification::Variant { .. }))
}

fn tsp() -> Outcome {
    for n in 4..=8 {
        let (mop, _) = instance(&InstanceSpec::new(Problem::Tsp, n, 1));
        let r = detect_default(&mop);
        let fams: BTreeSet<String> = r
            .symmetries
            .iter()
            .map(|s| mop.vocabulary.type_name(s.ty).to_string())
            .collect();
        ensure!(fams.len() == 2, "n={n}: families {fams:?}");
        ensure!(all_variant(&r), "n={n}: a swap is not variant");
        ensure!(r.rejected.is_empty(), "n={n}: {} rejected", r.rejected.len());
        let size = build_neighborhood(&r).map_or(0, |x| x.len());
        ensure!(size == 2 * choose2(n), "n={n}: neighborhood {size}");
    }
    Ok("n=4..8: City and Index swaps all variant, 2*C(n,2) generators".into())
}

/// Pairs that involve one of the named constants' elements.
fn pinned_pairs(mop: &Mop, r: &DetectionReport, consts: &[&str]) -> Result<usize, String> {
    let pinned: BTreeSet<String> = consts
        .iter()
        .map(|c| {
            let id = mop.vocabulary.symbol_id(c).unwrap();
            let Some(symloc::model::Table::Function(v)) = &mop.structure.tables[id.0] else {
                unreachable!()
            };
            mop.domain(mop.vocabulary.type_id("City").unwrap()).label(v[0] as u32)
        })
        .collect();
    for s in &r.symmetries {
        let (_, a, b) = label_pair(mop, s.ty, s.a, s.b);
        ensure!(!pinned.contains(&a) && !pinned.contains(&b), "({a}, {b}) survived");
    }
    let mut count = 0;
    for x in &r.rejected {
        let (_, a, b) = label_pair(mop, x.pair.ty, x.pair.a, x.pair.b);
        ensure!(
            pinned.contains(&a) || pinned.contains(&b),
            "({a}, {b}) rejected but not pinned"
        );
        ensure!(
            matches!(x.reason, RejectionReason::PinnedByConstant { .. }),
            "({a}, {b}): {}",
            x.reason
        );
        count += 1;
    }
    Ok(count)
}

fn tsp_alt() -> Outcome {
    for n in 4..=6 {
        for seed in 0..3 {
            let (mop, exp) = instance(&InstanceSpec::new(Problem::TspAlt, n, seed));
            let r = detect_default(&mop);
            let diff = exp.compare(&mop, &r);
            ensure!(diff.is_empty(), "n={n} seed={seed}: {diff:?}");
            ensure!(all_variant(&r), "n={n}: a swap is not variant");
            let following = mop.vocabulary.symbol_id("Following").unwrap();
            ensure!(
                r.symmetries.iter().all(|s| s.sigma == [following]),
                "sigma is not {{Following}}"
            );
            ensure!(r.symmetries.len() == choose2(n - 1), "n={n}: {} survive", r.symmetries.len());
            pinned_pairs(&mop, &r, &["Start"])?;
        }
    }
    Ok("n=4..6: swaps away from Start variant, Start pairs pinned".into())
}

fn shortest_path() -> Outcome {
    for n in 5..=8 {
        for seed in 0..3 {
            let (mop, exp) = instance(&InstanceSpec::new(Problem::ShortestPath, n, seed));
            let r = detect_default(&mop);
            let diff = exp.compare(&mop, &r);
            ensure!(diff.is_empty(), "n={n} seed={seed}: {diff:?}");
            ensure!(all_variant(&r), "n={n}: a swap is not variant");
            ensure!(r.symmetries.len() == choose2(n - 2), "n={n}: {} survive", r.symmetries.len());
            let pinned = pinned_pairs(&mop, &r, &["Start", "End"])?;
            ensure!(pinned == choose2(n) - choose2(n - 2), "n={n}: {pinned} pinned");
        }
    }
    Ok("n=5..8: intermediate swaps variant, Start/End pairs rejected".into())
}

fn max_clique() -> Outcome {
    let mut runs = 0;
    for n in 6..=10 {
        for seed in 0..10 {
            let (mop, _) = instance(&InstanceSpec::new(Problem::MaxClique, n, seed));
            let r = detect_default(&mop);
            ensure!(r.detected_count() == 0, "n={n} seed={seed}: {} detected", r.detected_count());
            runs += 1;
        }
    }
    let (mop, _) = instance(&InstanceSpec::new(Problem::MaxClique, 8, 4));
    ensure!(detect_default(&mop).detected_count() == 0, "n=8 seed=4");
    Ok(format!("{runs} asymmetric graphs, n=6..10 x 10 seeds: nothing detected"))
}

fn check_cnp(mop: &Mop) -> Result<(), String> {
    let r = detect_default(mop);
    ensure!(r.policy == Policy::Exhaustive, "{}: policy {}", mop.name, r.policy);
    let color = mop.vocabulary.type_id("Color").unwrap();
    let k = mop.domain(color).len();
    let invariant: Vec<_> = r
        .objective_invariant()
        .filter(|x| x.pair.ty == color)
        .collect();
    ensure!(invariant.len() == choose2(k), "{}: {} color swaps invariant", mop.name, invariant.len());
    ensure!(
        invariant.iter().all(|x| x.reason
            == RejectionReason::ObjectiveInvariant {
                verdict: Classification::InvariantProved
            }),
        "{}: a color swap is not proved invariant",
        mop.name
    );
    ensure!(r.symmetries.is_empty(), "{}: {} survive", mop.name, r.symmetries.len());
    let p = run_pipeline(mop, &SearchConfig::default(), default_policy(mop)).map_err(|e| e.to_string())?;
    ensure!(
        p.search.termination == Termination::NoNeighborhood,
        "{}: {:?}",
        mop.name,
        p.search.termination
    );
    Ok(())
}

fn cnp() -> Outcome {
    check_cnp(&load("cnp_k3.mop"))?;
    let mut runs = 1;
    for colors in 3..=5 {
        for n in 3..=5 {
            for seed in 0..3 {
                let mut spec = InstanceSpec::new(Problem::Cnp, n, seed);
                spec.colors = colors;
                let (mop, exp) = instance(&spec);
                if !mop.assignment_space_size().fits(1_000_000) {
                    continue;
                }
                let r = detect_default(&mop);
                let diff = exp.compare(&mop, &r);
                ensure!(diff.is_empty(), "n={n} colors={colors}: {diff:?}");
                check_cnp(&mop)?;
                runs += 1;
            }
        }
    }
    Ok(format!("K3 and {} random graphs, 3..5 colors: color swaps invariant, no neighborhood", runs - 1))
}

fn knapsack() -> Outcome {
    let mut runs = 0;
    for n in 4..=10 {
        for seed in 0..3 {
            for (eq, ident) in [(1, 0), (2, 0), (1, 1), (0, 2)] {
                if 2 * (eq + ident) > n {
                    continue;
                }
                let mut spec = InstanceSpec::new(Problem::Knapsack, n, seed);
                spec.equal_volume_pairs = eq;
                spec.identical_pairs = ident;
                let (mop, exp) = instance(&spec);
                let r = detect_default(&mop);
                let diff = exp.compare(&mop, &r);
                ensure!(diff.is_empty(), "n={n} seed={seed} eq={eq} id={ident}: {diff:?}");
                ensure!(r.symmetries.len() == eq && all_variant(&r), "n={n}: surviving {}", r.symmetries.len());
                ensure!(r.objective_invariant().count() == ident, "n={n}: invariant count");
                runs += 1;
            }
        }
    }
    let mut spec = InstanceSpec::new(Problem::Knapsack, 5, 9);
    spec.equal_volume_pairs = 2;
    let (mop, _) = instance(&spec);
    ensure!(detect_default(&mop).detected_count() >= 2, "objects=5 pairs=2 seed=9");
    Ok(format!("{runs} instances: equal-volume pairs variant, identical pairs invariant, rest rejected"))
}

fn assignment() -> Outcome {
    for n in 2..=5 {
        for seed in 0..3 {
            let (mop, exp) = instance(&InstanceSpec::new(Problem::Assignment, n, seed));
            let r = detect_default(&mop);
            let diff = exp.compare(&mop, &r);
            ensure!(diff.is_empty(), "n={n} seed={seed}: {diff:?}");
            ensure!(all_variant(&r) && r.rejected.is_empty(), "n={n}: not all variant");
            ensure!(r.symmetries.len() == 2 * choose2(n), "n={n}: {} swaps", r.symmetries.len());
        }
    }
    Ok("2x2..5x5: agent and task swaps variant".into())
}

fn small_bundled() -> Vec<(String, Mop)> {
    bundled()
        .into_iter()
        .map(|n| {
            let m = load(&n);
            (n, m)
        })
        .filter(|(_, m)| m.assignment_space_size().fits(100_000))
        .collect()
}

fn soundness() -> Outcome {
    let mut checked = 0;
    for (name, mop) in small_bundled() {
        let r = detect_default(&mop);
        for s in r.detected(&mop) {
            let v = verify_symmetry(&mop, &s, &VerifyBudget::default()).map_err(|e| e.to_string())?;
            ensure!(v.mode == VerifyMode::Exhaustive, "{name}: not exhaustive");
            ensure!(v.passed, "{name}: {} fails", s.describe(&mop));
            checked += 1;
        }
    }
    Ok(format!("{checked} detected symmetries verified exhaustively"))
}

fn closure() -> Outcome {
    let mut neighbors = 0;
    for name in bundled() {
        let mop = load(&name);
        let Some(n) = build_neighborhood(&detect_default(&mop)) else { continue };
        for seed in 0..50 {
            let init = initial_model(&mop, &Budget::default(), seed).map_err(|e| e.to_string())?;
            ensure!(init.status == ExactStatus::Sat, "{name}: no model for seed {seed}");
            let a = init.assignment.unwrap();
            for (m, b) in n.neighbors(&mop, &a) {
                ensure!(check_model(&mop, &b).unwrap(), "{name} seed {seed}: {} leaves the models", m.description);
                neighbors += 1;
            }
        }
    }
    Ok(format!("{neighbors} neighbors of seeded models are models"))
}

fn orbit() -> Outcome {
    let mop = load("tsp4.mop");
    let models: BTreeSet<_> = all_models(&mop).into_iter().collect();
    ensure!(models.len() == 24, "{} models", models.len());
    let n = build_neighborhood(&detect_default(&mop)).ok_or("no neighborhood")?;
    for a in &models {
        let o = n.orbit_closure(&mop, a, 1000).map_err(|e| e.to_string())?;
        ensure!(o == models, "orbit of size {}", o.len());
    }
    Ok("every tsp4 orbit is all 24 tours".into())
}

fn exact_oracle() -> Outcome {
    let mut count = 0;
    for (name, mop) in small_bundled() {
        let r = optimize_exact(&mop, &Budget::default()).map_err(|e| e.to_string())?;
        let want = naive_optimum(&mop).map(|(v, _)| v);
        ensure!(r.objective == want, "{name}: {:?} vs {:?}", r.objective, want);
        count += 1;
    }
    for (name, want) in [("knapsack3.mop", 16), ("assignment2.mop", 2), ("cnp_k3.mop", 3)] {
        let r = optimize_exact(&load(name), &Budget::default()).map_err(|e| e.to_string())?;
        ensure!(r.objective == Some(want), "{name}: {:?}", r.objective);
    }
    Ok(format!("{count} instances agree with enumeration; 16 / 2 / 3"))
}

fn complexity() -> Outcome {
    for name in bundled() {
        let mop = load(&name);
        let r = detect(&mop, Policy::Syntactic).map_err(|e| e.to_string())?;
        let want: usize = candidate_types(&mop).iter().map(|t| choose2(mop.domain(*t).len())).sum();
        ensure!(r.candidates_checked == want, "{name}: {} vs {want}", r.candidates_checked);
    }
    let (mop, _) = instance(&InstanceSpec::new(Problem::Tsp, 200, 0));
    let t = Instant::now();
    let r = detect(&mop, Policy::Syntactic).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    ensure!(r.candidates_checked == 2 * choose2(200), "tsp200: {}", r.candidates_checked);
    ensure!(took < Duration::from_secs(10), "tsp200 took {took:?}");
    Ok(format!("candidate counts match; tsp200 syntactic detection in {:.2}s", took.as_secs_f64()))
}

fn cli_json(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["symloc"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut out, &mut err, false);
    ensure!(code == cli::EXIT_OK, "{args:?}: exit {code}: {}", String::from_utf8_lossy(&err));
    Ok(String::from_utf8(out).unwrap())
}

fn determinism() -> Outcome {
    let path = |n: &str| common::data_path(n).to_str().unwrap().to_string();
    let (tsp5, knap, cnp4) = (path("tsp5.mop"), path("knapsack5.mop"), path("cnp4.mop"));
    let runs: Vec<Vec<&str>> = vec![
        vec!["detect", &tsp5, "--json"],
        vec!["detect", &tsp5, "--json", "--policy", "sample", "--seed", "11"],
        vec!["solve", &tsp5, "--json", "--strategy", "first", "--seed", "5", "--restarts", "3"],
        vec!["solve", &tsp5, "--json", "--strategy", "annealing", "--seed", "2"],
        vec!["solve", &knap, "--json", "--method", "exact"],
        vec!["verify", &knap, "--json", "--seed", "4"],
        vec!["verify", &cnp4, "--json"],
    ];
    for args in &runs {
        let a = cli_json(args)?;
        let b = cli_json(args)?;
        ensure!(a == b, "{args:?} differs between runs");
    }
    Ok(format!("{} commands produce byte-identical JSON", runs.len()))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("TSP index and city swaps", tsp),
        ("TSP-alt city swaps", tsp_alt),
        ("shortest path endpoints pinned", shortest_path),
        ("max clique asymmetric graphs", max_clique),
        ("CNP color swaps invariant", cnp),
        ("knapsack forced pairs", knapsack),
        ("assignment swaps", assignment),
        ("soundness", soundness),
        ("neighborhood closure", closure),
        ("tsp4 orbit", orbit),
        ("exact oracle agreement", exact_oracle),
        ("detection complexity", complexity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
