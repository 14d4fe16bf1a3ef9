//! The `symloc` command line.
//!
//! Exit codes: 0 ok or sat, 1 input error, 2 unsat, 3 budget exhausted,
//! 4 soundness violation.

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::exact::{optimize_exact, Budget, ExactStatus};
use crate::instances::{generate, GraphKind, InstanceSpec, Problem};
use crate::model::{Mop, Sense, DEFAULT_SPACE_BOUND};
use crate::parser::{format_model, parse_model_file, write_assignment, ModelFileError};
use crate::report::{
    CliReport, DetectionJson, ExactJson, OracleJson, SearchJson, SymmetryCheckJson, Timings,
    VerificationJson,
};
use crate::search::{run_pipeline, SearchConfig, SearchError, Strategy, Termination};
use crate::symmetry::{
    detect, detect_with, verify_symmetry, DetectOptions, DetectionReport, Policy, VerifyBudget,
    DEFAULT_SAMPLES,
};
use crate::validate::validate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNSAT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_UNSOUND: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "symloc",
    version,
    about = "Detect domain-element-swap symmetries in first-order optimization models and use them as local search moves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a model.
    Parse {
        file: PathBuf,
        /// Print the model in canonical form.
        #[arg(long)]
        print: bool,
    },
    /// Detect symmetries and classify their effect on the objective.
    Detect {
        file: PathBuf,
        #[command(flatten)]
        policy: PolicyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve with the symmetry pipeline or the exact solver.
    Solve(SolveArgs),
    /// Check every detected symmetry semantically and compare the pipeline
    /// against the exact optimum.
    Verify {
        file: PathBuf,
        /// Largest assignment space checked exhaustively; larger spaces are
        /// sampled.
        #[arg(long, default_value_t = 100_000)]
        budget: u128,
        #[arg(long, default_value_t = 1_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Accept every candidate pair without the structural test.
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generate a benchmark instance.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyKind {
    /// Exhaustive when the assignment space is at most 10^6, else sample.
    Auto,
    Syntactic,
    Exhaustive,
    Sample,
}

#[derive(Args, Debug, Clone)]
pub struct PolicyArgs {
    /// How objective variance is decided.
    #[arg(long, value_enum, default_value_t = PolicyKind::Auto)]
    pub policy: PolicyKind,
    /// Random assignments for the sample policy.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl PolicyArgs {
    fn resolve(&self, mop: &Mop) -> Policy {
        match self.policy {
            PolicyKind::Auto => Policy::auto(mop, DEFAULT_SPACE_BOUND, self.samples, self.seed),
            PolicyKind::Syntactic => Policy::Syntactic,
            PolicyKind::Exhaustive => Policy::Exhaustive,
            PolicyKind::Sample => Policy::Sample {
                n: self.samples,
                seed: self.seed,
            },
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Print a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
    /// Include wall-clock timings in the JSON report.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Local,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Best,
    First,
    Annealing,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Local)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = StrategyArg::Best)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 1_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_iters: u64,
    #[arg(long, default_value_t = 0)]
    pub restarts: usize,
    /// Consecutive equal-objective moves allowed.
    #[arg(long, default_value_t = 0)]
    pub sideways: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Node budget of the exact solver.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_nodes: u64,
    #[arg(long, default_value_t = 10.0)]
    pub temperature: f64,
    #[arg(long, default_value_t = 0.95)]
    pub cooling: f64,
    /// Variance policy for detection (local method only).
    #[arg(long, value_enum, default_value_t = PolicyKind::Auto)]
    pub policy: PolicyKind,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphArg {
    Asymmetric,
    Twins,
    Complete,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_parser = parse_problem)]
    pub problem: Problem,
    /// Number of cities, nodes, objects or agents.
    #[arg(long, short = 'n', visible_aliases = ["nodes", "objects", "agents", "cities"])]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub colors: usize,
    #[arg(long, default_value_t = 0)]
    pub equal_volume_pairs: usize,
    #[arg(long, default_value_t = 0)]
    pub identical_pairs: usize,
    #[arg(long, value_enum, default_value_t = GraphArg::Asymmetric)]
    pub graph: GraphArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
    /// Also write the expected detection outcome as JSON.
    #[arg(long)]
    pub expect: Option<PathBuf>,
}

fn parse_problem(s: &str) -> Result<Problem, String> {
    s.parse::<Problem>().map_err(|e| e.to_string())
}

/// Whether styled output is wanted on standard output.
pub fn color_enabled() -> bool {
    std::env::var("SYMLOC_COLOR").map_or(true, |v| v != "0") && std::io::stdout().is_terminal()
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    color: bool,
    argv: Vec<String>,
}

impl Ctx<'_> {
    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn load(&mut self, path: &Path) -> Result<Mop, i32> {
        match parse_model_file(path) {
            Ok(mop) => {
                let v = validate(&mop);
                if v.is_ok() {
                    Ok(mop)
                } else {
                    let _ = write!(self.err, "{}: {v}", path.display());
                    Err(EXIT_INPUT)
                }
            }
            Err(ModelFileError::Parse(diags)) => {
                for d in diags {
                    let mut d = d;
                    d.span.file = path.display().to_string();
                    let _ = writeln!(self.err, "{d}");
                }
                Err(EXIT_INPUT)
            }
            Err(e) => {
                let _ = writeln!(self.err, "error: {e}");
                Err(EXIT_INPUT)
            }
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let argv = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut ctx = Ctx {
        out,
        err,
        color,
        argv,
    };
    let result = match cli.command {
        Command::Parse { file, print } => cmd_parse(&mut ctx, &file, print),
        Command::Detect {
            file,
            policy,
            output,
        } => cmd_detect(&mut ctx, &file, &policy, &output),
        Command::Solve(args) => cmd_solve(&mut ctx, &args),
        Command::Verify {
            file,
            budget,
            samples,
            seed,
            inject_fault,
            output,
        } => {
            let b = VerifyBudget {
                max_assignments: budget,
                samples,
                seed,
            };
            cmd_verify(&mut ctx, &file, &b, inject_fault, &output)
        }
        Command::Gen(args) => cmd_gen(&mut ctx, &args),
    };
    match result {
        Ok(code) | Err(code) => code,
    }
}

fn cmd_parse(ctx: &mut Ctx, file: &Path, print: bool) -> Result<i32, i32> {
    let mop = ctx.load(file)?;
    if print {
        let _ = write!(ctx.out, "{}", format_model(&mop));
    } else {
        let _ = writeln!(
            ctx.out,
            "{} ok: {} types, {} symbols, {} constraints, assignment space {}",
            mop.name,
            mop.vocabulary.types.len(),
            mop.vocabulary.symbols.len(),
            mop.theory.len(),
            mop.assignment_space_size()
        );
    }
    Ok(EXIT_OK)
}

fn eval_failure(ctx: &mut Ctx, e: impl std::fmt::Display) -> i32 {
    let _ = writeln!(ctx.err, "error: {e}");
    EXIT_INPUT
}

fn print_detection(ctx: &mut Ctx, mop: &Mop, r: &DetectionReport) {
    let types: Vec<&str> = r
        .candidate_types
        .iter()
        .map(|t| mop.vocabulary.type_name(*t))
        .collect();
    let mut lines = vec![
        format!("model {}", mop.name),
        format!(
            "policy {}, {} candidate pairs over [{}]",
            r.policy,
            r.candidates_checked,
            types.join(", ")
        ),
        format!(
            "detected {}, surviving {}, rejected {}",
            r.detected_count(),
            r.symmetries.len(),
            r.rejected.len()
        ),
    ];
    for s in &r.symmetries {
        lines.push(format!(
            "  {} {:<8} {} {}",
            ctx.paint("32", "keep"),
            mop.vocabulary.type_name(s.ty),
            s.describe(mop),
            s.classification.label()
        ));
    }
    for x in &r.rejected {
        let d = mop.domain(x.pair.ty);
        lines.push(format!(
            "  {} {:<8} ({}, {}) {}",
            ctx.paint("33", "drop"),
            mop.vocabulary.type_name(x.pair.ty),
            d.label(x.pair.a),
            d.label(x.pair.b),
            x.reason
        ));
    }
    let n = r.symmetries.len();
    lines.push(if n == 0 {
        "no symmetry-induced neighborhood".to_string()
    } else {
        format!("neighborhood: {n} generators")
    });
    for l in lines {
        let _ = writeln!(ctx.out, "{l}");
    }
}

fn cmd_detect(ctx: &mut Ctx, file: &Path, p: &PolicyArgs, output: &OutputArgs) -> Result<i32, i32> {
    let started = Instant::now();
    let mop = ctx.load(file)?;
    let report = detect(&mop, p.resolve(&mop)).map_err(|e| eval_failure(ctx, e))?;
    if output.json {
        let mut rep = CliReport::new(&mop, ctx.argv.clone());
        rep.detection = Some(DetectionJson::new(&mop, &report));
        if output.timings {
            rep.timings = Some(Timings {
                total_ms: ms(started.elapsed()),
                detection_ms: Some(ms(report.elapsed)),
            });
        }
        let _ = write!(ctx.out, "{}", rep.to_json());
    } else {
        print_detection(ctx, &mop, &report);
    }
    Ok(EXIT_OK)
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

fn search_config(a: &SolveArgs) -> SearchConfig {
    let time_limit = a.time_limit.map(Duration::from_secs_f64);
    SearchConfig {
        strategy: match a.strategy {
            StrategyArg::Best => Strategy::BestImprovement,
            StrategyArg::First => Strategy::FirstImprovement,
            StrategyArg::Annealing => Strategy::Annealing,
        },
        max_iters: a.max_iters,
        restarts: a.restarts,
        sideways_limit: a.sideways,
        seed: a.seed,
        time_limit,
        annealing: crate::search::AnnealingSchedule {
            initial_temperature: a.temperature,
            cooling: a.cooling,
        },
        init_budget: Budget {
            max_nodes: a.max_nodes.max(1),
            time_limit,
        },
    }
}

fn cmd_solve(ctx: &mut Ctx, a: &SolveArgs) -> Result<i32, i32> {
    let started = Instant::now();
    let mop = ctx.load(&a.file)?;
    let cfg = search_config(a);
    let mut rep = CliReport::new(&mop, ctx.argv.clone());
    let code = match a.method {
        Method::Exact => {
            let r = optimize_exact(&mop, &cfg.init_budget).map_err(|e| eval_failure(ctx, e))?;
            let code = match r.status {
                ExactStatus::Sat => EXIT_OK,
                ExactStatus::Unsat => EXIT_UNSAT,
                ExactStatus::Exhausted => EXIT_BUDGET,
            };
            if !a.output.json {
                let status = match r.status {
                    ExactStatus::Sat => "optimal",
                    ExactStatus::Unsat => "unsat",
                    ExactStatus::Exhausted => "budget exhausted",
                };
                let _ = writeln!(ctx.out, "status: {status}");
                if let Some(v) = r.objective {
                    let _ = writeln!(ctx.out, "objective: {v}");
                }
                let _ = writeln!(ctx.out, "nodes explored: {}", r.nodes_explored);
                if let Some(best) = &r.assignment {
                    let _ = writeln!(ctx.out, "{}", write_assignment(&mop, best));
                }
            }
            rep.exact = Some(ExactJson::new(&mop, &r));
            code
        }
        Method::Local => {
            let policy = PolicyArgs {
                policy: a.policy,
                samples: a.samples,
                seed: a.seed,
            }
            .resolve(&mop);
            let p = match run_pipeline(&mop, &cfg, policy) {
                Ok(p) => p,
                Err(SearchError::Unsat) => {
                    let _ = writeln!(ctx.err, "unsat: the model has no solution");
                    return Err(EXIT_UNSAT);
                }
                Err(SearchError::BudgetExhausted) => {
                    let _ = writeln!(ctx.err, "budget exhausted before an initial model was found");
                    return Err(EXIT_BUDGET);
                }
                Err(e) => return Err(eval_failure(ctx, e)),
            };
            if !a.output.json {
                let s = &p.search;
                let lines = [
                    format!("initial objective: {}", p.initial_objective),
                    format!(
                        "neighborhood: {} generators ({} detected)",
                        p.neighborhood_size,
                        p.detection.detected_count()
                    ),
                    format!("termination: {}", s.termination.as_str()),
                    format!("iterations: {}, moves: {}", s.iterations, s.moves_executed),
                    format!(
                        "trajectory: {}",
                        s.trajectory
                            .iter()
                            .map(|(i, v)| format!("{i}:{v}"))
                            .collect::<Vec<_>>()
                            .join(" ")
                    ),
                    format!("best objective: {}", ctx.paint("1", &s.best_objective.to_string())),
                ];
                for l in lines {
                    let _ = writeln!(ctx.out, "{l}");
                }
                if s.termination == Termination::NoNeighborhood {
                    let _ = writeln!(ctx.out, "no symmetry-induced neighborhood; returning the initial model");
                }
                let _ = writeln!(ctx.out, "{}", write_assignment(&mop, &s.best));
            }
            rep.detection = Some(DetectionJson::new(&mop, &p.detection));
            rep.search = Some(SearchJson::from_pipeline(
                &mop,
                cfg.strategy.as_str(),
                cfg.seed,
                &p,
            ));
            EXIT_OK
        }
    };
    if a.output.json {
        if a.output.timings {
            rep.timings = Some(Timings {
                total_ms: ms(started.elapsed()),
                detection_ms: None,
            });
        }
        let _ = write!(ctx.out, "{}", rep.to_json());
    }
    Ok(code)
}

fn cmd_verify(
    ctx: &mut Ctx,
    file: &Path,
    budget: &VerifyBudget,
    inject_fault: bool,
    output: &OutputArgs,
) -> Result<i32, i32> {
    let started = Instant::now();
    let mop = ctx.load(file)?;
    let policy = Policy::auto(&mop, DEFAULT_SPACE_BOUND, DEFAULT_SAMPLES, budget.seed);
    let opts = DetectOptions {
        skip_structural_check: inject_fault,
    };
    let report = detect_with(&mop, policy, opts).map_err(|e| eval_failure(ctx, e))?;
    let mut checks = Vec::new();
    for s in report.detected(&mop) {
        let v = verify_symmetry(&mop, &s, budget).map_err(|e| eval_failure(ctx, e))?;
        checks.push(SymmetryCheckJson::new(&mop, &s, &v));
    }
    let all_passed = checks.iter().all(|c| c.passed);

    let mut oracle = None;
    if all_passed && mop.assignment_space_size().fits(DEFAULT_SPACE_BOUND) {
        let exact = optimize_exact(&mop, &Budget::default()).map_err(|e| eval_failure(ctx, e))?;
        if let (ExactStatus::Sat, Some(optimum)) = (exact.status, exact.objective) {
            let cfg = SearchConfig {
                seed: budget.seed,
                ..SearchConfig::default()
            };
            let p = run_pipeline(&mop, &cfg, policy).map_err(|e| eval_failure(ctx, e))?;
            let found = p.search.best_objective;
            let gap = match mop.sense {
                Sense::Minimize => found - optimum,
                Sense::Maximize => optimum - found,
            };
            oracle = Some(OracleJson {
                optimum,
                pipeline_objective: found,
                gap,
            });
        }
    }

    if output.json {
        let mut rep = CliReport::new(&mop, ctx.argv.clone());
        rep.detection = Some(DetectionJson::new(&mop, &report));
        rep.verification = Some(VerificationJson {
            all_passed,
            checks,
            oracle,
        });
        if output.timings {
            rep.timings = Some(Timings {
                total_ms: ms(started.elapsed()),
                detection_ms: Some(ms(report.elapsed)),
            });
        }
        let _ = write!(ctx.out, "{}", rep.to_json());
    } else {
        for c in &checks {
            let tag = if c.passed {
                ctx.paint("32", "pass")
            } else {
                ctx.paint("31", "FAIL")
            };
            let _ = writeln!(
                ctx.out,
                "{tag} {:<8} ({}, {}) {} over {} assignments",
                c.type_name, c.a, c.b, c.mode, c.checked
            );
        }
        let passed = checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(ctx.out, "{passed}/{} symmetries verified", checks.len());
        match &oracle {
            Some(o) => {
                let _ = writeln!(
                    ctx.out,
                    "optimum {}, pipeline {}, gap {}",
                    o.optimum, o.pipeline_objective, o.gap
                );
            }
            None if all_passed => {
                let _ = writeln!(ctx.out, "oracle comparison skipped");
            }
            None => {}
        }
    }
    if all_passed {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(ctx.err, "soundness violation: a detected symmetry does not preserve the models");
        Ok(EXIT_UNSOUND)
    }
}

fn default_size(p: Problem) -> usize {
    match p {
        Problem::Tsp | Problem::TspAlt | Problem::Assignment => 4,
        Problem::ShortestPath => 5,
        Problem::MaxClique => 6,
        Problem::Cnp | Problem::Knapsack => 3,
    }
}

fn cmd_gen(ctx: &mut Ctx, a: &GenArgs) -> Result<i32, i32> {
    let mut spec = InstanceSpec::new(a.problem, a.n.unwrap_or(default_size(a.problem)), a.seed);
    spec.colors = a.colors;
    spec.equal_volume_pairs = a.equal_volume_pairs;
    spec.identical_pairs = a.identical_pairs;
    spec.graph = match a.graph {
        GraphArg::Asymmetric => GraphKind::Asymmetric,
        GraphArg::Twins => GraphKind::WithTwins,
        GraphArg::Complete => GraphKind::Complete,
    };
    let inst = generate(&spec).map_err(|e| eval_failure(ctx, e))?;
    match &a.output {
        Some(path) => {
            std::fs::write(path, &inst.text).map_err(|e| {
                eval_failure(ctx, format!("cannot write {}: {e}", path.display()))
            })?;
        }
        None => {
            let _ = write!(ctx.out, "{}", inst.text);
        }
    }
    if let Some(path) = &a.expect {
        std::fs::write(path, inst.expectation.to_json())
            .map_err(|e| eval_failure(ctx, format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(EXIT_OK)
}
