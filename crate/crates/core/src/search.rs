//! Local search over a symmetry-induced neighborhood, and the full pipeline
//! (initial model, detection, neighborhood, search).

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eval::{check_model, internal_objective};
use crate::exact::{initial_model, Budget, ExactStatus};
use crate::model::{Assignment, Mop};
use crate::neighborhood::{build_neighborhood, Neighborhood};
use crate::symmetry::{detect, DetectionReport, Policy};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    FirstImprovement,
    #[default]
    BestImprovement,
    Annealing,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::FirstImprovement => "first-improvement",
            Strategy::BestImprovement => "best-improvement",
            Strategy::Annealing => "annealing",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnealingSchedule {
    pub initial_temperature: f64,
    /// Geometric factor applied after every iteration, in `(0, 1)`.
    pub cooling: f64,
}

impl Default for AnnealingSchedule {
    fn default() -> Self {
        AnnealingSchedule {
            initial_temperature: 10.0,
            cooling: 0.95,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub strategy: Strategy,
    pub max_iters: u64,
    /// Extra runs after the first, each from a seeded random walk away from
    /// the initial model.
    pub restarts: usize,
    /// Consecutive equal-objective moves allowed while hill climbing.
    pub sideways_limit: u64,
    pub seed: u64,
    pub time_limit: Option<Duration>,
    pub annealing: AnnealingSchedule,
    /// Budget for the exact solver that finds the initial model.
    pub init_budget: Budget,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: Strategy::BestImprovement,
            max_iters: 1_000,
            restarts: 0,
            sideways_limit: 0,
            seed: 0,
            time_limit: None,
            annealing: AnnealingSchedule::default(),
            init_budget: Budget::default(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.max_iters == 0 {
            return Err(SearchError::InvalidConfig("max_iters must be at least 1".into()));
        }
        let c = self.annealing.cooling;
        if !(c > 0.0 && c < 1.0) {
            return Err(SearchError::InvalidConfig(
                "cooling factor must lie strictly between 0 and 1".into(),
            ));
        }
        let t = self.annealing.initial_temperature;
        if !(t > 0.0 && t.is_finite()) {
            return Err(SearchError::InvalidConfig(
                "initial temperature must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    LocalOptimum,
    IterLimit,
    TimeLimit,
    NoNeighborhood,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::LocalOptimum => "local-optimum",
            Termination::IterLimit => "iter-limit",
            Termination::TimeLimit => "time-limit",
            Termination::NoNeighborhood => "no-neighborhood",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub best: Assignment,
    /// In the user's sense (larger is better for `maximize`).
    pub best_objective: i64,
    pub iterations: u64,
    pub moves_executed: u64,
    /// `(iteration, objective)` at the start and after every executed move.
    pub trajectory: Vec<(u64, i64)>,
    pub termination: Termination,
    /// Which run produced `best`; 0 is the run from the initial model.
    pub restart: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("the neighborhood is empty")]
    EmptyNeighborhood,
    #[error("the initial assignment is not a model")]
    NotAModel,
    #[error("the model has no solution")]
    Unsat,
    #[error("the exact solver ran out of budget before finding a model")]
    BudgetExhausted,
    #[error(transparent)]
    Eval(#[from] crate::Error),
}

struct Run<'a> {
    mop: &'a Mop,
    n: &'a Neighborhood,
    cfg: &'a SearchConfig,
    started: Instant,
}

impl Run<'_> {
    fn timed_out(&self) -> bool {
        self.cfg
            .time_limit
            .is_some_and(|l| self.started.elapsed() >= l)
    }

    fn value(&self, a: &Assignment) -> Result<i64, SearchError> {
        Ok(internal_objective(self.mop, a)?)
    }

    fn search(&self, init: Assignment, rng: &mut ChaCha8Rng, restart: usize) -> Result<SearchResult, SearchError> {
        let mop = self.mop;
        let mut cur_v = self.value(&init)?;
        let mut cur = init;
        let mut best = (cur_v, cur.clone());
        let mut trajectory = vec![(0, mop.report_value(cur_v))];
        let mut iterations = 0u64;
        let mut moves = 0u64;
        let mut sideways = 0u64;
        let mut temperature = self.cfg.annealing.initial_temperature;
        let termination = loop {
            if iterations >= self.cfg.max_iters {
                break Termination::IterLimit;
            }
            if self.timed_out() {
                break Termination::TimeLimit;
            }
            iterations += 1;
            let step = match self.cfg.strategy {
                Strategy::BestImprovement => self.best_move(&cur, cur_v, sideways)?,
                Strategy::FirstImprovement => self.first_move(&cur, cur_v, sideways, rng)?,
                Strategy::Annealing => {
                    let s = self.annealing_move(&cur, cur_v, temperature, rng)?;
                    temperature *= self.cfg.annealing.cooling;
                    match s {
                        Some(m) => Some(m),
                        None => continue,
                    }
                }
            };
            let Some((v, next)) = step else {
                break Termination::LocalOptimum;
            };
            if v == cur_v {
                sideways += 1;
            } else {
                sideways = 0;
            }
            debug_assert!(check_model(mop, &next).unwrap_or(false), "move left the model set");
            cur = next;
            cur_v = v;
            moves += 1;
            trajectory.push((iterations, mop.report_value(v)));
            if v < best.0 {
                best = (v, cur.clone());
            }
        };
        Ok(SearchResult {
            best_objective: mop.report_value(best.0),
            best: best.1,
            iterations,
            moves_executed: moves,
            trajectory,
            termination,
            restart,
        })
    }

    fn acceptable(&self, v: i64, cur_v: i64, sideways: u64) -> bool {
        v < cur_v || (v == cur_v && sideways < self.cfg.sideways_limit)
    }

    fn best_move(&self, cur: &Assignment, cur_v: i64, sideways: u64) -> Result<Option<(i64, Assignment)>, SearchError> {
        let mut best: Option<(i64, Assignment)> = None;
        for (_, a) in self.n.neighbors(self.mop, cur) {
            let v = self.value(&a)?;
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, a));
            }
        }
        Ok(best.filter(|(v, _)| self.acceptable(*v, cur_v, sideways)))
    }

    fn first_move(
        &self,
        cur: &Assignment,
        cur_v: i64,
        sideways: u64,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<(i64, Assignment)>, SearchError> {
        let mut order: Vec<usize> = (0..self.n.len()).collect();
        order.shuffle(rng);
        let mut equal = None;
        for i in order {
            let a = self.n.apply(self.mop, i, cur);
            let v = self.value(&a)?;
            if v < cur_v {
                return Ok(Some((v, a)));
            }
            if equal.is_none() && self.acceptable(v, cur_v, sideways) {
                equal = Some((v, a));
            }
        }
        Ok(equal)
    }

    fn annealing_move(
        &self,
        cur: &Assignment,
        cur_v: i64,
        temperature: f64,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<(i64, Assignment)>, SearchError> {
        let i = rng.gen_range(0..self.n.len());
        let a = self.n.apply(self.mop, i, cur);
        let v = self.value(&a)?;
        let delta = (v - cur_v) as f64;
        let accept = delta <= 0.0 || rng.gen::<f64>() < (-delta / temperature).exp();
        Ok(accept.then_some((v, a)))
    }
}

/// Runs local search from `init`, a model of `mop`, over `n`.
///
/// Returns the lowest-objective assignment seen across all runs. Ties
/// between runs go to the lower run index.
pub fn local_search(
    mop: &Mop,
    n: &Neighborhood,
    init: &Assignment,
    cfg: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    cfg.validate()?;
    if n.is_empty() {
        return Err(SearchError::EmptyNeighborhood);
    }
    if !check_model(mop, init)? {
        return Err(SearchError::NotAModel);
    }
    let run = Run {
        mop,
        n,
        cfg,
        started: Instant::now(),
    };
    let mut best: Option<SearchResult> = None;
    for r in 0..=cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(r as u64));
        let mut start = init.clone();
        if r > 0 {
            // random walk along symmetries, so the start is still a model
            for _ in 0..n.len() {
                let g = rng.gen_range(0..n.len());
                start = n.apply(mop, g, &start);
            }
        }
        let res = run.search(start, &mut rng, r)?;
        let better = match &best {
            None => true,
            Some(b) => mop.report_value(res.best_objective) < mop.report_value(b.best_objective),
        };
        if better {
            best = Some(res);
        }
        if run.timed_out() {
            break;
        }
    }
    Ok(best.expect("at least one run"))
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub initial: Assignment,
    /// In the user's sense.
    pub initial_objective: i64,
    pub init_nodes: u64,
    pub detection: DetectionReport,
    /// Number of generators; 0 when the neighborhood is empty.
    pub neighborhood_size: usize,
    pub search: SearchResult,
}

/// Initial model, symmetry detection, neighborhood, local search.
///
/// With an empty neighborhood the initial model is returned unchanged with
/// [`Termination::NoNeighborhood`].
pub fn run_pipeline(mop: &Mop, cfg: &SearchConfig, policy: Policy) -> Result<PipelineResult, SearchError> {
    cfg.validate()?;
    let init = initial_model(mop, &cfg.init_budget, cfg.seed)?;
    let initial = match (init.status, init.assignment) {
        (ExactStatus::Sat, Some(a)) => a,
        (ExactStatus::Unsat, _) => return Err(SearchError::Unsat),
        _ => return Err(SearchError::BudgetExhausted),
    };
    let initial_objective = init.objective.expect("model has an objective");
    let detection = detect(mop, policy)?;
    let (neighborhood_size, search) = match build_neighborhood(&detection) {
        Some(n) => (n.len(), local_search(mop, &n, &initial, cfg)?),
        None => (
            0,
            SearchResult {
                best: initial.clone(),
                best_objective: initial_objective,
                iterations: 0,
                moves_executed: 0,
                trajectory: vec![(0, initial_objective)],
                termination: Termination::NoNeighborhood,
                restart: 0,
            },
        ),
    };
    Ok(PipelineResult {
        initial,
        initial_objective,
        init_nodes: init.nodes_explored,
        detection,
        neighborhood_size,
        search,
    })
}
