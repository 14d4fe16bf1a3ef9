//! Complete backtracking search over var-symbol table cells.
//!
//! Cells are filled in canonical order (symbols by declaration, tuples in
//! table order). After every assignment the constraints mentioning the
//! touched symbol are evaluated three-valued over the partial tables; a
//! definite `false` prunes the branch. There is no propagation.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::eval::{check_partial, internal_objective, PartialAssignment, Tri};
use crate::model::{Assignment, CellLayout, Mop, SymbolId};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 10_000_000,
            time_limit: None,
        }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        assert!(max_nodes >= 1, "max_nodes must be at least 1");
        Budget {
            max_nodes,
            time_limit: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactStatus {
    Sat,
    Unsat,
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactResult {
    pub status: ExactStatus,
    /// Present on `Sat`; on `Exhausted` holds the best model found, if any.
    pub assignment: Option<Assignment>,
    /// Objective of `assignment` in the user's sense.
    pub objective: Option<i64>,
    pub nodes_explored: u64,
}

enum Mode {
    First,
    Optimize,
}

struct Search<'a> {
    mop: &'a Mop,
    layout: CellLayout,
    /// Theory formula indices to re-check per var symbol.
    watch: Vec<Vec<usize>>,
    partial: PartialAssignment,
    rng: Option<ChaCha8Rng>,
    budget: &'a Budget,
    started: Instant,
    nodes: u64,
    out_of_budget: bool,
    mode: Mode,
    best: Option<(i64, Assignment)>,
}

impl<'a> Search<'a> {
    fn new(mop: &'a Mop, budget: &'a Budget, rng: Option<ChaCha8Rng>, mode: Mode) -> Self {
        let mut watch = vec![Vec::new(); mop.vocabulary.symbols.len()];
        for (i, f) in mop.theory.iter().enumerate() {
            let mut syms = BTreeSet::new();
            f.collect_symbols(&mut syms);
            for s in syms {
                if mop.symbol(s).is_var() {
                    watch[s.0].push(i);
                }
            }
        }
        Search {
            mop,
            layout: CellLayout::new(mop),
            watch,
            partial: PartialAssignment::new(mop),
            rng,
            budget,
            started: Instant::now(),
            nodes: 0,
            out_of_budget: false,
            mode,
            best: None,
        }
    }

    fn over_budget(&mut self) -> bool {
        if self.nodes >= self.budget.max_nodes {
            self.out_of_budget = true;
        } else if let Some(limit) = self.budget.time_limit {
            if self.nodes.is_multiple_of(256) && self.started.elapsed() >= limit {
                self.out_of_budget = true;
            }
        }
        self.out_of_budget
    }

    /// Returns `true` when the search should stop.
    fn dfs(&mut self, depth: usize) -> Result<bool> {
        if depth == self.layout.cells.len() {
            let a = self.partial.to_assignment(self.mop);
            match self.mode {
                Mode::First => {
                    self.best = Some((internal_objective(self.mop, &a)?, a));
                    return Ok(true);
                }
                Mode::Optimize => {
                    let v = internal_objective(self.mop, &a)?;
                    if self.best.as_ref().is_none_or(|(b, _)| v < *b) {
                        self.best = Some((v, a));
                    }
                    return Ok(false);
                }
            }
        }
        let (sym, idx, arity) = self.layout.cells[depth];
        let mut order: Vec<i64> = (0..arity as i64).collect();
        if let Some(rng) = self.rng.as_mut() {
            order.shuffle(rng);
        }
        for v in order {
            if self.over_budget() {
                return Ok(true);
            }
            self.nodes += 1;
            self.partial.set(sym, idx, Some(v));
            if self.consistent(sym)? && self.dfs(depth + 1)? {
                return Ok(true);
            }
        }
        self.partial.set(sym, idx, None);
        Ok(false)
    }

    fn consistent(&self, sym: SymbolId) -> Result<bool> {
        Ok(check_partial(self.mop, &self.partial, Some(&self.watch[sym.0]))? != Tri::False)
    }

    fn run(mut self) -> Result<ExactResult> {
        // formulas without var symbols are decided up front
        let fixed: Vec<usize> = (0..self.mop.theory.len())
            .filter(|i| self.watch.iter().all(|w| !w.contains(i)))
            .collect();
        let ground_ok = check_partial(self.mop, &self.partial, Some(&fixed))? != Tri::False;
        if ground_ok {
            self.dfs(0)?;
        }
        let status = match (&self.best, self.out_of_budget) {
            (_, true) => ExactStatus::Exhausted,
            (Some(_), false) => ExactStatus::Sat,
            (None, false) => ExactStatus::Unsat,
        };
        let (objective, assignment) = match self.best {
            Some((v, a)) => (Some(self.mop.report_value(v)), Some(a)),
            None => (None, None),
        };
        Ok(ExactResult {
            status,
            assignment,
            objective,
            nodes_explored: self.nodes,
        })
    }
}

/// Finds a first model by depth-first search with seeded value order.
pub fn initial_model(mop: &Mop, budget: &Budget, seed: u64) -> Result<ExactResult> {
    let rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Search::new(mop, budget, Some(rng), Mode::First).run()?;
    // a model found exactly when the budget ran out is still a model
    if r.status == ExactStatus::Exhausted && r.assignment.is_some() {
        r.status = ExactStatus::Sat;
    }
    Ok(r)
}

/// Finds a globally optimal model by exhaustive backtracking. Among
/// equally good models the first in canonical order is returned.
pub fn optimize_exact(mop: &Mop, budget: &Budget) -> Result<ExactResult> {
    Search::new(mop, budget, None, Mode::Optimize).run()
}
