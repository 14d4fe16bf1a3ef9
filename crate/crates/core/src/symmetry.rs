//! Domain-element-swap (DES) symmetry detection.
//!
//! A DES symmetry `(a, b, σ)` swaps two elements `a` and `b` of one type in
//! the tables of the var symbols `σ` and leaves everything else alone.
//! Detection runs in three steps:
//!
//! 1. [`candidate_pairs`]: every unordered element pair of every type that
//!    appears in the signature of a var symbol occurring in the objective.
//! 2. [`check_des_pair`]: a structural test that the swap preserves the
//!    theory. `σ` is every var symbol whose signature mentions the type.
//! 3. [`classify_variance`]: swaps that never change the objective are
//!    useless as moves and are rejected.
//!
//! The structural test accepts a pair when (i) every interpreted symbol of
//! the theory that mentions the type is fixed by the swap, (ii) neither
//! element is written as a literal in the theory, and (iii) the theory never
//! uses the type numerically (order, arithmetic, mixed-sort equality). Under
//! these conditions the swap is an isomorphism of every structure that
//! fixes the theory's interpreted symbols, so it maps models to models.
//! [`verify_symmetry`] checks that semantically.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eval::{check_model, internal_objective};
use crate::model::{
    tuple_codes, tuple_index, Assignment, Formula, Mop, Sort, SpaceSize, SymbolId, Table, Term,
    TypeId, DEFAULT_SPACE_BOUND,
};
use crate::Result;

/// Default number of random assignments for sampled verdicts.
pub const DEFAULT_SAMPLES: usize = 256;

/// How objective variance is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Only the sufficient condition: `σ` shares no symbol with the objective.
    Syntactic,
    /// Compare objective values over every assignment.
    Exhaustive,
    /// Compare objective values over `n` seeded random assignments.
    Sample { n: usize, seed: u64 },
}

impl Policy {
    /// Exhaustive when the assignment space fits `bound`, else sampled.
    pub fn auto(mop: &Mop, bound: u128, n: usize, seed: u64) -> Policy {
        if mop.assignment_space_size_bounded(bound).fits(bound) {
            Policy::Exhaustive
        } else {
            Policy::Sample { n, seed }
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Syntactic => f.write_str("syntactic"),
            Policy::Exhaustive => f.write_str("exhaustive"),
            Policy::Sample { n, seed } => write!(f, "sample(n={n}, seed={seed})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidatePair {
    pub ty: TypeId,
    pub a: u32,
    pub b: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Some assignment changes objective value under the swap.
    Variant { witness: Assignment },
    InvariantProved,
    /// No difference on `samples` random assignments; not a proof.
    InvariantSampled { samples: usize },
    Unclassified,
}

impl Classification {
    pub fn is_invariant(&self) -> bool {
        matches!(
            self,
            Classification::InvariantProved | Classification::InvariantSampled { .. }
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            Classification::Variant { .. } => "variant",
            Classification::InvariantProved => "invariant_proved",
            Classification::InvariantSampled { .. } => "invariant_sampled",
            Classification::Unclassified => "unclassified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesSymmetry {
    pub ty: TypeId,
    pub a: u32,
    pub b: u32,
    /// Var symbols rewritten by the swap, in declaration order.
    pub sigma: Vec<SymbolId>,
    pub classification: Classification,
}

impl DesSymmetry {
    pub fn pair(&self) -> CandidatePair {
        CandidatePair {
            ty: self.ty,
            a: self.a,
            b: self.b,
        }
    }

    /// Human-readable `(a, b, {σ})` description.
    pub fn describe(&self, mop: &Mop) -> String {
        let d = mop.domain(self.ty);
        let sigma: Vec<&str> = self
            .sigma
            .iter()
            .map(|s| mop.symbol(*s).name.as_str())
            .collect();
        format!(
            "({}, {}, {{{}}})",
            d.label(self.a),
            d.label(self.b),
            sigma.join(", ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectionReason {
    /// An interpreted theory symbol over the type is not fixed by the swap.
    InterpretedNotInvariant { symbol: String },
    /// An interpreted theory constant denotes one of the swapped elements.
    PinnedByConstant { symbol: String },
    /// One of the elements occurs as a literal in the theory.
    LiteralInTheory { element: String },
    /// The theory uses the type under order, arithmetic or mixed-sort
    /// equality.
    NumericType,
    /// The swap is a symmetry but leaves the objective unchanged.
    ObjectiveInvariant { verdict: Classification },
}

impl RejectionReason {
    pub fn code(&self) -> &'static str {
        match self {
            RejectionReason::InterpretedNotInvariant { .. } => "interpreted-not-invariant",
            RejectionReason::PinnedByConstant { .. } => "pinned-by-constant",
            RejectionReason::LiteralInTheory { .. } => "literal-in-theory",
            RejectionReason::NumericType => "numeric-type",
            RejectionReason::ObjectiveInvariant { .. } => "objective-invariant",
        }
    }
}

impl fmt::Display for RejectionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectionReason::InterpretedNotInvariant { symbol } => {
                write!(f, "interpretation of `{symbol}` is not invariant under the swap")
            }
            RejectionReason::PinnedByConstant { symbol } => {
                write!(f, "constant `{symbol}` in the theory denotes a swapped element")
            }
            RejectionReason::LiteralInTheory { element } => {
                write!(f, "element `{element}` occurs as a literal in the theory")
            }
            RejectionReason::NumericType => {
                f.write_str("type is used under order comparison or arithmetic in the theory")
            }
            RejectionReason::ObjectiveInvariant { verdict } => {
                write!(f, "objective-invariant ({})", verdict.label())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub pair: CandidatePair,
    pub reason: RejectionReason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectionReport {
    /// The policy actually used (an exhaustive request on an oversized space
    /// falls back to sampling).
    pub policy: Policy,
    pub candidate_types: Vec<TypeId>,
    pub candidates_checked: usize,
    /// Surviving symmetries, in canonical pair order.
    pub symmetries: Vec<DesSymmetry>,
    pub rejected: Vec<Rejection>,
    pub elapsed: Duration,
}

impl DetectionReport {
    /// Number of pairs that passed the structural test, objective-invariant
    /// ones included.
    pub fn detected_count(&self) -> usize {
        self.symmetries.len() + self.objective_invariant().count()
    }

    pub fn objective_invariant(&self) -> impl Iterator<Item = &Rejection> {
        self.rejected
            .iter()
            .filter(|r| matches!(r.reason, RejectionReason::ObjectiveInvariant { .. }))
    }

    /// Every pair that passed the structural test, as symmetries, in
    /// canonical order.
    pub fn detected(&self, mop: &Mop) -> Vec<DesSymmetry> {
        let mut out: Vec<DesSymmetry> = self.symmetries.clone();
        for r in &self.rejected {
            if let RejectionReason::ObjectiveInvariant { verdict } = &r.reason {
                out.push(DesSymmetry {
                    ty: r.pair.ty,
                    a: r.pair.a,
                    b: r.pair.b,
                    sigma: sigma_for(mop, r.pair.ty),
                    classification: verdict.clone(),
                });
            }
        }
        out.sort_by_key(|s| s.pair());
        out
    }
}

/// Var symbols whose signature mentions `ty`, in declaration order.
pub fn sigma_for(mop: &Mop, ty: TypeId) -> Vec<SymbolId> {
    mop.var_symbols()
        .into_iter()
        .filter(|s| mop.symbol(*s).mentions(ty))
        .collect()
}

/// Types appearing in the signature of a var symbol that occurs in the
/// objective, in declaration order.
pub fn candidate_types(mop: &Mop) -> Vec<TypeId> {
    let objective_vars: Vec<SymbolId> = mop
        .objective
        .symbols()
        .into_iter()
        .filter(|s| mop.symbol(*s).is_var())
        .collect();
    (0..mop.vocabulary.types.len())
        .map(TypeId)
        .filter(|t| objective_vars.iter().any(|s| mop.symbol(*s).mentions(*t)))
        .collect()
}

/// All unordered element pairs of every candidate type, in canonical order.
pub fn candidate_pairs(mop: &Mop) -> Vec<CandidatePair> {
    let mut out = Vec::new();
    for ty in candidate_types(mop) {
        let n = mop.domain(ty).len() as u32;
        for a in 0..n {
            for b in a + 1..n {
                out.push(CandidatePair { ty, a, b });
            }
        }
    }
    out
}

/// Facts about the theory the structural test needs, computed once.
struct TheoryFacts {
    interpreted: Vec<SymbolId>,
    literals: BTreeSet<(TypeId, u32)>,
    numeric_types: BTreeSet<TypeId>,
}

impl TheoryFacts {
    fn new(mop: &Mop) -> Self {
        let mut syms = BTreeSet::new();
        for f in &mop.theory {
            f.collect_symbols(&mut syms);
        }
        let mut facts = TheoryFacts {
            interpreted: syms.into_iter().filter(|s| !mop.symbol(*s).is_var()).collect(),
            literals: BTreeSet::new(),
            numeric_types: BTreeSet::new(),
        };
        for f in &mop.theory {
            facts.formula(mop, f, &mut Vec::new());
        }
        facts
    }

    fn mark(&mut self, s: Sort) {
        if let Sort::Type(t) = s {
            self.numeric_types.insert(t);
        }
    }

    fn formula(&mut self, mop: &Mop, f: &Formula, scope: &mut Vec<TypeId>) {
        match f {
            Formula::Quant(_, b, body) => {
                scope.push(b.ty);
                self.formula(mop, body, scope);
                scope.pop();
            }
            Formula::Not(g) => self.formula(mop, g, scope),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                self.formula(mop, l, scope);
                self.formula(mop, r, scope);
            }
            Formula::Cmp(op, l, r) => {
                let ls = self.term(mop, l, scope);
                let rs = self.term(mop, r, scope);
                if op.is_order() || ls != rs {
                    self.mark(ls);
                    self.mark(rs);
                }
            }
            Formula::Pred(sym, args) => self.args(mop, *sym, args, scope),
            Formula::Reachable { start, ty, .. } => {
                let s = self.term(mop, start, scope);
                if s != Sort::Type(*ty) {
                    self.mark(s);
                    self.mark(Sort::Type(*ty));
                }
            }
        }
    }

    fn args(&mut self, mop: &Mop, sym: SymbolId, args: &[Term], scope: &mut Vec<TypeId>) {
        for (a, want) in args.iter().zip(&mop.symbol(sym).signature) {
            let got = self.term(mop, a, scope);
            if got != *want {
                self.mark(got);
                self.mark(*want);
            }
        }
    }

    fn term(&mut self, mop: &Mop, t: &Term, scope: &mut Vec<TypeId>) -> Sort {
        match t {
            Term::Var(v) => Sort::Type(scope[v.level]),
            Term::Elem(ty, c) => {
                self.literals.insert((*ty, *c));
                Sort::Type(*ty)
            }
            Term::Int(_) => Sort::Int,
            Term::App(sym, args) => {
                self.args(mop, *sym, args, scope);
                mop.symbol(*sym).result.expect("function")
            }
            Term::Add(l, r) | Term::Sub(l, r) => {
                let ls = self.term(mop, l, scope);
                let rs = self.term(mop, r, scope);
                self.mark(ls);
                self.mark(rs);
                Sort::Int
            }
            Term::Sum {
                body,
                binders,
                guard,
            } => {
                let depth = scope.len();
                scope.extend(binders.iter().map(|b| b.ty));
                if let Some(g) = guard {
                    self.formula(mop, g, scope);
                }
                let s = self.term(mop, body, scope);
                self.mark(s);
                scope.truncate(depth);
                Sort::Int
            }
            Term::Count { binder, guard } => {
                scope.push(binder.ty);
                self.formula(mop, guard, scope);
                scope.pop();
                Sort::Int
            }
        }
    }
}

fn swap(code: u32, a: u32, b: u32) -> u32 {
    if code == a {
        b
    } else if code == b {
        a
    } else {
        code
    }
}

/// Whether the interpretation of interpreted symbol `sym` is fixed by the
/// swap of `a` and `b` in `ty`.
fn table_invariant(mop: &Mop, sym: SymbolId, ty: TypeId, a: u32, b: u32) -> bool {
    let decl = mop.symbol(sym);
    let dims = mop.dims(sym);
    let table = mop.structure.tables[sym.0].as_ref().expect("interpreted table");
    let moves: Vec<bool> = decl.signature.iter().map(|s| *s == Sort::Type(ty)).collect();
    let res_moves = decl.result == Some(Sort::Type(ty));
    for idx in 0..table.len() {
        let mut codes = tuple_codes(&dims, idx);
        let mut touched = false;
        for (c, m) in codes.iter_mut().zip(&moves) {
            if *m && (*c == a || *c == b) {
                *c = swap(*c, a, b);
                touched = true;
            }
        }
        let image = if touched { tuple_index(&dims, &codes) } else { idx };
        let ok = match table {
            Table::Relation(bits) => bits[idx] == bits[image],
            Table::Function(vals) => {
                let v = vals[idx];
                let pv = if res_moves {
                    swap(v as u32, a, b) as i64
                } else {
                    v
                };
                vals[image] == pv
            }
        };
        if !ok {
            return false;
        }
    }
    true
}

fn structural_check(
    mop: &Mop,
    facts: &TheoryFacts,
    pair: CandidatePair,
) -> std::result::Result<(), RejectionReason> {
    let CandidatePair { ty, a, b } = pair;
    for &sym in &facts.interpreted {
        let decl = mop.symbol(sym);
        if !decl.mentions(ty) || table_invariant(mop, sym, ty, a, b) {
            continue;
        }
        return Err(if decl.arity() == 0 {
            RejectionReason::PinnedByConstant {
                symbol: decl.name.clone(),
            }
        } else {
            RejectionReason::InterpretedNotInvariant {
                symbol: decl.name.clone(),
            }
        });
    }
    for e in [a, b] {
        if facts.literals.contains(&(ty, e)) {
            return Err(RejectionReason::LiteralInTheory {
                element: mop.domain(ty).label(e),
            });
        }
    }
    if facts.numeric_types.contains(&ty) {
        return Err(RejectionReason::NumericType);
    }
    Ok(())
}

/// Structural symmetry test for one candidate pair. Accepted symmetries are
/// returned [`Classification::Unclassified`].
pub fn check_des_pair(
    mop: &Mop,
    pair: CandidatePair,
) -> std::result::Result<DesSymmetry, RejectionReason> {
    let facts = TheoryFacts::new(mop);
    structural_check(mop, &facts, pair)?;
    Ok(DesSymmetry {
        ty: pair.ty,
        a: pair.a,
        b: pair.b,
        sigma: sigma_for(mop, pair.ty),
        classification: Classification::Unclassified,
    })
}

/// Image of `a` under the swap: every tuple (and function result) of every
/// symbol in `σ` is rewritten through the transposition.
pub fn apply_symmetry(mop: &Mop, s: &DesSymmetry, a: &Assignment) -> Assignment {
    let mut out = a.clone();
    for &sym in &s.sigma {
        let decl = mop.symbol(sym);
        let dims = mop.dims(sym);
        let moves: Vec<bool> = decl.signature.iter().map(|x| *x == Sort::Type(s.ty)).collect();
        let res_moves = decl.result == Some(Sort::Type(s.ty));
        let old = a.table(sym).expect("var table");
        let new = out.tables[sym.0].as_mut().expect("var table");
        for idx in 0..old.len() {
            let mut codes = tuple_codes(&dims, idx);
            for (c, m) in codes.iter_mut().zip(&moves) {
                if *m {
                    *c = swap(*c, s.a, s.b);
                }
            }
            let image = tuple_index(&dims, &codes);
            match (old, &mut *new) {
                (Table::Relation(o), Table::Relation(n)) => n[image] = o[idx],
                (Table::Function(o), Table::Function(n)) => {
                    n[image] = if res_moves {
                        swap(o[idx] as u32, s.a, s.b) as i64
                    } else {
                        o[idx]
                    }
                }
                _ => unreachable!("table kinds match"),
            }
        }
    }
    out
}

fn syntactically_invariant(mop: &Mop, s: &DesSymmetry) -> bool {
    let used = mop.objective.symbols();
    s.sigma.iter().all(|x| !used.contains(x))
}

/// Decides whether `s` changes the objective.
///
/// Exhaustive classification fails with [`crate::Error::SpaceOverflow`] when the
/// assignment space exceeds the default bound.
pub fn classify_variance(mop: &Mop, s: &DesSymmetry, policy: Policy) -> Result<Classification> {
    let mut batch = vec![s.clone()];
    classify_batch(mop, &mut batch, policy)?;
    Ok(batch.pop().expect("one symmetry").classification)
}

/// Classifies all of `syms` in place, sharing the assignment scan.
fn classify_batch(mop: &Mop, syms: &mut [DesSymmetry], policy: Policy) -> Result<()> {
    let mut pending = Vec::new();
    for (i, s) in syms.iter_mut().enumerate() {
        if syntactically_invariant(mop, s) {
            s.classification = Classification::InvariantProved;
        } else {
            s.classification = Classification::Unclassified;
            pending.push(i);
        }
    }
    if pending.is_empty() {
        return Ok(());
    }
    let check = |alpha: &Assignment, pending: &mut Vec<usize>, syms: &mut [DesSymmetry]| -> Result<()> {
        let base = internal_objective(mop, alpha)?;
        let mut still = Vec::with_capacity(pending.len());
        for &i in pending.iter() {
            let image = apply_symmetry(mop, &syms[i], alpha);
            if internal_objective(mop, &image)? != base {
                syms[i].classification = Classification::Variant {
                    witness: alpha.clone(),
                };
            } else {
                still.push(i);
            }
        }
        *pending = still;
        Ok(())
    };
    match policy {
        Policy::Syntactic => {}
        Policy::Exhaustive => {
            for alpha in mop.enumerate_assignments_bounded(DEFAULT_SPACE_BOUND)? {
                check(&alpha, &mut pending, syms)?;
                if pending.is_empty() {
                    break;
                }
            }
            for &i in &pending {
                syms[i].classification = Classification::InvariantProved;
            }
        }
        Policy::Sample { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..n {
                let alpha = Assignment::random(mop, &mut rng);
                check(&alpha, &mut pending, syms)?;
                if pending.is_empty() {
                    break;
                }
            }
            for &i in &pending {
                syms[i].classification = Classification::InvariantSampled { samples: n };
            }
        }
    }
    Ok(())
}

/// Knobs for [`detect_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DetectOptions {
    /// Accept every candidate pair without the structural test. This
    /// produces unsound reports and exists to exercise [`verify_symmetry`].
    pub skip_structural_check: bool,
}

/// Runs candidate generation, the structural test and variance
/// classification. Objective-invariant symmetries end up in
/// [`DetectionReport::rejected`].
pub fn detect(mop: &Mop, policy: Policy) -> Result<DetectionReport> {
    detect_with(mop, policy, DetectOptions::default())
}

pub fn detect_with(mop: &Mop, policy: Policy, opts: DetectOptions) -> Result<DetectionReport> {
    let started = Instant::now();
    let policy = match policy {
        Policy::Exhaustive if mop.assignment_space_size() == SpaceSize::Overflow => Policy::Sample {
            n: DEFAULT_SAMPLES,
            seed: 0,
        },
        p => p,
    };
    let facts = TheoryFacts::new(mop);
    let pairs = candidate_pairs(mop);
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for &pair in &pairs {
        let verdict = if opts.skip_structural_check {
            Ok(())
        } else {
            structural_check(mop, &facts, pair)
        };
        match verdict {
            Ok(()) => accepted.push(DesSymmetry {
                ty: pair.ty,
                a: pair.a,
                b: pair.b,
                sigma: sigma_for(mop, pair.ty),
                classification: Classification::Unclassified,
            }),
            Err(reason) => rejected.push(Rejection { pair, reason }),
        }
    }
    classify_batch(mop, &mut accepted, policy)?;
    let mut symmetries = Vec::new();
    for s in accepted {
        if s.classification.is_invariant() {
            rejected.push(Rejection {
                pair: s.pair(),
                reason: RejectionReason::ObjectiveInvariant {
                    verdict: s.classification,
                },
            });
        } else {
            symmetries.push(s);
        }
    }
    rejected.sort_by_key(|r| r.pair);
    Ok(DetectionReport {
        policy,
        candidate_types: candidate_types(mop),
        candidates_checked: pairs.len(),
        symmetries,
        rejected,
        elapsed: started.elapsed(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyBudget {
    /// Largest assignment space checked exhaustively.
    pub max_assignments: u128,
    /// Random assignments checked otherwise.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        VerifyBudget {
            max_assignments: 100_000,
            samples: 1_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub passed: bool,
    pub mode: VerifyMode,
    pub checked: u64,
    /// An assignment `α` with `α ⊨ T` differing from `S(α) ⊨ T`.
    pub counterexample: Option<Assignment>,
}

/// Semantic check that `s` maps models to models and non-models to
/// non-models.
pub fn verify_symmetry(mop: &Mop, s: &DesSymmetry, budget: &VerifyBudget) -> Result<VerificationReport> {
    let mut checked = 0u64;
    let mut test = |alpha: Assignment| -> Result<Option<Assignment>> {
        checked += 1;
        let image = apply_symmetry(mop, s, &alpha);
        if check_model(mop, &alpha)? != check_model(mop, &image)? {
            Ok(Some(alpha))
        } else {
            Ok(None)
        }
    };
    let exhaustive = mop
        .assignment_space_size_bounded(budget.max_assignments)
        .fits(budget.max_assignments);
    let mut counterexample = None;
    if exhaustive {
        for alpha in mop.enumerate_assignments_bounded(budget.max_assignments)? {
            if let Some(c) = test(alpha)? {
                counterexample = Some(c);
                break;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        for _ in 0..budget.samples {
            if let Some(c) = test(Assignment::random(mop, &mut rng))? {
                counterexample = Some(c);
                break;
            }
        }
    }
    Ok(VerificationReport {
        passed: counterexample.is_none(),
        mode: if exhaustive {
            VerifyMode::Exhaustive
        } else {
            VerifyMode::Sampled
        },
        checked,
        counterexample,
    })
}
