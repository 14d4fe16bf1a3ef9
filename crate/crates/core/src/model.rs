//! In-memory representation of a model optimization problem.
//!
//! A [`Mop`] bundles a typed vocabulary, a partial structure interpreting
//! the types and every non-`var` symbol, a theory of first-order formulas
//! and an integer objective term. The `var` symbols are the search
//! variables; an [`Assignment`] gives each of them a total table.
//!
//! Domain elements are stored as *codes*: the position of the element in
//! its type's declared domain. Integer results of interpreted functions
//! (`-> int`) store the integer itself.

use std::collections::BTreeSet;
use std::fmt;

/// Index of a type declaration in [`Vocabulary::types`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeId(pub usize);

/// Index of a symbol declaration in [`Vocabulary::symbols`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub usize);

/// Default bound above which [`Mop::assignment_space_size`] reports overflow.
pub const DEFAULT_SPACE_BOUND: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Explicit element labels, in declaration order.
    Labels(Vec<String>),
    /// Integer interval `lo..hi`, both ends inclusive.
    Range { lo: i64, hi: i64 },
}

impl Domain {
    pub fn len(&self) -> usize {
        match self {
            Domain::Labels(l) => l.len(),
            Domain::Range { lo, hi } => {
                if hi < lo {
                    0
                } else {
                    (hi - lo) as usize + 1
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Domain::Range { .. })
    }

    /// Label of the element with the given code.
    pub fn label(&self, code: u32) -> String {
        match self {
            Domain::Labels(l) => l[code as usize].clone(),
            Domain::Range { lo, .. } => (lo + code as i64).to_string(),
        }
    }

    /// Code of the element with the given label, if any.
    pub fn code_of(&self, label: &str) -> Option<u32> {
        match self {
            Domain::Labels(l) => l.iter().position(|x| x == label).map(|p| p as u32),
            Domain::Range { lo, hi } => {
                let v: i64 = label.trim().parse().ok()?;
                (v >= *lo && v <= *hi).then(|| (v - lo) as u32)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: String,
}

/// The sort of a signature position or of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Type(TypeId),
    /// The built-in integer type.
    Int,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Predicate,
    Function,
    /// A function of arity 0.
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Binding {
    Interpreted,
    Var,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolDecl {
    pub name: String,
    pub kind: SymbolKind,
    pub signature: Vec<Sort>,
    /// Present for functions and constants.
    pub result: Option<Sort>,
    pub binding: Binding,
}

impl SymbolDecl {
    pub fn is_var(&self) -> bool {
        self.binding == Binding::Var
    }

    pub fn is_predicate(&self) -> bool {
        self.kind == SymbolKind::Predicate
    }

    pub fn arity(&self) -> usize {
        self.signature.len()
    }

    /// True when `ty` appears among the argument or result sorts.
    pub fn mentions(&self, ty: TypeId) -> bool {
        self.signature.contains(&Sort::Type(ty)) || self.result == Some(Sort::Type(ty))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    pub types: Vec<TypeDecl>,
    pub symbols: Vec<SymbolDecl>,
}

impl Vocabulary {
    pub fn type_id(&self, name: &str) -> Option<TypeId> {
        self.types.iter().position(|t| t.name == name).map(TypeId)
    }

    pub fn symbol_id(&self, name: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|s| s.name == name).map(SymbolId)
    }

    pub fn symbol(&self, id: SymbolId) -> &SymbolDecl {
        &self.symbols[id.0]
    }

    pub fn type_name(&self, id: TypeId) -> &str {
        &self.types[id.0].name
    }

    pub fn var_symbols(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_var())
            .map(|(i, _)| SymbolId(i))
    }
}

/// Dense table over the argument product of a symbol.
///
/// Tuples are laid out in row-major order over the declared domain order,
/// so the last argument varies fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table {
    Relation(Vec<bool>),
    /// Result codes: element codes for typed results, the integer for `int`.
    Function(Vec<i64>),
}

impl Table {
    pub fn len(&self) -> usize {
        match self {
            Table::Relation(v) => v.len(),
            Table::Function(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialStructure {
    /// One domain per declared type, indexed by [`TypeId`].
    pub type_domains: Vec<Domain>,
    /// One entry per declared symbol; `Some` exactly for interpreted symbols.
    pub tables: Vec<Option<Table>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// A quantified variable together with the type it ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binder {
    pub name: String,
    pub ty: TypeId,
}

/// Reference to a bound variable by nesting depth (0 = outermost binder).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarRef {
    pub name: String,
    pub level: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(VarRef),
    Elem(TypeId, u32),
    Int(i64),
    App(SymbolId, Vec<Term>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    /// Sum of `body` over the binder product, filtered by `guard`.
    Sum {
        body: Box<Term>,
        binders: Vec<Binder>,
        guard: Option<Box<Formula>>,
    },
    Count {
        binder: Binder,
        guard: Box<Formula>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    Forall,
    Exists,
    /// Exactly one witness.
    Exists1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn is_order(self) -> bool {
        !matches!(self, CmpOp::Eq | CmpOp::Ne)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Quant(Quantifier, Binder, Box<Formula>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Cmp(CmpOp, Term, Term),
    Pred(SymbolId, Vec<Term>),
    /// Every element of `ty` is reachable from `start` over the binary
    /// relation `relation` (least fixpoint).
    Reachable {
        start: Term,
        relation: SymbolId,
        ty: TypeId,
    },
}

/// A model optimization problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mop {
    pub name: String,
    pub vocabulary: Vocabulary,
    pub structure: PartialStructure,
    pub theory: Vec<Formula>,
    /// The term to minimize. For `Maximize` models this is `0 - t` where
    /// `t` is the term the user wrote.
    pub objective: Term,
    pub sense: Sense,
}

/// Number of total assignments, or an overflow marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceSize {
    Exact(u128),
    Overflow,
}

impl SpaceSize {
    pub fn fits(self, bound: u128) -> bool {
        matches!(self, SpaceSize::Exact(n) if n <= bound)
    }
}

impl fmt::Display for SpaceSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSize::Exact(n) => write!(f, "{n}"),
            SpaceSize::Overflow => f.write_str("overflow"),
        }
    }
}

impl Mop {
    pub fn domain(&self, ty: TypeId) -> &Domain {
        &self.structure.type_domains[ty.0]
    }

    pub fn symbol(&self, id: SymbolId) -> &SymbolDecl {
        self.vocabulary.symbol(id)
    }

    pub fn sort_size(&self, sort: Sort) -> Option<usize> {
        match sort {
            Sort::Type(t) => Some(self.domain(t).len()),
            Sort::Int => None,
        }
    }

    /// Sizes of each argument position of `sym`.
    pub fn dims(&self, sym: SymbolId) -> Vec<usize> {
        self.symbol(sym)
            .signature
            .iter()
            .map(|s| self.sort_size(*s).unwrap_or(0))
            .collect()
    }

    /// Number of tuples in the argument product of `sym`.
    pub fn table_len(&self, sym: SymbolId) -> usize {
        self.dims(sym).iter().product()
    }

    /// Number of values a single table cell of var symbol `sym` can take.
    pub fn cell_arity(&self, sym: SymbolId) -> usize {
        let decl = self.symbol(sym);
        match decl.result {
            None => 2,
            Some(s) => self.sort_size(s).unwrap_or(0),
        }
    }

    pub fn var_symbols(&self) -> Vec<SymbolId> {
        self.vocabulary.var_symbols().collect()
    }

    /// The objective term as written by the user (the negation applied to
    /// `maximize` objectives is stripped).
    pub fn user_objective(&self) -> &Term {
        match (self.sense, &self.objective) {
            (Sense::Maximize, Term::Sub(zero, t)) if **zero == Term::Int(0) => t,
            _ => &self.objective,
        }
    }

    /// Build the internal minimization term for a user objective.
    pub fn internal_objective(sense: Sense, user: Term) -> Term {
        match sense {
            Sense::Minimize => user,
            Sense::Maximize => Term::Sub(Box::new(Term::Int(0)), Box::new(user)),
        }
    }

    /// Converts an internal (minimized) objective value to the user's sense.
    pub fn report_value(&self, internal: i64) -> i64 {
        match self.sense {
            Sense::Minimize => internal,
            Sense::Maximize => -internal,
        }
    }

    /// Exact number of total assignments to the var symbols, or overflow
    /// once the count exceeds `bound`.
    pub fn assignment_space_size_bounded(&self, bound: u128) -> SpaceSize {
        let mut total: u128 = 1;
        for sym in self.vocabulary.var_symbols() {
            let cells = self.table_len(sym) as u32;
            let base = self.cell_arity(sym) as u128;
            for _ in 0..cells {
                total = match total.checked_mul(base) {
                    Some(t) if t <= bound => t,
                    Some(_) | None => return SpaceSize::Overflow,
                };
            }
            if base == 0 && cells > 0 {
                return SpaceSize::Exact(0);
            }
        }
        SpaceSize::Exact(total)
    }

    pub fn assignment_space_size(&self) -> SpaceSize {
        self.assignment_space_size_bounded(DEFAULT_SPACE_BOUND)
    }

    /// All total assignments in lexicographic order over the var-symbol
    /// cells (symbols in declaration order, tuples in table order, values
    /// in domain order; the last cell varies fastest).
    pub fn enumerate_assignments(&self) -> Result<Assignments<'_>, crate::Error> {
        self.enumerate_assignments_bounded(DEFAULT_SPACE_BOUND)
    }

    pub fn enumerate_assignments_bounded(
        &self,
        bound: u128,
    ) -> Result<Assignments<'_>, crate::Error> {
        match self.assignment_space_size_bounded(bound) {
            SpaceSize::Overflow => Err(crate::Error::SpaceOverflow { bound }),
            SpaceSize::Exact(0) => Ok(Assignments {
                mop: self,
                layout: CellLayout::new(self),
                digits: Vec::new(),
                done: true,
            }),
            SpaceSize::Exact(_) => {
                let layout = CellLayout::new(self);
                let digits = vec![0; layout.cells.len()];
                Ok(Assignments {
                    mop: self,
                    layout,
                    digits,
                    done: false,
                })
            }
        }
    }
}

/// Flattened list of all var-symbol table cells.
#[derive(Clone, Debug)]
pub(crate) struct CellLayout {
    /// `(symbol, tuple index, number of values)` for every cell.
    pub cells: Vec<(SymbolId, usize, usize)>,
}

impl CellLayout {
    pub fn new(mop: &Mop) -> Self {
        let mut cells = Vec::new();
        for sym in mop.var_symbols() {
            let arity = mop.cell_arity(sym);
            for idx in 0..mop.table_len(sym) {
                cells.push((sym, idx, arity));
            }
        }
        CellLayout { cells }
    }

    /// Builds an assignment from one value digit per cell.
    pub fn assemble(&self, mop: &Mop, digits: &[u32]) -> Assignment {
        let mut a = Assignment::empty(mop);
        for (&(sym, idx, _), &d) in self.cells.iter().zip(digits) {
            a.set_cell(sym, idx, d as i64);
        }
        a
    }
}

/// Iterator over every total assignment of a [`Mop`].
pub struct Assignments<'a> {
    mop: &'a Mop,
    layout: CellLayout,
    digits: Vec<u32>,
    done: bool,
}

impl Iterator for Assignments<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let out = self.layout.assemble(self.mop, &self.digits);
        // odometer step, last cell fastest
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if (self.digits[i] as usize) < self.layout.cells[i].2 {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

/// Interpretations for every var symbol of a [`Mop`].
///
/// `tables` is indexed by [`SymbolId`]; entries for interpreted symbols are
/// `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    pub tables: Vec<Option<Table>>,
}

impl Assignment {
    /// The all-zero assignment: every predicate empty and every function
    /// mapping to the first element of its result type.
    pub fn empty(mop: &Mop) -> Self {
        let tables = mop
            .vocabulary
            .symbols
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if !s.is_var() {
                    return None;
                }
                let n = mop.table_len(SymbolId(i));
                Some(if s.is_predicate() {
                    Table::Relation(vec![false; n])
                } else {
                    Table::Function(vec![0; n])
                })
            })
            .collect();
        Assignment { tables }
    }

    /// A uniformly random total assignment.
    pub fn random<R: rand::Rng + ?Sized>(mop: &Mop, rng: &mut R) -> Self {
        let mut a = Assignment::empty(mop);
        for sym in mop.var_symbols() {
            let k = mop.cell_arity(sym) as i64;
            for idx in 0..mop.table_len(sym) {
                a.set_cell(sym, idx, rng.gen_range(0..k));
            }
        }
        a
    }

    pub fn table(&self, sym: SymbolId) -> Option<&Table> {
        self.tables.get(sym.0).and_then(|t| t.as_ref())
    }

    /// Cell value as a code: 0/1 for relations.
    pub fn cell(&self, sym: SymbolId, idx: usize) -> i64 {
        match self.table(sym).expect("var symbol table") {
            Table::Relation(v) => v[idx] as i64,
            Table::Function(v) => v[idx],
        }
    }

    pub fn set_cell(&mut self, sym: SymbolId, idx: usize, value: i64) {
        match self.tables[sym.0].as_mut().expect("var symbol table") {
            Table::Relation(v) => v[idx] = value != 0,
            Table::Function(v) => v[idx] = value,
        }
    }
}

impl Formula {
    /// Adds every symbol occurring in the formula to `out`.
    pub fn collect_symbols(&self, out: &mut BTreeSet<SymbolId>) {
        match self {
            Formula::Quant(_, _, body) | Formula::Not(body) => body.collect_symbols(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.collect_symbols(out);
                r.collect_symbols(out);
            }
            Formula::Cmp(_, l, r) => {
                l.collect_symbols(out);
                r.collect_symbols(out);
            }
            Formula::Pred(sym, args) => {
                out.insert(*sym);
                args.iter().for_each(|a| a.collect_symbols(out));
            }
            Formula::Reachable {
                start, relation, ..
            } => {
                out.insert(*relation);
                start.collect_symbols(out);
            }
        }
    }
}

impl Term {
    /// Adds every symbol occurring in the term to `out`.
    pub fn collect_symbols(&self, out: &mut BTreeSet<SymbolId>) {
        match self {
            Term::Var(_) | Term::Elem(..) | Term::Int(_) => {}
            Term::App(sym, args) => {
                out.insert(*sym);
                args.iter().for_each(|a| a.collect_symbols(out));
            }
            Term::Add(l, r) | Term::Sub(l, r) => {
                l.collect_symbols(out);
                r.collect_symbols(out);
            }
            Term::Sum { body, guard, .. } => {
                body.collect_symbols(out);
                if let Some(g) = guard {
                    g.collect_symbols(out);
                }
            }
            Term::Count { guard, .. } => guard.collect_symbols(out),
        }
    }

    pub fn symbols(&self) -> BTreeSet<SymbolId> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }
}

/// Row-major tuple index of `codes` over `dims`.
pub fn tuple_index(dims: &[usize], codes: &[u32]) -> usize {
    let mut idx = 0usize;
    for (d, c) in dims.iter().zip(codes) {
        idx = idx * d + *c as usize;
    }
    idx
}

/// Inverse of [`tuple_index`].
pub fn tuple_codes(dims: &[usize], mut idx: usize) -> Vec<u32> {
    let mut out = vec![0u32; dims.len()];
    for (slot, d) in out.iter_mut().zip(dims).rev() {
        *slot = (idx % d) as u32;
        idx /= d;
    }
    out
}
