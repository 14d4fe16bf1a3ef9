//! Formula and term evaluation over a finite structure.
//!
//! Evaluation is three-valued internally so the exact solver can test
//! constraints against partially filled var tables: a cell that is not yet
//! decided makes everything depending on it [`Tri::Unknown`]. Over a total
//! [`Assignment`] the result is always two-valued.

use crate::model::{
    Assignment, CmpOp, Formula, Mop, Quantifier, Sort, SymbolId, Table, Term, TypeId,
};
use crate::{Error, Result};

/// A runtime value: an integer, or an element of a label-typed domain.
///
/// Elements of interval types evaluate to their integer value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Int(i64),
    Elem(TypeId, u32),
}

impl Value {
    pub fn as_int(self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(v),
            Value::Elem(..) => None,
        }
    }
}

/// Bindings of the quantified variables in scope, outermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Env {
    bindings: Vec<(String, Value)>,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, value: Value) {
        self.bindings.push((name.into(), value));
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

/// Kleene truth value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    False,
    True,
    Unknown,
}

impl Tri {
    fn from_bool(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    fn not(self) -> Self {
        match self {
            Tri::False => Tri::True,
            Tri::True => Tri::False,
            Tri::Unknown => Tri::Unknown,
        }
    }

    fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    fn or(self, other: Tri) -> Tri {
        self.not().and(other.not()).not()
    }
}

/// Source of var-symbol cell values.
pub(crate) trait Interp {
    fn var_cell(&self, sym: SymbolId, idx: usize) -> Option<i64>;
}

impl Interp for Assignment {
    fn var_cell(&self, sym: SymbolId, idx: usize) -> Option<i64> {
        Some(self.cell(sym, idx))
    }
}

/// Var tables with undecided cells, used during backtracking.
#[derive(Clone, Debug)]
pub(crate) struct PartialAssignment {
    pub cells: Vec<Option<Vec<Option<i64>>>>,
}

impl PartialAssignment {
    pub fn new(mop: &Mop) -> Self {
        let cells = mop
            .vocabulary
            .symbols
            .iter()
            .enumerate()
            .map(|(i, s)| s.is_var().then(|| vec![None; mop.table_len(SymbolId(i))]))
            .collect();
        PartialAssignment { cells }
    }

    pub fn set(&mut self, sym: SymbolId, idx: usize, value: Option<i64>) {
        self.cells[sym.0].as_mut().expect("var symbol")[idx] = value;
    }

    pub fn to_assignment(&self, mop: &Mop) -> Assignment {
        let mut a = Assignment::empty(mop);
        for (i, t) in self.cells.iter().enumerate() {
            if let Some(t) = t {
                for (idx, v) in t.iter().enumerate() {
                    a.set_cell(SymbolId(i), idx, v.expect("total partial assignment"));
                }
            }
        }
        a
    }
}

impl Interp for PartialAssignment {
    fn var_cell(&self, sym: SymbolId, idx: usize) -> Option<i64> {
        self.cells[sym.0].as_ref().and_then(|t| t[idx])
    }
}

pub(crate) fn decode(mop: &Mop, sort: Sort, code: i64) -> Value {
    match sort {
        Sort::Int => Value::Int(code),
        Sort::Type(t) => match mop.domain(t) {
            crate::model::Domain::Range { lo, .. } => Value::Int(lo + code),
            crate::model::Domain::Labels(_) => Value::Elem(t, code as u32),
        },
    }
}

pub(crate) fn encode(mop: &Mop, ty: TypeId, value: Value) -> Result<u32> {
    match (mop.domain(ty), value) {
        (crate::model::Domain::Range { lo, hi }, Value::Int(v)) => {
            if v < *lo || v > *hi {
                Err(Error::OutOfDomain {
                    ty: mop.vocabulary.type_name(ty).to_string(),
                    value: v,
                })
            } else {
                Ok((v - lo) as u32)
            }
        }
        (_, Value::Elem(_, c)) => Ok(c),
        (_, Value::Int(v)) => Err(Error::OutOfDomain {
            ty: mop.vocabulary.type_name(ty).to_string(),
            value: v,
        }),
    }
}

pub(crate) struct Evaluator<'a, I: Interp> {
    mop: &'a Mop,
    interp: &'a I,
    env: Vec<Value>,
}

impl<'a, I: Interp> Evaluator<'a, I> {
    pub fn new(mop: &'a Mop, interp: &'a I) -> Self {
        Evaluator {
            mop,
            interp,
            env: Vec::new(),
        }
    }

    fn with_env(mop: &'a Mop, interp: &'a I, env: &Env) -> Self {
        Evaluator {
            mop,
            interp,
            env: env.bindings.iter().map(|(_, v)| *v).collect(),
        }
    }

    fn cell(&self, sym: SymbolId, idx: usize) -> Option<i64> {
        match &self.mop.structure.tables[sym.0] {
            Some(Table::Relation(v)) => Some(v[idx] as i64),
            Some(Table::Function(v)) => Some(v[idx]),
            None => self.interp.var_cell(sym, idx),
        }
    }

    /// Table index for an application, or `None` if an argument is unknown.
    fn index(&mut self, sym: SymbolId, args: &[Term]) -> Result<Option<usize>> {
        let decl = self.mop.symbol(sym);
        let mut idx = 0usize;
        for (arg, sort) in args.iter().zip(&decl.signature) {
            let Some(v) = self.term(arg)? else {
                return Ok(None);
            };
            let Sort::Type(ty) = *sort else {
                unreachable!("integer argument positions are rejected by validation")
            };
            let code = encode(self.mop, ty, v)?;
            idx = idx * self.mop.domain(ty).len() + code as usize;
        }
        Ok(Some(idx))
    }

    fn domain_values(&self, ty: TypeId) -> impl Iterator<Item = Value> + '_ {
        let n = self.mop.domain(ty).len();
        (0..n).map(move |c| decode(self.mop, Sort::Type(ty), c as i64))
    }

    pub fn formula(&mut self, f: &Formula) -> Result<Tri> {
        Ok(match f {
            Formula::Quant(q, binder, body) => {
                let n = self.mop.domain(binder.ty).len();
                let mut witnesses = 0usize;
                let mut unknown = false;
                let mut out = None;
                for c in 0..n {
                    let v = decode(self.mop, Sort::Type(binder.ty), c as i64);
                    self.env.push(v);
                    let r = self.formula(body);
                    self.env.pop();
                    match (q, r?) {
                        (Quantifier::Forall, Tri::False) => {
                            out = Some(Tri::False);
                            break;
                        }
                        (Quantifier::Exists, Tri::True) => {
                            out = Some(Tri::True);
                            break;
                        }
                        (Quantifier::Exists1, Tri::True) => {
                            witnesses += 1;
                            if witnesses > 1 {
                                out = Some(Tri::False);
                                break;
                            }
                        }
                        (_, Tri::Unknown) => unknown = true,
                        _ => {}
                    }
                }
                match (out, q) {
                    (Some(t), _) => t,
                    (None, _) if unknown => Tri::Unknown,
                    (None, Quantifier::Forall) => Tri::True,
                    (None, Quantifier::Exists) => Tri::False,
                    (None, Quantifier::Exists1) => Tri::from_bool(witnesses == 1),
                }
            }
            Formula::Not(g) => self.formula(g)?.not(),
            Formula::And(l, r) => {
                let a = self.formula(l)?;
                if a == Tri::False {
                    Tri::False
                } else {
                    a.and(self.formula(r)?)
                }
            }
            Formula::Or(l, r) => {
                let a = self.formula(l)?;
                if a == Tri::True {
                    Tri::True
                } else {
                    a.or(self.formula(r)?)
                }
            }
            Formula::Implies(l, r) => {
                let a = self.formula(l)?;
                if a == Tri::False {
                    Tri::True
                } else {
                    a.not().or(self.formula(r)?)
                }
            }
            Formula::Iff(l, r) => {
                let a = self.formula(l)?;
                let b = self.formula(r)?;
                match (a, b) {
                    (Tri::Unknown, _) | (_, Tri::Unknown) => Tri::Unknown,
                    _ => Tri::from_bool(a == b),
                }
            }
            Formula::Cmp(op, l, r) => {
                let (Some(a), Some(b)) = (self.term(l)?, self.term(r)?) else {
                    return Ok(Tri::Unknown);
                };
                Tri::from_bool(compare(*op, a, b))
            }
            Formula::Pred(sym, args) => match self.index(*sym, args)? {
                None => Tri::Unknown,
                Some(idx) => match self.cell(*sym, idx) {
                    None => Tri::Unknown,
                    Some(v) => Tri::from_bool(v != 0),
                },
            },
            Formula::Reachable {
                start,
                relation,
                ty,
            } => {
                let Some(start) = self.term(start)? else {
                    return Ok(Tri::Unknown);
                };
                let start = encode(self.mop, *ty, start)? as usize;
                self.reachable(start, *relation, *ty)
            }
        })
    }

    fn reachable(&self, start: usize, rel: SymbolId, ty: TypeId) -> Tri {
        let n = self.mop.domain(ty).len();
        let cover = |edge: &dyn Fn(Option<i64>) -> bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![start];
            seen[start] = true;
            let mut count = 1;
            while let Some(x) = stack.pop() {
                for y in 0..n {
                    if !seen[y] && edge(self.cell(rel, x * n + y)) {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            count == n
        };
        if cover(&|c| c == Some(1)) {
            Tri::True
        } else if !cover(&|c| c != Some(0)) {
            Tri::False
        } else {
            Tri::Unknown
        }
    }

    pub fn term(&mut self, t: &Term) -> Result<Option<Value>> {
        Ok(match t {
            Term::Var(v) => Some(self.env[v.level]),
            Term::Elem(ty, c) => Some(decode(self.mop, Sort::Type(*ty), *c as i64)),
            Term::Int(v) => Some(Value::Int(*v)),
            Term::App(sym, args) => {
                let Some(idx) = self.index(*sym, args)? else {
                    return Ok(None);
                };
                let sort = self.mop.symbol(*sym).result.expect("function symbol");
                self.cell(*sym, idx).map(|c| decode(self.mop, sort, c))
            }
            Term::Add(l, r) | Term::Sub(l, r) => {
                let (Some(a), Some(b)) = (self.term(l)?, self.term(r)?) else {
                    return Ok(None);
                };
                let (a, b) = (int_of(a), int_of(b));
                let v = if matches!(t, Term::Add(..)) {
                    a.checked_add(b)
                } else {
                    a.checked_sub(b)
                };
                Some(Value::Int(v.ok_or(Error::Overflow)?))
            }
            Term::Sum {
                body,
                binders,
                guard,
            } => {
                let tys: Vec<TypeId> = binders.iter().map(|b| b.ty).collect();
                let mut total = Some(0i64);
                self.product(&tys, &mut |ev| {
                    let keep = match guard {
                        Some(g) => ev.formula(g)?,
                        None => Tri::True,
                    };
                    match keep {
                        Tri::False => {}
                        Tri::Unknown => total = None,
                        Tri::True => match ev.term(body)? {
                            None => total = None,
                            Some(v) => {
                                if let Some(acc) = total {
                                    total = Some(
                                        acc.checked_add(int_of(v)).ok_or(Error::Overflow)?,
                                    );
                                }
                            }
                        },
                    }
                    Ok(())
                })?;
                total.map(Value::Int)
            }
            Term::Count { binder, guard } => {
                let mut total = Some(0i64);
                for v in self.domain_values(binder.ty).collect::<Vec<_>>() {
                    self.env.push(v);
                    let r = self.formula(guard);
                    self.env.pop();
                    match r? {
                        Tri::True => total = total.map(|t| t + 1),
                        Tri::Unknown => total = None,
                        Tri::False => {}
                    }
                }
                total.map(Value::Int)
            }
        })
    }

    /// Calls `f` once per binding of `tys` in canonical order.
    fn product(
        &mut self,
        tys: &[TypeId],
        f: &mut dyn FnMut(&mut Self) -> Result<()>,
    ) -> Result<()> {
        let Some((&first, rest)) = tys.split_first() else {
            return f(self);
        };
        let n = self.mop.domain(first).len();
        for c in 0..n {
            let v = decode(self.mop, Sort::Type(first), c as i64);
            self.env.push(v);
            let r = self.product(rest, f);
            self.env.pop();
            r?;
        }
        Ok(())
    }
}

fn int_of(v: Value) -> i64 {
    match v {
        Value::Int(i) => i,
        Value::Elem(_, c) => c as i64,
    }
}

fn compare(op: CmpOp, a: Value, b: Value) -> bool {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => match op {
            CmpOp::Eq => x == y,
            CmpOp::Ne => x != y,
            CmpOp::Lt => x < y,
            CmpOp::Le => x <= y,
            CmpOp::Gt => x > y,
            CmpOp::Ge => x >= y,
        },
        _ => match op {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            _ => false,
        },
    }
}

fn two_valued(t: Tri) -> bool {
    match t {
        Tri::True => true,
        Tri::False => false,
        Tri::Unknown => unreachable!("total assignments evaluate two-valued"),
    }
}

/// Truth value of `f` in the structure extended by `a`, with `env` binding
/// the free variables of `f`.
pub fn eval_formula(f: &Formula, mop: &Mop, a: &Assignment, env: &Env) -> Result<bool> {
    Evaluator::with_env(mop, a, env).formula(f).map(two_valued)
}

pub fn eval_term(t: &Term, mop: &Mop, a: &Assignment, env: &Env) -> Result<Value> {
    Evaluator::with_env(mop, a, env)
        .term(t)
        .map(|v| v.expect("total assignments evaluate every term"))
}

/// Whether `a` satisfies every formula of the theory.
pub fn check_model(mop: &Mop, a: &Assignment) -> Result<bool> {
    let mut ev = Evaluator::new(mop, a);
    for f in &mop.theory {
        if !two_valued(ev.formula(f)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Objective value of `a` in the model's internal minimization sense.
pub(crate) fn internal_objective<I: Interp>(mop: &Mop, a: &I) -> Result<i64> {
    let v = Evaluator::new(mop, a)
        .term(&mop.objective)?
        .expect("total assignments evaluate every term");
    Ok(int_of(v))
}

/// Objective value of `a`, reported in the user's sense.
pub fn objective_value(mop: &Mop, a: &Assignment) -> Result<i64> {
    internal_objective(mop, a).map(|v| mop.report_value(v))
}

/// Conjunction of the theory over a partial assignment.
pub(crate) fn check_partial(mop: &Mop, p: &PartialAssignment, only: Option<&[usize]>) -> Result<Tri> {
    let mut ev = Evaluator::new(mop, p);
    let mut out = Tri::True;
    let mut check = |i: usize, ev: &mut Evaluator<'_, PartialAssignment>| -> Result<bool> {
        match ev.formula(&mop.theory[i])? {
            Tri::False => Ok(true),
            Tri::Unknown => {
                out = Tri::Unknown;
                Ok(false)
            }
            Tri::True => Ok(false),
        }
    };
    match only {
        Some(ids) => {
            for &i in ids {
                if check(i, &mut ev)? {
                    return Ok(Tri::False);
                }
            }
        }
        None => {
            for i in 0..mop.theory.len() {
                if check(i, &mut ev)? {
                    return Ok(Tri::False);
                }
            }
        }
    }
    Ok(out)
}
