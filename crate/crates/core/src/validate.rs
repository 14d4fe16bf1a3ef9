//! Whole-model validation.

use std::collections::HashSet;
use std::fmt;

use crate::model::{Binding, Domain, Formula, Mop, Sense, Sort, SymbolId, SymbolKind, Table, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    DuplicateType(String),
    DuplicateSymbol(String),
    EmptyName,
    EmptyDomain(String),
    DuplicateElement { ty: String, label: String },
    UnknownType(usize),
    UnknownSymbol(usize),
    ArityMismatch { symbol: String, expected: usize, found: usize },
    TypeMismatch(String),
    InfiniteDomain(String),
    MissingTable(String),
    PartialFunctionTable(String),
    MalformedTable(String),
    VarWithTable(String),
    UnboundVariable(String),
    SenseConflict,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateType(n) => write!(f, "duplicate type `{n}`"),
            Diagnostic::DuplicateSymbol(n) => write!(f, "duplicate symbol `{n}`"),
            Diagnostic::EmptyName => f.write_str("empty name"),
            Diagnostic::EmptyDomain(n) => write!(f, "type `{n}` has an empty domain"),
            Diagnostic::DuplicateElement { ty, label } => {
                write!(f, "element `{label}` declared twice in type `{ty}`")
            }
            Diagnostic::UnknownType(i) => write!(f, "unknown type #{i}"),
            Diagnostic::UnknownSymbol(i) => write!(f, "unknown symbol #{i}"),
            Diagnostic::ArityMismatch {
                symbol,
                expected,
                found,
            } => write!(
                f,
                "arity mismatch: `{symbol}` takes {expected} arguments, found {found}"
            ),
            Diagnostic::TypeMismatch(m) => write!(f, "type mismatch: {m}"),
            Diagnostic::InfiniteDomain(n) => {
                write!(f, "symbol `{n}` ranges over the unbounded integer type")
            }
            Diagnostic::MissingTable(n) => write!(f, "interpreted symbol `{n}` has no table"),
            Diagnostic::PartialFunctionTable(n) => write!(f, "partial function table for `{n}`"),
            Diagnostic::MalformedTable(n) => write!(f, "malformed table for `{n}`"),
            Diagnostic::VarWithTable(n) => write!(f, "var symbol with a table: `{n}`"),
            Diagnostic::UnboundVariable(n) => write!(f, "unbound variable `{n}`"),
            Diagnostic::SenseConflict => {
                f.write_str("maximize/minimize conflict: maximize objective is not stored negated")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for d in &self.diagnostics {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

pub fn validate(mop: &Mop) -> ValidationReport {
    let mut v = Validator {
        mop,
        out: Vec::new(),
    };
    v.vocabulary();
    if v.out.is_empty() {
        v.tables();
        for f in &mop.theory {
            v.formula(f, &mut Vec::new());
        }
        match v.term(&mop.objective, &mut Vec::new()) {
            Some(s) if !v.numeric(s) => v.out.push(Diagnostic::TypeMismatch(
                "objective is not integer-valued".into(),
            )),
            _ => {}
        }
        if mop.sense == Sense::Maximize {
            let negated = matches!(&mop.objective, Term::Sub(z, _) if **z == Term::Int(0));
            if !negated {
                v.out.push(Diagnostic::SenseConflict);
            }
        }
    }
    ValidationReport {
        diagnostics: v.out,
    }
}

struct Validator<'a> {
    mop: &'a Mop,
    out: Vec<Diagnostic>,
}

impl Validator<'_> {
    fn vocabulary(&mut self) {
        let voc = &self.mop.vocabulary;
        let mut names = HashSet::new();
        for t in &voc.types {
            if t.name.is_empty() {
                self.out.push(Diagnostic::EmptyName);
            } else if !names.insert(t.name.as_str()) {
                self.out.push(Diagnostic::DuplicateType(t.name.clone()));
            }
        }
        if self.mop.structure.type_domains.len() != voc.types.len() {
            self.out.push(Diagnostic::TypeMismatch(
                "one domain per declared type required".into(),
            ));
            return;
        }
        for (t, d) in voc.types.iter().zip(&self.mop.structure.type_domains) {
            if d.is_empty() {
                self.out.push(Diagnostic::EmptyDomain(t.name.clone()));
            }
            if let Domain::Labels(labels) = d {
                let mut seen = HashSet::new();
                for l in labels {
                    if l.is_empty() {
                        self.out.push(Diagnostic::EmptyName);
                    } else if !seen.insert(l) {
                        self.out.push(Diagnostic::DuplicateElement {
                            ty: t.name.clone(),
                            label: l.clone(),
                        });
                    }
                }
            }
        }
        let mut names = HashSet::new();
        for s in &voc.symbols {
            if s.name.is_empty() {
                self.out.push(Diagnostic::EmptyName);
            } else if !names.insert(s.name.as_str()) {
                self.out.push(Diagnostic::DuplicateSymbol(s.name.clone()));
            }
            for sort in s.signature.iter().chain(s.result.iter()) {
                if let Sort::Type(t) = sort {
                    if t.0 >= voc.types.len() {
                        self.out.push(Diagnostic::UnknownType(t.0));
                    }
                }
            }
            if s.signature.contains(&Sort::Int) {
                self.out.push(Diagnostic::InfiniteDomain(s.name.clone()));
            }
            if s.is_var() && s.result == Some(Sort::Int) {
                self.out.push(Diagnostic::InfiniteDomain(s.name.clone()));
            }
            let shape_ok = match s.kind {
                SymbolKind::Predicate => s.result.is_none(),
                SymbolKind::Function => s.result.is_some(),
                SymbolKind::Constant => s.result.is_some() && s.signature.is_empty(),
            };
            if !shape_ok {
                self.out.push(Diagnostic::TypeMismatch(format!(
                    "malformed signature for `{}`",
                    s.name
                )));
            }
        }
    }

    fn tables(&mut self) {
        let mop = self.mop;
        if mop.structure.tables.len() != mop.vocabulary.symbols.len() {
            self.out.push(Diagnostic::TypeMismatch(
                "one table slot per declared symbol required".into(),
            ));
            return;
        }
        for (i, s) in mop.vocabulary.symbols.iter().enumerate() {
            let table = &mop.structure.tables[i];
            match (s.binding, table) {
                (Binding::Var, Some(_)) => self.out.push(Diagnostic::VarWithTable(s.name.clone())),
                (Binding::Var, None) => {}
                (Binding::Interpreted, None) => {
                    self.out.push(Diagnostic::MissingTable(s.name.clone()))
                }
                (Binding::Interpreted, Some(t)) => {
                    let n = mop.table_len(SymbolId(i));
                    match (t, s.result) {
                        (Table::Relation(v), None) if v.len() == n => {}
                        (Table::Function(v), Some(_)) if v.len() < n => {
                            self.out.push(Diagnostic::PartialFunctionTable(s.name.clone()))
                        }
                        (Table::Function(v), Some(Sort::Int)) if v.len() == n => {}
                        (Table::Function(v), Some(Sort::Type(ty))) if v.len() == n => {
                            let size = mop.domain(ty).len() as i64;
                            if v.iter().any(|c| *c < 0 || *c >= size) {
                                self.out.push(Diagnostic::MalformedTable(s.name.clone()));
                            }
                        }
                        _ => self.out.push(Diagnostic::MalformedTable(s.name.clone())),
                    }
                }
            }
        }
    }

    fn numeric(&self, s: Sort) -> bool {
        match s {
            Sort::Int => true,
            Sort::Type(t) => self.mop.domain(t).is_numeric(),
        }
    }

    fn symbol(&mut self, id: SymbolId) -> Option<&crate::model::SymbolDecl> {
        let s = self.mop.vocabulary.symbols.get(id.0);
        if s.is_none() {
            self.out.push(Diagnostic::UnknownSymbol(id.0));
        }
        s
    }

    fn binder_ok(&mut self, ty: crate::model::TypeId) -> bool {
        if ty.0 >= self.mop.vocabulary.types.len() {
            self.out.push(Diagnostic::UnknownType(ty.0));
            false
        } else {
            true
        }
    }

    fn args(&mut self, id: SymbolId, args: &[Term], scope: &mut Vec<crate::model::TypeId>) {
        let Some(decl) = self.symbol(id).cloned() else {
            return;
        };
        if decl.arity() != args.len() {
            self.out.push(Diagnostic::ArityMismatch {
                symbol: decl.name.clone(),
                expected: decl.arity(),
                found: args.len(),
            });
            return;
        }
        for (arg, want) in args.iter().zip(&decl.signature) {
            if let Some(got) = self.term(arg, scope) {
                if !self.compatible(*want, got) {
                    self.out.push(Diagnostic::TypeMismatch(format!(
                        "argument of `{}` has the wrong type",
                        decl.name
                    )));
                }
            }
        }
    }

    fn compatible(&self, want: Sort, got: Sort) -> bool {
        want == got || (self.numeric(want) && self.numeric(got))
    }

    fn formula(&mut self, f: &Formula, scope: &mut Vec<crate::model::TypeId>) {
        match f {
            Formula::Quant(_, b, body) => {
                if self.binder_ok(b.ty) {
                    scope.push(b.ty);
                    self.formula(body, scope);
                    scope.pop();
                }
            }
            Formula::Not(g) => self.formula(g, scope),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                self.formula(l, scope);
                self.formula(r, scope);
            }
            Formula::Cmp(op, l, r) => {
                let (a, b) = (self.term(l, scope), self.term(r, scope));
                if let (Some(a), Some(b)) = (a, b) {
                    let ok = if op.is_order() || !(a == b) {
                        self.numeric(a) && self.numeric(b)
                    } else {
                        true
                    };
                    if !ok {
                        self.out.push(Diagnostic::TypeMismatch(format!(
                            "operands of `{}` are incompatible",
                            op.symbol()
                        )));
                    }
                }
            }
            Formula::Pred(id, args) => {
                if let Some(decl) = self.symbol(*id) {
                    if !decl.is_predicate() {
                        let m = format!("`{}` is not a predicate", decl.name);
                        self.out.push(Diagnostic::TypeMismatch(m));
                        return;
                    }
                }
                self.args(*id, args, scope);
            }
            Formula::Reachable {
                start,
                relation,
                ty,
            } => {
                if !self.binder_ok(*ty) {
                    return;
                }
                if let Some(decl) = self.symbol(*relation) {
                    let want = vec![Sort::Type(*ty), Sort::Type(*ty)];
                    if !decl.is_predicate() || decl.signature != want {
                        let m = format!("`{}` is not a binary relation over the type", decl.name);
                        self.out.push(Diagnostic::TypeMismatch(m));
                    }
                }
                if let Some(s) = self.term(start, scope) {
                    if !self.compatible(Sort::Type(*ty), s) {
                        self.out
                            .push(Diagnostic::TypeMismatch("reachable start has the wrong type".into()));
                    }
                }
            }
        }
    }

    fn term(&mut self, t: &Term, scope: &mut Vec<crate::model::TypeId>) -> Option<Sort> {
        match t {
            Term::Var(v) => match scope.get(v.level) {
                Some(ty) => Some(Sort::Type(*ty)),
                None => {
                    self.out.push(Diagnostic::UnboundVariable(v.name.clone()));
                    None
                }
            },
            Term::Elem(ty, c) => {
                if !self.binder_ok(*ty) {
                    return None;
                }
                if *c as usize >= self.mop.domain(*ty).len() {
                    self.out
                        .push(Diagnostic::TypeMismatch("element literal out of range".into()));
                }
                Some(Sort::Type(*ty))
            }
            Term::Int(_) => Some(Sort::Int),
            Term::App(id, args) => {
                let decl = self.symbol(*id)?.clone();
                if decl.is_predicate() {
                    self.out.push(Diagnostic::TypeMismatch(format!(
                        "predicate `{}` used as a term",
                        decl.name
                    )));
                    return None;
                }
                self.args(*id, args, scope);
                decl.result
            }
            Term::Add(l, r) | Term::Sub(l, r) => {
                let (a, b) = (self.term(l, scope), self.term(r, scope));
                for s in [a, b].into_iter().flatten() {
                    if !self.numeric(s) {
                        self.out
                            .push(Diagnostic::TypeMismatch("arithmetic on a non-integer term".into()));
                    }
                }
                Some(Sort::Int)
            }
            Term::Sum {
                body,
                binders,
                guard,
            } => {
                let depth = scope.len();
                for b in binders {
                    if !self.binder_ok(b.ty) {
                        scope.truncate(depth);
                        return None;
                    }
                    scope.push(b.ty);
                }
                if let Some(g) = guard {
                    self.formula(g, scope);
                }
                if let Some(s) = self.term(body, scope) {
                    if !self.numeric(s) {
                        self.out
                            .push(Diagnostic::TypeMismatch("sum body is not integer-valued".into()));
                    }
                }
                scope.truncate(depth);
                Some(Sort::Int)
            }
            Term::Count { binder, guard } => {
                if self.binder_ok(binder.ty) {
                    scope.push(binder.ty);
                    self.formula(guard, scope);
                    scope.pop();
                }
                Some(Sort::Int)
            }
        }
    }
}
