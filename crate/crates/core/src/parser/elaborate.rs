//! Name resolution and sort checking from the surface tree to a [`Mop`].

use std::collections::HashMap;

use super::syntax::{BinOp, DataSyn, Decl, DomainSyn, Entry, Expr, ExprKind, KindSyn, Lit, ModelSyn, Name};
use super::{ParseDiagnostic, Span};
use crate::model::{
    Binder, Binding, CmpOp, Domain, Formula, Mop, PartialStructure, Sense, Sort, SymbolDecl,
    SymbolId, SymbolKind, Table, Term, TypeDecl, TypeId, VarRef, Vocabulary,
};

pub(crate) fn elaborate(syn: &ModelSyn) -> Result<Mop, Vec<ParseDiagnostic>> {
    let mut e = Elab::default();
    e.declarations(syn);
    if !e.diags.is_empty() {
        return Err(e.diags);
    }
    e.data(syn);
    if !e.diags.is_empty() {
        return Err(e.diags);
    }
    e.index_elements();

    let mut theory = Vec::new();
    let mut objective: Option<(Sense, Term, Span)> = None;
    for d in &syn.decls {
        match d {
            Decl::Constraint(x) => {
                if let Some(f) = e.formula(x, &mut Vec::new()) {
                    theory.push(f);
                }
            }
            Decl::Objective(sense, x, span) => {
                if let Some((_, _, first)) = &objective {
                    let msg = format!(
                        "duplicate declaration: objective already given at line {}",
                        first.line
                    );
                    e.err(*span, msg);
                    continue;
                }
                if let Some((t, s)) = e.term(x, &mut Vec::new()) {
                    if !e.numeric(s) {
                        e.err(x.span, "type error: objective must be integer-valued");
                    }
                    objective = Some((*sense, t, *span));
                }
            }
            _ => {}
        }
    }
    if objective.is_none() && e.diags.is_empty() {
        e.err(syn.name.span, "missing objective: expected 'minimize' or 'maximize'");
    }
    if !e.diags.is_empty() {
        return Err(e.diags);
    }
    let (sense, user, _) = objective.expect("checked above");
    let domains = e.domains.into_iter().map(|d| d.expect("checked")).collect();
    Ok(Mop {
        name: syn.name.text.clone(),
        vocabulary: e.voc,
        structure: PartialStructure {
            type_domains: domains,
            tables: e.tables,
        },
        theory,
        objective: Mop::internal_objective(sense, user),
        sense,
    })
}

#[derive(Default)]
struct Elab {
    diags: Vec<ParseDiagnostic>,
    voc: Vocabulary,
    domains: Vec<Option<Domain>>,
    type_spans: Vec<Span>,
    tables: Vec<Option<Table>>,
    symbol_spans: Vec<Span>,
    elements: HashMap<String, Vec<(TypeId, u32)>>,
}

type Scope = Vec<(String, TypeId)>;

impl Elab {
    fn err(&mut self, span: Span, msg: impl Into<String>) {
        self.diags.push(ParseDiagnostic::error(span, msg));
    }

    fn domain(&mut self, d: &DomainSyn, ty: &str) -> Option<Domain> {
        match d {
            DomainSyn::Labels(names) => {
                let mut labels: Vec<String> = Vec::new();
                for n in names {
                    if labels.contains(&n.text) {
                        self.err(
                            n.span,
                            format!("duplicate declaration: element `{}` in type `{ty}`", n.text),
                        );
                        return None;
                    }
                    labels.push(n.text.clone());
                }
                Some(Domain::Labels(labels))
            }
            DomainSyn::Range(lo, hi) => Some(Domain::Range { lo: *lo, hi: *hi }),
        }
    }

    fn name_taken(&self, name: &str) -> bool {
        self.voc.type_id(name).is_some() || self.voc.symbol_id(name).is_some() || name == "int"
    }

    fn declarations(&mut self, syn: &ModelSyn) {
        for d in &syn.decls {
            if let Decl::Type { name, domain } = d {
                if self.name_taken(&name.text) {
                    self.err(name.span, format!("duplicate declaration of `{}`", name.text));
                    continue;
                }
                let dom = domain.as_ref().and_then(|x| self.domain(x, &name.text));
                if let Some(Domain::Range { lo, hi }) = dom {
                    if lo > hi {
                        self.err(name.span, format!("type error: empty range {lo}..{hi}"));
                    }
                }
                self.voc.types.push(TypeDecl {
                    name: name.text.clone(),
                });
                self.domains.push(dom);
                self.type_spans.push(name.span);
            }
        }
        for d in &syn.decls {
            let Decl::Symbol {
                var,
                kind,
                name,
                args,
                result,
            } = d
            else {
                continue;
            };
            if self.name_taken(&name.text) {
                self.err(name.span, format!("duplicate declaration of `{}`", name.text));
                continue;
            }
            let mut signature = Vec::new();
            for a in args {
                match self.sort(a) {
                    Some(Sort::Int) => self.err(
                        a.span,
                        "type error: argument positions must range over a finite type",
                    ),
                    Some(s) => signature.push(s),
                    None => {}
                }
            }
            let result = result.as_ref().and_then(|r| self.sort(r).map(|s| (s, r.span)));
            let kind = match kind {
                KindSyn::Pred => SymbolKind::Predicate,
                KindSyn::Func => SymbolKind::Function,
                KindSyn::Const => SymbolKind::Constant,
            };
            match (kind, result) {
                (SymbolKind::Predicate, Some((_, span))) => {
                    self.err(span, "type error: a predicate has no result type")
                }
                (SymbolKind::Function | SymbolKind::Constant, None) => {
                    self.err(name.span, format!("type error: `{}` needs a result type", name.text))
                }
                (SymbolKind::Constant, _) if !args.is_empty() => {
                    self.err(name.span, "type error: constants take no arguments")
                }
                (_, Some((Sort::Int, span))) if *var => self.err(
                    span,
                    "type error: var symbols cannot range over the unbounded integer type",
                ),
                _ => {}
            }
            self.voc.symbols.push(SymbolDecl {
                name: name.text.clone(),
                kind,
                signature,
                result: result.map(|r| r.0),
                binding: if *var {
                    Binding::Var
                } else {
                    Binding::Interpreted
                },
            });
            self.symbol_spans.push(name.span);
        }
    }

    fn sort(&mut self, n: &Name) -> Option<Sort> {
        if n.text == "int" {
            return Some(Sort::Int);
        }
        match self.voc.type_id(&n.text) {
            Some(t) => Some(Sort::Type(t)),
            None => {
                self.err(n.span, format!("unknown identifier `{}`", n.text));
                None
            }
        }
    }

    fn data(&mut self, syn: &ModelSyn) {
        // type domains first, tables need them
        for d in &syn.decls {
            let Decl::Data(name, DataSyn::Domain(dom)) = d else {
                continue;
            };
            match self.voc.type_id(&name.text) {
                Some(t) if self.domains[t.0].is_some() => {
                    self.err(name.span, format!("duplicate declaration of the domain of `{}`", name.text))
                }
                Some(t) => {
                    let dom = self.domain(dom, &name.text);
                    if let Some(Domain::Range { lo, hi }) = dom {
                        if lo > hi {
                            self.err(name.span, format!("type error: empty range {lo}..{hi}"));
                        }
                    }
                    self.domains[t.0] = dom;
                }
                None if self.voc.symbol_id(&name.text).is_some() => self.err(
                    name.span,
                    format!("type error: `{}` is a symbol and needs a table", name.text),
                ),
                None => self.err(name.span, format!("unknown identifier `{}`", name.text)),
            }
        }
        for (i, d) in self.domains.clone().iter().enumerate() {
            if d.is_none() {
                let name = self.voc.types[i].name.clone();
                self.err(self.type_spans[i], format!("type error: type `{name}` has no domain"));
            }
        }
        if !self.diags.is_empty() {
            return;
        }
        self.tables = vec![None; self.voc.symbols.len()];
        for d in &syn.decls {
            let Decl::Data(name, DataSyn::Table(entries)) = d else {
                continue;
            };
            let Some(sym) = self.voc.symbol_id(&name.text) else {
                if self.voc.type_id(&name.text).is_some() {
                    self.err(name.span, format!("type error: `{}` is a type and needs a domain", name.text));
                } else {
                    self.err(name.span, format!("unknown identifier `{}`", name.text));
                }
                continue;
            };
            if self.voc.symbol(sym).is_var() {
                self.err(
                    name.span,
                    format!("type error: var symbol `{}` cannot be given a table", name.text),
                );
                continue;
            }
            if self.tables[sym.0].is_some() {
                self.err(name.span, format!("duplicate declaration of the table of `{}`", name.text));
                continue;
            }
            self.tables[sym.0] = self.table(sym, name, entries);
        }
        let clean = self.diags.is_empty();
        for (i, s) in self.voc.symbols.clone().iter().enumerate() {
            if clean && !s.is_var() && self.tables[i].is_none() {
                self.err(
                    self.symbol_spans[i],
                    format!("type error: missing table for interpreted symbol `{}`", s.name),
                );
            }
        }
    }

    fn lit_code(&mut self, lit: &(Lit, Span), sort: Sort) -> Option<i64> {
        let (l, span) = lit;
        match (sort, l) {
            (Sort::Int, Lit::Int(v)) => Some(*v),
            (Sort::Int, Lit::Ident(s)) => {
                self.err(*span, format!("type error: expected an integer, found `{s}`"));
                None
            }
            (Sort::Type(t), _) => {
                let text = match l {
                    Lit::Ident(s) => s.clone(),
                    Lit::Int(v) => v.to_string(),
                };
                let dom = self.domains[t.0].as_ref().expect("domain");
                let ok = matches!(
                    (dom, l),
                    (Domain::Labels(_), Lit::Ident(_)) | (Domain::Range { .. }, Lit::Int(_))
                );
                match dom.code_of(&text).filter(|_| ok) {
                    Some(c) => Some(c as i64),
                    None => {
                        let ty = self.voc.types[t.0].name.clone();
                        self.err(*span, format!("unknown element `{text}` of type `{ty}`"));
                        None
                    }
                }
            }
        }
    }

    fn table(&mut self, sym: SymbolId, name: &Name, entries: &[Entry]) -> Option<Table> {
        let decl = self.voc.symbol(sym).clone();
        let dims: Vec<usize> = decl
            .signature
            .iter()
            .map(|s| match s {
                Sort::Type(t) => self.domains[t.0].as_ref().expect("domain").len(),
                Sort::Int => 0,
            })
            .collect();
        let n: usize = dims.iter().product();
        let mut cells: Vec<Option<i64>> = vec![None; n];
        let before = self.diags.len();
        for e in entries {
            if e.args.len() != decl.arity() {
                self.err(
                    e.span,
                    format!(
                        "arity mismatch: `{}` takes {} arguments, found {}",
                        decl.name,
                        decl.arity(),
                        e.args.len()
                    ),
                );
                continue;
            }
            let mut idx = 0usize;
            let mut ok = true;
            for ((lit, sort), d) in e.args.iter().zip(&decl.signature).zip(&dims) {
                match self.lit_code(lit, *sort) {
                    Some(c) => idx = idx * d + c as usize,
                    None => ok = false,
                }
            }
            let value = match (&e.result, decl.result) {
                (None, None) => Some(1),
                (Some(r), Some(sort)) => self.lit_code(r, sort),
                (Some((_, span)), None) => {
                    self.err(*span, format!("type error: predicate `{}` entries have no result", decl.name));
                    None
                }
                (None, Some(_)) => {
                    self.err(e.span, format!("type error: function `{}` entries need a result", decl.name));
                    None
                }
            };
            let (true, Some(value)) = (ok, value) else {
                continue;
            };
            if cells[idx].is_some() {
                self.err(e.span, format!("duplicate declaration: repeated entry for `{}`", decl.name));
            }
            cells[idx] = Some(value);
        }
        if self.diags.len() > before {
            return None;
        }
        if decl.is_predicate() {
            Some(Table::Relation(cells.iter().map(|c| c.is_some()).collect()))
        } else if cells.iter().any(|c| c.is_none()) {
            self.err(name.span, format!("type error: partial function table for `{}`", decl.name));
            None
        } else {
            Some(Table::Function(cells.into_iter().map(|c| c.unwrap()).collect()))
        }
    }

    fn index_elements(&mut self) {
        for (t, d) in self.domains.iter().enumerate() {
            if let Some(Domain::Labels(labels)) = d {
                for (c, l) in labels.iter().enumerate() {
                    self.elements
                        .entry(l.clone())
                        .or_default()
                        .push((TypeId(t), c as u32));
                }
            }
        }
    }

    fn numeric(&self, s: Sort) -> bool {
        match s {
            Sort::Int => true,
            Sort::Type(t) => self.domains[t.0].as_ref().is_some_and(|d| d.is_numeric()),
        }
    }

    fn sort_name(&self, s: Sort) -> String {
        match s {
            Sort::Int => "int".to_string(),
            Sort::Type(t) => self.voc.types[t.0].name.clone(),
        }
    }

    fn binder_type(&mut self, n: &Name) -> Option<TypeId> {
        match self.voc.type_id(&n.text) {
            Some(t) => Some(t),
            None => {
                if n.text == "int" {
                    self.err(n.span, "type error: cannot quantify over the unbounded integer type");
                } else {
                    self.err(n.span, format!("unknown identifier `{}`", n.text));
                }
                None
            }
        }
    }

    fn formula(&mut self, e: &Expr, scope: &mut Scope) -> Option<Formula> {
        match &e.kind {
            ExprKind::Quant(q, var, ty, body) => {
                let ty = self.binder_type(ty)?;
                scope.push((var.text.clone(), ty));
                let body = self.formula(body, scope);
                scope.pop();
                Some(Formula::Quant(
                    *q,
                    Binder {
                        name: var.text.clone(),
                        ty,
                    },
                    Box::new(body?),
                ))
            }
            ExprKind::Not(inner) => Some(Formula::Not(Box::new(self.formula(inner, scope)?))),
            ExprKind::Binary(op @ (BinOp::And | BinOp::Or | BinOp::Implies | BinOp::Iff), l, r) => {
                let l = self.formula(l, scope);
                let r = self.formula(r, scope);
                let (l, r) = (Box::new(l?), Box::new(r?));
                Some(match op {
                    BinOp::And => Formula::And(l, r),
                    BinOp::Or => Formula::Or(l, r),
                    BinOp::Implies => Formula::Implies(l, r),
                    _ => Formula::Iff(l, r),
                })
            }
            ExprKind::Binary(op @ (BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge), l, r) => {
                let lt = self.term(l, scope);
                let rt = self.term(r, scope);
                let ((lt, ls), (rt, rs)) = (lt?, rt?);
                let op = match op {
                    BinOp::Eq => CmpOp::Eq,
                    BinOp::Ne => CmpOp::Ne,
                    BinOp::Lt => CmpOp::Lt,
                    BinOp::Le => CmpOp::Le,
                    BinOp::Gt => CmpOp::Gt,
                    _ => CmpOp::Ge,
                };
                let both_numeric = self.numeric(ls) && self.numeric(rs);
                if op.is_order() && !both_numeric {
                    let bad = if self.numeric(ls) { rs } else { ls };
                    let name = self.sort_name(bad);
                    self.err(e.span, format!("type error: order comparison on non-integer type `{name}`"));
                    return None;
                }
                if !op.is_order() && ls != rs && !both_numeric {
                    let (a, b) = (self.sort_name(ls), self.sort_name(rs));
                    self.err(e.span, format!("type error: cannot compare `{a}` with `{b}`"));
                    return None;
                }
                Some(Formula::Cmp(op, lt, rt))
            }
            ExprKind::Call(name, args) => {
                let Some(sym) = self.voc.symbol_id(&name.text) else {
                    self.err(name.span, format!("unknown symbol `{}`", name.text));
                    return None;
                };
                if !self.voc.symbol(sym).is_predicate() {
                    self.err(name.span, "expected formula, found term");
                    return None;
                }
                let args = self.args(sym, name, args, scope)?;
                Some(Formula::Pred(sym, args))
            }
            ExprKind::Ident(text) => {
                let bound = scope.iter().any(|(n, _)| n == text);
                match self.voc.symbol_id(text) {
                    Some(sym) if !bound && self.voc.symbol(sym).is_predicate() => {
                        if self.voc.symbol(sym).arity() != 0 {
                            let n = self.voc.symbol(sym).arity();
                            self.err(e.span, format!("arity mismatch: `{text}` takes {n} arguments, found 0"));
                            return None;
                        }
                        Some(Formula::Pred(sym, Vec::new()))
                    }
                    _ => {
                        if bound || self.voc.symbol_id(text).is_some() || self.elements.contains_key(text) {
                            self.err(e.span, "expected formula, found term");
                        } else {
                            self.err(e.span, format!("unknown identifier `{text}`"));
                        }
                        None
                    }
                }
            }
            ExprKind::Reachable(start, rel, ty) => {
                let ty_id = self.binder_type(ty)?;
                let Some(sym) = self.voc.symbol_id(&rel.text) else {
                    self.err(rel.span, format!("unknown identifier `{}`", rel.text));
                    return None;
                };
                let decl = self.voc.symbol(sym);
                if !decl.is_predicate() || decl.signature != [Sort::Type(ty_id), Sort::Type(ty_id)] {
                    self.err(
                        rel.span,
                        format!("type error: `{}` is not a binary relation over `{}`", rel.text, ty.text),
                    );
                    return None;
                }
                let (st, ss) = self.term(start, scope)?;
                if !self.arg_compatible(Sort::Type(ty_id), ss) {
                    let got = self.sort_name(ss);
                    self.err(start.span, format!("type error: expected `{}`, found `{got}`", ty.text));
                    return None;
                }
                Some(Formula::Reachable {
                    start: st,
                    relation: sym,
                    ty: ty_id,
                })
            }
            ExprKind::Int(_) | ExprKind::Binary(BinOp::Add | BinOp::Sub, ..) | ExprKind::Sum(..) | ExprKind::Count(..) => {
                self.err(e.span, "expected formula, found term");
                None
            }
        }
    }

    fn arg_compatible(&self, want: Sort, got: Sort) -> bool {
        want == got || (self.numeric(want) && self.numeric(got))
    }

    fn args(&mut self, sym: SymbolId, name: &Name, args: &[Expr], scope: &mut Scope) -> Option<Vec<Term>> {
        let decl = self.voc.symbol(sym).clone();
        if decl.arity() != args.len() {
            self.err(
                name.span,
                format!(
                    "arity mismatch: `{}` takes {} arguments, found {}",
                    decl.name,
                    decl.arity(),
                    args.len()
                ),
            );
            return None;
        }
        let mut out = Vec::new();
        let mut ok = true;
        for (a, want) in args.iter().zip(&decl.signature) {
            match self.term(a, scope) {
                Some((t, got)) if self.arg_compatible(*want, got) => out.push(t),
                Some((_, got)) => {
                    let (w, g) = (self.sort_name(*want), self.sort_name(got));
                    self.err(a.span, format!("type error: expected `{w}`, found `{g}`"));
                    ok = false;
                }
                None => ok = false,
            }
        }
        ok.then_some(out)
    }

    fn term(&mut self, e: &Expr, scope: &mut Scope) -> Option<(Term, Sort)> {
        match &e.kind {
            ExprKind::Int(v) => Some((Term::Int(*v), Sort::Int)),
            ExprKind::Ident(text) => {
                if let Some(level) = scope.iter().rposition(|(n, _)| n == text) {
                    let ty = scope[level].1;
                    return Some((
                        Term::Var(VarRef {
                            name: text.clone(),
                            level,
                        }),
                        Sort::Type(ty),
                    ));
                }
                if let Some(sym) = self.voc.symbol_id(text) {
                    let decl = self.voc.symbol(sym);
                    if decl.is_predicate() {
                        self.err(e.span, "expected term, found formula");
                        return None;
                    }
                    if decl.arity() != 0 {
                        let n = decl.arity();
                        self.err(e.span, format!("arity mismatch: `{text}` takes {n} arguments, found 0"));
                        return None;
                    }
                    return Some((Term::App(sym, Vec::new()), decl.result.expect("function")));
                }
                match self.elements.get(text).map(|v| v.as_slice()) {
                    Some([(t, c)]) => Some((Term::Elem(*t, *c), Sort::Type(*t))),
                    Some(_) => {
                        self.err(e.span, format!("type error: ambiguous element `{text}` belongs to several types"));
                        None
                    }
                    None => {
                        self.err(e.span, format!("unknown identifier `{text}`"));
                        None
                    }
                }
            }
            ExprKind::Call(name, args) => {
                let Some(sym) = self.voc.symbol_id(&name.text) else {
                    self.err(name.span, format!("unknown symbol `{}`", name.text));
                    return None;
                };
                if self.voc.symbol(sym).is_predicate() {
                    self.err(name.span, "expected term, found formula");
                    return None;
                }
                let args = self.args(sym, name, args, scope)?;
                let sort = self.voc.symbol(sym).result.expect("function");
                Some((Term::App(sym, args), sort))
            }
            ExprKind::Binary(op @ (BinOp::Add | BinOp::Sub), l, r) => {
                let lt = self.term(l, scope);
                let rt = self.term(r, scope);
                let ((lt, ls), (rt, rs)) = (lt?, rt?);
                for (s, x) in [(ls, l), (rs, r)] {
                    if !self.numeric(s) {
                        let name = self.sort_name(s);
                        self.err(x.span, format!("type error: arithmetic on non-integer type `{name}`"));
                        return None;
                    }
                }
                let (lt, rt) = (Box::new(lt), Box::new(rt));
                Some((
                    if *op == BinOp::Add {
                        Term::Add(lt, rt)
                    } else {
                        Term::Sub(lt, rt)
                    },
                    Sort::Int,
                ))
            }
            ExprKind::Sum(body, binders, guard) => {
                let depth = scope.len();
                let mut bs = Vec::new();
                for (v, ty) in binders {
                    let Some(t) = self.binder_type(ty) else {
                        scope.truncate(depth);
                        return None;
                    };
                    scope.push((v.text.clone(), t));
                    bs.push(Binder {
                        name: v.text.clone(),
                        ty: t,
                    });
                }
                let g = guard.as_ref().map(|g| self.formula(g, scope));
                let b = self.term(body, scope);
                scope.truncate(depth);
                let (b, bsort) = b?;
                if !self.numeric(bsort) {
                    let name = self.sort_name(bsort);
                    self.err(body.span, format!("type error: sum over non-integer type `{name}`"));
                    return None;
                }
                let guard = match g {
                    Some(Some(f)) => Some(Box::new(f)),
                    Some(None) => return None,
                    None => None,
                };
                Some((
                    Term::Sum {
                        body: Box::new(b),
                        binders: bs,
                        guard,
                    },
                    Sort::Int,
                ))
            }
            ExprKind::Count(v, ty, guard) => {
                let t = self.binder_type(ty)?;
                scope.push((v.text.clone(), t));
                let g = self.formula(guard, scope);
                scope.pop();
                Some((
                    Term::Count {
                        binder: Binder {
                            name: v.text.clone(),
                            ty: t,
                        },
                        guard: Box::new(g?),
                    },
                    Sort::Int,
                ))
            }
            ExprKind::Binary(..) | ExprKind::Not(_) | ExprKind::Quant(..) | ExprKind::Reachable(..) => {
                self.err(e.span, "expected term, found formula");
                None
            }
        }
    }
}
