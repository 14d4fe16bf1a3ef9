//! Canonical pretty-printer; its output parses back to an equal [`Mop`].

use std::fmt::Write;

use crate::model::{
    tuple_codes, Binding, Domain, Formula, Mop, Quantifier, Sense, Sort, SymbolId, SymbolKind,
    Table, Term,
};

pub fn format_model(mop: &Mop) -> String {
    let mut out = String::new();
    let voc = &mop.vocabulary;
    writeln!(out, "mop {} {{", mop.name).unwrap();
    for (i, t) in voc.types.iter().enumerate() {
        let dom = match &mop.structure.type_domains[i] {
            Domain::Labels(l) => format!("{{{}}}", l.join(", ")),
            Domain::Range { lo, hi } => format!("{lo}..{hi}"),
        };
        writeln!(out, "  type {} = {dom};", t.name).unwrap();
    }
    for s in &voc.symbols {
        let var = if s.binding == Binding::Var { "var " } else { "" };
        let kind = match s.kind {
            SymbolKind::Predicate => "pred",
            SymbolKind::Function => "func",
            SymbolKind::Constant => "const",
        };
        let args: Vec<String> = s.signature.iter().map(|x| sort_name(mop, *x)).collect();
        let result = s
            .result
            .map(|r| format!(" -> {}", sort_name(mop, r)))
            .unwrap_or_default();
        writeln!(out, "  {var}{kind} {}({}){result};", s.name, args.join(", ")).unwrap();
    }
    for f in &mop.theory {
        writeln!(out, "  constraint {};", format_formula(mop, f)).unwrap();
    }
    let sense = match mop.sense {
        Sense::Minimize => "minimize",
        Sense::Maximize => "maximize",
    };
    writeln!(out, "  {sense} {};", format_term(mop, mop.user_objective())).unwrap();
    for (i, s) in voc.symbols.iter().enumerate() {
        if let Some(t) = &mop.structure.tables[i] {
            writeln!(out, "  {} = {};", s.name, format_table(mop, SymbolId(i), t)).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn sort_name(mop: &Mop, s: Sort) -> String {
    match s {
        Sort::Int => "int".to_string(),
        Sort::Type(t) => mop.vocabulary.type_name(t).to_string(),
    }
}

pub(crate) fn value_label(mop: &Mop, sort: Sort, code: i64) -> String {
    match sort {
        Sort::Int => code.to_string(),
        Sort::Type(t) => mop.domain(t).label(code as u32),
    }
}

pub(crate) fn tuple_labels(mop: &Mop, sym: SymbolId, idx: usize) -> Vec<String> {
    let decl = mop.symbol(sym);
    let codes = tuple_codes(&mop.dims(sym), idx);
    decl.signature
        .iter()
        .zip(codes)
        .map(|(s, c)| value_label(mop, *s, c as i64))
        .collect()
}

fn format_table(mop: &Mop, sym: SymbolId, t: &Table) -> String {
    let decl = mop.symbol(sym);
    let entries: Vec<String> = match t {
        Table::Relation(bits) => bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| format!("({})", tuple_labels(mop, sym, i).join(", ")))
            .collect(),
        Table::Function(values) => values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let res = value_label(mop, decl.result.expect("function"), *v);
                format!("({}) -> {res}", tuple_labels(mop, sym, i).join(", "))
            })
            .collect(),
    };
    if entries.is_empty() {
        "{}".to_string()
    } else {
        format!("{{{}}}", entries.join(", "))
    }
}

// precedence: 0 quantifier, 1 <=>, 2 =>, 3 |, 4 &, 5 !, 6 atom
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Quant(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(_) => 5,
        _ => 6,
    }
}

pub fn format_formula(mop: &Mop, f: &Formula) -> String {
    let mut out = String::new();
    formula(mop, f, 0, &mut out);
    out
}

fn formula(mop: &Mop, f: &Formula, ctx: u8, out: &mut String) {
    let p = prec(f);
    let wrap = p < ctx;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::Quant(q, b, body) => {
            let kw = match q {
                Quantifier::Forall => "forall",
                Quantifier::Exists => "exists",
                Quantifier::Exists1 => "exists1",
            };
            write!(out, "{kw} {} in {}: ", b.name, mop.vocabulary.type_name(b.ty)).unwrap();
            formula(mop, body, 0, out);
        }
        Formula::Not(g) => {
            out.push('!');
            formula(mop, g, 5, out);
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Iff(l, r) => {
            let op = match f {
                Formula::And(..) => "&",
                Formula::Or(..) => "|",
                _ => "<=>",
            };
            formula(mop, l, p, out);
            write!(out, " {op} ").unwrap();
            formula(mop, r, p + 1, out);
        }
        Formula::Implies(l, r) => {
            formula(mop, l, p + 1, out);
            out.push_str(" => ");
            formula(mop, r, p, out);
        }
        Formula::Cmp(op, l, r) => {
            term(mop, l, 0, out);
            write!(out, " {} ", op.symbol()).unwrap();
            term(mop, r, 0, out);
        }
        Formula::Pred(sym, args) => app(mop, *sym, args, out),
        Formula::Reachable {
            start,
            relation,
            ty,
        } => {
            out.push_str("reachable(");
            term(mop, start, 0, out);
            write!(
                out,
                ", {}, {})",
                mop.symbol(*relation).name,
                mop.vocabulary.type_name(*ty)
            )
            .unwrap();
        }
    }
    if wrap {
        out.push(')');
    }
}

fn app(mop: &Mop, sym: SymbolId, args: &[Term], out: &mut String) {
    out.push_str(&mop.symbol(sym).name);
    if args.is_empty() {
        return;
    }
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        term(mop, a, 0, out);
    }
    out.push(')');
}

pub fn format_term(mop: &Mop, t: &Term) -> String {
    let mut out = String::new();
    term(mop, t, 0, &mut out);
    out
}

fn term(mop: &Mop, t: &Term, ctx: u8, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&v.name),
        Term::Elem(ty, c) => out.push_str(&mop.domain(*ty).label(*c)),
        Term::Int(v) => write!(out, "{v}").unwrap(),
        Term::App(sym, args) => app(mop, *sym, args, out),
        Term::Add(l, r) | Term::Sub(l, r) => {
            let wrap = ctx > 1;
            if wrap {
                out.push('(');
            }
            term(mop, l, 1, out);
            out.push_str(if matches!(t, Term::Add(..)) { " + " } else { " - " });
            term(mop, r, 2, out);
            if wrap {
                out.push(')');
            }
        }
        Term::Sum {
            body,
            binders,
            guard,
        } => {
            out.push_str("sum{");
            term(mop, body, 0, out);
            out.push_str(" | ");
            for (i, b) in binders.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write!(out, "{} in {}", b.name, mop.vocabulary.type_name(b.ty)).unwrap();
            }
            if let Some(g) = guard {
                out.push_str(", ");
                formula(mop, g, 0, out);
            }
            out.push('}');
        }
        Term::Count { binder, guard } => {
            write!(
                out,
                "count{{{} in {} | ",
                binder.name,
                mop.vocabulary.type_name(binder.ty)
            )
            .unwrap();
            formula(mop, guard, 0, out);
            out.push('}');
        }
    }
}
