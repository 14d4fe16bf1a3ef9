//! Recursive-descent parser producing an untyped surface tree.
//!
//! Formulas and terms share one expression grammar here; the elaborator
//! decides which is which once names are resolved.

use super::lexer::Tok;
use super::{ParseDiagnostic, Span};
use crate::model::{Quantifier, Sense};

#[derive(Clone, Debug)]
pub(crate) struct Name {
    pub text: String,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BinOp {
    And,
    Or,
    Implies,
    Iff,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
}

#[derive(Clone, Debug)]
pub(crate) struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub(crate) enum ExprKind {
    Ident(String),
    Int(i64),
    Call(Name, Vec<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Quant(Quantifier, Name, Name, Box<Expr>),
    Reachable(Box<Expr>, Name, Name),
    Sum(Box<Expr>, Vec<(Name, Name)>, Option<Box<Expr>>),
    Count(Name, Name, Box<Expr>),
}

#[derive(Clone, Debug)]
pub(crate) enum DomainSyn {
    Labels(Vec<Name>),
    Range(i64, i64),
}

#[derive(Clone, Debug)]
pub(crate) enum Lit {
    Ident(String),
    Int(i64),
}

#[derive(Clone, Debug)]
pub(crate) struct Entry {
    pub args: Vec<(Lit, Span)>,
    pub result: Option<(Lit, Span)>,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub(crate) enum DataSyn {
    Table(Vec<Entry>),
    Domain(DomainSyn),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum KindSyn {
    Pred,
    Func,
    Const,
}

#[derive(Clone, Debug)]
pub(crate) enum Decl {
    Type {
        name: Name,
        domain: Option<DomainSyn>,
    },
    Symbol {
        var: bool,
        kind: KindSyn,
        name: Name,
        args: Vec<Name>,
        result: Option<Name>,
    },
    Constraint(Expr),
    Objective(Sense, Expr, Span),
    Data(Name, DataSyn),
}

#[derive(Clone, Debug)]
pub(crate) struct ModelSyn {
    pub name: Name,
    pub decls: Vec<Decl>,
}

pub(crate) struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<T> = Result<T, ParseDiagnostic>;

const KEYWORDS: &[&str] = &[
    "mop", "type", "pred", "func", "const", "var", "constraint", "minimize", "maximize", "forall",
    "exists", "exists1", "in", "reachable", "sum", "count",
];

impl Parser {
    pub fn new(toks: Vec<(Tok, Span)>) -> Self {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(ParseDiagnostic::error(
            self.span(),
            format!("syntax error: expected {expected}, found {}", self.peek().describe()),
        ))
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.error(&format!("`{}`", tok.text()))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<Span> {
        if self.is_kw(kw) {
            Ok(self.bump().1)
        } else {
            self.error(&format!("'{kw}'"))
        }
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let span = self.bump().1;
                Ok(Name { text: s, span })
            }
            _ => self.error("identifier"),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.eat(&Tok::Minus);
        match *self.peek() {
            Tok::Int(v) => {
                self.bump();
                Ok(if neg { -v } else { v })
            }
            _ => self.error("integer"),
        }
    }

    pub fn model(&mut self) -> PResult<ModelSyn> {
        if !self.is_kw("mop") {
            return Err(ParseDiagnostic::error(
                self.span(),
                format!("syntax error: expected 'mop', found {}", self.peek().describe()),
            ));
        }
        self.bump();
        let name = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut decls = Vec::new();
        while *self.peek() != Tok::RBrace {
            if *self.peek() == Tok::Eof {
                return self.error("`}`");
            }
            decls.push(self.decl()?);
        }
        self.bump();
        if *self.peek() != Tok::Eof {
            return self.error("end of input");
        }
        Ok(ModelSyn { name, decls })
    }

    fn decl(&mut self) -> PResult<Decl> {
        let d = if self.is_kw("type") {
            self.bump();
            let name = self.ident()?;
            let domain = if self.eat(&Tok::Eq) {
                Some(self.domain()?)
            } else {
                None
            };
            Decl::Type { name, domain }
        } else if self.is_kw("var") {
            self.bump();
            self.symbol(true)?
        } else if self.is_kw("pred") || self.is_kw("func") || self.is_kw("const") {
            self.symbol(false)?
        } else if self.is_kw("constraint") {
            self.bump();
            Decl::Constraint(self.expr()?)
        } else if self.is_kw("minimize") || self.is_kw("maximize") {
            let sense = if self.is_kw("minimize") {
                Sense::Minimize
            } else {
                Sense::Maximize
            };
            let span = self.bump().1;
            Decl::Objective(sense, self.expr()?, span)
        } else if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Eq {
            let name = self.ident()?;
            self.bump();
            Decl::Data(name, self.data()?)
        } else {
            return self.error("declaration");
        };
        self.expect(Tok::Semi)?;
        Ok(d)
    }

    fn symbol(&mut self, var: bool) -> PResult<Decl> {
        let kind = match self.peek() {
            Tok::Ident(s) if s == "pred" => KindSyn::Pred,
            Tok::Ident(s) if s == "func" => KindSyn::Func,
            Tok::Ident(s) if s == "const" => KindSyn::Const,
            _ => return self.error("'pred', 'func' or 'const'"),
        };
        self.bump();
        let name = self.ident()?;
        let mut args = Vec::new();
        if kind != KindSyn::Const || *self.peek() == Tok::LParen {
            self.expect(Tok::LParen)?;
            if *self.peek() != Tok::RParen {
                args.push(self.ident()?);
                while self.eat(&Tok::Comma) {
                    args.push(self.ident()?);
                }
            }
            self.expect(Tok::RParen)?;
        }
        let result = if self.eat(&Tok::Arrow) {
            Some(self.ident()?)
        } else {
            None
        };
        Ok(Decl::Symbol {
            var,
            kind,
            name,
            args,
            result,
        })
    }

    fn domain(&mut self) -> PResult<DomainSyn> {
        if self.eat(&Tok::LBrace) {
            let mut labels = vec![self.ident()?];
            while self.eat(&Tok::Comma) {
                labels.push(self.ident()?);
            }
            self.expect(Tok::RBrace)?;
            Ok(DomainSyn::Labels(labels))
        } else if matches!(self.peek(), Tok::Int(_) | Tok::Minus) {
            let lo = self.int()?;
            self.expect(Tok::DotDot)?;
            let hi = self.int()?;
            Ok(DomainSyn::Range(lo, hi))
        } else {
            self.error("domain")
        }
    }

    fn data(&mut self) -> PResult<DataSyn> {
        if *self.peek() == Tok::LBrace && matches!(self.peek_at(1), Tok::Ident(_)) {
            return Ok(DataSyn::Domain(self.domain()?));
        }
        if *self.peek() != Tok::LBrace {
            return Ok(DataSyn::Domain(self.domain()?));
        }
        self.bump();
        let mut entries = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(DataSyn::Table(entries));
        }
        loop {
            entries.push(self.entry()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(DataSyn::Table(entries))
    }

    fn lit(&mut self) -> PResult<(Lit, Span)> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok((Lit::Ident(s), span))
            }
            Tok::Int(_) | Tok::Minus => Ok((Lit::Int(self.int()?), span)),
            _ => self.error("element"),
        }
    }

    fn entry(&mut self) -> PResult<Entry> {
        let span = self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            args.push(self.lit()?);
            while self.eat(&Tok::Comma) {
                args.push(self.lit()?);
            }
        }
        self.expect(Tok::RParen)?;
        let result = if self.eat(&Tok::Arrow) {
            Some(self.lit()?)
        } else {
            None
        };
        Ok(Entry { args, result, span })
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.iff()
    }

    fn binary(&mut self, op: BinOp, l: Expr, r: Expr) -> Expr {
        let span = l.span.to(r.span);
        Expr {
            kind: ExprKind::Binary(op, Box::new(l), Box::new(r)),
            span,
        }
    }

    fn iff(&mut self) -> PResult<Expr> {
        let mut l = self.implies()?;
        while self.eat(&Tok::Iff) {
            let r = self.implies()?;
            l = self.binary(BinOp::Iff, l, r);
        }
        Ok(l)
    }

    fn implies(&mut self) -> PResult<Expr> {
        let l = self.or()?;
        if self.eat(&Tok::Implies) {
            let r = self.implies()?;
            return Ok(self.binary(BinOp::Implies, l, r));
        }
        Ok(l)
    }

    fn or(&mut self) -> PResult<Expr> {
        let mut l = self.and()?;
        while self.eat(&Tok::Bar) {
            let r = self.and()?;
            l = self.binary(BinOp::Or, l, r);
        }
        Ok(l)
    }

    fn and(&mut self) -> PResult<Expr> {
        let mut l = self.unary()?;
        while self.eat(&Tok::Amp) {
            let r = self.unary()?;
            l = self.binary(BinOp::And, l, r);
        }
        Ok(l)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Bang {
            let span = self.bump().1;
            let inner = self.unary()?;
            let span = span.to(inner.span);
            return Ok(Expr {
                kind: ExprKind::Not(Box::new(inner)),
                span,
            });
        }
        let q = match self.peek() {
            Tok::Ident(s) if s == "forall" => Some(Quantifier::Forall),
            Tok::Ident(s) if s == "exists" => Some(Quantifier::Exists),
            Tok::Ident(s) if s == "exists1" => Some(Quantifier::Exists1),
            _ => None,
        };
        if let Some(q) = q {
            let span = self.bump().1;
            let var = self.ident()?;
            self.expect_kw("in")?;
            let ty = self.ident()?;
            self.expect(Tok::Colon)?;
            let body = self.expr()?;
            let span = span.to(body.span);
            return Ok(Expr {
                kind: ExprKind::Quant(q, var, ty, Box::new(body)),
                span,
            });
        }
        self.comparison()
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let l = self.additive()?;
        let op = match self.peek() {
            Tok::Eq => BinOp::Eq,
            Tok::Ne => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            _ => return Ok(l),
        };
        self.bump();
        let r = self.additive()?;
        Ok(self.binary(op, l, r))
    }

    fn additive(&mut self) -> PResult<Expr> {
        let mut l = self.primary()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(l),
            };
            self.bump();
            let r = self.primary()?;
            l = self.binary(op, l, r);
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr {
                    kind: ExprKind::Int(v),
                    span,
                })
            }
            Tok::Minus if matches!(self.peek_at(1), Tok::Int(_)) => {
                let v = self.int()?;
                Ok(Expr {
                    kind: ExprKind::Int(v),
                    span: span.to(self.toks[self.pos - 1].1),
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                let end = self.expect(Tok::RParen)?;
                Ok(Expr {
                    kind: inner.kind,
                    span: span.to(end),
                })
            }
            Tok::Ident(s) if s == "reachable" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let start = self.expr()?;
                self.expect(Tok::Comma)?;
                let rel = self.ident()?;
                self.expect(Tok::Comma)?;
                let ty = self.ident()?;
                let end = self.expect(Tok::RParen)?;
                Ok(Expr {
                    kind: ExprKind::Reachable(Box::new(start), rel, ty),
                    span: span.to(end),
                })
            }
            Tok::Ident(s) if s == "sum" => {
                self.bump();
                self.expect(Tok::LBrace)?;
                let body = self.additive()?;
                self.expect(Tok::Bar)?;
                let mut binders = vec![self.binder()?];
                let mut guard = None;
                while self.eat(&Tok::Comma) {
                    let is_binder = matches!(self.peek(), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()))
                        && matches!(self.peek_at(1), Tok::Ident(s) if s == "in");
                    if is_binder {
                        binders.push(self.binder()?);
                    } else {
                        guard = Some(Box::new(self.expr()?));
                        break;
                    }
                }
                let end = self.expect(Tok::RBrace)?;
                Ok(Expr {
                    kind: ExprKind::Sum(Box::new(body), binders, guard),
                    span: span.to(end),
                })
            }
            Tok::Ident(s) if s == "count" => {
                self.bump();
                self.expect(Tok::LBrace)?;
                let (var, ty) = self.binder()?;
                self.expect(Tok::Bar)?;
                let guard = self.expr()?;
                let end = self.expect(Tok::RBrace)?;
                Ok(Expr {
                    kind: ExprKind::Count(var, ty, Box::new(guard)),
                    span: span.to(end),
                })
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = Vec::new();
                    if *self.peek() != Tok::RParen {
                        args.push(self.expr()?);
                        while self.eat(&Tok::Comma) {
                            args.push(self.expr()?);
                        }
                    }
                    let end = self.expect(Tok::RParen)?;
                    let span = name.span.to(end);
                    Ok(Expr {
                        kind: ExprKind::Call(name, args),
                        span,
                    })
                } else {
                    Ok(Expr {
                        kind: ExprKind::Ident(name.text),
                        span: name.span,
                    })
                }
            }
            _ => self.error("formula or term"),
        }
    }

    fn binder(&mut self) -> PResult<(Name, Name)> {
        let var = self.ident()?;
        self.expect_kw("in")?;
        let ty = self.ident()?;
        Ok((var, ty))
    }
}
