//! Text front end for `.mop` models and JSON assignments.
//!
//! ```text
//! mop tsp4 {
//!   type City = {c1, c2, c3, c4};
//!   type Index = 0..3;
//!   func Distance(City, City) -> int;
//!   func Next(Index) -> Index;
//!   var func Map(Index) -> City;
//!   constraint forall x in Index: forall y in Index: x != y => Map(x) != Map(y);
//!   minimize sum{ Distance(Map(z), Map(Next(z))) | z in Index };
//!   Next = {(0) -> 1, (1) -> 2, (2) -> 3, (3) -> 0};
//!   ...
//! }
//! ```
//!
//! Parsing happens in three steps: [`lexer`] produces tokens with spans,
//! [`syntax`] builds an untyped expression tree, and [`elaborate`] resolves
//! names and sorts into a [`Mop`].

mod elaborate;
mod format;
mod json;
mod lexer;
mod syntax;

use std::fmt;
use std::path::Path;

pub use format::{format_formula, format_model, format_term};
pub use json::{read_assignment, write_assignment, AssignmentError};

use crate::model::Mop;

/// Position of a token in the source, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Span {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl Span {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        Span {
            line,
            column,
            length: length.max(1),
        }
    }

    /// Span from the start of `self` to the end of `end` when both are on
    /// one line; otherwise `self`.
    pub fn to(self, end: Span) -> Span {
        if end.line == self.line && end.column >= self.column {
            Span::new(self.line, self.column, end.column + end.length - self.column)
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ParseDiagnostic {
    pub span: SourceSpan,
    pub severity: Severity,
    pub message: String,
}

impl ParseDiagnostic {
    pub(crate) fn error(span: Span, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            span: SourceSpan {
                file: "<input>".to_string(),
                line: span.line,
                column: span.column,
                length: span.length,
            },
            severity: Severity::Error,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}:{}: {sev}: {}",
            self.span.file, self.span.line, self.span.column, self.message
        )
    }
}

/// Parses model text. On failure returns every diagnostic found; syntax
/// errors stop at the first one.
pub fn parse_model(text: &str) -> Result<Mop, Vec<ParseDiagnostic>> {
    let toks = lexer::lex(text).map_err(|d| vec![d])?;
    let syn = syntax::Parser::new(toks).model().map_err(|d| vec![d])?;
    elaborate::elaborate(&syn)
}

/// Reads and parses a model file; diagnostics carry the file path.
pub fn parse_model_file(path: &Path) -> Result<Mop, ModelFileError> {
    let text = std::fs::read_to_string(path).map_err(|e| ModelFileError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_model(&text).map_err(|mut ds| {
        for d in &mut ds {
            d.span.file = path.display().to_string();
        }
        ModelFileError::Parse(ds)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelFileError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
    Parse(Vec<ParseDiagnostic>),
}
