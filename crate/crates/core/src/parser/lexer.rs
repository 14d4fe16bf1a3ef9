use super::{ParseDiagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Bar,
    Amp,
    Bang,
    Implies,
    Iff,
    Arrow,
    DotDot,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    pub fn text(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Bar => "|",
            Tok::Amp => "&",
            Tok::Bang => "!",
            Tok::Implies => "=>",
            Tok::Iff => "<=>",
            Tok::Arrow => "->",
            Tok::DotDot => "..",
            Tok::Ident(_) | Tok::Int(_) | Tok::Eof => "",
        }
    }
}

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseDiagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            match text.parse() {
                Ok(v) => Tok::Int(v),
                Err(_) => {
                    return Err(ParseDiagnostic::error(
                        Span::new(line, col, i - start),
                        "syntax error: integer literal out of range",
                    ))
                }
            }
        } else {
            let next = chars.get(i + 1).copied();
            let next2 = chars.get(i + 2).copied();
            let (tok, len) = match (c, next, next2) {
                ('<', Some('='), Some('>')) => (Tok::Iff, 3),
                ('<', Some('='), _) => (Tok::Le, 2),
                ('<', _, _) => (Tok::Lt, 1),
                ('>', Some('='), _) => (Tok::Ge, 2),
                ('>', _, _) => (Tok::Gt, 1),
                ('=', Some('>'), _) => (Tok::Implies, 2),
                ('=', _, _) => (Tok::Eq, 1),
                ('!', Some('='), _) => (Tok::Ne, 2),
                ('!', _, _) => (Tok::Bang, 1),
                ('-', Some('>'), _) => (Tok::Arrow, 2),
                ('-', _, _) => (Tok::Minus, 1),
                ('.', Some('.'), _) => (Tok::DotDot, 2),
                ('{', _, _) => (Tok::LBrace, 1),
                ('}', _, _) => (Tok::RBrace, 1),
                ('(', _, _) => (Tok::LParen, 1),
                (')', _, _) => (Tok::RParen, 1),
                (',', _, _) => (Tok::Comma, 1),
                (';', _, _) => (Tok::Semi, 1),
                (':', _, _) => (Tok::Colon, 1),
                ('+', _, _) => (Tok::Plus, 1),
                ('|', _, _) => (Tok::Bar, 1),
                ('&', _, _) => (Tok::Amp, 1),
                _ => {
                    return Err(ParseDiagnostic::error(
                        Span::new(line, col, 1),
                        format!("syntax error: unexpected character `{c}`"),
                    ))
                }
            };
            i += len;
            tok
        };
        let len = i - start;
        out.push((tok, Span::new(line, col, len)));
        col += len;
    }
    out.push((Tok::Eof, Span::new(line, col, 1)));
    Ok(out)
}
