use num_bigint::BigInt;

use super::{DslError, Span};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Num(BigInt),
    Arrow,
    Punct(char),
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{}`", s),
            Tok::Num(n) => write!(f, "`{}`", n),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Punct(c) => write!(f, "`{}`", c),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const PUNCT: &str = "{}[](),;:=+-*/^@>";

/// Splits source text into tokens; `#` starts a comment running to end of line.
pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>, DslError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
            }
            col += s.len();
            out.push((Tok::Num(s.parse().expect("digits")), span));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
            }
            col += s.len();
            out.push((Tok::Ident(s), span));
            continue;
        }
        chars.next();
        col += 1;
        if c == '-' && chars.peek() == Some(&'>') {
            chars.next();
            col += 1;
            out.push((Tok::Arrow, span));
            continue;
        }
        if PUNCT.contains(c) {
            out.push((Tok::Punct(c), span));
            continue;
        }
        return Err(DslError::Syntax {
            span,
            msg: format!("unexpected character `{}`", c),
        });
    }
    out.push((Tok::Eof, Span { line, col }));
    Ok(out)
}
