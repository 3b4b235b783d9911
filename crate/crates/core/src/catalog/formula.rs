use std::collections::HashMap;

use jetlie_kernel::{Assumptions, Expr, Symbol, Q};
use num_bigint::BigInt;

use crate::error::CoreError;
use crate::jetspace::JetSpace;

/// Reads catalog formulas such as `2*u1_t + u1*u2_y` against a space. Identifiers
/// resolve to bindings, then coordinates, then parameters; an unknown name with
/// `_` is rejected so that misspelled jets do not turn into parameters.
pub(crate) struct Reader<'a> {
    pub space: &'a JetSpace,
    pub env: HashMap<String, Expr>,
    pub assume: Assumptions,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn bad(src: &str, msg: &str) -> CoreError {
    CoreError::BadParams(format!("{} in `{}`", msg, src))
}

fn lex(src: &str) -> Result<Vec<Tok>, CoreError> {
    let mut out = Vec::new();
    let cs: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = cs[st..i].iter().collect();
            out.push(Tok::Num(s.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(bad(src, &format!("unexpected `{}`", c)));
        }
    }
    Ok(out)
}

struct Cursor<'s> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'s str,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), CoreError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(bad(self.src, &format!("expected `{}`", c)))
        }
    }
}

impl Reader<'_> {
    pub fn new(space: &JetSpace, assume: Assumptions) -> Reader<'_> {
        Reader {
            space,
            env: HashMap::new(),
            assume,
        }
    }

    pub fn bind(&mut self, name: &str, e: Expr) {
        self.env.insert(name.to_string(), e);
    }

    pub fn read(&self, src: &str) -> Result<Expr, CoreError> {
        let mut c = Cursor {
            toks: lex(src)?,
            pos: 0,
            src,
        };
        let e = self.sum(&mut c)?;
        if c.pos != c.toks.len() {
            return Err(bad(src, "trailing input"));
        }
        Ok(e)
    }

    /// Reads and binds under `name`.
    pub fn define(&mut self, name: &str, src: &str) -> Result<Expr, CoreError> {
        let e = self.read(src)?;
        self.bind(name, e.clone());
        Ok(e)
    }

    pub fn det(&self, rows: &[&[&str]]) -> Result<Expr, CoreError> {
        let m: Vec<Vec<Expr>> = rows
            .iter()
            .map(|r| r.iter().map(|s| self.read(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        Ok(det(&m))
    }

    fn sum(&self, c: &mut Cursor) -> Result<Expr, CoreError> {
        let mut acc = self.product(c)?;
        loop {
            if c.eat('+') {
                acc = acc.add(&self.product(c)?);
            } else if c.eat('-') {
                acc = acc.sub(&self.product(c)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&self, c: &mut Cursor) -> Result<Expr, CoreError> {
        let mut acc = self.unary(c)?;
        loop {
            if c.eat('*') {
                acc = acc.mul(&self.unary(c)?);
            } else if c.eat('/') {
                acc = acc.div(&self.unary(c)?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&self, c: &mut Cursor) -> Result<Expr, CoreError> {
        if c.eat('-') {
            return Ok(self.unary(c)?.neg());
        }
        let base = self.atom(c)?;
        if c.eat('^') {
            let q = self.exponent(c)?;
            if q.is_integer() {
                let n: i64 = i64::try_from(q.to_integer()).map_err(|_| bad(c.src, "exponent too large"))?;
                return Ok(base.pow(n)?);
            }
            return Ok(base.rpow(&q, &self.assume)?);
        }
        Ok(base)
    }

    fn exponent(&self, c: &mut Cursor) -> Result<Q, CoreError> {
        let paren = c.eat('(');
        let neg = c.eat('-');
        let n = match c.peek().cloned() {
            Some(Tok::Num(n)) => {
                c.pos += 1;
                n
            }
            _ => return Err(bad(c.src, "expected exponent")),
        };
        let mut q = Q::from_integer(n);
        if paren && c.eat('/') {
            match c.peek().cloned() {
                Some(Tok::Num(d)) => {
                    c.pos += 1;
                    q /= Q::from_integer(d);
                }
                _ => return Err(bad(c.src, "expected denominator")),
            }
        }
        if paren {
            c.expect(')')?;
        }
        Ok(if neg { -q } else { q })
    }

    fn atom(&self, c: &mut Cursor) -> Result<Expr, CoreError> {
        match c.peek().cloned() {
            Some(Tok::Num(n)) => {
                c.pos += 1;
                Ok(Expr::constant(Q::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                c.pos += 1;
                if let Some(e) = self.env.get(&name) {
                    return Ok(e.clone());
                }
                if let Some(s) = self.space.coordinate(&name) {
                    return Ok(Expr::sym(s));
                }
                if name.contains('_') {
                    return Err(bad(c.src, &format!("unknown coordinate `{}`", name)));
                }
                Ok(Expr::sym(Symbol::param(&name)))
            }
            Some(Tok::Sym('(')) => {
                c.pos += 1;
                let e = self.sum(c)?;
                c.expect(')')?;
                Ok(e)
            }
            _ => Err(bad(c.src, "expected operand")),
        }
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &[Vec<Expr>]) -> Expr {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut parts = Vec::with_capacity(n);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Expr>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let term = m[0][j].mul(&det(&minor));
        parts.push(if j % 2 == 0 { term } else { term.neg() });
    }
    Expr::sum(parts.iter())
}
