use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use jetlie_core::catalog::det;
use jetlie_core::{solve_linear, CommutatorTable, CoreError, JetSpace, MultiIndex, PdeSystem, PointTransformation, VectorField};
use jetlie_kernel::{Assumptions, Expr, Substitution, Symbol, Q};
use num_bigint::BigInt;

use super::lex::{lex, Tok};
use super::{DslError, Item, SourceUnit, Span, Statement};

#[derive(Clone, Debug)]
enum Node {
    Num(BigInt),
    Ident(String, Span),
    Dir(String, Span),
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>, Span),
    Det(Vec<Vec<Node>>, Span),
    Scalar(Box<Node>, Span),
}

/// An expression that may carry directions `@x` (or generator names in tables)
/// and a `scalar(...)` part.
#[derive(Clone, Debug)]
struct Lin {
    pure: Expr,
    dirs: BTreeMap<String, Expr>,
    mult: Expr,
}

impl Lin {
    fn pure(e: Expr) -> Lin {
        Lin {
            pure: e,
            dirs: BTreeMap::new(),
            mult: Expr::zero(),
        }
    }

    fn is_pure(&self) -> bool {
        self.dirs.is_empty() && self.mult.is_zero()
    }

    fn map(&self, f: impl Fn(&Expr) -> Expr) -> Lin {
        Lin {
            pure: f(&self.pure),
            dirs: self.dirs.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
            mult: f(&self.mult),
        }
    }

    fn combine(&self, other: &Lin, sign: bool) -> Lin {
        let op = |a: &Expr, b: &Expr| if sign { a.add(b) } else { a.sub(b) };
        let mut dirs = self.dirs.clone();
        for (k, v) in &other.dirs {
            let slot = dirs.entry(k.clone()).or_insert_with(Expr::zero);
            *slot = op(slot, v);
        }
        dirs.retain(|_, v| !v.is_zero());
        Lin {
            pure: op(&self.pure, &other.pure),
            dirs,
            mult: op(&self.mult, &other.mult),
        }
    }
}

enum Mode<'a> {
    Plain,
    Field(&'a JetSpace),
    Table(&'a [String]),
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    spaces: HashMap<String, Arc<JetSpace>>,
    assume: HashMap<String, Assumptions>,
    params: BTreeSet<String>,
    env: HashMap<String, Expr>,
    names: BTreeSet<(&'static str, String)>,
}

fn core(span: Span) -> impl Fn(CoreError) -> DslError {
    move |source| DslError::Core { span, source }
}

fn kernel(span: Span) -> impl Fn(jetlie_kernel::KernelError) -> DslError {
    move |e| DslError::Core {
        span,
        source: CoreError::from(e),
    }
}

/// Parses a whole source text. Declarations may only refer to earlier ones.
pub fn parse(src: &str) -> Result<SourceUnit, DslError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        spaces: HashMap::new(),
        assume: HashMap::new(),
        params: BTreeSet::new(),
        env: HashMap::new(),
        names: BTreeSet::new(),
    };
    let mut unit = SourceUnit::default();
    while p.peek() != &Tok::Eof {
        let st = p.statement()?;
        unit.statements.push(st);
    }
    Ok(unit)
}

/// Splits a derivative subscript such as `xv2` into independent variables.
fn split_subscript(sub: &str, ind: &[Symbol]) -> Option<Vec<usize>> {
    if sub.is_empty() {
        return Some(Vec::new());
    }
    let mut order: Vec<usize> = (0..ind.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(ind[i].name().len()));
    for i in order {
        if let Some(rest) = sub.strip_prefix(ind[i].name()) {
            if let Some(mut tail) = split_subscript(rest, ind) {
                tail.insert(0, i);
                return Some(tail);
            }
        }
    }
    None
}

/// Coordinate of `space` named `name`, accepting jet subscripts in any order.
pub fn resolve_coordinate(space: &JetSpace, name: &str) -> Option<Symbol> {
    if let Some(s) = space.coordinate(name) {
        return Some(s);
    }
    let (dep, sub) = name.split_once('_')?;
    let d = space.dependents().iter().position(|s| s.name() == dep)?;
    let parts = split_subscript(sub, space.independents())?;
    let mut counts = vec![0u32; space.independents().len()];
    for i in parts {
        counts[i] += 1;
    }
    space.jet(d, &MultiIndex::from_counts(counts))
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
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

    fn syntax<T>(&self, msg: String) -> Result<T, DslError> {
        Err(DslError::Syntax { span: self.span(), msg })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DslError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek().clone();
            self.syntax(format!("expected `{}`, found {}", c, found))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), DslError> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            let found = self.peek().clone();
            self.syntax(format!("expected `{}`, found {}", kw, found))
        }
    }

    fn ident(&mut self) -> Result<(String, Span), DslError> {
        match self.bump() {
            (Tok::Ident(s), sp) => Ok((s, sp)),
            (t, sp) => Err(DslError::Syntax {
                span: sp,
                msg: format!("expected a name, found {}", t),
            }),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<(String, Span)>, DslError> {
        let mut out = vec![self.ident()?];
        while self.eat(',') {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn declare(&mut self, kind: &'static str, name: &str, span: Span) -> Result<(), DslError> {
        if !self.names.insert((kind, name.to_string())) {
            return Err(DslError::Core {
                span,
                source: CoreError::DuplicateName(name.to_string()),
            });
        }
        Ok(())
    }

    fn space_ref(&mut self) -> Result<Arc<JetSpace>, DslError> {
        let (name, span) = self.ident()?;
        self.spaces
            .get(&name)
            .cloned()
            .ok_or(DslError::UnknownSymbol { span, name })
    }

    fn statement(&mut self) -> Result<Statement, DslError> {
        let (kw, span) = self.ident()?;
        let item = match kw.as_str() {
            "space" => self.space_decl(span)?,
            "param" => {
                let names = self.ident_list()?;
                self.expect(';')?;
                let mut syms = Vec::new();
                for (n, sp) in names {
                    if n.contains('_') {
                        return Err(DslError::Syntax {
                            span: sp,
                            msg: format!("parameter `{}` may not contain `_`", n),
                        });
                    }
                    self.params.insert(n.clone());
                    syms.push(Symbol::param(&n));
                }
                Item::Param(syms)
            }
            "assume" => {
                let sp = self.space_ref()?;
                self.expect(':')?;
                let at = self.span();
                let e = self.pure_expr(Some(&sp))?;
                self.expect('>')?;
                match self.bump() {
                    (Tok::Num(n), _) if n == BigInt::from(0) => {}
                    (_, s) => {
                        return Err(DslError::Syntax {
                            span: s,
                            msg: "expected `0`".into(),
                        })
                    }
                }
                self.expect(';')?;
                let poly = e.as_polynomial().ok_or_else(|| DslError::Syntax {
                    span: at,
                    msg: "assumed-positive quantity must be a polynomial".into(),
                })?;
                let a = self.assume.entry(sp.name().to_string()).or_default();
                a.assume_positive(poly);
                Item::Assume {
                    space: sp.name().to_string(),
                    expr: e,
                }
            }
            "expr" => {
                let (name, nsp) = self.ident()?;
                self.declare("expr", &name, nsp)?;
                self.keyword("on")?;
                let sp = self.space_ref()?;
                self.expect('=')?;
                let e = self.pure_expr(Some(&sp))?;
                self.expect(';')?;
                self.env.insert(name.clone(), e.clone());
                Item::Expr {
                    name,
                    space: sp.name().to_string(),
                    expr: e,
                }
            }
            "field" => self.field_decl()?,
            "system" => self.system_decl()?,
            "transform" => self.transform_decl()?,
            "table" => self.table_decl()?,
            other => {
                return Err(DslError::Syntax {
                    span,
                    msg: format!("unknown declaration `{}`", other),
                })
            }
        };
        Ok(Statement { span, item })
    }

    fn space_decl(&mut self, span: Span) -> Result<Item, DslError> {
        let (name, nsp) = self.ident()?;
        self.declare("space", &name, nsp)?;
        self.expect('{')?;
        self.keyword("independent")?;
        let ind = self.ident_list()?;
        self.expect(';')?;
        self.keyword("dependent")?;
        let dep = self.ident_list()?;
        self.expect(';')?;
        self.keyword("order")?;
        let order = match self.bump() {
            (Tok::Num(n), s) => u32::try_from(n).map_err(|_| DslError::Syntax {
                span: s,
                msg: "order too large".into(),
            })?,
            (_, s) => {
                return Err(DslError::Syntax {
                    span: s,
                    msg: "expected the jet order".into(),
                })
            }
        };
        self.eat(';');
        self.expect('}')?;
        self.eat(';');
        let ind: Vec<&str> = ind.iter().map(|(s, _)| s.as_str()).collect();
        let dep: Vec<&str> = dep.iter().map(|(s, _)| s.as_str()).collect();
        let sp = Arc::new(JetSpace::new(&name, &ind, &dep, order).map_err(core(span))?);
        self.spaces.insert(name, sp.clone());
        Ok(Item::Space(sp))
    }

    fn field_decl(&mut self) -> Result<Item, DslError> {
        let (name, nsp) = self.ident()?;
        self.declare("field", &name, nsp)?;
        self.keyword("on")?;
        let sp = self.space_ref()?;
        self.expect('=')?;
        let at = self.span();
        let node = self.sum()?;
        self.expect(';')?;
        let lin = self.eval(&node, Some(&sp), &Mode::Field(&sp))?;
        if !lin.pure.is_zero() {
            return Err(DslError::Syntax {
                span: at,
                msg: "field has a term without a direction; wrap zero-order parts in scalar(...)".into(),
            });
        }
        let mut coeffs = Vec::new();
        for (k, v) in lin.dirs {
            let s = sp.coordinate(&k).expect("checked in eval");
            coeffs.push((s, v));
        }
        let mult = if lin.mult.is_zero() { None } else { Some(lin.mult) };
        let f = VectorField::new(&name, &sp, coeffs, mult).map_err(core(at))?;
        Ok(Item::Field(f))
    }

    fn system_decl(&mut self) -> Result<Item, DslError> {
        let (name, nsp) = self.ident()?;
        self.declare("system", &name, nsp)?;
        self.keyword("on")?;
        let sp = self.space_ref()?;
        self.expect('{')?;
        let mut eqs = Vec::new();
        let mut solved: Vec<(Symbol, Expr)> = Vec::new();
        let mut targets: Vec<Symbol> = Vec::new();
        while !self.eat('}') {
            if self.is_keyword("solve") {
                self.bump();
                if self.is_keyword("for") {
                    self.bump();
                    for (n, s) in self.ident_list()? {
                        targets.push(resolve_coordinate(&sp, &n).ok_or(DslError::UnknownSymbol { span: s, name: n })?);
                    }
                } else {
                    loop {
                        let (n, s) = self.ident()?;
                        let sym = resolve_coordinate(&sp, &n).ok_or(DslError::UnknownSymbol { span: s, name: n })?;
                        self.expect('=')?;
                        solved.push((sym, self.pure_expr(Some(&sp))?));
                        if !self.eat(',') {
                            break;
                        }
                    }
                }
                self.expect(';')?;
            } else {
                let lhs = self.pure_expr(Some(&sp))?;
                self.expect('=')?;
                let rhs = self.pure_expr(Some(&sp))?;
                self.expect(';')?;
                eqs.push(lhs.sub(&rhs));
            }
        }
        self.eat(';');
        let assume = self.assume.get(sp.name()).cloned().unwrap_or_default();
        if !targets.is_empty() {
            if !solved.is_empty() {
                return Err(DslError::Syntax {
                    span: nsp,
                    msg: "use either `solve for` or explicit solved equations".into(),
                });
            }
            solved = solve_linear(&eqs, &targets, &assume).map_err(core(nsp))?;
        }
        let sys = PdeSystem::new(&name, &sp, eqs, solved, assume).map_err(core(nsp))?;
        Ok(Item::System(sys))
    }

    fn transform_decl(&mut self) -> Result<Item, DslError> {
        let (name, nsp) = self.ident()?;
        self.declare("transform", &name, nsp)?;
        self.keyword("on")?;
        let sp = self.space_ref()?;
        self.keyword("with")?;
        let (pname, psp) = self.ident()?;
        if pname.contains('_') || sp.coordinate(&pname).is_some() {
            return Err(DslError::Syntax {
                span: psp,
                msg: format!("`{}` cannot be a parameter", pname),
            });
        }
        self.params.insert(pname.clone());
        let p = Symbol::param(&pname);
        self.expect('{')?;
        let mut maps = Vec::new();
        let mut relations = Vec::new();
        let mut at_zero: Substitution = [(p, Expr::zero())].into_iter().collect();
        let mut series = Substitution::new();
        let mut order = 0u32;
        while !self.eat('}') {
            let (kw, ksp) = self.ident()?;
            match kw.as_str() {
                "relation" => {
                    let (v, vsp) = self.ident()?;
                    if !self.params.contains(&v) {
                        return Err(DslError::UnknownSymbol { span: vsp, name: v });
                    }
                    self.expect('^')?;
                    match self.bump() {
                        (Tok::Num(n), _) if n == BigInt::from(2) => {}
                        (_, s) => {
                            return Err(DslError::Syntax {
                                span: s,
                                msg: "relations replace a square: expected `2`".into(),
                            })
                        }
                    }
                    self.expect('=')?;
                    let at = self.span();
                    let e = self.pure_expr(Some(&sp))?;
                    let poly = e.as_polynomial().ok_or_else(|| DslError::Syntax {
                        span: at,
                        msg: "relation value must be a polynomial".into(),
                    })?;
                    relations.push((Symbol::param(&v), poly));
                }
                "identity" | "series" => loop {
                    let (v, vsp) = self.ident()?;
                    if !self.params.contains(&v) {
                        return Err(DslError::UnknownSymbol { span: vsp, name: v });
                    }
                    self.expect('=')?;
                    let e = self.pure_expr(Some(&sp))?;
                    if kw == "identity" {
                        at_zero.insert(Symbol::param(&v), e);
                    } else {
                        series.insert(Symbol::param(&v), e);
                    }
                    if !self.eat(',') {
                        break;
                    }
                },
                "prolong" => match self.bump() {
                    (Tok::Num(n), s) => {
                        order = u32::try_from(n).map_err(|_| DslError::Syntax {
                            span: s,
                            msg: "order too large".into(),
                        })?
                    }
                    (_, s) => {
                        return Err(DslError::Syntax {
                            span: s,
                            msg: "expected the prolongation order".into(),
                        })
                    }
                },
                coord => {
                    let s = sp
                        .coordinate(coord)
                        .filter(|s| sp.is_base(*s))
                        .ok_or(DslError::UnknownSymbol {
                            span: ksp,
                            name: coord.to_string(),
                        })?;
                    if self.peek() != &Tok::Arrow {
                        return self.syntax("expected `->`".into());
                    }
                    self.bump();
                    maps.push((s, self.pure_expr(Some(&sp))?));
                }
            }
            self.expect(';')?;
        }
        self.eat(';');
        let assume = self.assume.get(sp.name()).cloned().unwrap_or_default();
        let t = PointTransformation::family(&name, &sp, p, maps, assume, relations, at_zero, series).map_err(core(nsp))?;
        let t = if order > 0 { t.prolong(order).map_err(core(nsp))? } else { t };
        Ok(Item::Transform(t))
    }

    fn table_decl(&mut self) -> Result<Item, DslError> {
        let (name, nsp) = self.ident()?;
        self.declare("table", &name, nsp)?;
        self.expect('(')?;
        let gens: Vec<String> = self.ident_list()?.into_iter().map(|(s, _)| s).collect();
        self.expect(')')?;
        let mut table = CommutatorTable::new(&gens);
        self.expect('{')?;
        while !self.eat('}') {
            let at = self.span();
            self.expect('[')?;
            let (a, asp) = self.ident()?;
            if !self.eat(',') {
                return Err(DslError::Arity {
                    span: at,
                    msg: "a bracket takes exactly two generators".into(),
                });
            }
            let (b, bsp) = self.ident()?;
            if !self.eat(']') {
                return Err(DslError::Arity {
                    span: at,
                    msg: "a bracket takes exactly two generators".into(),
                });
            }
            for (n, s) in [(&a, asp), (&b, bsp)] {
                if !gens.contains(n) {
                    return Err(DslError::UnknownSymbol { span: s, name: n.clone() });
                }
            }
            self.expect('=')?;
            if self.is_keyword("out") {
                self.bump();
                table.mark_out_of_range(&a, &b).map_err(core(at))?;
            } else {
                let rat = self.span();
                let node = self.sum()?;
                let lin = self.eval(&node, None, &Mode::Table(&gens))?;
                if !lin.pure.is_zero() || !lin.mult.is_zero() {
                    return Err(DslError::Syntax {
                        span: rat,
                        msg: "table entries are combinations of generators".into(),
                    });
                }
                let combo: Vec<(&str, Expr)> = lin.dirs.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
                table.set(&a, &b, &combo).map_err(core(at))?;
            }
            self.expect(';')?;
        }
        self.eat(';');
        Ok(Item::Table { name, table })
    }

    fn pure_expr(&mut self, space: Option<&Arc<JetSpace>>) -> Result<Expr, DslError> {
        let at = self.span();
        let node = self.sum()?;
        let lin = self.eval(&node, space.map(|s| &**s), &Mode::Plain)?;
        if !lin.is_pure() {
            return Err(DslError::Syntax {
                span: at,
                msg: "directions are only allowed in field definitions".into(),
            });
        }
        Ok(lin.pure)
    }

    // sum := product (('+' | '-') product)*
    fn sum(&mut self) -> Result<Node, DslError> {
        let mut acc = self.product()?;
        loop {
            let sp = self.span();
            let op = match self.peek() {
                Tok::Punct(c @ ('+' | '-')) => *c,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.product()?;
            acc = Node::Bin(op, Box::new(acc), Box::new(rhs), sp);
        }
    }

    fn product(&mut self) -> Result<Node, DslError> {
        let mut acc = self.unary()?;
        loop {
            let sp = self.span();
            let op = match self.peek() {
                Tok::Punct(c @ ('*' | '/')) => *c,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.unary()?;
            acc = Node::Bin(op, Box::new(acc), Box::new(rhs), sp);
        }
    }

    fn unary(&mut self) -> Result<Node, DslError> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    // power := atom ('^' ('-')? power)?, right associative
    fn power(&mut self) -> Result<Node, DslError> {
        let base = self.atom()?;
        let sp = self.span();
        if self.eat('^') {
            let exp = if self.eat('-') {
                Node::Neg(Box::new(self.power()?))
            } else {
                self.power()?
            };
            return Ok(Node::Bin('^', Box::new(base), Box::new(exp), sp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, DslError> {
        let sp = self.span();
        match self.bump() {
            (Tok::Num(n), _) => Ok(Node::Num(n)),
            (Tok::Punct('('), _) => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            (Tok::Punct('@'), _) => {
                let (n, s) = self.ident()?;
                Ok(Node::Dir(n, s))
            }
            (Tok::Ident(n), _) if n == "det" && self.peek() == &Tok::Punct('[') => {
                self.expect('[')?;
                let mut rows = Vec::new();
                loop {
                    self.expect('[')?;
                    let mut row = vec![self.sum()?];
                    while self.eat(',') {
                        row.push(self.sum()?);
                    }
                    self.expect(']')?;
                    rows.push(row);
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect(']')?;
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(DslError::Arity {
                        span: sp,
                        msg: format!("det needs a square matrix, got {} rows of lengths {:?}", n, rows.iter().map(|r| r.len()).collect::<Vec<_>>()),
                    });
                }
                Ok(Node::Det(rows, sp))
            }
            (Tok::Ident(n), _) if n == "scalar" && self.peek() == &Tok::Punct('(') => {
                self.expect('(')?;
                let e = self.sum()?;
                if self.peek() == &Tok::Punct(',') {
                    return Err(DslError::Arity {
                        span: sp,
                        msg: "scalar(...) takes one argument".into(),
                    });
                }
                self.expect(')')?;
                Ok(Node::Scalar(Box::new(e), sp))
            }
            (Tok::Ident(n), s) => Ok(Node::Ident(n, s)),
            (t, s) => Err(DslError::Syntax {
                span: s,
                msg: format!("expected an operand, found {}", t),
            }),
        }
    }

    fn resolve(&self, name: &str, span: Span, space: Option<&JetSpace>) -> Result<Expr, DslError> {
        if let Some(e) = self.env.get(name) {
            return Ok(e.clone());
        }
        if let Some(sp) = space {
            if let Some(s) = resolve_coordinate(sp, name) {
                if sp.order_of(s).unwrap_or(0) > sp.max_order() {
                    return Err(DslError::Core {
                        span,
                        source: CoreError::OrderExceeded {
                            found: sp.order_of(s).unwrap_or(0),
                            limit: sp.max_order(),
                        },
                    });
                }
                return Ok(Expr::sym(s));
            }
        }
        if self.params.contains(name) {
            return Ok(Expr::sym(Symbol::param(name)));
        }
        Err(DslError::UnknownSymbol {
            span,
            name: name.to_string(),
        })
    }

    fn eval(&self, node: &Node, space: Option<&JetSpace>, mode: &Mode) -> Result<Lin, DslError> {
        let pure_of = |l: Lin, span: Span, what: &str| -> Result<Expr, DslError> {
            if l.is_pure() {
                Ok(l.pure)
            } else {
                Err(DslError::Syntax {
                    span,
                    msg: format!("{} must not contain directions", what),
                })
            }
        };
        Ok(match node {
            Node::Num(n) => Lin::pure(Expr::constant(Q::from_integer(n.clone()))),
            Node::Ident(n, sp) => {
                if let Mode::Table(gens) = mode {
                    if gens.contains(n) {
                        let mut l = Lin::pure(Expr::zero());
                        l.dirs.insert(n.clone(), Expr::one());
                        return Ok(l);
                    }
                }
                Lin::pure(self.resolve(n, *sp, space)?)
            }
            Node::Dir(n, sp) => {
                let Mode::Field(fs) = mode else {
                    return Err(DslError::Syntax {
                        span: *sp,
                        msg: "directions are only allowed in field definitions".into(),
                    });
                };
                match fs.coordinate(n) {
                    Some(s) if fs.is_base(s) => {}
                    _ => {
                        return Err(DslError::UnknownSymbol {
                            span: *sp,
                            name: format!("@{}", n),
                        })
                    }
                }
                let mut l = Lin::pure(Expr::zero());
                l.dirs.insert(n.clone(), Expr::one());
                l
            }
            Node::Neg(a) => self.eval(a, space, mode)?.map(|e| e.neg()),
            Node::Scalar(a, sp) => {
                if !matches!(mode, Mode::Field(_)) {
                    return Err(DslError::Syntax {
                        span: *sp,
                        msg: "scalar(...) is only allowed in field definitions".into(),
                    });
                }
                let e = pure_of(self.eval(a, space, mode)?, *sp, "scalar(...)")?;
                Lin {
                    pure: Expr::zero(),
                    dirs: BTreeMap::new(),
                    mult: e,
                }
            }
            Node::Det(rows, sp) => {
                let mut m = Vec::with_capacity(rows.len());
                for r in rows {
                    let mut row = Vec::with_capacity(r.len());
                    for e in r {
                        row.push(pure_of(self.eval(e, space, mode)?, *sp, "determinant entries")?);
                    }
                    m.push(row);
                }
                Lin::pure(det(&m))
            }
            Node::Bin(op, a, b, sp) => {
                let l = self.eval(a, space, mode)?;
                let r = self.eval(b, space, mode)?;
                match op {
                    '+' => l.combine(&r, true),
                    '-' => l.combine(&r, false),
                    '*' => {
                        if l.is_pure() {
                            r.map(|e| l.pure.mul(e))
                        } else if r.is_pure() {
                            l.map(|e| e.mul(&r.pure))
                        } else {
                            return Err(DslError::Syntax {
                                span: *sp,
                                msg: "product of two directional terms".into(),
                            });
                        }
                    }
                    '/' => {
                        let d = pure_of(r, *sp, "a divisor")?;
                        let inv = d.inv().map_err(kernel(*sp))?;
                        l.map(|e| e.mul(&inv))
                    }
                    '^' => {
                        let base = pure_of(l, *sp, "a power base")?;
                        let exp = pure_of(r, *sp, "an exponent")?;
                        let q = exp.constant_value().ok_or_else(|| DslError::Syntax {
                            span: *sp,
                            msg: "exponents must be rational constants".into(),
                        })?;
                        let out = if q.is_integer() {
                            let n = i64::try_from(q.to_integer()).map_err(|_| DslError::Syntax {
                                span: *sp,
                                msg: "exponent too large".into(),
                            })?;
                            base.pow(n).map_err(kernel(*sp))?
                        } else {
                            let assume = space
                                .and_then(|s| self.assume.get(s.name()))
                                .cloned()
                                .unwrap_or_default();
                            base.rpow(&q, &assume).map_err(kernel(*sp))?
                        };
                        Lin::pure(out)
                    }
                    _ => unreachable!("operators are fixed by the grammar"),
                }
            }
        })
    }
}
