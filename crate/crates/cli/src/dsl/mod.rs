//! Text format for spaces, expressions, fields, systems, transformations and tables.
//!
//! ```text
//! space S { independent t, x, y; dependent u; order 2 }
//! param p;
//! assume S: 1 - p*t > 0;
//! expr Z1 on S = (u_xx + u_yy)/(u_x^2 + u_y^2);
//! field X1 on S = -t^2*@t - 2*t*x*@x - 2*t*y*@y;
//! system Heat on S { u_t - u_xx - u_yy = 0; solve u_t = u_xx + u_yy; }
//! transform Proj on S with p { t -> t/(1 - p*t); x -> x/(1 - p*t)^2; y -> y/(1 - p*t)^2; prolong 2; }
//! table T (A, B, C) { [A, B] = 2*C; [A, C] = out; }
//! ```

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use jetlie_core::{CommutatorTable, CoreError, JetSpace, PdeSystem, PointTransformation, VectorField};
use jetlie_kernel::{Expr, Symbol};
use thiserror::Error;

mod lex;
mod parse;
mod print;

pub use parse::{parse, resolve_coordinate as resolve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum DslError {
    #[error("{span}: syntax error: {msg}")]
    Syntax { span: Span, msg: String },
    #[error("{span}: unknown symbol `{name}`")]
    UnknownSymbol { span: Span, name: String },
    #[error("{span}: {msg}")]
    Arity { span: Span, msg: String },
    #[error("{span}: {source}")]
    Core { span: Span, source: CoreError },
}

impl DslError {
    pub fn span(&self) -> Span {
        match self {
            DslError::Syntax { span, .. }
            | DslError::UnknownSymbol { span, .. }
            | DslError::Arity { span, .. }
            | DslError::Core { span, .. } => *span,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Space(Arc<JetSpace>),
    Param(Vec<Symbol>),
    Assume { space: String, expr: Expr },
    Expr { name: String, space: String, expr: Expr },
    Field(VectorField),
    System(PdeSystem),
    Transform(PointTransformation),
    Table { name: String, table: CommutatorTable },
}

#[derive(Clone, Debug)]
pub struct Statement {
    pub span: Span,
    pub item: Item,
}

/// Parsed declarations in source order. Equality ignores source locations.
#[derive(Clone, Debug, Default)]
pub struct SourceUnit {
    pub statements: Vec<Statement>,
}

impl PartialEq for SourceUnit {
    fn eq(&self, other: &Self) -> bool {
        self.statements.len() == other.statements.len()
            && self.statements.iter().zip(&other.statements).all(|(a, b)| a.item == b.item)
    }
}

impl SourceUnit {
    fn items(&self) -> impl Iterator<Item = &Item> {
        self.statements.iter().map(|s| &s.item)
    }

    pub fn space(&self, name: &str) -> Option<&Arc<JetSpace>> {
        self.items().find_map(|i| match i {
            Item::Space(s) if s.name() == name => Some(s),
            _ => None,
        })
    }

    pub fn expr(&self, name: &str) -> Option<(&str, &Expr)> {
        self.items().find_map(|i| match i {
            Item::Expr { name: n, space, expr } if n == name => Some((space.as_str(), expr)),
            _ => None,
        })
    }

    pub fn field(&self, name: &str) -> Option<&VectorField> {
        self.items().find_map(|i| match i {
            Item::Field(f) if f.name() == name => Some(f),
            _ => None,
        })
    }

    pub fn fields(&self) -> Vec<&VectorField> {
        self.items()
            .filter_map(|i| match i {
                Item::Field(f) => Some(f),
                _ => None,
            })
            .collect()
    }

    pub fn system(&self, name: &str) -> Option<&PdeSystem> {
        self.items().find_map(|i| match i {
            Item::System(s) if s.name() == name => Some(s),
            _ => None,
        })
    }

    pub fn transform(&self, name: &str) -> Option<&PointTransformation> {
        self.items().find_map(|i| match i {
            Item::Transform(t) if t.name() == name => Some(t),
            _ => None,
        })
    }

    pub fn table(&self, name: &str) -> Option<&CommutatorTable> {
        self.items().find_map(|i| match i {
            Item::Table { name: n, table } if n == name => Some(table),
            _ => None,
        })
    }

    /// Named expression bindings, for reuse by later units.
    pub fn bindings(&self) -> HashMap<String, Expr> {
        self.items()
            .filter_map(|i| match i {
                Item::Expr { name, expr, .. } => Some((name.clone(), expr.clone())),
                _ => None,
            })
            .collect()
    }
}
