use crate::error::KernelError;
use crate::expr::Expr;
use crate::radical::Assumptions;
use crate::symbol::Symbol;
use crate::Q;

/// Raw expression tree, as produced by a parser or built by hand.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Sym(Symbol),
    Num(Q),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, Q),
    /// An already-normalized value (e.g. a named binding).
    Value(Expr),
}

impl Node {
    pub fn num(n: i64) -> Node {
        Node::Num(Q::from_integer(n.into()))
    }
    pub fn add(a: Node, b: Node) -> Node {
        Node::Add(Box::new(a), Box::new(b))
    }
    pub fn sub(a: Node, b: Node) -> Node {
        Node::Sub(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Node, b: Node) -> Node {
        Node::Mul(Box::new(a), Box::new(b))
    }
    pub fn div(a: Node, b: Node) -> Node {
        Node::Div(Box::new(a), Box::new(b))
    }
    pub fn neg(a: Node) -> Node {
        Node::Neg(Box::new(a))
    }
    pub fn pow(a: Node, e: Q) -> Node {
        Node::Pow(Box::new(a), e)
    }
}

/// Converts a tree into canonical form.
pub fn normalize(node: &Node, assume: &Assumptions) -> Result<Expr, KernelError> {
    Ok(match node {
        Node::Sym(s) => Expr::sym(*s),
        Node::Num(q) => Expr::constant(q.clone()),
        Node::Add(a, b) => normalize(a, assume)?.add(&normalize(b, assume)?),
        Node::Sub(a, b) => normalize(a, assume)?.sub(&normalize(b, assume)?),
        Node::Mul(a, b) => normalize(a, assume)?.mul(&normalize(b, assume)?),
        Node::Div(a, b) => {
            let d = normalize(b, assume)?;
            normalize(a, assume)?.div(&d)?
        }
        Node::Neg(a) => normalize(a, assume)?.neg(),
        Node::Pow(a, e) => normalize(a, assume)?.rpow(e, assume)?,
        Node::Value(e) => e.clone(),
    })
}
