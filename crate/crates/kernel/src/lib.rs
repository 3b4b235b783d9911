//! Exact symbolic kernel: sparse polynomials over the rationals, reduced rational
//! functions and sums of radical monomials, with differentiation, substitution and
//! exact evaluation.

pub mod display;
pub mod error;
pub mod eval;
pub mod expr;
pub mod gcd;
pub mod monomial;
pub mod poly;
pub mod radical;
pub mod ratfun;
pub mod symbol;
pub mod tree;

pub use error::KernelError;
pub use eval::{certify_zero, certify_zero_with, find_witness, Point, Sampler, ZeroCheck};
pub use expr::{Expr, Substitution};
pub use monomial::Monomial;
pub use poly::Polynomial;
pub use radical::{Assumptions, RadicalFactor, RadicalMonomial};
pub use ratfun::RationalFunction;
pub use symbol::{Symbol, SymbolKind};
pub use tree::{normalize, Node};

/// Exact rational numbers.
pub type Q = num_rational::BigRational;

/// Parses a small integer fraction; convenience for tests and catalogs.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
