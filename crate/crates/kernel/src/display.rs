//! Printing in the input syntax: `3/2*x^2*y - z`, `(x + 1)/(y^2)`, `(u_x^2 + u_y^2)^(1/2)`.

use std::fmt;

use num_traits::{One, Signed};

use crate::expr::Expr;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::radical::{RadicalFactor, RadicalMonomial};
use crate::ratfun::RationalFunction;
use crate::Q;

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, (s, e)) in self.pairs().iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{}", s)?;
            } else {
                write!(f, "{}^{}", s, e)?;
            }
        }
        Ok(())
    }
}

fn term_body(m: &Monomial, c: &Q) -> String {
    let a = c.abs();
    if m.is_one() {
        fmt_q(&a)
    } else if a.is_one() {
        m.to_string()
    } else {
        format!("{}*{}", fmt_q(&a), m)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().iter().enumerate() {
            let body = term_body(m, c);
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{}", body)?,
                (0, true) => write!(f, "-{}", body)?,
                (_, false) => write!(f, " + {}", body)?,
                (_, true) => write!(f, " - {}", body)?,
            }
        }
        Ok(())
    }
}

fn is_atomic(p: &Polynomial) -> bool {
    match p.terms() {
        [(m, c)] => c.is_one() || (m.is_one() && c.is_integer() && !c.is_negative()),
        _ => false,
    }
}

fn wrap(p: &Polynomial) -> String {
    if is_atomic(p) {
        p.to_string()
    } else {
        format!("({})", p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", wrap(self.numer()), wrap(self.denom()))
        }
    }
}

impl fmt::Display for RadicalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^({})", self.base, fmt_q(&self.exponent))
    }
}

impl fmt::Display for RadicalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, r) in self.factors().iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", r)?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let s = if m.is_one() {
                c.to_string()
            } else if c.is_one() {
                m.to_string()
            } else if c.is_polynomial() && is_atomic(c.numer()) {
                format!("{}*{}", c, m)
            } else {
                format!("({})*{}", c, m)
            };
            // the radical-free part sorts first
            if i == 0 {
                write!(f, "{}", s)?;
            } else {
                write!(f, " + {}", s)?;
            }
        }
        Ok(())
    }
}
