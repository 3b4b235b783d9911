use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};

use crate::gcd::gcd;
use crate::poly::Polynomial;
use crate::symbol::Symbol;
use crate::Q;

/// Reduced quotient of polynomials. The denominator is integer primitive with a
/// positive leading coefficient; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl Default for RationalFunction {
    fn default() -> Self {
        RationalFunction::zero()
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Polynomial::one().into()
    }

    pub fn constant(c: Q) -> Self {
        Polynomial::constant(c).into()
    }

    /// Reduces `num/den`; `None` when `den` is zero.
    pub fn new(num: Polynomial, den: Polynomial) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RationalFunction::zero());
        }
        let g = gcd(&num, &den);
        let (n, d) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        Some(Self::fix_den(n, d))
    }

    /// Builds from parts already known to be coprime.
    fn fix_den(num: Polynomial, den: Polynomial) -> Self {
        let mut c = den.content();
        if den.leading_coeff().is_negative() {
            c = -c;
        }
        if c.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = c.recip();
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.num.contains(s) || self.den.contains(s)
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let n = &self.num + &other.num;
            if self.den.is_one() {
                return n.into();
            }
            return RationalFunction::new(n, self.den.clone()).expect("nonzero den");
        }
        if self.den.is_one() {
            let n = &(&self.num * &other.den) + &other.num;
            return RationalFunction {
                num: n,
                den: other.den.clone(),
            };
        }
        if other.den.is_one() {
            let n = &self.num + &(&other.num * &self.den);
            return RationalFunction {
                num: n,
                den: self.den.clone(),
            };
        }
        let g = gcd(&self.den, &other.den);
        if g.is_constant() {
            let n = &(&self.num * &other.den) + &(&other.num * &self.den);
            let d = &self.den * &other.den;
            return Self::fix_den(n, d);
        }
        let e1 = self.den.div_exact(&g).expect("gcd divides");
        let e2 = other.den.div_exact(&g).expect("gcd divides");
        let n = &(&self.num * &e2) + &(&other.num * &e1);
        if n.is_zero() {
            return RationalFunction::zero();
        }
        let h = gcd(&n, &g);
        let (n, g) = if h.is_constant() {
            (n, g)
        } else {
            (n.div_exact(&h).expect("divides"), g.div_exact(&h).expect("divides"))
        };
        let d = &(&g * &e1) * &e2;
        Self::fix_den(n, d)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return (&self.num * &other.num).into();
        }
        let (n1, d2) = cancel(&self.num, &other.den);
        let (n2, d1) = cancel(&other.num, &self.den);
        Self::fix_den(&n1 * &n2, &d1 * &d2)
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        self.mul(&p.clone().into())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::fix_den(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            let e = e as u32;
            Some(RationalFunction {
                num: self.num.pow(e),
                den: self.den.pow(e),
            })
            .map(|r| Self::fix_den(r.num, r.den))
        } else {
            self.inv()?.pow(-e)
        }
    }

    pub fn diff(&self, s: Symbol) -> Self {
        let dn = self.num.diff(s);
        if self.den.is_one() {
            return dn.into();
        }
        let dd = self.den.diff(s);
        if dd.is_zero() {
            return RationalFunction::new(dn, self.den.clone()).expect("nonzero den");
        }
        // d(n/d) = (n' d - n d') / d^2; divide out gcd(d, d') first to keep sizes small
        let g = gcd(&self.den, &dd);
        let dq = self.den.div_exact(&g).expect("divides");
        let ddq = dd.div_exact(&g).expect("divides");
        let n = &(&dn * &dq) - &(&self.num * &ddq);
        RationalFunction::new(n, &self.den * &dq).expect("nonzero den")
    }

    pub fn eval(&self, value: &impl Fn(Symbol) -> Option<Q>) -> Option<Result<Q, ()>> {
        let d = self.den.eval(value)?;
        if d.is_zero() {
            return Some(Err(()));
        }
        let n = self.num.eval(value)?;
        Some(Ok(n / d))
    }

    /// Simultaneous substitution of rational images into numerator and denominator.
    pub fn substitute(&self, map: &HashMap<Symbol, RationalFunction>) -> Option<Self> {
        let n = subst_poly(&self.num, map);
        if self.den.is_one() {
            return Some(n);
        }
        let d = subst_poly(&self.den, map);
        n.div(&d)
    }

    pub fn reduce_square(&self, s: Symbol, value: &Polynomial) -> Option<Self> {
        RationalFunction::new(self.num.reduce_square(s, value), self.den.reduce_square(s, value))
    }
}

fn cancel(a: &Polynomial, b: &Polynomial) -> (Polynomial, Polynomial) {
    if a.is_constant() || b.is_constant() {
        return (a.clone(), b.clone());
    }
    let g = gcd(a, b);
    if g.is_constant() {
        (a.clone(), b.clone())
    } else {
        (a.div_exact(&g).expect("divides"), b.div_exact(&g).expect("divides"))
    }
}

/// Substitutes rational images into a polynomial over a common denominator.
pub fn subst_poly(p: &Polynomial, map: &HashMap<Symbol, RationalFunction>) -> RationalFunction {
    let present: Vec<Symbol> = p.symbols().into_iter().filter(|s| map.contains_key(s)).collect();
    if present.is_empty() {
        return p.clone().into();
    }
    let poly_only = present.iter().all(|s| map[s].is_polynomial());
    if poly_only {
        let pm: HashMap<Symbol, Polynomial> = present.iter().map(|s| (*s, map[s].numer().clone())).collect();
        return p.substitute_poly(&pm).into();
    }
    // P(n_i/d_i) = sum c * prod n_i^k_i d_i^(K_i - k_i) / prod d_i^K_i
    let maxdeg: HashMap<Symbol, u32> = present.iter().map(|s| (*s, p.degree_in(*s))).collect();
    let mut npow: HashMap<(Symbol, u32), Polynomial> = HashMap::new();
    let mut dpow: HashMap<(Symbol, u32), Polynomial> = HashMap::new();
    let mut acc = Polynomial::zero();
    let mut parts: Vec<Polynomial> = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        let mut kept = Vec::new();
        let mut prod = Polynomial::constant(c.clone());
        let mut seen: Vec<Symbol> = Vec::new();
        for &(s, e) in m.pairs() {
            if let Some(img) = map.get(&s) {
                seen.push(s);
                let np = npow
                    .entry((s, e))
                    .or_insert_with(|| img.numer().pow(e))
                    .clone();
                prod = &prod * &np;
                let k = maxdeg[&s] - e;
                if k > 0 && !img.denom().is_one() {
                    let dp = dpow.entry((s, k)).or_insert_with(|| img.denom().pow(k)).clone();
                    prod = &prod * &dp;
                }
            } else {
                kept.push((s, e));
            }
        }
        for s in &present {
            if !seen.contains(s) {
                let k = maxdeg[s];
                let img = &map[s];
                if k > 0 && !img.denom().is_one() {
                    let dp = dpow.entry((*s, k)).or_insert_with(|| img.denom().pow(k)).clone();
                    prod = &prod * &dp;
                }
            }
        }
        if !kept.is_empty() {
            prod = prod.mul_monomial(&crate::monomial::Monomial::from_pairs(kept));
        }
        parts.push(prod);
    }
    for part in parts {
        acc = &acc + &part;
    }
    let mut den = Polynomial::one();
    for s in &present {
        let img = &map[s];
        if !img.denom().is_one() {
            den = &den * &img.denom().pow(maxdeg[s]);
        }
    }
    RationalFunction::new(acc, den).expect("denominator images are nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::SymbolKind;

    fn v(n: &str) -> Polynomial {
        Polynomial::var(Symbol::new(n, SymbolKind::Parameter))
    }

    #[test]
    fn add_reduces() {
        let (x, y) = (v("rf_x"), v("rf_y"));
        let a = RationalFunction::new(Polynomial::one(), &x + &y).unwrap();
        let b = RationalFunction::new(Polynomial::one(), &x - &y).unwrap();
        let s = a.add(&b);
        let expected = RationalFunction::new(x.scale(&Q::from_integer(2.into())), &(&x * &x) - &(&y * &y)).unwrap();
        assert_eq!(s, expected);
        let z = a.sub(&a);
        assert!(z.is_zero());
    }

    #[test]
    fn substitution_common_denominator() {
        let xs = Symbol::new("rf_x", SymbolKind::Parameter);
        let (x, y) = (v("rf_x"), v("rf_y"));
        let p = &(&x * &x) + &y;
        let img = RationalFunction::new(Polynomial::one(), y.clone()).unwrap();
        let map: HashMap<Symbol, RationalFunction> = [(xs, img)].into_iter().collect();
        let r = subst_poly(&p, &map);
        let expected = RationalFunction::new(&Polynomial::one() + &y.pow(3), y.pow(2)).unwrap();
        assert_eq!(r, expected);
    }
}
