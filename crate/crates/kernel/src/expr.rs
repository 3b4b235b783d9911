use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::KernelError;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::radical::{radical_power, Assumptions, RadicalMonomial};
use crate::ratfun::{subst_poly, RationalFunction};
use crate::symbol::Symbol;
use crate::Q;

/// Exact expression: finite sum of radical monomials with rational-function
/// coefficients. Canonical, so `==` is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Expr {
    terms: BTreeMap<RadicalMonomial, RationalFunction>,
}

/// Symbol substitution map.
pub type Substitution = HashMap<Symbol, Expr>;

impl From<Polynomial> for Expr {
    fn from(p: Polynomial) -> Self {
        Expr::from(RationalFunction::from(p))
    }
}

impl From<RationalFunction> for Expr {
    fn from(r: RationalFunction) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(RadicalMonomial::one(), r);
        }
        Expr { terms }
    }
}

impl From<Symbol> for Expr {
    fn from(s: Symbol) -> Self {
        Expr::from(Polynomial::var(s))
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::int(1)
    }

    pub fn int(n: i64) -> Self {
        Polynomial::integer(n).into()
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Expr::constant(Q::new(n.into(), d.into()))
    }

    pub fn constant(c: Q) -> Self {
        Polynomial::constant(c).into()
    }

    pub fn sym(s: Symbol) -> Self {
        s.into()
    }

    pub fn term(coeff: RationalFunction, mono: RadicalMonomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        Expr { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RadicalMonomial, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    /// Radical-free value, if the expression has no radical part.
    pub fn as_rational(&self) -> Option<RationalFunction> {
        match self.terms.len() {
            0 => Some(RationalFunction::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn as_polynomial(&self) -> Option<Polynomial> {
        let r = self.as_rational()?;
        if r.is_polynomial() {
            Some(r.numer().clone())
        } else {
            None
        }
    }

    pub fn constant_value(&self) -> Option<Q> {
        self.as_rational()?.constant_value()
    }

    pub fn is_radical_free(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for (m, c) in &self.terms {
            out.extend(c.symbols());
            for f in m.factors() {
                out.extend(f.base.symbols());
            }
        }
        out
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.terms
            .iter()
            .any(|(m, c)| c.contains(s) || m.factors().iter().any(|f| f.base.contains(s)))
    }

    fn insert_add(terms: &mut BTreeMap<RadicalMonomial, RationalFunction>, m: RadicalMonomial, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        if self.is_zero() {
            return other.clone();
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_add(&mut terms, m.clone(), c.clone());
        }
        Expr { terms }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.scale(c))).collect(),
        }
    }

    pub fn mul_rational(&self, r: &RationalFunction) -> Expr {
        if r.is_zero() {
            return Expr::zero();
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = c.mul(r);
            if !v.is_zero() {
                terms.insert(m.clone(), v);
            }
        }
        Expr { terms }
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        if let Some(r) = other.as_rational() {
            return self.mul_rational(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.mul_rational(&r);
        }
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let (fold, m) = m1.mul(m2);
                let mut c = c1.mul(c2);
                if !fold.is_one() {
                    c = c.mul_poly(&fold);
                }
                Self::insert_add(&mut terms, m, c);
            }
        }
        Expr { terms }
    }

    /// Inverse of a single-term expression.
    pub fn inv(&self) -> Result<Expr, KernelError> {
        match self.terms.len() {
            0 => Err(KernelError::DivisionByZero),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                let ci = c.inv().ok_or(KernelError::DivisionByZero)?;
                let (k, mi) = m.inv();
                Ok(Expr::term(ci.mul(&k), mi))
            }
            _ => Err(KernelError::UnsupportedRadical(
                "division by a sum of distinct radical monomials".into(),
            )),
        }
    }

    pub fn div(&self, other: &Expr) -> Result<Expr, KernelError> {
        if other.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Expr::zero());
        }
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Expr, KernelError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        if let Some(r) = self.as_rational() {
            return Ok(r.pow(e).expect("non-negative power").into());
        }
        let mut acc = Expr::one();
        let mut base = self.clone();
        let mut k = e as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Rational power. Non-integer powers need a single-term base.
    pub fn rpow(&self, r: &Q, assume: &Assumptions) -> Result<Expr, KernelError> {
        if r.is_integer() {
            let e = i64::try_from(r.to_integer())
                .map_err(|_| KernelError::UnsupportedRadical("exponent too large".into()))?;
            return self.pow(e);
        }
        if self.is_zero() {
            return if r > &Q::zero() {
                Ok(Expr::zero())
            } else {
                Err(KernelError::DivisionByZero)
            };
        }
        if self.terms.len() > 1 {
            return Err(KernelError::UnsupportedRadical(
                "rational power of a sum of distinct radical monomials".into(),
            ));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let (k0, m0) = m.rpow(r)?;
        let (kn, mn) = radical_power(c.numer(), r, assume)?;
        let (kd, md) = radical_power(c.denom(), &-r.clone(), assume)?;
        let mut out = Expr::term(k0, m0);
        out = out.mul(&Expr::term(kn, mn));
        out = out.mul(&Expr::term(kd, md));
        Ok(out)
    }

    /// Formal partial derivative.
    pub fn diff(&self, s: Symbol) -> Expr {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut d = c.diff(s);
            for f in m.factors() {
                let db = f.base.diff(s);
                if db.is_zero() {
                    continue;
                }
                let ratio = RationalFunction::new(db, f.base.clone()).expect("radical base nonzero");
                d = d.add(&c.mul(&ratio).scale(&f.exponent));
            }
            Self::insert_add(&mut terms, m.clone(), d);
        }
        Expr { terms }
    }

    /// Simultaneous substitution.
    pub fn substitute(&self, map: &Substitution, assume: &Assumptions) -> Result<Expr, KernelError> {
        if map.is_empty() {
            return Ok(self.clone());
        }
        let syms = self.symbols();
        if !syms.iter().any(|s| map.contains_key(s)) {
            return Ok(self.clone());
        }
        let rational: Option<HashMap<Symbol, RationalFunction>> = map
            .iter()
            .filter(|(s, _)| syms.contains(s))
            .map(|(s, e)| e.as_rational().map(|r| (*s, r)))
            .collect();
        let mut acc = Expr::zero();
        match rational {
            Some(rmap) => {
                for (m, c) in &self.terms {
                    let cn = subst_poly(c.numer(), &rmap);
                    let cd = subst_poly(c.denom(), &rmap);
                    let coeff = cn.div(&cd).ok_or(KernelError::DivisionByZero)?;
                    let mut term = Expr::from(coeff);
                    for f in m.factors() {
                        let b = subst_poly(&f.base, &rmap);
                        let rb = Expr::from(b).rpow(&f.exponent, assume)?;
                        term = term.mul(&rb);
                    }
                    acc = acc.add(&term);
                }
            }
            None => {
                for (m, c) in &self.terms {
                    let cn = subst_poly_expr(c.numer(), map)?;
                    let cd = subst_poly_expr(c.denom(), map)?;
                    let mut term = cn.div(&cd)?;
                    for f in m.factors() {
                        let b = subst_poly_expr(&f.base, map)?;
                        term = term.mul(&b.rpow(&f.exponent, assume)?);
                    }
                    acc = acc.add(&term);
                }
            }
        }
        Ok(acc)
    }

    /// Replaces `s^2` by `value` in every polynomial part.
    pub fn reduce_square(&self, s: Symbol, value: &Polynomial) -> Result<Expr, KernelError> {
        let mut acc = Expr::zero();
        for (m, c) in &self.terms {
            let r = c.reduce_square(s, value).ok_or(KernelError::DivisionByZero)?;
            let mut mono_ok = true;
            for f in m.factors() {
                if f.base.contains(s) {
                    mono_ok = false;
                }
            }
            if !mono_ok {
                return Err(KernelError::UnsupportedRadical(
                    "square reduction inside a radical base".into(),
                ));
            }
            acc = acc.add(&Expr::term(r, m.clone()));
        }
        Ok(acc)
    }

    /// Splits into coefficients of monomials in `split`.
    pub fn collect(&self, split: &BTreeSet<Symbol>) -> Result<Vec<(Monomial, Expr)>, KernelError> {
        let mut groups: BTreeMap<Monomial, Expr> = BTreeMap::new();
        for (m, c) in &self.terms {
            if c.denom().symbols().iter().any(|s| split.contains(s))
                || m.factors().iter().any(|f| f.base.symbols().iter().any(|s| split.contains(s)))
            {
                return Err(KernelError::NotPolynomialInSplitVars(
                    split.iter().map(|s| s.name()).collect::<Vec<_>>().join(", "),
                ));
            }
            let den = RationalFunction::new(Polynomial::one(), c.denom().clone()).expect("nonzero");
            for (k, part) in c.numer().coeffs_wrt(split) {
                let coeff = RationalFunction::from(part).mul(&den);
                let e = Expr::term(coeff, m.clone());
                let slot = groups.entry(k).or_default();
                *slot = slot.add(&e);
            }
        }
        let mut out: Vec<(Monomial, Expr)> = groups.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        out.reverse();
        Ok(out)
    }

    /// Additive terms of a radical-free polynomial expression, one `Expr` per term.
    pub fn polynomial_terms(&self) -> Option<Vec<Expr>> {
        let p = self.as_polynomial()?;
        Some(
            p.terms()
                .iter()
                .map(|(m, c)| Expr::from(Polynomial::term(m.clone(), c.clone())))
                .collect(),
        )
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Expr>) -> Expr {
        let mut terms: BTreeMap<RadicalMonomial, Vec<RationalFunction>> = BTreeMap::new();
        for e in items {
            for (m, c) in &e.terms {
                terms.entry(m.clone()).or_default().push(c.clone());
            }
        }
        let mut out = BTreeMap::new();
        for (m, cs) in terms {
            let s = sum_rational(cs);
            if !s.is_zero() {
                out.insert(m, s);
            }
        }
        Expr { terms: out }
    }
}

/// Sums rational functions, grouping equal denominators first.
fn sum_rational(cs: Vec<RationalFunction>) -> RationalFunction {
    let mut by_den: BTreeMap<Polynomial, Polynomial> = BTreeMap::new();
    for c in cs {
        let slot = by_den.entry(c.denom().clone()).or_default();
        *slot = &*slot + c.numer();
    }
    let mut acc = RationalFunction::zero();
    for (d, n) in by_den {
        if n.is_zero() {
            continue;
        }
        let r = if d.is_one() {
            RationalFunction::from(n)
        } else {
            RationalFunction::new(n, d).expect("nonzero den")
        };
        acc = acc.add(&r);
    }
    acc
}

fn subst_poly_expr(p: &Polynomial, map: &Substitution) -> Result<Expr, KernelError> {
    let mut acc = Expr::zero();
    let mut cache: HashMap<(Symbol, u32), Expr> = HashMap::new();
    for (m, c) in p.terms() {
        let mut kept = Vec::new();
        let mut t = Expr::constant(c.clone());
        for &(s, e) in m.pairs() {
            match map.get(&s) {
                Some(img) => {
                    let key = (s, e);
                    if !cache.contains_key(&key) {
                        cache.insert(key, img.pow(e as i64)?);
                    }
                    t = t.mul(&cache[&key]);
                }
                None => kept.push((s, e)),
            }
        }
        if !kept.is_empty() {
            t = t.mul(&Expr::from(Polynomial::term(Monomial::from_pairs(kept), Q::one())));
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl Div for &Expr {
    type Output = Result<Expr, KernelError>;
    fn div(self, rhs: &Expr) -> Result<Expr, KernelError> {
        Expr::div(self, rhs)
    }
}
