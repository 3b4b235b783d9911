use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::monomial::Monomial;
use crate::symbol::Symbol;
use crate::Q;

/// Sparse multivariate polynomial over the rationals.
///
/// Terms are kept sorted by decreasing monomial in graded-lex order with no zero
/// coefficients, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, Q)>,
}

pub(crate) fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(Q::one())
    }

    pub fn constant(c: Q) -> Polynomial {
        if c.is_zero() {
            Polynomial::zero()
        } else {
            Polynomial {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn integer(n: i64) -> Polynomial {
        Polynomial::constant(q_int(n))
    }

    pub fn var(s: Symbol) -> Polynomial {
        Polynomial::term(Monomial::var(s), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Polynomial {
        if c.is_zero() {
            Polynomial::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from unsorted terms, combining duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> Polynomial {
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(v) => *v += c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Polynomial::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, Q>) -> Polynomial {
        let mut terms: Vec<(Monomial, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.terms.is_empty() {
            Some(Q::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Q)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Q {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for (m, _) in &self.terms {
            out.extend(m.symbols());
        }
        out
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(s) > 0)
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(s)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn diff(&self, s: Symbol) -> Polynomial {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(s);
            if e > 0 {
                terms.push((rest.mul(&Monomial::var_pow(s, e - 1)), c * q_int(e as i64)));
            }
        }
        Polynomial::from_terms(terms)
    }

    /// Coefficients with respect to `s`, indexed by degree.
    pub fn coeffs_in(&self, s: Symbol) -> Vec<Polynomial> {
        let deg = self.degree_in(s) as usize;
        let mut buckets: Vec<Vec<(Monomial, Q)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(s);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut b| {
                b.sort_unstable_by(|x, y| y.0.cmp(&x.0));
                Polynomial { terms: b }
            })
            .collect()
    }

    pub fn from_coeffs_in(s: Symbol, coeffs: &[Polynomial]) -> Polynomial {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let xm = Monomial::var_pow(s, k as u32);
            for (m, v) in &c.terms {
                terms.push((m.mul(&xm), v.clone()));
            }
        }
        Polynomial::from_terms(terms)
    }

    /// Groups terms by their exponents in `vars`; each group's coefficient is free of `vars`.
    pub fn coeffs_wrt(&self, vars: &BTreeSet<Symbol>) -> BTreeMap<Monomial, Polynomial> {
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, Q)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (k, rest) = m.partition(|s| vars.contains(&s));
            groups.entry(k).or_default().push((rest, c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, mut v)| {
                v.sort_unstable_by(|x, y| y.0.cmp(&x.0));
                (k, Polynomial { terms: v })
            })
            .collect()
    }

    /// Greatest common monomial divisor of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let first = match it.next() {
            Some(t) => t.0.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |g, (m, _)| if g.is_one() { g } else { g.gcd(m) })
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn content(&self) -> Q {
        if self.terms.is_empty() {
            return Q::one();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        Q::new(num, den)
    }

    /// Integer primitive associate with positive leading coefficient (zero stays zero).
    pub fn normalized(&self) -> Polynomial {
        if self.terms.is_empty() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let inv = dc.recip();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((dm.div_of(m)?, c * &inv));
            }
            return Some(Polynomial { terms });
        }
        let (dlm, dlc) = d.terms[0].clone();
        if self.total_degree() < d.total_degree() {
            return None;
        }
        for s in dlm.symbols() {
            if self.degree_in(s) < dlm.exponent(s) {
                return None;
            }
        }
        let inv = dlc.recip();
        let mut rem: BTreeMap<Monomial, Q> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, Q)> = Vec::new();
        while let Some((lm, lc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = dlm.div_of(&lm)?;
            let qc = &lc * &inv;
            for (m, c) in &d.terms {
                let key = m.mul(&qm);
                let delta = c * &qc;
                let remove = match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= &delta;
                        v.is_zero()
                    }
                    None => {
                        rem.insert(key.clone(), -delta);
                        false
                    }
                };
                if remove {
                    rem.remove(&key);
                }
            }
            quot.push((qm, qc));
        }
        quot.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Some(Polynomial { terms: quot })
    }

    pub fn eval(&self, value: &impl Fn(Symbol) -> Option<Q>) -> Option<Q> {
        let mut cache: HashMap<Symbol, Q> = HashMap::new();
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(s, e) in m.pairs() {
                let v = match cache.get(&s) {
                    Some(v) => v.clone(),
                    None => {
                        let v = value(s)?;
                        cache.insert(s, v.clone());
                        v
                    }
                };
                t *= num_traits::pow(v, e as usize);
            }
            acc += t;
        }
        Some(acc)
    }

    /// Simultaneous substitution of polynomial images.
    pub fn substitute_poly(&self, map: &HashMap<Symbol, Polynomial>) -> Polynomial {
        let mut powers: HashMap<(Symbol, u32), Polynomial> = HashMap::new();
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut prod = Polynomial::constant(c.clone());
            for &(s, e) in m.pairs() {
                match map.get(&s) {
                    Some(img) => {
                        let p = powers.entry((s, e)).or_insert_with(|| img.pow(e)).clone();
                        prod = &prod * &p;
                    }
                    None => kept.push((s, e)),
                }
            }
            let km = Monomial::from_pairs(kept);
            for (n, v) in prod.terms {
                let key = n.mul(&km);
                *acc.entry(key).or_insert_with(Q::zero) += v;
            }
        }
        Polynomial::from_map(acc)
    }

    /// Replaces `s^2` by `value` throughout (used for the relation s^2 = 1 - c^2).
    pub fn reduce_square(&self, s: Symbol, value: &Polynomial) -> Polynomial {
        if self.degree_in(s) < 2 {
            return self.clone();
        }
        let coeffs = self.coeffs_in(s);
        let mut acc = Polynomial::zero();
        let mut vpow = Polynomial::one();
        for (k, c) in coeffs.iter().enumerate() {
            if k >= 2 && k % 2 == 0 {
                vpow = &vpow * value;
            }
            if c.is_zero() {
                continue;
            }
            let lifted = if k % 2 == 1 {
                &(c * &vpow) * &Polynomial::var(s)
            } else {
                c * &vpow
            };
            acc = &acc + &lifted;
        }
        acc
    }
}

fn merge(a: &[(Monomial, Q)], b: &[(Monomial, Q)], negate_b: bool) -> Vec<(Monomial, Q)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    for t in &b[j..] {
        let c = if negate_b { -&t.1 } else { t.1.clone() };
        out.push((t.0.clone(), c));
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial {
            terms: merge(&self.terms, &rhs.terms, false),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial {
            terms: merge(&self.terms, &rhs.terms, true),
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return Polynomial {
                terms: self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect(),
            };
        }
        if self.terms.len() == 1 {
            return rhs * self;
        }
        let mut acc: HashMap<Monomial, Q> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                let key = m.mul(n);
                let v = c * d;
                match acc.get_mut(&key) {
                    Some(x) => *x += v,
                    None => {
                        acc.insert(key, v);
                    }
                }
            }
        }
        Polynomial::from_map(acc)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::SymbolKind;

    fn x() -> Polynomial {
        Polynomial::var(Symbol::new("poly_x", SymbolKind::Parameter))
    }
    fn y() -> Polynomial {
        Polynomial::var(Symbol::new("poly_y", SymbolKind::Parameter))
    }

    #[test]
    fn expand_square() {
        let s = &x() + &y();
        let sq = &s * &s;
        let expected = &(&(&x() * &x()) + &(&x() * &y()).scale(&q_int(2))) + &(&y() * &y());
        assert_eq!(sq, expected);
        assert_eq!(s.pow(2), expected);
    }

    #[test]
    fn exact_division() {
        let a = &x() + &y();
        let b = &x() - &y();
        let p = &a * &b;
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&(&x() + &Polynomial::one())), None);
    }

    #[test]
    fn reduce_square_relation() {
        let c = Polynomial::var(Symbol::new("poly_c", SymbolKind::Parameter));
        let s_sym = Symbol::new("poly_s", SymbolKind::Parameter);
        let s = Polynomial::var(s_sym);
        let one_minus_c2 = &Polynomial::one() - &(&c * &c);
        let e = &(&c * &c) + &(&s * &s);
        assert_eq!(e.reduce_square(s_sym, &one_minus_c2), Polynomial::one());
        let cube = s.pow(3);
        assert_eq!(cube.reduce_square(s_sym, &one_minus_c2), &s * &one_minus_c2);
    }
}
