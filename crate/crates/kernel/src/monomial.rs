use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::symbol::Symbol;

/// Power product of symbols, stored as (symbol, exponent) pairs sorted by symbol id.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(SmallVec<[(Symbol, u32); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(s: Symbol) -> Monomial {
        Monomial::var_pow(s, 1)
    }

    pub fn var_pow(s: Symbol, e: u32) -> Monomial {
        let mut v = SmallVec::new();
        if e > 0 {
            v.push((s, e));
        }
        Monomial(v)
    }

    /// Builds a monomial from arbitrary pairs, merging repeated symbols.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Symbol, u32)>) -> Monomial {
        let mut v: SmallVec<[(Symbol, u32); 4]> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_by_key(|p| p.0);
        let mut out: SmallVec<[(Symbol, u32); 4]> = SmallVec::new();
        for (s, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, s: Symbol) -> u32 {
        self.0
            .iter()
            .find(|p| p.0 == s)
            .map(|p| p.1)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.0.iter().map(|p| p.0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(s, k)| (s, k * e)).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(s, e)| other.exponent(s) >= e)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn div_of(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        for &(s, e) in other.0.iter() {
            let d = self.exponent(s);
            if d > e {
                return None;
            }
            if e > d {
                out.push((s, e - d));
            }
        }
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(s, e) in self.0.iter() {
            let f = other.exponent(s);
            if f > 0 {
                out.push((s, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Removes `s` and returns its exponent together with the remaining monomial.
    pub fn split_off(&self, s: Symbol) -> (u32, Monomial) {
        let mut e = 0;
        let mut out = SmallVec::new();
        for &(t, k) in self.0.iter() {
            if t == s {
                e = k;
            } else {
                out.push((t, k));
            }
        }
        (e, Monomial(out))
    }

    /// Keeps only the symbols accepted by `keep`; returns (kept, rest).
    pub fn partition(&self, keep: impl Fn(Symbol) -> bool) -> (Monomial, Monomial) {
        let mut a = SmallVec::new();
        let mut b = SmallVec::new();
        for &p in self.0.iter() {
            if keep(p.0) {
                a.push(p);
            } else {
                b.push(p);
            }
        }
        (Monomial(a), Monomial(b))
    }
}

/// Graded-lexicographic order; smaller symbol ids are more significant.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        for i in 0..a.len().max(b.len()) {
            match (a.get(i), b.get(i)) {
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        return if va < vb {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
                (None, None) => break,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::SymbolKind;

    #[test]
    fn grlex_order() {
        let a = Symbol::new("mono_a", SymbolKind::Parameter);
        let b = Symbol::new("mono_b", SymbolKind::Parameter);
        let a2 = Monomial::var_pow(a, 2);
        let ab = Monomial::var(a).mul(&Monomial::var(b));
        let b2 = Monomial::var_pow(b, 2);
        let a1 = Monomial::var(a);
        assert!(a2 > ab && ab > b2 && b2 > a1);
        assert!(a1 > Monomial::var(b));
        assert!(Monomial::var(b) > Monomial::one());
    }

    #[test]
    fn divide_and_gcd() {
        let a = Symbol::new("mono_a", SymbolKind::Parameter);
        let b = Symbol::new("mono_b", SymbolKind::Parameter);
        let m = Monomial::from_pairs([(a, 2), (b, 1)]);
        let n = Monomial::from_pairs([(a, 1), (b, 3)]);
        assert_eq!(m.gcd(&n), Monomial::from_pairs([(a, 1), (b, 1)]));
        assert_eq!(Monomial::var(a).div_of(&m), Some(Monomial::from_pairs([(a, 1), (b, 1)])));
        assert_eq!(n.div_of(&m), None);
    }
}
