use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::KernelError;
use crate::gcd::squarefree;
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;
use crate::Q;

/// Polynomials assumed strictly positive. Consulted only when pulling powers of a
/// factor out of a radical base.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assumptions {
    positive: Vec<Polynomial>,
}

impl Assumptions {
    pub fn new() -> Self {
        Assumptions::default()
    }

    /// Registers `p > 0`. The polynomial is stored as its primitive associate with
    /// the given sign kept, so `1 - p t` stays `1 - p t`.
    pub fn assume_positive(&mut self, p: Polynomial) {
        if p.is_constant() {
            return;
        }
        let c = p.content();
        let q = p.scale(&c.recip());
        if !self.positive.contains(&q) {
            self.positive.push(q);
        }
    }

    pub fn with(mut self, p: Polynomial) -> Self {
        self.assume_positive(p);
        self
    }

    pub fn positive(&self) -> &[Polynomial] {
        &self.positive
    }

    pub fn merge(&mut self, other: &Assumptions) {
        for p in &other.positive {
            self.assume_positive(p.clone());
        }
    }
}

/// `base^exponent` with `0 < exponent < 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RadicalFactor {
    pub base: Polynomial,
    pub exponent: Q,
}

/// Product of radical factors with pairwise distinct bases, sorted by base.
/// The empty product is the unit monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct RadicalMonomial {
    factors: Vec<RadicalFactor>,
}

fn frac_floor(q: &Q) -> (BigInt, Q) {
    let f = q.floor();
    let rest = q - &f;
    (f.to_integer(), rest)
}

fn int_i64(n: &BigInt) -> Result<i64, KernelError> {
    i64::try_from(n.clone()).map_err(|_| KernelError::UnsupportedRadical("exponent too large".into()))
}

impl RadicalMonomial {
    pub fn one() -> Self {
        RadicalMonomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[RadicalFactor] {
        &self.factors
    }

    /// Single canonical factor; `base` must already be canonical for radicals.
    pub(crate) fn single(base: Polynomial, exponent: Q) -> Self {
        RadicalMonomial {
            factors: vec![RadicalFactor { base, exponent }],
        }
    }

    /// Product of two monomials. Integer parts of combined exponents are returned as a
    /// polynomial factor to be folded into the coefficient.
    pub fn mul(&self, other: &RadicalMonomial) -> (Polynomial, RadicalMonomial) {
        if other.is_one() {
            return (Polynomial::one(), self.clone());
        }
        if self.is_one() {
            return (Polynomial::one(), other.clone());
        }
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let mut fold = Polynomial::one();
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].base.cmp(&b[j].base) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let mut e = &a[i].exponent + &b[j].exponent;
                    if e >= Q::one() {
                        fold = &fold * &a[i].base;
                        e -= Q::one();
                    }
                    if !e.is_zero() {
                        out.push(RadicalFactor {
                            base: a[i].base.clone(),
                            exponent: e,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        (fold, RadicalMonomial { factors: out })
    }

    /// Multiplicative inverse as (rational coefficient, monomial).
    pub fn inv(&self) -> (RationalFunction, RadicalMonomial) {
        let mut den = Polynomial::one();
        let mut out = Vec::with_capacity(self.factors.len());
        for f in &self.factors {
            den = &den * &f.base;
            out.push(RadicalFactor {
                base: f.base.clone(),
                exponent: Q::one() - &f.exponent,
            });
        }
        (
            RationalFunction::new(Polynomial::one(), den).expect("radical bases are nonzero"),
            RadicalMonomial { factors: out },
        )
    }

    /// Raises to a rational power: returns coefficient and monomial.
    pub fn rpow(&self, r: &Q) -> Result<(RationalFunction, RadicalMonomial), KernelError> {
        let mut coeff = RationalFunction::one();
        let mut out = Vec::new();
        for f in &self.factors {
            let e = &f.exponent * r;
            let (ip, frac) = frac_floor(&e);
            let ip = int_i64(&ip)?;
            let c = RationalFunction::from(f.base.clone())
                .pow(ip)
                .ok_or(KernelError::DivisionByZero)?;
            coeff = coeff.mul(&c);
            if !frac.is_zero() {
                out.push(RadicalFactor {
                    base: f.base.clone(),
                    exponent: frac,
                });
            }
        }
        Ok((coeff, RadicalMonomial { factors: out }))
    }
}

fn perfect_root(n: &BigInt, b: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(b);
    if num_traits::pow(r.clone(), b as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact rational `c^(a/b)` for positive `c`, if it exists.
pub fn rational_power(c: &Q, r: &Q) -> Option<Q> {
    if c.is_zero() {
        return if r.is_positive() { Some(Q::zero()) } else { None };
    }
    if c.is_negative() {
        return None;
    }
    let a = r.numer();
    let b: u32 = u32::try_from(r.denom().clone()).ok()?;
    let n = perfect_root(c.numer(), b)?;
    let d = perfect_root(c.denom(), b)?;
    let root = Q::new(n, d);
    let a = i32::try_from(a.clone()).ok()?;
    Some(num_traits::pow::Pow::pow(root, a))
}

/// Canonical form of `p^r` for a polynomial `p` and non-integer rational `r`.
///
/// Registered positive factors are pulled out first; other repeated factors are
/// pulled out only when the extracted power is even (sign-free). The remaining
/// square-free part, with its sign, becomes a single radical base.
pub fn radical_power(
    p: &Polynomial,
    r: &Q,
    assume: &Assumptions,
) -> Result<(RationalFunction, RadicalMonomial), KernelError> {
    if r.is_integer() {
        let e = int_i64(&r.to_integer())?;
        let c = RationalFunction::from(p.clone())
            .pow(e)
            .ok_or(KernelError::DivisionByZero)?;
        return Ok((c, RadicalMonomial::one()));
    }
    if p.is_zero() {
        if r.is_positive() {
            return Ok((RationalFunction::zero(), RadicalMonomial::one()));
        }
        return Err(KernelError::DivisionByZero);
    }
    let mut coeff = RationalFunction::one();
    let mut mono = RadicalMonomial::one();

    let content = p.content();
    let mut rest = p.scale(&content.recip());
    let cpow = rational_power(&content, r).ok_or_else(|| {
        KernelError::UnsupportedRadical(format!("constant {} is not a perfect power", content))
    })?;
    coeff = coeff.scale(&cpow);

    for f in assume.positive() {
        let mut m: u32 = 0;
        while rest.total_degree() >= f.total_degree() {
            match rest.div_exact(f) {
                Some(q) => {
                    rest = q;
                    m += 1;
                }
                None => break,
            }
        }
        if m > 0 {
            let e = r * Q::from_integer(BigInt::from(m));
            let (ip, frac) = frac_floor(&e);
            let ip = int_i64(&ip)?;
            let c = RationalFunction::from(f.clone()).pow(ip).ok_or(KernelError::DivisionByZero)?;
            coeff = coeff.mul(&c);
            if !frac.is_zero() {
                let (fold, mm) = mono.mul(&RadicalMonomial::single(f.clone(), frac));
                coeff = coeff.mul_poly(&fold);
                mono = mm;
            }
        }
    }

    if rest.is_constant() {
        let c = rest.constant_value().expect("constant");
        if c.is_negative() {
            return Err(KernelError::UnsupportedRadical(
                "negative constant under a root".into(),
            ));
        }
        return Ok((coeff, mono));
    }

    let (unit, factors) = squarefree(&rest);
    let mut base = Polynomial::constant(unit);
    for (g, mult) in factors {
        if mult == 1 {
            base = &base * &g;
            continue;
        }
        let m = BigInt::from(mult);
        let odd = mult % 2;
        let even = mult - odd;
        // g^even is sign-free; its power must be an even integer power of g
        let e = r * Q::from_integer(BigInt::from(even));
        if !e.is_integer() || !e.to_integer().is_even() {
            return Err(KernelError::UnsupportedRadical(format!(
                "repeated factor ({}) of multiplicity {} under exponent {} requires a positivity assumption",
                g, m, r
            )));
        }
        let ip = int_i64(&e.to_integer())?;
        let c = RationalFunction::from(g.clone()).pow(ip).ok_or(KernelError::DivisionByZero)?;
        coeff = coeff.mul(&c);
        if odd == 1 {
            base = &base * &g;
        }
    }
    if let Some(c) = base.constant_value() {
        if c.is_negative() {
            return Err(KernelError::UnsupportedRadical(
                "negative constant under a root".into(),
            ));
        }
        return Ok((coeff, mono));
    }
    let (ip, frac) = frac_floor(r);
    let ip = int_i64(&ip)?;
    let c = RationalFunction::from(base.clone()).pow(ip).ok_or(KernelError::DivisionByZero)?;
    coeff = coeff.mul(&c);
    let (fold, mm) = mono.mul(&RadicalMonomial::single(base, frac));
    coeff = coeff.mul_poly(&fold);
    Ok((coeff, mm))
}
