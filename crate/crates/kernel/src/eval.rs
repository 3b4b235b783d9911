use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::KernelError;
use crate::expr::Expr;
use crate::radical::{rational_power, RadicalMonomial};
use crate::symbol::Symbol;
use crate::Q;

/// Assignment of rational values to symbols.
pub type Point = BTreeMap<Symbol, Q>;

/// Largest absolute numerator/denominator drawn for random points.
pub const SAMPLE_BOUND: i64 = 50;
/// Resampling limit for singular points.
pub const MAX_RETRIES: usize = 20;

impl Expr {
    /// Exact value; radicals must evaluate to rationals.
    pub fn eval_exact(&self, pt: &Point) -> Result<Q, KernelError> {
        let value = |s: Symbol| pt.get(&s).cloned();
        let mut acc = Q::zero();
        for (m, c) in self.terms() {
            let cv = eval_rf(c, &value)?;
            let mut t = cv;
            for f in m.factors() {
                let b = f
                    .base
                    .eval(&value)
                    .ok_or_else(|| unbound(&f.base.symbols(), pt))?;
                if b.is_zero() || b.is_negative() {
                    return Err(KernelError::SingularPoint);
                }
                t *= rational_power(&b, &f.exponent).ok_or(KernelError::IrrationalValue)?;
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Values of the radical-free coefficients, keyed by radical monomial.
    /// Fails with `SingularPoint` if a denominator or radical base vanishes.
    pub fn eval_components(&self, pt: &Point) -> Result<Vec<(RadicalMonomial, Q)>, KernelError> {
        let value = |s: Symbol| pt.get(&s).cloned();
        let mut out = Vec::with_capacity(self.num_terms());
        for (m, c) in self.terms() {
            for f in m.factors() {
                let b = f
                    .base
                    .eval(&value)
                    .ok_or_else(|| unbound(&f.base.symbols(), pt))?;
                if b.is_zero() {
                    return Err(KernelError::SingularPoint);
                }
            }
            out.push((m.clone(), eval_rf(c, &value)?));
        }
        Ok(out)
    }
}

fn unbound(syms: &BTreeSet<Symbol>, pt: &Point) -> KernelError {
    let missing = syms.iter().find(|s| !pt.contains_key(s));
    KernelError::UnboundSymbol(missing.map(|s| s.name().to_string()).unwrap_or_default())
}

fn eval_rf(c: &crate::ratfun::RationalFunction, value: &impl Fn(Symbol) -> Option<Q>) -> Result<Q, KernelError> {
    match c.eval(value) {
        None => Err(KernelError::UnboundSymbol(
            c.symbols()
                .iter()
                .find(|s| value(**s).is_none())
                .map(|s| s.name().to_string())
                .unwrap_or_default(),
        )),
        Some(Err(())) => Err(KernelError::SingularPoint),
        Some(Ok(v)) => Ok(v),
    }
}

/// Seeded source of random rational points.
pub struct Sampler {
    rng: ChaCha8Rng,
    seed: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Nonzero rational with numerator in [-50, 50] and denominator in [1, 50].
    pub fn rational(&mut self) -> Q {
        let mut n = 0;
        while n == 0 {
            n = self.rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
        }
        let d = self.rng.gen_range(1..=SAMPLE_BOUND);
        Q::new(n.into(), d.into())
    }

    pub fn point(&mut self, symbols: impl IntoIterator<Item = Symbol>) -> Point {
        let mut syms: Vec<Symbol> = symbols.into_iter().collect();
        syms.sort();
        syms.dedup();
        syms.into_iter().map(|s| (s, self.rational())).collect()
    }
}

/// Outcome of a randomized cross-check of a symbolic zero.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroCheck {
    /// Every sampled point gave zero for every radical component.
    Confirmed { points: usize },
    /// A point where the summands do not cancel.
    Contradicted { point: Point },
    /// No nonsingular point found within the retry budget.
    Degenerate,
}

fn sum_components(summands: &[Expr], pt: &Point) -> Result<HashMap<RadicalMonomial, Q>, KernelError> {
    let mut acc: HashMap<RadicalMonomial, Q> = HashMap::new();
    for s in summands {
        for (m, v) in s.eval_components(pt)? {
            *acc.entry(m).or_insert_with(Q::zero) += v;
        }
    }
    Ok(acc)
}

/// Evaluates `sum(summands)` component-wise at `points` random points.
pub fn certify_zero(summands: &[Expr], extra: &[Symbol], sampler: &mut Sampler, points: usize) -> ZeroCheck {
    certify_zero_with(summands, extra, sampler, points, &|_| Ok(()))
}

/// As [`certify_zero`], but `extend` may complete each sampled point (e.g. with
/// values of solved coordinates) before evaluation. Symbols that `extend` sets
/// should be listed in neither `extra` nor the summands' free sampling set;
/// they are overwritten.
pub fn certify_zero_with(
    summands: &[Expr],
    extra: &[Symbol],
    sampler: &mut Sampler,
    points: usize,
    extend: &dyn Fn(&mut Point) -> Result<(), KernelError>,
) -> ZeroCheck {
    let mut syms: BTreeSet<Symbol> = extra.iter().cloned().collect();
    for s in summands {
        syms.extend(s.symbols());
    }
    let mut done = 0;
    let mut failures = 0;
    while done < points {
        let mut pt = sampler.point(syms.iter().cloned());
        let outcome = extend(&mut pt).and_then(|_| sum_components(summands, &pt));
        match outcome {
            Ok(acc) => {
                if acc.values().any(|v| !v.is_zero()) {
                    return ZeroCheck::Contradicted { point: pt };
                }
                done += 1;
            }
            Err(_) => {
                failures += 1;
                if failures > MAX_RETRIES {
                    return ZeroCheck::Degenerate;
                }
            }
        }
    }
    ZeroCheck::Confirmed { points: done }
}

/// Finds a point where some radical component of `e` is a nonzero rational.
pub fn find_witness(e: &Expr, extra: &[Symbol], sampler: &mut Sampler) -> Option<(Point, Q)> {
    let mut syms = e.symbols();
    syms.extend(extra.iter().cloned());
    for _ in 0..=MAX_RETRIES {
        let pt = sampler.point(syms.iter().cloned());
        if let Ok(comps) = e.eval_components(&pt) {
            if let Some((_, v)) = comps.into_iter().find(|(_, v)| !v.is_zero()) {
                return Some((pt, v));
            }
        }
    }
    None
}
