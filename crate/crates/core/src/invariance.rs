use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use jetlie_kernel::{Assumptions, Expr, KernelError, Point, RadicalMonomial, Sampler, Substitution, Symbol, Q};
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::CoreError;
use crate::jetspace::JetSpace;
use crate::liefield::{same_space, ProlongedField, VectorField};
use crate::verdict::{check_seed, decide, decide_with, Verdict};

/// Equations `e = 0` with solved leading derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct PdeSystem {
    name: String,
    space: Arc<JetSpace>,
    equations: Vec<Expr>,
    solved: Vec<(Symbol, Expr)>,
    assumptions: Assumptions,
}

impl PdeSystem {
    /// Validates that substituting `solved` into every equation gives zero.
    pub fn new(
        name: &str,
        space: &Arc<JetSpace>,
        equations: Vec<Expr>,
        solved: Vec<(Symbol, Expr)>,
        assumptions: Assumptions,
    ) -> Result<Self, CoreError> {
        let keys: BTreeSet<Symbol> = solved.iter().map(|(s, _)| *s).collect();
        if keys.len() != solved.len() {
            return Err(CoreError::DuplicateName(name.to_string()));
        }
        for (s, img) in &solved {
            if !space.order_of(*s).map(|o| o > 0).unwrap_or(false) {
                return Err(CoreError::NotSolvable(0, s.name().to_string()));
            }
            if img.symbols().iter().any(|x| keys.contains(x)) {
                return Err(CoreError::LeadingDerivativeRemains(s.name().to_string()));
            }
        }
        let sys = PdeSystem {
            name: name.to_string(),
            space: space.clone(),
            equations,
            solved,
            assumptions,
        };
        let sigma = sys.substitution();
        for (k, e) in sys.equations.iter().enumerate() {
            if !e.substitute(&sigma, &sys.assumptions)?.is_zero() {
                return Err(CoreError::InconsistentSolvedForm(sys.name.clone(), k));
            }
        }
        Ok(sys)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn equations(&self) -> &[Expr] {
        &self.equations
    }

    pub fn solved(&self) -> &[(Symbol, Expr)] {
        &self.solved
    }

    pub fn assumptions(&self) -> &Assumptions {
        &self.assumptions
    }

    pub fn substitution(&self) -> Substitution {
        self.solved.iter().cloned().collect()
    }

    pub fn order(&self) -> u32 {
        self.equations.iter().map(|e| self.space.expr_order(e)).max().unwrap_or(0)
    }

    /// Equations and conditions together, with a combined solved form.
    pub fn augmented(&self, conditions: &[Expr], solved: Vec<(Symbol, Expr)>) -> Result<PdeSystem, CoreError> {
        let mut eqs = self.equations.clone();
        eqs.extend(conditions.iter().cloned());
        PdeSystem::new(&self.name, &self.space, eqs, solved, self.assumptions.clone())
    }
}

/// Solves `equations[k]` for `targets[k]` in turn; each target must occur linearly.
/// Later solutions are substituted into earlier ones so the result is closed.
pub fn solve_linear(
    equations: &[Expr],
    targets: &[Symbol],
    assume: &Assumptions,
) -> Result<Vec<(Symbol, Expr)>, CoreError> {
    let mut solved: Vec<(Symbol, Expr)> = Vec::new();
    for (k, (e, t)) in equations.iter().zip(targets).enumerate() {
        let sigma: Substitution = solved.iter().cloned().collect();
        let e = e.substitute(&sigma, assume)?;
        let a = e.diff(*t);
        if a.is_zero() || a.contains(*t) {
            return Err(CoreError::NotSolvable(k, t.name().to_string()));
        }
        let zero: Substitution = [(*t, Expr::zero())].into_iter().collect();
        let b = e.substitute(&zero, assume)?;
        let v = b.neg().div(&a)?;
        let back: Substitution = [(*t, v.clone())].into_iter().collect();
        for (_, img) in solved.iter_mut() {
            *img = img.substitute(&back, assume)?;
        }
        solved.push((*t, v));
    }
    Ok(solved)
}

/// Verdict for one (field, target) pair.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub field: String,
    pub target: String,
    pub verdict: Verdict,
    /// Solved coordinates substituted before deciding.
    pub substituted: Vec<Symbol>,
    /// Number of coefficient equations after splitting on parameters.
    pub split_equations: Option<usize>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Prolongs `f` to `order` and decides `X(e) = 0` on the locus given by `solved`.
#[allow(clippy::too_many_arguments)]
fn check_on(
    f: &VectorField,
    order: u32,
    target: &str,
    e: &Expr,
    solved: &[(Symbol, Expr)],
    assume: &Assumptions,
    split: &[Symbol],
    seed: u64,
) -> Result<CheckOutcome, CoreError> {
    let pf = f.prolong(order)?;
    let terms = pf.apply_terms(e)?;
    let id = format!("{}|{}", f.name(), target);
    let sigma: Substitution = solved.iter().cloned().collect();
    let raw = Expr::sum(terms.iter());
    let residual = raw.substitute(&sigma, assume)?;
    if let Some(s) = residual.symbols().into_iter().find(|s| sigma.contains_key(s)) {
        return Err(CoreError::LeadingDerivativeRemains(s.name().to_string()));
    }
    let split_equations = if split.is_empty() {
        None
    } else {
        let set: BTreeSet<Symbol> = split.iter().cloned().collect();
        Some(residual.collect(&set)?.len())
    };
    let mut extra: BTreeSet<Symbol> = BTreeSet::new();
    for (_, img) in solved {
        extra.extend(img.symbols());
    }
    let extra: Vec<Symbol> = extra.into_iter().collect();
    let extend = |pt: &mut Point| -> Result<(), KernelError> {
        let mut vals = Vec::with_capacity(solved.len());
        for (s, img) in solved {
            vals.push((*s, img.eval_exact(pt)?));
        }
        for (s, v) in vals {
            pt.insert(s, v);
        }
        Ok(())
    };
    let verdict = decide_with(&terms, Some(&residual), &extra, seed, &id, &extend)?;
    Ok(CheckOutcome {
        field: f.name().to_string(),
        target: target.to_string(),
        verdict,
        substituted: solved.iter().map(|(s, _)| *s).collect(),
        split_equations,
    })
}

/// `X(e) = 0` identically, with `X` prolonged to the jet order of `e`.
pub fn strict_invariance(f: &VectorField, exprs: &[(String, Expr)], seed: u64) -> Result<Vec<CheckOutcome>, CoreError> {
    exprs
        .par_iter()
        .map(|(name, e)| {
            let order = f.space().expr_order(e);
            check_on(f, order, name, e, &[], &Assumptions::new(), &[], seed)
        })
        .collect()
}

/// `X(e) = 0` after substituting `solved`, for an expression rather than a system.
pub fn invariance_on_locus(
    f: &VectorField,
    name: &str,
    e: &Expr,
    solved: &[(Symbol, Expr)],
    assume: &Assumptions,
    seed: u64,
) -> Result<CheckOutcome, CoreError> {
    let order = f.space().expr_order(e);
    check_on(f, order, name, e, solved, assume, &[], seed)
}

/// Invariance of every equation on the solution manifold.
pub fn manifold_invariance(
    f: &VectorField,
    sys: &PdeSystem,
    split: &[Symbol],
    seed: u64,
) -> Result<Vec<CheckOutcome>, CoreError> {
    conditional_invariance(f, sys, &[], None, split, seed)
}

/// Manifold invariance of the system augmented by `conditions`. With no conditions
/// this is [`manifold_invariance`]. `solved` overrides the system's solved form and
/// must cover the conditions.
pub fn conditional_invariance(
    f: &VectorField,
    sys: &PdeSystem,
    conditions: &[Expr],
    solved: Option<Vec<(Symbol, Expr)>>,
    split: &[Symbol],
    seed: u64,
) -> Result<Vec<CheckOutcome>, CoreError> {
    if !same_space(f.space(), sys.space()) {
        return Err(CoreError::SpaceMismatch(f.name().to_string(), sys.name().to_string()));
    }
    let aug = match solved {
        Some(s) => sys.augmented(conditions, s)?,
        None if conditions.is_empty() => sys.clone(),
        None => return Err(CoreError::NotSolvable(sys.equations.len(), "conditions".into())),
    };
    let order = aug.order();
    let n = sys.equations.len();
    aug.equations
        .par_iter()
        .enumerate()
        .map(|(k, e)| {
            let target = if k < n {
                format!("{}[{}]", sys.name, k + 1)
            } else {
                format!("{}:condition[{}]", sys.name, k + 1 - n)
            };
            check_on(f, order, &target, e, &aug.solved, &aug.assumptions, split, seed)
        })
        .collect()
}

/// Rank with the point it was computed at.
#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub rank: usize,
    pub columns: usize,
    pub seeds: [u64; 2],
    pub point: Point,
}

fn rank_at<F>(seed: u64, syms: &BTreeSet<Symbol>, rows: F) -> Result<(usize, Point), CoreError>
where
    F: Fn(&Point) -> Result<Vec<Vec<Q>>, CoreError>,
{
    let mut sampler = Sampler::new(seed);
    for _ in 0..=jetlie_kernel::eval::MAX_RETRIES {
        let pt = sampler.point(syms.iter().cloned());
        match rows(&pt) {
            Ok(m) => return Ok((rank(m), pt)),
            Err(CoreError::Kernel(KernelError::SingularPoint)) | Err(CoreError::Kernel(KernelError::DivisionByZero)) => {
                continue
            }
            Err(e) => return Err(e),
        }
    }
    Err(CoreError::DegeneratePoint)
}

fn two_seed_rank<F>(seed: u64, id: &str, syms: &BTreeSet<Symbol>, columns: usize, rows: F) -> Result<RankReport, CoreError>
where
    F: Fn(&Point) -> Result<Vec<Vec<Q>>, CoreError>,
{
    let s1 = check_seed(seed, id);
    let s2 = check_seed(s1, id);
    let (r1, pt) = rank_at(s1, syms, &rows)?;
    let (r2, _) = rank_at(s2, syms, &rows)?;
    if r1 != r2 {
        return Err(CoreError::RankUnstable(r1, r2));
    }
    Ok(RankReport {
        rank: r1,
        columns,
        seeds: [s1, s2],
        point: pt,
    })
}

fn prolonged_all(fields: &[VectorField], order: u32) -> Result<(Arc<JetSpace>, Vec<ProlongedField>), CoreError> {
    let space = match fields.first() {
        Some(f) => f.space().clone(),
        None => return Err(CoreError::BadParams("no fields".into())),
    };
    let mut prolonged = Vec::new();
    for f in fields {
        if !same_space(f.space(), &space) {
            return Err(CoreError::SpaceMismatch(fields[0].name().to_string(), f.name().to_string()));
        }
        prolonged.push(f.prolong(order)?);
    }
    Ok((space, prolonged))
}

fn orbit_rows(prolonged: &[ProlongedField], cols: &[Symbol], pt: &Point) -> Result<Vec<Vec<Q>>, CoreError> {
    let mut m = Vec::new();
    for p in prolonged {
        let mut row = Vec::with_capacity(cols.len());
        for s in cols {
            row.push(p.coeff(*s).eval_exact(pt)?);
        }
        m.push(row);
    }
    Ok(m)
}

fn jacobian_rows(jac: &[Vec<Expr>], pt: &Point) -> Result<Vec<Vec<Q>>, CoreError> {
    let mut m = Vec::new();
    for row in jac {
        let mut common: Option<RadicalMonomial> = None;
        let mut vals = Vec::with_capacity(row.len());
        for e in row {
            let mut v = Q::zero();
            for (mono, c) in e.eval_components(pt)? {
                if c.is_zero() {
                    continue;
                }
                match &common {
                    None => common = Some(mono),
                    Some(m) if *m == mono => {}
                    Some(_) => return Err(CoreError::BadParams("Jacobian row mixes distinct radical factors".into())),
                }
                v += c;
            }
            vals.push(v);
        }
        m.push(vals);
    }
    Ok(m)
}

fn jacobian(exprs: &[Expr], cols: &[Symbol]) -> Vec<Vec<Expr>> {
    exprs.iter().map(|e| cols.iter().map(|s| e.diff(*s)).collect()).collect()
}

/// Rank of the prolonged coefficient vectors at a random point.
pub fn orbit_rank(fields: &[VectorField], order: u32, seed: u64) -> Result<RankReport, CoreError> {
    let (space, prolonged) = prolonged_all(fields, order)?;
    let cols = space.coordinates_to(order);
    let mut syms: BTreeSet<Symbol> = cols.iter().cloned().collect();
    for p in &prolonged {
        for c in p.coeffs().values() {
            syms.extend(c.symbols());
        }
    }
    let id = format!("orbit:{}", fields.iter().map(|f| f.name()).collect::<Vec<_>>().join(","));
    two_seed_rank(seed, &id, &syms, cols.len(), |pt| orbit_rows(&prolonged, &cols, pt))
}

/// Rank of the Jacobian of `exprs` with respect to the coordinates up to `order`.
/// Each row is divided by its common radical factor before evaluation.
pub fn functional_rank(exprs: &[Expr], space: &JetSpace, order: u32, seed: u64) -> Result<RankReport, CoreError> {
    let cols = space.coordinates_to(order);
    let jac = jacobian(exprs, &cols);
    let mut syms: BTreeSet<Symbol> = cols.iter().cloned().collect();
    for e in exprs {
        syms.extend(e.symbols());
    }
    let id = format!("functional:{}", exprs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(";"));
    two_seed_rank(seed, &id, &syms, cols.len(), |pt| jacobian_rows(&jac, pt))
}

/// Orbit rank of `fields` and functional rank of `exprs` at the same sampled points.
pub fn rank_balance(
    fields: &[VectorField],
    exprs: &[Expr],
    order: u32,
    seed: u64,
) -> Result<(RankReport, RankReport), CoreError> {
    let (space, prolonged) = prolonged_all(fields, order)?;
    let cols = space.coordinates_to(order);
    let jac = jacobian(exprs, &cols);
    let mut syms: BTreeSet<Symbol> = cols.iter().cloned().collect();
    for p in &prolonged {
        for c in p.coeffs().values() {
            syms.extend(c.symbols());
        }
    }
    for e in exprs {
        syms.extend(e.symbols());
    }
    let id = format!("balance:{}", fields.iter().map(|f| f.name()).collect::<Vec<_>>().join(","));
    let orbit = two_seed_rank(seed, &id, &syms, cols.len(), |pt| {
        jacobian_rows(&jac, pt)?;
        orbit_rows(&prolonged, &cols, pt)
    })?;
    let functional = two_seed_rank(seed, &id, &syms, cols.len(), |pt| {
        orbit_rows(&prolonged, &cols, pt)?;
        jacobian_rows(&jac, pt)
    })?;
    Ok((orbit, functional))
}

/// Exact rank by Gaussian elimination.
pub fn rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..cols {
                let d = &f * &m[r][j];
                m[i][j] -= d;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Per-coefficient equality of two maps.
pub fn same_coefficients(a: &BTreeMap<Symbol, Expr>, b: &BTreeMap<Symbol, Expr>) -> bool {
    let keys: BTreeSet<&Symbol> = a.keys().chain(b.keys()).collect();
    keys.into_iter().all(|k| {
        let x = a.get(k).cloned().unwrap_or_else(Expr::zero);
        let y = b.get(k).cloned().unwrap_or_else(Expr::zero);
        x == y
    })
}

/// Strict invariance decided for a single expression, without prolonging twice.
pub fn annihilates(f: &VectorField, name: &str, e: &Expr, seed: u64) -> Result<CheckOutcome, CoreError> {
    let order = f.space().expr_order(e);
    check_on(f, order, name, e, &[], &Assumptions::new(), &[], seed)
}

/// Decides `a = b` with a cross-check.
pub fn equal(a: &Expr, b: &Expr, seed: u64, id: &str) -> Result<Verdict, CoreError> {
    decide(&[a.clone(), b.neg()], &[], seed, id)
}
