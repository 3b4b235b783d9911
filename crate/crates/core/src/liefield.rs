use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use jetlie_kernel::{Expr, Symbol};
use rayon::prelude::*;

use crate::error::CoreError;
use crate::jetspace::JetSpace;
use crate::verdict::{decide, Verdict};

/// First-order operator `sum c^s d_s (+ m)` on the base coordinates of a jet space.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    name: String,
    space: Arc<JetSpace>,
    coeffs: BTreeMap<Symbol, Expr>,
    multiplier: Option<Expr>,
}

pub(crate) fn same_space(a: &Arc<JetSpace>, b: &Arc<JetSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl VectorField {
    pub fn new(
        name: &str,
        space: &Arc<JetSpace>,
        coeffs: impl IntoIterator<Item = (Symbol, Expr)>,
        multiplier: Option<Expr>,
    ) -> Result<Self, CoreError> {
        let mut map: BTreeMap<Symbol, Expr> = BTreeMap::new();
        for (s, c) in coeffs {
            if !space.is_base(s) {
                return Err(CoreError::NotBaseCoordinate(s.name().to_string(), space.name().to_string()));
            }
            check_no_jets(name, space, &c)?;
            let slot = map.entry(s).or_insert_with(Expr::zero);
            *slot = slot.add(&c);
        }
        map.retain(|_, c| !c.is_zero());
        if let Some(m) = &multiplier {
            check_no_jets(name, space, m)?;
        }
        Ok(VectorField {
            name: name.to_string(),
            space: space.clone(),
            coeffs: map,
            multiplier: multiplier.filter(|m| !m.is_zero()),
        })
    }

    pub fn zero(name: &str, space: &Arc<JetSpace>) -> Self {
        VectorField {
            name: name.to_string(),
            space: space.clone(),
            coeffs: BTreeMap::new(),
            multiplier: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn coeff(&self, s: Symbol) -> Expr {
        self.coeffs.get(&s).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<Symbol, Expr> {
        &self.coeffs
    }

    pub fn multiplier(&self) -> Option<&Expr> {
        self.multiplier.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.multiplier.is_none()
    }

    /// Derivation part applied to a function of base coordinates and parameters.
    pub fn apply(&self, e: &Expr) -> Result<Expr, CoreError> {
        let ord = self.space.expr_order(e);
        if ord > 0 {
            return Err(CoreError::OrderExceeded { found: ord, limit: 0 });
        }
        Ok(Expr::sum(self.apply_terms(e).iter()))
    }

    fn apply_terms(&self, e: &Expr) -> Vec<Expr> {
        e.symbols()
            .into_iter()
            .filter_map(|s| self.coeffs.get(&s).map(|c| c.mul(&e.diff(s))))
            .collect()
    }

    /// Full operator action, including the zero-order part.
    pub fn apply_operator(&self, e: &Expr) -> Result<Expr, CoreError> {
        let d = self.apply(e)?;
        Ok(match &self.multiplier {
            Some(m) => d.add(&m.mul(e)),
            None => d,
        })
    }

    fn combine(&self, other: &VectorField, sign: i64, name: String) -> Result<VectorField, CoreError> {
        if !same_space(&self.space, &other.space) {
            return Err(CoreError::SpaceMismatch(self.name.clone(), other.name.clone()));
        }
        let mut coeffs = self.coeffs.clone();
        for (s, c) in &other.coeffs {
            let slot = coeffs.entry(*s).or_insert_with(Expr::zero);
            *slot = if sign > 0 { slot.add(c) } else { slot.sub(c) };
        }
        coeffs.retain(|_, c| !c.is_zero());
        let multiplier = match (&self.multiplier, &other.multiplier) {
            (None, None) => None,
            (a, b) => {
                let a = a.clone().unwrap_or_else(Expr::zero);
                let b = b.clone().unwrap_or_else(Expr::zero);
                let m = if sign > 0 { a.add(&b) } else { a.sub(&b) };
                Some(m).filter(|m| !m.is_zero())
            }
        };
        Ok(VectorField {
            name,
            space: self.space.clone(),
            coeffs,
            multiplier,
        })
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField, CoreError> {
        self.combine(other, 1, format!("{} + {}", self.name, other.name))
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField, CoreError> {
        self.combine(other, -1, format!("{} - {}", self.name, other.name))
    }

    /// Multiplies every coefficient by a scalar that must not involve base coordinates.
    pub fn scale(&self, c: &Expr) -> VectorField {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(s, e)| (*s, e.mul(c)))
            .filter(|(_, e)| !e.is_zero())
            .collect();
        VectorField {
            name: self.name.clone(),
            space: self.space.clone(),
            coeffs,
            multiplier: self.multiplier.as_ref().map(|m| m.mul(c)).filter(|m| !m.is_zero()),
        }
    }

    /// `[A, B]`, with zero-order part `A(b) - B(a)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField, CoreError> {
        Ok(self.bracket_parts(other)?.0)
    }

    /// Bracket together with, per coordinate, the unsummed pieces of each coefficient.
    fn bracket_parts(&self, other: &VectorField) -> Result<(VectorField, Vec<Vec<Expr>>), CoreError> {
        if !same_space(&self.space, &other.space) {
            return Err(CoreError::SpaceMismatch(self.name.clone(), other.name.clone()));
        }
        let keys: BTreeSet<Symbol> = self.coeffs.keys().chain(other.coeffs.keys()).cloned().collect();
        let mut coeffs = BTreeMap::new();
        let mut parts = Vec::new();
        for s in keys {
            let mut p = self.apply_terms(&other.coeff(s));
            p.extend(other.apply_terms(&self.coeff(s)).iter().map(|e| e.neg()));
            let c = Expr::sum(p.iter());
            if !c.is_zero() {
                coeffs.insert(s, c);
            }
            parts.push(p);
        }
        let multiplier = if self.multiplier.is_some() || other.multiplier.is_some() {
            let a = self.multiplier.clone().unwrap_or_else(Expr::zero);
            let b = other.multiplier.clone().unwrap_or_else(Expr::zero);
            let mut p = self.apply_terms(&b);
            p.extend(other.apply_terms(&a).iter().map(|e| e.neg()));
            let m = Expr::sum(p.iter());
            parts.push(p);
            Some(m).filter(|m| !m.is_zero())
        } else {
            None
        };
        Ok((
            VectorField {
                name: format!("[{}, {}]", self.name, other.name),
                space: self.space.clone(),
                coeffs,
                multiplier,
            },
            parts,
        ))
    }

    /// Equal coefficients and zero-order parts; names are ignored.
    pub fn same_action(&self, other: &VectorField) -> bool {
        same_space(&self.space, &other.space) && self.coeffs == other.coeffs && self.multiplier == other.multiplier
    }

    /// Prolongation to jet coordinates of order `order`.
    pub fn prolong(&self, order: u32) -> Result<ProlongedField, CoreError> {
        if self.multiplier.is_some() {
            return Err(CoreError::MultiplierNotProlongable(self.name.clone()));
        }
        let sp = &self.space;
        if order > sp.max_order() {
            return Err(CoreError::OrderExceeded {
                found: order,
                limit: sp.max_order(),
            });
        }
        let n = sp.independents().len();
        let mut coeffs = self.coeffs.clone();
        if order == 0 {
            return Ok(ProlongedField {
                base: self.clone(),
                order,
                coeffs,
            });
        }
        let xi: Vec<Expr> = sp.independents().iter().map(|s| self.coeff(*s)).collect();
        // D_i xi^j
        let mut dxi = vec![vec![Expr::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if !xi[j].is_zero() {
                    dxi[i][j] = sp.total_derivative(&xi[j], i, false)?;
                }
            }
        }
        for k in 1..=order {
            for a in 0..sp.dependents().len() {
                for mi in crate::jetspace::MultiIndex::all_of_order(n, k) {
                    let i = mi.last().expect("positive order");
                    let prev = mi.lowered(i).expect("count positive");
                    let prev_sym = sp.jet(a, &prev).expect("jet exists");
                    let eta_prev = coeffs.get(&prev_sym).cloned().unwrap_or_else(Expr::zero);
                    let mut parts = Vec::with_capacity(n + 1);
                    if !eta_prev.is_zero() {
                        parts.push(sp.total_derivative(&eta_prev, i, false)?);
                    }
                    for (j, d) in dxi[i].iter().enumerate() {
                        if !d.is_zero() {
                            let u = sp.jet(a, &prev.raised(j)).expect("jet exists");
                            parts.push(d.mul(&Expr::sym(u)).neg());
                        }
                    }
                    let eta = Expr::sum(parts.iter());
                    if !eta.is_zero() {
                        coeffs.insert(sp.jet(a, &mi).expect("jet exists"), eta);
                    }
                }
            }
        }
        Ok(ProlongedField {
            base: self.clone(),
            order,
            coeffs,
        })
    }
}

fn check_no_jets(name: &str, space: &JetSpace, e: &Expr) -> Result<(), CoreError> {
    for s in e.symbols() {
        if space.order_of(s).map(|o| o > 0).unwrap_or(false) {
            return Err(CoreError::JetInCoefficient(name.to_string(), s.name().to_string()));
        }
    }
    Ok(())
}

fn coeff_text(e: &Expr) -> String {
    let t = e.to_string();
    if t.contains(' ') || t.contains('/') {
        format!("({})", t)
    } else {
        t
    }
}

impl VectorField {
    /// The operator alone, as in `-t^2*@t - 2*t*x*@x`.
    pub fn operator(&self) -> String {
        let mut parts = Vec::new();
        for s in self.space.base_coordinates() {
            if let Some(c) = self.coeffs.get(&s) {
                if c.is_one() {
                    parts.push(format!("@{}", s));
                } else if c.neg().is_one() {
                    parts.push(format!("-@{}", s));
                } else {
                    parts.push(format!("{}*@{}", coeff_text(c), s));
                }
            }
        }
        if let Some(m) = &self.multiplier {
            parts.push(format!("scalar({})", m));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            match (i, p.strip_prefix('-')) {
                (0, _) => out.push_str(p),
                (_, Some(rest)) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                _ => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "field {} on {} = {};", self.name, self.space.name(), self.operator())
    }
}

/// A point field extended to jet coordinates.
#[derive(Clone, Debug)]
pub struct ProlongedField {
    base: VectorField,
    order: u32,
    coeffs: BTreeMap<Symbol, Expr>,
}

impl ProlongedField {
    pub fn base(&self) -> &VectorField {
        &self.base
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, s: Symbol) -> Expr {
        self.coeffs.get(&s).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<Symbol, Expr> {
        &self.coeffs
    }

    /// The unsummed terms `c^s * de/ds` of the action on `e`.
    pub fn apply_terms(&self, e: &Expr) -> Result<Vec<Expr>, CoreError> {
        let ord = self.base.space.expr_order(e);
        if ord > self.order {
            return Err(CoreError::OrderExceeded {
                found: ord,
                limit: self.order,
            });
        }
        Ok(e
            .symbols()
            .into_iter()
            .filter_map(|s| self.coeffs.get(&s).map(|c| c.mul(&e.diff(s))))
            .collect())
    }

    pub fn apply(&self, e: &Expr) -> Result<Expr, CoreError> {
        Ok(Expr::sum(self.apply_terms(e)?.iter()))
    }

    /// Coefficients of the commutator of two prolonged fields, computed directly on the jet space.
    pub fn commutator(&self, other: &ProlongedField) -> Result<BTreeMap<Symbol, Expr>, CoreError> {
        if !same_space(&self.base.space, &other.base.space) {
            return Err(CoreError::SpaceMismatch(self.base.name.clone(), other.base.name.clone()));
        }
        let keys: BTreeSet<Symbol> = self.coeffs.keys().chain(other.coeffs.keys()).cloned().collect();
        let mut out = BTreeMap::new();
        for s in keys {
            let c = self.apply(&other.coeff(s))?.sub(&other.apply(&self.coeff(s))?);
            if !c.is_zero() {
                out.insert(s, c);
            }
        }
        Ok(out)
    }
}

/// Linear combination of named generators.
pub type Combination = Vec<(String, Expr)>;

/// Structure constants `[A, B] = sum c_k E_k`. Unlisted pairs are zero unless
/// marked as out of range (their bracket leaves the realized generators).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CommutatorTable {
    names: Vec<String>,
    entries: BTreeMap<(usize, usize), Combination>,
    out_of_range: BTreeSet<(usize, usize)>,
}

impl CommutatorTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        CommutatorTable {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn index(&self, n: &str) -> Result<usize, CoreError> {
        self.names
            .iter()
            .position(|x| x == n)
            .ok_or_else(|| CoreError::UnknownGenerator(n.to_string()))
    }

    /// Records `[a, b] = combo`. Setting both orders requires antisymmetric agreement.
    pub fn set(&mut self, a: &str, b: &str, combo: &[(&str, Expr)]) -> Result<(), CoreError> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        let mut acc: BTreeMap<usize, Expr> = BTreeMap::new();
        for (n, e) in combo {
            let slot = acc.entry(self.index(n)?).or_insert_with(Expr::zero);
            *slot = slot.add(e);
        }
        let c: Combination = acc
            .into_iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(k, e)| (self.names[k].clone(), e))
            .collect();
        if i == j {
            if c.is_empty() {
                return Ok(());
            }
            return Err(CoreError::InconsistentTable(a.into(), b.into()));
        }
        let (key, c) = if i < j { ((i, j), c) } else { ((j, i), negate(&c)) };
        if let Some(old) = self.entries.get(&key) {
            if !same_combination(old, &c) {
                return Err(CoreError::InconsistentTable(a.into(), b.into()));
            }
        }
        if !c.is_empty() {
            self.entries.insert(key, c);
        }
        Ok(())
    }

    pub fn mark_out_of_range(&mut self, a: &str, b: &str) -> Result<(), CoreError> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        self.out_of_range.insert((i.min(j), i.max(j)));
        Ok(())
    }

    /// Pairs marked out of range, `a` before `b`.
    pub fn out_of_range_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.out_of_range
            .iter()
            .map(|(i, j)| (self.names[*i].as_str(), self.names[*j].as_str()))
    }

    pub fn is_out_of_range(&self, a: &str, b: &str) -> bool {
        match (self.index(a), self.index(b)) {
            (Ok(i), Ok(j)) => self.out_of_range.contains(&(i.min(j), i.max(j))),
            _ => false,
        }
    }

    pub fn get(&self, a: &str, b: &str) -> Result<Combination, CoreError> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        if i == j {
            return Ok(Vec::new());
        }
        let key = (i.min(j), i.max(j));
        let c = self.entries.get(&key).cloned().unwrap_or_default();
        Ok(if i < j { c } else { negate(&c) })
    }

    /// Listed nonzero entries as `(a, b, combination)` with `a` before `b`.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &Combination)> {
        self.entries
            .iter()
            .map(|((i, j), c)| (self.names[*i].as_str(), self.names[*j].as_str(), c))
    }

    /// Triples violating the Jacobi identity of the abstract structure constants.
    /// Triples touching an out-of-range pair are skipped.
    pub fn abstract_jacobi_failures(&self) -> Vec<(String, String, String)> {
        let n = self.names.len();
        let mut triples = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    triples.push((i, j, k));
                }
            }
        }
        triples
            .into_par_iter()
            .filter_map(|(i, j, k)| {
                let (a, b, c) = (&self.names[i], &self.names[j], &self.names[k]);
                let mut total: BTreeMap<String, Expr> = BTreeMap::new();
                for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                    match self.nested(x, y, z) {
                        Some(comb) => {
                            for (name, e) in comb {
                                let slot = total.entry(name).or_insert_with(Expr::zero);
                                *slot = slot.add(&e);
                            }
                        }
                        None => return None,
                    }
                }
                if total.values().all(|e| e.is_zero()) {
                    None
                } else {
                    Some((a.clone(), b.clone(), c.clone()))
                }
            })
            .collect()
    }

    /// `[[x, y], z]` from the table, `None` when an out-of-range pair is involved.
    fn nested(&self, x: &str, y: &str, z: &str) -> Option<Combination> {
        if self.is_out_of_range(x, y) {
            return None;
        }
        let mut out = Vec::new();
        for (name, c) in self.get(x, y).ok()? {
            if self.is_out_of_range(&name, z) {
                return None;
            }
            for (m, d) in self.get(&name, z).ok()? {
                out.push((m, c.mul(&d)));
            }
        }
        Some(out)
    }
}

fn negate(c: &Combination) -> Combination {
    c.iter().map(|(n, e)| (n.clone(), e.neg())).collect()
}

fn same_combination(a: &Combination, b: &Combination) -> bool {
    let mut acc: BTreeMap<&str, Expr> = BTreeMap::new();
    for (n, e) in a {
        let s = acc.entry(n.as_str()).or_insert_with(Expr::zero);
        *s = s.add(e);
    }
    for (n, e) in b {
        let s = acc.entry(n.as_str()).or_insert_with(Expr::zero);
        *s = s.sub(e);
    }
    acc.values().all(|e| e.is_zero())
}

#[derive(Clone, Debug)]
pub enum PairStatus {
    Pass,
    Fail { residual: VectorField },
    OutOfRange,
}

#[derive(Clone, Debug)]
pub struct PairResult {
    pub a: String,
    pub b: String,
    pub status: PairStatus,
}

/// Per-pair outcome of a table check, in field order.
#[derive(Clone, Debug)]
pub struct TableReport {
    pub pairs: Vec<PairResult>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| !matches!(p.status, PairStatus::Fail { .. }))
    }

    pub fn failures(&self) -> impl Iterator<Item = &PairResult> {
        self.pairs.iter().filter(|p| matches!(p.status, PairStatus::Fail { .. }))
    }

    pub fn checked(&self) -> usize {
        self.pairs.iter().filter(|p| !matches!(p.status, PairStatus::OutOfRange)).count()
    }
}

/// Compares every bracket of `fields` with the table. Pass verdicts are cross-checked
/// numerically with seeds derived from `seed`.
pub fn verify_table(fields: &[VectorField], table: &CommutatorTable, seed: u64) -> Result<TableReport, CoreError> {
    let by_name: BTreeMap<&str, &VectorField> = fields.iter().map(|f| (f.name(), f)).collect();
    for n in table.names() {
        if !by_name.contains_key(n.as_str()) {
            return Err(CoreError::UnknownGenerator(n.clone()));
        }
    }
    for f in fields {
        table.index(f.name())?;
    }
    let mut pairs = Vec::new();
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            pairs.push((i, j));
        }
    }
    let results: Result<Vec<PairResult>, CoreError> = pairs
        .into_par_iter()
        .map(|(i, j)| {
            let (a, b) = (&fields[i], &fields[j]);
            if table.is_out_of_range(a.name(), b.name()) {
                return Ok(PairResult {
                    a: a.name().into(),
                    b: b.name().into(),
                    status: PairStatus::OutOfRange,
                });
            }
            let (br, mut parts) = a.bracket_parts(b)?;
            let mut expected = VectorField::zero("expected", a.space());
            for (n, c) in table.get(a.name(), b.name())? {
                expected = expected.add(&by_name[n.as_str()].scale(&c))?;
            }
            let residual = br.sub(&expected)?.renamed(&format!("[{}, {}] - table", a.name(), b.name()));
            let id = format!("table:{}:{}", a.name(), b.name());
            let status = if residual.is_zero() {
                // append the expected side to each coordinate's pieces and cross-check
                let keys: BTreeSet<Symbol> = a.coeffs.keys().chain(b.coeffs.keys()).cloned().collect();
                for (k, s) in keys.iter().enumerate() {
                    parts[k].push(expected.coeff(*s).neg());
                }
                if let (Some(m), Some(last)) = (expected.multiplier(), parts.get_mut(keys.len())) {
                    last.push(m.neg());
                }
                let extra: Vec<Symbol> = a.space().base_coordinates();
                for p in &parts {
                    if let Verdict::Fail { .. } = decide(p, &extra, seed, &id)? {
                        return Err(CoreError::CrossCheckFailed(id));
                    }
                }
                for s in expected.coeffs.keys() {
                    if !keys.contains(s) {
                        return Err(CoreError::CrossCheckFailed(id));
                    }
                }
                PairStatus::Pass
            } else {
                PairStatus::Fail { residual }
            };
            Ok(PairResult {
                a: a.name().into(),
                b: b.name().into(),
                status,
            })
        })
        .collect();
    Ok(TableReport { pairs: results? })
}

/// Triples of fields violating `[[A,B],C] + [[B,C],A] + [[C,A],B] = 0`.
pub fn jacobi_failures(fields: &[VectorField]) -> Result<Vec<(String, String, String)>, CoreError> {
    let n = fields.len();
    let mut brackets: BTreeMap<(usize, usize), VectorField> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            brackets.insert((i, j), fields[i].bracket(&fields[j])?);
        }
    }
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                triples.push((i, j, k));
            }
        }
    }
    let res: Result<Vec<Option<(String, String, String)>>, CoreError> = triples
        .into_par_iter()
        .map(|(i, j, k)| {
            // [[A,B],C] + [[B,C],A] - [[A,C],B]
            let t1 = brackets[&(i, j)].bracket(&fields[k])?;
            let t2 = brackets[&(j, k)].bracket(&fields[i])?;
            let t3 = brackets[&(i, k)].bracket(&fields[j])?;
            let sum = t1.add(&t2)?.sub(&t3)?;
            Ok(if sum.is_zero() {
                None
            } else {
                Some((
                    fields[i].name().to_string(),
                    fields[j].name().to_string(),
                    fields[k].name().to_string(),
                ))
            })
        })
        .collect();
    Ok(res?.into_iter().flatten().collect())
}
