use std::collections::{BTreeSet, HashMap};
use std::fmt;

use jetlie_kernel::{Expr, Symbol, SymbolKind};

use crate::error::CoreError;

/// Derivative counts per independent variable. Symmetric derivatives share one index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        MultiIndex(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `self + e_i`
    pub fn raised(&self, i: usize) -> Self {
        let mut c = self.0.clone();
        c[i] += 1;
        MultiIndex(c)
    }

    /// `self - e_i`, if the count is positive.
    pub fn lowered(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut c = self.0.clone();
        c[i] -= 1;
        Some(MultiIndex(c))
    }

    /// Largest independent index with a positive count.
    pub fn last(&self) -> Option<usize> {
        self.0.iter().rposition(|&c| c > 0)
    }

    /// All indices of the given order over `n` independents, in the order
    /// `tt, tx, ty, xx, xy, yy` for `(t, x, y)`.
    pub fn all_of_order(n: usize, order: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, start: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if left == 0 {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for i in start..n {
                cur[i] += 1;
                rec(n, i, left - 1, cur, out);
                cur[i] -= 1;
            }
        }
        let mut out = Vec::new();
        if n == 0 && order > 0 {
            return out;
        }
        rec(n, 0, order, &mut vec![0; n], &mut out);
        out
    }
}

/// Independent and dependent variables with all jet coordinates up to `max_order`.
/// Coordinates of order `max_order + 1` are also interned, for explicit escalation.
#[derive(Debug)]
pub struct JetSpace {
    name: String,
    independents: Vec<Symbol>,
    dependents: Vec<Symbol>,
    max_order: u32,
    jets: HashMap<(usize, MultiIndex), Symbol>,
    info: HashMap<Symbol, (usize, MultiIndex)>,
    coordinates: Vec<Symbol>,
}

impl PartialEq for JetSpace {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.independents == other.independents
            && self.dependents == other.dependents
            && self.max_order == other.max_order
    }
}

fn valid_name(n: &str) -> bool {
    let mut chars = n.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric()),
        _ => false,
    }
}

impl JetSpace {
    pub fn new(name: &str, independents: &[&str], dependents: &[&str], max_order: u32) -> Result<Self, CoreError> {
        if max_order == 0 {
            return Err(CoreError::BadParams("order must be at least 1".into()));
        }
        let mut seen = BTreeSet::new();
        for n in independents.iter().chain(dependents) {
            if !valid_name(n) {
                return Err(CoreError::BadName(n.to_string()));
            }
            if !seen.insert(n.to_string()) {
                return Err(CoreError::DuplicateName(n.to_string()));
            }
        }
        let ind: Vec<Symbol> = independents
            .iter()
            .map(|n| Symbol::new(n, SymbolKind::Independent))
            .collect();
        let dep: Vec<Symbol> = dependents.iter().map(|n| Symbol::new(n, SymbolKind::Dependent)).collect();
        let mut jets = HashMap::new();
        let mut info = HashMap::new();
        let mut coordinates: Vec<Symbol> = ind.iter().chain(dep.iter()).cloned().collect();
        for (a, &u) in dep.iter().enumerate() {
            let zero = MultiIndex::zero(ind.len());
            jets.insert((a, zero.clone()), u);
            info.insert(u, (a, zero));
        }
        for k in 1..=max_order + 1 {
            for (a, u) in dependents.iter().enumerate() {
                for mi in MultiIndex::all_of_order(ind.len(), k) {
                    let mut sub = String::new();
                    for (i, &c) in mi.counts().iter().enumerate() {
                        for _ in 0..c {
                            sub.push_str(independents[i]);
                        }
                    }
                    let jname = format!("{}_{}", u, sub);
                    if seen.contains(&jname) {
                        return Err(CoreError::DuplicateName(jname));
                    }
                    let s = Symbol::new(&jname, SymbolKind::Jet);
                    if info.contains_key(&s) {
                        return Err(CoreError::DuplicateName(jname));
                    }
                    if k <= max_order {
                        coordinates.push(s);
                    }
                    jets.insert((a, mi.clone()), s);
                    info.insert(s, (a, mi));
                }
            }
        }
        Ok(JetSpace {
            name: name.to_string(),
            independents: ind,
            dependents: dep,
            max_order,
            jets,
            info,
            coordinates,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn independents(&self) -> &[Symbol] {
        &self.independents
    }

    pub fn dependents(&self) -> &[Symbol] {
        &self.dependents
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    /// Independents, dependents, then jet coordinates by order, dependent, index.
    pub fn coordinates(&self) -> &[Symbol] {
        &self.coordinates
    }

    /// Coordinates of order at most `order`.
    pub fn coordinates_to(&self, order: u32) -> Vec<Symbol> {
        self.coordinates
            .iter()
            .filter(|s| self.order_of(**s).map(|o| o <= order).unwrap_or(false))
            .cloned()
            .collect()
    }

    pub fn base_coordinates(&self) -> Vec<Symbol> {
        self.independents.iter().chain(self.dependents.iter()).cloned().collect()
    }

    /// `N_ind + N_dep * sum_{k=0..order} C(N_ind + k - 1, k)`
    pub fn coordinate_count(&self, order: u32) -> usize {
        let n = self.independents.len();
        let mut per = 0usize;
        for k in 0..=order as usize {
            per += binomial(n + k - 1, k);
        }
        n + self.dependents.len() * per
    }

    pub fn is_independent(&self, s: Symbol) -> bool {
        self.independents.contains(&s)
    }

    pub fn independent_index(&self, s: Symbol) -> Option<usize> {
        self.independents.iter().position(|&x| x == s)
    }

    pub fn is_base(&self, s: Symbol) -> bool {
        self.independents.contains(&s) || self.dependents.contains(&s)
    }

    /// Coordinate of this space with the given name, including order `max_order + 1`.
    pub fn coordinate(&self, name: &str) -> Option<Symbol> {
        let s = Symbol::lookup(name)?;
        if self.is_independent(s) || self.info.contains_key(&s) {
            Some(s)
        } else {
            None
        }
    }

    /// `(dependent index, multi-index)` of a dependent variable or jet coordinate.
    pub fn jet_info(&self, s: Symbol) -> Option<(usize, &MultiIndex)> {
        self.info.get(&s).map(|(a, m)| (*a, m))
    }

    pub fn jet(&self, dep: usize, index: &MultiIndex) -> Option<Symbol> {
        self.jets.get(&(dep, index.clone())).cloned()
    }

    /// Jet coordinate of `dep` differentiated along the given independents.
    pub fn jet_along(&self, dep: Symbol, along: &[Symbol]) -> Option<Symbol> {
        let a = self.dependents.iter().position(|&d| d == dep)?;
        let mut mi = MultiIndex::zero(self.independents.len());
        for s in along {
            mi = mi.raised(self.independent_index(*s)?);
        }
        self.jet(a, &mi)
    }

    /// Order of a coordinate of this space (0 for base coordinates).
    pub fn order_of(&self, s: Symbol) -> Option<u32> {
        if self.is_independent(s) {
            return Some(0);
        }
        self.info.get(&s).map(|(_, m)| m.order())
    }

    /// Highest jet order of this space's coordinates occurring in `e`.
    pub fn expr_order(&self, e: &Expr) -> u32 {
        e.symbols()
            .into_iter()
            .filter_map(|s| self.info.get(&s).map(|(_, m)| m.order()))
            .max()
            .unwrap_or(0)
    }

    /// Total derivative `D_i`. Results of order `max_order + 1` require `escalate`.
    pub fn total_derivative(&self, e: &Expr, i: usize, escalate: bool) -> Result<Expr, CoreError> {
        let limit = if escalate { self.max_order + 1 } else { self.max_order };
        let mut parts = vec![e.diff(self.independents[i])];
        for s in e.symbols() {
            if let Some((a, mi)) = self.info.get(&s) {
                let up = mi.raised(i);
                if up.order() > limit {
                    return Err(CoreError::OrderExceeded {
                        found: up.order(),
                        limit,
                    });
                }
                let target = self.jets[&(*a, up)];
                parts.push(&Expr::sym(target) * &e.diff(s));
            }
        }
        Ok(Expr::sum(parts.iter()))
    }

    /// Total derivative along the independent `s`.
    pub fn total_derivative_along(&self, e: &Expr, s: Symbol, escalate: bool) -> Result<Expr, CoreError> {
        let i = self
            .independent_index(s)
            .ok_or_else(|| CoreError::NotBaseCoordinate(s.name().to_string(), self.name.clone()))?;
        self.total_derivative(e, i, escalate)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

impl fmt::Display for JetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Symbol]| v.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ");
        write!(
            f,
            "space {} {{ independent {}; dependent {}; order {} }}",
            self.name,
            join(&self.independents),
            join(&self.dependents),
            self.max_order
        )
    }
}
