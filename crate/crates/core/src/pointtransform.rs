use std::collections::BTreeMap;
use std::sync::Arc;

use jetlie_kernel::{Assumptions, Expr, Polynomial, Substitution, Symbol};

use crate::error::CoreError;
use crate::jetspace::{JetSpace, MultiIndex};
use crate::liefield::VectorField;
use crate::verdict::{decide, Verdict};

/// One-parameter family of substitutions for the base coordinates, extended to jet
/// coordinates by [`PointTransformation::prolong`].
#[derive(Clone, Debug, PartialEq)]
pub struct PointTransformation {
    name: String,
    parameter: Symbol,
    space: Arc<JetSpace>,
    base_maps: BTreeMap<Symbol, Expr>,
    derivative_maps: BTreeMap<Symbol, Expr>,
    order: u32,
    assumptions: Assumptions,
    relations: Vec<(Symbol, Polynomial)>,
    at_zero: Substitution,
    series: Substitution,
}

impl PointTransformation {
    /// Base coordinates missing from `maps` are left fixed.
    pub fn new(
        name: &str,
        space: &Arc<JetSpace>,
        parameter: Symbol,
        maps: impl IntoIterator<Item = (Symbol, Expr)>,
        assumptions: Assumptions,
    ) -> Result<Self, CoreError> {
        let t = Self::unchecked(name, space, parameter, maps, assumptions)?;
        t.check_identity_at_zero()?;
        Ok(t)
    }

    /// Trigonometric-style families: `square ↦ value` is imposed on every result
    /// (e.g. `s^2 ↦ 1 - c^2`), `at_zero` gives the values at the identity and `series`
    /// the first-order expansion in the parameter (e.g. `c ↦ 1, s ↦ p`).
    #[allow(clippy::too_many_arguments)]
    pub fn family(
        name: &str,
        space: &Arc<JetSpace>,
        parameter: Symbol,
        maps: impl IntoIterator<Item = (Symbol, Expr)>,
        assumptions: Assumptions,
        relations: Vec<(Symbol, Polynomial)>,
        at_zero: Substitution,
        series: Substitution,
    ) -> Result<Self, CoreError> {
        let mut t = Self::unchecked(name, space, parameter, maps, assumptions)?;
        t.relations = relations;
        t.at_zero = at_zero;
        t.series = series;
        t.check_identity_at_zero()?;
        Ok(t)
    }

    fn unchecked(
        name: &str,
        space: &Arc<JetSpace>,
        parameter: Symbol,
        maps: impl IntoIterator<Item = (Symbol, Expr)>,
        assumptions: Assumptions,
    ) -> Result<Self, CoreError> {
        let mut base_maps = BTreeMap::new();
        for (s, e) in maps {
            if !space.is_base(s) {
                return Err(CoreError::NotBaseCoordinate(s.name().to_string(), space.name().to_string()));
            }
            base_maps.insert(s, e);
        }
        let at_zero: Substitution = [(parameter, Expr::zero())].into_iter().collect();
        Ok(PointTransformation {
            name: name.to_string(),
            parameter,
            space: space.clone(),
            base_maps,
            derivative_maps: BTreeMap::new(),
            order: 0,
            assumptions,
            relations: Vec::new(),
            at_zero,
            series: Substitution::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parameter(&self) -> Symbol {
        self.parameter
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn assumptions(&self) -> &Assumptions {
        &self.assumptions
    }

    pub fn base_map(&self, s: Symbol) -> Expr {
        self.base_maps.get(&s).cloned().unwrap_or_else(|| Expr::sym(s))
    }

    pub fn derivative_map(&self, s: Symbol) -> Option<&Expr> {
        self.derivative_maps.get(&s)
    }

    pub fn derivative_maps(&self) -> &BTreeMap<Symbol, Expr> {
        &self.derivative_maps
    }

    pub fn base_maps(&self) -> &BTreeMap<Symbol, Expr> {
        &self.base_maps
    }

    pub fn relations(&self) -> &[(Symbol, Polynomial)] {
        &self.relations
    }

    pub fn at_zero(&self) -> &Substitution {
        &self.at_zero
    }

    pub fn series(&self) -> &Substitution {
        &self.series
    }

    fn image(&self, s: Symbol) -> Result<Expr, CoreError> {
        if self.space.is_base(s) {
            return Ok(self.base_map(s));
        }
        match self.space.order_of(s) {
            Some(_) => self
                .derivative_maps
                .get(&s)
                .cloned()
                .ok_or_else(|| CoreError::MissingDerivativeMap(s.name().to_string())),
            None => Ok(Expr::sym(s)),
        }
    }

    /// Applies the algebraic relations of the family.
    pub fn reduce(&self, e: &Expr) -> Result<Expr, CoreError> {
        let mut out = e.clone();
        for (s, v) in &self.relations {
            out = out.reduce_square(*s, v)?;
        }
        Ok(out)
    }

    fn check_identity_at_zero(&self) -> Result<(), CoreError> {
        for (s, e) in &self.base_maps {
            let z = self.reduce(&e.substitute(&self.at_zero, &self.assumptions)?)?;
            if z != Expr::sym(*s) {
                return Err(CoreError::NotIdentityAtZero(self.name.clone(), s.name().to_string()));
            }
        }
        Ok(())
    }

    /// Fills derivative maps up to `order` from the chain rule
    /// `D_i(U_J) = sum_j (U_{J+e_j})' D_i(X^j)`, solved by exact elimination.
    pub fn prolong(&self, order: u32) -> Result<PointTransformation, CoreError> {
        let sp = &self.space;
        if order > sp.max_order() {
            return Err(CoreError::OrderExceeded {
                found: order,
                limit: sp.max_order(),
            });
        }
        let n = sp.independents().len();
        let mut m = vec![vec![Expr::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let xj = self.base_map(sp.independents()[j]);
                m[i][j] = self.reduce(&sp.total_derivative(&xj, i, false)?)?;
            }
        }
        let minv = self.invert(m)?;
        let mut maps = BTreeMap::new();
        for k in 1..=order {
            for a in 0..sp.dependents().len() {
                for mi in MultiIndex::all_of_order(n, k) {
                    let j = mi.last().expect("positive order");
                    let prev = mi.lowered(j).expect("count positive");
                    let prev_sym = sp.jet(a, &prev).expect("jet exists");
                    let prev_img = if prev.order() == 0 {
                        self.base_map(prev_sym)
                    } else {
                        maps.get(&prev_sym).cloned().expect("lower order first")
                    };
                    let mut parts = Vec::with_capacity(n);
                    for i in 0..n {
                        if !minv[j][i].is_zero() {
                            parts.push(minv[j][i].mul(&sp.total_derivative(&prev_img, i, false)?));
                        }
                    }
                    let img = self.reduce(&Expr::sum(parts.iter()))?;
                    maps.insert(sp.jet(a, &mi).expect("jet exists"), img);
                }
            }
        }
        let mut out = self.clone();
        out.derivative_maps = maps;
        out.order = order;
        Ok(out)
    }

    /// Gauss-Jordan inverse over expressions.
    fn invert(&self, mut m: Vec<Vec<Expr>>) -> Result<Vec<Vec<Expr>>, CoreError> {
        let n = m.len();
        let mut inv: Vec<Vec<Expr>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Expr::one() } else { Expr::zero() }).collect())
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !m[r][col].is_zero())
                .ok_or_else(|| CoreError::SingularJacobian(self.name.clone()))?;
            m.swap(col, piv);
            inv.swap(col, piv);
            let p = m[col][col].clone();
            for j in 0..n {
                m[col][j] = self.reduce(&m[col][j].div(&p)?)?;
                inv[col][j] = self.reduce(&inv[col][j].div(&p)?)?;
            }
            for r in 0..n {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].clone();
                for j in 0..n {
                    m[r][j] = self.reduce(&m[r][j].sub(&f.mul(&m[col][j])))?;
                    inv[r][j] = self.reduce(&inv[r][j].sub(&f.mul(&inv[col][j])))?;
                }
            }
        }
        Ok(inv)
    }

    /// Replaces derivative maps by given ones (e.g. printed closed forms).
    pub fn with_derivative_maps(mut self, maps: BTreeMap<Symbol, Expr>, order: u32) -> Self {
        self.derivative_maps = maps;
        self.order = order;
        self
    }

    /// Substitutes every coordinate of `e` by its image.
    pub fn pullback(&self, e: &Expr) -> Result<Expr, CoreError> {
        let mut sigma = Substitution::new();
        for s in e.symbols() {
            if s == self.parameter {
                continue;
            }
            if self.space.order_of(s).is_some() || self.space.is_base(s) {
                sigma.insert(s, self.image(s)?);
            }
        }
        self.reduce(&e.substitute(&sigma, &self.assumptions)?)
    }

    fn expand_first_order(&self, e: &Expr) -> Result<(Expr, Expr), CoreError> {
        let e = e.substitute(&self.series, &self.assumptions)?;
        let at0 = e.substitute(&self.at_zero_of_series(), &self.assumptions)?;
        let d = e.diff(self.parameter).substitute(&self.at_zero_of_series(), &self.assumptions)?;
        Ok((at0, d))
    }

    fn at_zero_of_series(&self) -> Substitution {
        [(self.parameter, Expr::zero())].into_iter().collect()
    }

    /// Generator `-(d/dp)|_0` of the family.
    pub fn infinitesimal(&self) -> Result<VectorField, CoreError> {
        let mut coeffs = Vec::new();
        for s in self.space.base_coordinates() {
            let (_, d) = self.expand_first_order(&self.base_map(s))?;
            coeffs.push((s, d.neg()));
        }
        VectorField::new(&format!("gen({})", self.name), &self.space, coeffs, None)
    }

    /// `(f(0) - e, f'(0) + X(e))` for `f(p)` the pullback of `e` and `X` the prolonged
    /// generator; both vanish for a consistent pair.
    pub fn first_order_defect(&self, e: &Expr) -> Result<(Expr, Expr), CoreError> {
        let f = self.pullback(e)?;
        let (f0, f1) = self.expand_first_order(&f)?;
        let ord = self.space.expr_order(e);
        let x = self.infinitesimal()?.prolong(ord)?;
        Ok((f0.sub(e), f1.add(&x.apply(e)?)))
    }

    /// Checks `pullback(lhs) = rhs`.
    pub fn verify_identity(&self, lhs: &Expr, rhs: &Expr, seed: u64, id: &str) -> Result<Verdict, CoreError> {
        let l = self.pullback(lhs)?;
        let r = self.reduce(rhs)?;
        decide(&[l, r.neg()], &[], seed, id)
    }

    /// Jet coordinates whose computed map differs from `expected`.
    pub fn derivative_map_mismatches(&self, expected: &BTreeMap<Symbol, Expr>) -> Result<Vec<Symbol>, CoreError> {
        let mut bad = Vec::new();
        for (s, e) in expected {
            let got = self
                .derivative_maps
                .get(s)
                .ok_or_else(|| CoreError::MissingDerivativeMap(s.name().to_string()))?;
            if self.reduce(e)? != *got {
                bad.push(*s);
            }
        }
        Ok(bad)
    }
}
