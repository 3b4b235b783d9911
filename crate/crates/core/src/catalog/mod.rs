//! Built-in spaces, algebras, invariants, systems and transformations.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use jetlie_kernel::{Assumptions, Expr, Polynomial, Substitution, Symbol};

use crate::error::CoreError;
use crate::invariance::{solve_linear, PdeSystem};
use crate::jetspace::JetSpace;
use crate::liefield::{CommutatorTable, VectorField};
use crate::pointtransform::PointTransformation;

mod formula;

pub use formula::det;
pub(crate) use formula::Reader;

/// Named generators with their expected commutator table.
#[derive(Clone, Debug)]
pub struct Algebra {
    pub key: String,
    pub space: Arc<JetSpace>,
    pub fields: Vec<VectorField>,
    pub table: CommutatorTable,
    pub description: String,
}

impl Algebra {
    pub fn field(&self, name: &str) -> Result<&VectorField, CoreError> {
        self.fields
            .iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| CoreError::UnknownGenerator(format!("{}:{}", self.key, name)))
    }

    pub fn names(&self) -> Vec<&str> {
        self.fields.iter().map(|f| f.name()).collect()
    }

    /// Sub-collection of generators with the restricted table.
    pub fn select(&self, key: &str, names: &[&str], description: &str) -> Result<Algebra, CoreError> {
        let fields = names
            .iter()
            .map(|n| self.field(n).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Algebra {
            key: key.to_string(),
            space: self.space.clone(),
            fields,
            table: restrict(&self.table, names)?,
            description: description.to_string(),
        })
    }
}

/// Table on a subset of names; fails if the subset is not closed.
pub fn restrict(table: &CommutatorTable, names: &[&str]) -> Result<CommutatorTable, CoreError> {
    let mut t = CommutatorTable::new(names);
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            if table.is_out_of_range(a, b) {
                t.mark_out_of_range(a, b)?;
                continue;
            }
            let c = table.get(a, b)?;
            let combo: Vec<(&str, Expr)> = c.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
            t.set(a, b, &combo)?;
        }
    }
    Ok(t)
}

#[derive(Clone, Debug)]
pub struct Invariant {
    pub key: String,
    pub space: Arc<JetSpace>,
    pub expr: Expr,
    pub description: String,
}

#[derive(Clone, Debug)]
pub struct SystemEntry {
    pub key: String,
    pub system: PdeSystem,
    /// A second solved form for the same equations, if any.
    pub alternate: Option<Vec<(Symbol, Expr)>>,
    pub description: String,
}

/// A transformation family with the generator it is paired with:
/// `infinitesimal = sign * algebra:field`.
#[derive(Clone, Debug)]
pub struct TransformationEntry {
    pub key: String,
    pub transform: PointTransformation,
    pub generator: Option<(String, String, i64)>,
    pub expected: BTreeMap<Symbol, Expr>,
    pub description: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EntryKind {
    Algebra,
    Invariant,
    System,
    Transformation,
    Table,
}

impl std::fmt::Display for EntryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EntryKind::Algebra => "algebra",
            EntryKind::Invariant => "invariant",
            EntryKind::System => "system",
            EntryKind::Transformation => "transformation",
            EntryKind::Table => "table",
        };
        f.write_str(s)
    }
}

#[derive(Debug)]
pub struct Catalog {
    pub spaces: BTreeMap<String, Arc<JetSpace>>,
    pub algebras: BTreeMap<String, Algebra>,
    pub invariants: BTreeMap<String, Invariant>,
    pub systems: BTreeMap<String, SystemEntry>,
    pub transformations: BTreeMap<String, TransformationEntry>,
    /// Tables without a realization.
    pub tables: BTreeMap<String, CommutatorTable>,
    assumptions: BTreeMap<String, Assumptions>,
}

fn level(n: i64) -> String {
    if n < 0 {
        format!("m{}", -n)
    } else {
        n.to_string()
    }
}

pub fn x_name(n: i64) -> String {
    format!("X{}", level(n))
}

pub fn y_name(n: i64, j: usize) -> String {
    format!("Y{}_{}", level(n), j + 1)
}

fn r_name(n_dim: usize, j: usize, k: usize) -> String {
    if n_dim == 2 {
        "R".to_string()
    } else {
        format!("R{}{}", j + 1, k + 1)
    }
}

/// `R^{ab}` as (name, sign) with `R^{ba} = -R^{ab}`.
fn r_signed(n_dim: usize, a: usize, b: usize) -> Option<(String, i64)> {
    match a.cmp(&b) {
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Less => Some((r_name(n_dim, a, b), 1)),
        std::cmp::Ordering::Greater => Some((r_name(n_dim, b, a), -1)),
    }
}

fn int(n: i64) -> Expr {
    Expr::int(n)
}

/// Conformal Galilei relations for levels `-l..=l` in `n_dim` dimensions, with the
/// exotic central term when `theta` is set.
pub fn cga_table(n_dim: usize, l: i64, theta: bool) -> Result<CommutatorTable, CoreError> {
    let mut names: Vec<String> = Vec::new();
    for n in -l..=l {
        names.push(x_name(n));
    }
    for n in -l..=l {
        for j in 0..n_dim {
            names.push(y_name(n, j));
        }
    }
    for j in 0..n_dim {
        for k in j + 1..n_dim {
            names.push(r_name(n_dim, j, k));
        }
    }
    if theta {
        names.push("Theta".into());
    }
    let mut t = CommutatorTable::new(&names);
    for n in -l..=l {
        for m in -l..=l {
            if n == m {
                continue;
            }
            if (n + m).abs() > l {
                t.mark_out_of_range(&x_name(n), &x_name(m))?;
                for j in 0..n_dim {
                    t.mark_out_of_range(&x_name(n), &y_name(m, j))?;
                }
                continue;
            }
            t.set(&x_name(n), &x_name(m), &[(&x_name(n + m), int(n - m))])?;
            for j in 0..n_dim {
                t.set(&x_name(n), &y_name(m, j), &[(&y_name(n + m, j), int(n - m))])?;
            }
        }
    }
    for j in 0..n_dim {
        for k in j + 1..n_dim {
            let r = r_name(n_dim, j, k);
            for m in -l..=l {
                for li in 0..n_dim {
                    let mut combo: Vec<(String, Expr)> = Vec::new();
                    if j == li {
                        combo.push((y_name(m, k), int(1)));
                    }
                    if k == li {
                        combo.push((y_name(m, j), int(-1)));
                    }
                    let c: Vec<(&str, Expr)> = combo.iter().map(|(a, e)| (a.as_str(), e.clone())).collect();
                    t.set(&r, &y_name(m, li), &c)?;
                }
            }
            for (lj, lk) in (0..n_dim).flat_map(|a| (a + 1..n_dim).map(move |b| (a, b))) {
                if (lj, lk) <= (j, k) {
                    continue;
                }
                // [R^{jk}, R^{lm}] = d_jl R^km - d_kl R^jm + d_km R^jl - d_jm R^kl
                let mut acc: BTreeMap<String, i64> = BTreeMap::new();
                let mut push = |cond: bool, a: usize, b: usize, s: i64| {
                    if cond {
                        if let Some((nm, sg)) = r_signed(n_dim, a, b) {
                            *acc.entry(nm).or_insert(0) += s * sg;
                        }
                    }
                };
                push(j == lj, k, lk, 1);
                push(k == lj, j, lk, -1);
                push(k == lk, j, lj, 1);
                push(j == lk, k, lj, -1);
                let c: Vec<(&str, Expr)> = acc.iter().map(|(a, s)| (a.as_str(), int(*s))).collect();
                t.set(&r, &r_name(n_dim, lj, lk), &c)?;
            }
        }
    }
    if theta {
        for n in -l..=l {
            let m = -n;
            if m.abs() > l {
                continue;
            }
            let c = if n == 0 { 1 } else { -2 };
            t.set(&y_name(n, 0), &y_name(m, 1), &[("Theta", int(c))])?;
        }
    }
    Ok(t)
}

/// Abstract Schrödinger relations in two dimensions.
pub fn schroedinger_table() -> Result<CommutatorTable, CoreError> {
    // Y levels are stored doubled: -1 and 1 stand for -1/2 and 1/2
    let yn = |m2: i64, j: usize| format!("Y{}_{}", if m2 < 0 { "mh" } else { "h" }, j + 1);
    let mut names: Vec<String> = vec![x_name(-1), x_name(0), x_name(1)];
    for m2 in [-1, 1] {
        for j in 0..2 {
            names.push(yn(m2, j));
        }
    }
    names.push("M0".into());
    names.push("R".into());
    let mut t = CommutatorTable::new(&names);
    for n in -1..=1i64 {
        for m in -1..=1i64 {
            if n != m && (n + m).abs() <= 1 {
                t.set(&x_name(n), &x_name(m), &[(&x_name(n + m), int(n - m))])?;
            }
        }
        for m2 in [-1i64, 1] {
            let target = 2 * n + m2;
            // (n/2 - m) with m = m2/2, i.e. (n - m2)/2
            let c = Expr::rational(n - m2, 2);
            if c.is_zero() {
                continue;
            }
            if target.abs() != 1 {
                return Err(CoreError::InconsistentTable(x_name(n), yn(m2, 0)));
            }
            for j in 0..2 {
                t.set(&x_name(n), &yn(m2, j), &[(&yn(target, j), c.clone())])?;
            }
        }
    }
    for j in 0..2 {
        t.set(&yn(1, j), &yn(-1, j), &[("M0", int(1))])?;
    }
    for m2 in [-1, 1] {
        t.set("R", &yn(m2, 0), &[(&yn(m2, 1), int(1))])?;
        t.set("R", &yn(m2, 1), &[(&yn(m2, 0), int(-1))])?;
    }
    Ok(t)
}

fn space(name: &str, ind: &[&str], dep: &[&str], order: u32) -> Result<Arc<JetSpace>, CoreError> {
    Ok(Arc::new(JetSpace::new(name, ind, dep, order)?))
}

/// Builds a field from `(coordinate, formula)` pairs.
pub(crate) fn field(
    r: &Reader,
    sp: &Arc<JetSpace>,
    name: &str,
    items: &[(&str, &str)],
    multiplier: Option<&str>,
) -> Result<VectorField, CoreError> {
    let mut coeffs = Vec::new();
    for (c, f) in items {
        let s = sp
            .coordinate(c)
            .ok_or_else(|| CoreError::NotBaseCoordinate(c.to_string(), sp.name().to_string()))?;
        coeffs.push((s, r.read(f)?));
    }
    let m = match multiplier {
        Some(m) => Some(r.read(m)?),
        None => None,
    };
    VectorField::new(name, sp, coeffs, m)
}

/// Realization of the conformal Galilei generators on `ind = (t, r_1..r_N)`; with
/// `gammas`, the zero-order parts carry `lam` and `gamma . r` and rotations also act
/// on the gammas.
fn cga_fields(
    r: &Reader,
    sp: &Arc<JetSpace>,
    rs: &[&str],
    gammas: Option<&[&str]>,
    l: i64,
) -> Result<Vec<VectorField>, CoreError> {
    let nd = rs.len();
    let mut out = Vec::new();
    for n in -l..=l {
        let mut items: Vec<(String, String)> = vec![("t".into(), format!("-t^({})", n + 1))];
        for ri in rs {
            items.push((ri.to_string(), format!("-({})*t^({})*{}", n + 1, n, ri)));
        }
        let mult = gammas.map(|g| {
            let dot: Vec<String> = g.iter().zip(rs).map(|(a, b)| format!("{}*{}", a, b)).collect();
            let second = if n == 0 || n == -1 {
                String::new()
            } else {
                format!(" - ({})*t^({})*({})", n * (n + 1), n - 1, dot.join(" + "))
            };
            format!("-lam*({})*t^({}){}", n + 1, n, second)
        });
        let it: Vec<(&str, &str)> = items.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        out.push(field(r, sp, &x_name(n), &it, mult.as_deref())?);
    }
    for n in -l..=l {
        for (j, rj) in rs.iter().enumerate() {
            let c = format!("-t^({})", n + 1);
            let mult = gammas.map(|g| format!("-({})*t^({})*{}", n + 1, n, g[j]));
            out.push(field(r, sp, &y_name(n, j), &[(rj, &c)], mult.as_deref())?);
        }
    }
    for j in 0..nd {
        for k in j + 1..nd {
            let mut items: Vec<(String, String)> =
                vec![(rs[k].to_string(), format!("-{}", rs[j])), (rs[j].to_string(), rs[k].to_string())];
            if let Some(g) = gammas {
                items.push((g[k].to_string(), format!("-{}", g[j])));
                items.push((g[j].to_string(), g[k].to_string()));
            }
            let it: Vec<(&str, &str)> = items.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            out.push(field(r, sp, &r_name(nd, j, k), &it, None)?);
        }
    }
    Ok(out)
}

/// Exotic conformal Galilei generators with `(u1, u2, u3)` the fiber coordinates
/// (`(v1, v2, w)` on the wave space, where they are independents).
fn ecga_items(u1: &str, u2: &str, u3: &str) -> Vec<(String, Vec<(String, String)>)> {
    let s = |v: &[(&str, String)]| -> Vec<(String, String)> { v.iter().map(|(a, b)| (a.to_string(), b.clone())).collect() };
    vec![
        ("Xm1".into(), s(&[("t", "-1".into())])),
        ("Ym1_1".into(), s(&[("x", "-1".into())])),
        ("Ym1_2".into(), s(&[("y", "-1".into())])),
        ("Theta".into(), s(&[(u3, "1".into())])),
        (
            "Y0_1".into(),
            s(&[("x", "-t".into()), (u1, "1".into()), (u3, format!("-{}/2", u2))]),
        ),
        (
            "Y0_2".into(),
            s(&[("y", "-t".into()), (u2, "1".into()), (u3, format!("{}/2", u1))]),
        ),
        (
            "Y1_1".into(),
            s(&[("x", "-t^2".into()), (u1, "2*t".into()), (u3, format!("-2*y - t*{}", u2))]),
        ),
        (
            "Y1_2".into(),
            s(&[("y", "-t^2".into()), (u2, "2*t".into()), (u3, format!("2*x + t*{}", u1))]),
        ),
        ("X0".into(), s(&[("t", "-t".into()), ("x", "-x".into()), ("y", "-y".into())])),
        (
            "X1".into(),
            s(&[
                ("t", "-t^2".into()),
                ("x", "-2*t*x".into()),
                ("y", "-2*t*y".into()),
                (u1, "2*x".into()),
                (u2, "2*y".into()),
                (u3, format!("y*{} - x*{}", u1, u2)),
            ]),
        ),
        (
            "R".into(),
            s(&[("x", "y".into()), ("y", "-x".into()), (u1, u2.into()), (u2, format!("-{}", u1))]),
        ),
    ]
}

pub const EA1: [&str; 8] = ["Xm1", "Ym1_1", "Ym1_2", "Theta", "Y0_1", "Y0_2", "Y1_1", "Y1_2"];
pub const EA2: [&str; 10] = ["Xm1", "Ym1_1", "Ym1_2", "Theta", "Y0_1", "Y0_2", "Y1_1", "Y1_2", "X0", "X1"];
pub const EA3: [&str; 10] = ["Xm1", "Ym1_1", "Ym1_2", "Theta", "Y0_1", "Y0_2", "Y1_1", "Y1_2", "X0", "R"];

fn ecga_fields(r: &Reader, sp: &Arc<JetSpace>, u1: &str, u2: &str, u3: &str) -> Result<Vec<VectorField>, CoreError> {
    ecga_items(u1, u2, u3)
        .iter()
        .map(|(n, items)| {
            let it: Vec<(&str, &str)> = items.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            field(r, sp, n, &it, None)
        })
        .collect()
}

/// Table of the exotic algebra in the generator order used by the catalog.
fn ecga_table() -> Result<CommutatorTable, CoreError> {
    let full = cga_table(2, 1, true)?;
    let names: Vec<&str> = EA2.iter().chain(["R"].iter()).cloned().collect();
    restrict(&full, &names)
}

/// Single-term sign flips of the exotic realization on the first-order space.
pub fn ecga_mutations(cat: &Catalog) -> Result<Vec<(String, Vec<VectorField>)>, CoreError> {
    let alg = cat.algebra("ecga")?;
    let mut out = Vec::new();
    for (i, f) in alg.fields.iter().enumerate() {
        for (s, c) in f.coeffs() {
            let p = c
                .as_polynomial()
                .ok_or_else(|| CoreError::BadParams("non-polynomial coefficient".into()))?;
            for (k, (m, q)) in p.terms().iter().enumerate() {
                let flipped = Polynomial::term(m.clone(), -q.clone());
                let orig = Polynomial::term(m.clone(), q.clone());
                let newc = Expr::from(&(&p - &orig) + &flipped);
                let mut coeffs: Vec<(Symbol, Expr)> =
                    f.coeffs().iter().map(|(a, b)| (*a, b.clone())).filter(|(a, _)| a != s).collect();
                coeffs.push((*s, newc));
                let mutant = VectorField::new(f.name(), f.space(), coeffs, None)?;
                let mut fields = alg.fields.clone();
                fields[i] = mutant;
                out.push((format!("{}:{}:{}", f.name(), s, k + 1), fields));
            }
        }
    }
    Ok(out)
}

static CATALOG: OnceLock<Result<Catalog, CoreError>> = OnceLock::new();

impl Catalog {
    /// The shared catalog, built on first use.
    pub fn get() -> Result<&'static Catalog, CoreError> {
        CATALOG.get_or_init(Catalog::build).as_ref().map_err(|e| e.clone())
    }

    pub fn space(&self, key: &str) -> Result<&Arc<JetSpace>, CoreError> {
        self.spaces.get(key).ok_or_else(|| CoreError::UnknownKey(key.to_string()))
    }

    pub fn assumptions(&self, space: &str) -> Assumptions {
        self.assumptions.get(space).cloned().unwrap_or_default()
    }

    pub fn algebra(&self, key: &str) -> Result<&Algebra, CoreError> {
        self.algebras.get(key).ok_or_else(|| CoreError::UnknownKey(key.to_string()))
    }

    /// `cga_general` for `n_dim` in {2, 3} and levels `-l..=l`, `l <= 3`.
    pub fn cga_general(&self, n_dim: usize, l: i64) -> Result<Algebra, CoreError> {
        if !(2..=3).contains(&n_dim) || !(1..=3).contains(&l) {
            return Err(CoreError::BadParams(format!("cga_general needs N in 2..=3 and levels in 1..=3, got N={} levels={}", n_dim, l)));
        }
        let sp = self.space(&format!("cga_n{}", n_dim))?.clone();
        let rs: Vec<String> = (1..=n_dim).map(|i| format!("r{}", i)).collect();
        let gs: Vec<String> = (1..=n_dim).map(|i| format!("g{}", i)).collect();
        let rr: Vec<&str> = rs.iter().map(|s| s.as_str()).collect();
        let gg: Vec<&str> = gs.iter().map(|s| s.as_str()).collect();
        let reader = Reader::new(&sp, Assumptions::new());
        let fields = cga_fields(&reader, &sp, &rr, Some(&gg), l)?;
        Ok(Algebra {
            key: format!("cga_general_n{}_l{}", n_dim, l),
            space: sp,
            fields,
            table: cga_table(n_dim, l, false)?,
            description: format!("conformal Galilei realization with symbolic lam and gamma, N={}, levels |n|<={}", n_dim, l),
        })
    }

    /// Reads a formula on a catalog space. Invariants of that space may be named by key.
    pub fn read(&self, space: &str, src: &str) -> Result<Expr, CoreError> {
        let sp = self.space(space)?;
        let mut r = Reader::new(sp, self.assumptions(space));
        for inv in self.invariants.values().filter(|i| i.space.name() == space) {
            r.bind(&inv.key, inv.expr.clone());
        }
        r.read(src)
    }

    pub fn invariant(&self, key: &str) -> Result<&Invariant, CoreError> {
        self.invariants.get(key).ok_or_else(|| CoreError::UnknownKey(key.to_string()))
    }

    pub fn system(&self, key: &str) -> Result<&SystemEntry, CoreError> {
        self.systems.get(key).ok_or_else(|| CoreError::UnknownKey(key.to_string()))
    }

    pub fn transformation(&self, key: &str) -> Result<&TransformationEntry, CoreError> {
        self.transformations.get(key).ok_or_else(|| CoreError::UnknownKey(key.to_string()))
    }

    pub fn table(&self, key: &str) -> Result<&CommutatorTable, CoreError> {
        if let Some(t) = self.tables.get(key) {
            return Ok(t);
        }
        Ok(&self.algebra(key)?.table)
    }

    /// Every entry as `(kind, key)`, in a fixed order.
    pub fn entries(&self) -> Vec<(EntryKind, String)> {
        let mut v = Vec::new();
        v.extend(self.algebras.keys().map(|k| (EntryKind::Algebra, k.clone())));
        v.extend(self.invariants.keys().map(|k| (EntryKind::Invariant, k.clone())));
        v.extend(self.systems.keys().map(|k| (EntryKind::System, k.clone())));
        v.extend(self.transformations.keys().map(|k| (EntryKind::Transformation, k.clone())));
        v.extend(self.tables.keys().map(|k| (EntryKind::Table, k.clone())));
        v
    }

    fn build() -> Result<Catalog, CoreError> {
        let mut cat = Catalog {
            spaces: BTreeMap::new(),
            algebras: BTreeMap::new(),
            invariants: BTreeMap::new(),
            systems: BTreeMap::new(),
            transformations: BTreeMap::new(),
            tables: BTreeMap::new(),
            assumptions: BTreeMap::new(),
        };
        for (k, sp) in [
            ("scalar", space("scalar", &["t", "x", "y"], &["u"], 2)?),
            ("scalar3", space("scalar3", &["t", "x", "y", "z"], &["u"], 2)?),
            ("pair", space("pair", &["t", "x", "y"], &["u", "v"], 2)?),
            ("ecga", space("ecga", &["t", "x", "y"], &["u1", "u2", "u3"], 1)?),
            ("fluid", space("fluid", &["t", "x", "y"], &["u1", "u2", "w"], 1)?),
            ("cga_n2", space("cga_n2", &["t", "r1", "r2"], &["g1", "g2"], 1)?),
            ("cga_n3", space("cga_n3", &["t", "r1", "r2", "r3"], &["g1", "g2", "g3"], 1)?),
            ("wave", space("wave", &["t", "x", "y", "v1", "v2", "w"], &["Psi"], 2)?),
        ] {
            cat.spaces.insert(k.to_string(), sp);
        }
        let p = Symbol::param("p");
        let one_minus_pt = Polynomial::one() - Polynomial::var(p) * Polynomial::var(Symbol::lookup("t").expect("t"));
        let sq = |a: &str, b: &str| -> Polynomial {
            let a = Polynomial::var(Symbol::lookup(a).expect("coordinate"));
            let b = Polynomial::var(Symbol::lookup(b).expect("coordinate"));
            &a * &a + &b * &b
        };
        cat.assumptions.insert(
            "scalar".into(),
            Assumptions::new().with(one_minus_pt.clone()).with(sq("u_x", "u_y")),
        );
        cat.assumptions.insert(
            "pair".into(),
            Assumptions::new().with(one_minus_pt.clone()).with(sq("u_x", "u_y")),
        );
        cat.assumptions.insert("ecga".into(), Assumptions::new().with(one_minus_pt.clone()));
        cat.assumptions.insert("scalar3".into(), Assumptions::new().with(one_minus_pt));

        cat.build_scalar()?;
        cat.build_pair()?;
        cat.build_ecga()?;
        cat.build_fluid()?;
        cat.build_wave()?;
        cat.tables.insert("schroedinger".into(), schroedinger_table()?);
        cat.validate()?;
        Ok(cat)
    }

    fn add_invariant(&mut self, key: &str, space: &str, expr: Expr, description: &str) -> Result<(), CoreError> {
        let sp = self.space(space)?.clone();
        if self.invariants.contains_key(key) {
            return Err(CoreError::DuplicateName(key.to_string()));
        }
        self.invariants.insert(
            key.to_string(),
            Invariant {
                key: key.to_string(),
                space: sp,
                expr,
                description: description.to_string(),
            },
        );
        Ok(())
    }

    fn add_algebra(&mut self, alg: Algebra) -> Result<(), CoreError> {
        if self.algebras.contains_key(&alg.key) {
            return Err(CoreError::DuplicateName(alg.key));
        }
        self.algebras.insert(alg.key.clone(), alg);
        Ok(())
    }

    fn build_scalar(&mut self) -> Result<(), CoreError> {
        let sp = self.space("scalar")?.clone();
        let mut r = Reader::new(&sp, self.assumptions("scalar"));
        let fields = cga_fields(&r, &sp, &["x", "y"], None, 1)?;
        let cga2 = Algebra {
            key: "cga2".into(),
            space: sp.clone(),
            fields,
            table: cga_table(2, 1, false)?,
            description: "conformal Galilei algebra on (t, x, y | u)".into(),
        };
        let gal0 = cga2.select("gal0_2", &["Xm1", "Ym1_1", "Ym1_2", "Y0_1", "Y0_2", "R"], "massless Galilei algebra")?;
        let gal0r = cga2.select(
            "gal0_2_dil",
            &["Xm1", "X0", "Ym1_1", "Ym1_2", "Y0_1", "Y0_2", "R"],
            "massless Galilei algebra with dilatation",
        )?;
        self.add_algebra(cga2)?;
        self.add_algebra(gal0)?;
        self.add_algebra(gal0r)?;

        r.define("P", "u_x^2 + u_y^2")?;
        let wi = r.det(&[&["u_t", "u_x", "u_y"], &["u_tx", "u_xx", "u_xy"], &["u_ty", "u_xy", "u_yy"]])?;
        let wii = r.det(&[&["u_tt", "u_tx", "u_ty"], &["u_tx", "u_xx", "u_xy"], &["u_ty", "u_xy", "u_yy"]])?;
        let wiii = r.det(&[&["0", "u_x", "u_y"], &["u_x", "u_xx", "u_xy"], &["u_y", "u_xy", "u_yy"]])?;
        r.bind("WI", wi.clone());
        r.bind("WIII", wiii.clone());
        let entries = [
            ("galilei_WI", wi.clone(), "determinant of (u_t, grad u) against the mixed second derivatives"),
            ("galilei_WII", wii.clone(), "full Hessian determinant in (t, x, y)"),
            ("galilei_WIII", wiii, "bordered spatial Hessian"),
            ("u", r.read("u")?, "the dependent variable"),
            ("Z1", r.read("(u_xx + u_yy)/P")?, "Laplacian over |grad u|^2"),
            ("Z2", r.read("(u_x^2*u_xx + 2*u_x*u_y*u_xy + u_y^2*u_yy)/P^2")?, "u_a u_b u_ab over |grad u|^4"),
            ("Z3", r.read("(u_xx*u_yy - u_xy^2)/P^2")?, "spatial Hessian over |grad u|^4"),
            ("Z4", r.read("WI*P^(-5/2)")?, "W^I over |grad u|^5"),
        ];
        for (k, e, d) in entries {
            self.add_invariant(k, "scalar", e, d)?;
        }
        let args = [
            "u",
            "P",
            "u_xx + u_yy",
            "u_x^2*u_xx + 2*u_x*u_y*u_xy + u_y^2*u_yy",
            "u_xx*u_yy - u_xy^2",
            "WI",
        ];
        for (i, a) in args.iter().enumerate() {
            let e = r.read(a)?;
            self.add_invariant(&format!("galilei_arg_{}", i + 1), "scalar", e, "argument of the general Galilei-invariant equation")?;
        }
        self.add_invariant("galilei_arg_7", "scalar", wii.clone(), "argument of the general Galilei-invariant equation")?;
        r.bind("WII", wii);
        let e = r.read("WII*P^(-3)")?;
        self.add_invariant("galilei_WII_scaled", "scalar", e, "W^II over |grad u|^6")?;

        let p = Symbol::param("p");
        let tr = PointTransformation::new(
            "projective_2_11",
            &sp,
            p,
            [
                (sym("t"), r.read("t/(1 - p*t)")?),
                (sym("x"), r.read("x/(1 - p*t)^2")?),
                (sym("y"), r.read("y/(1 - p*t)^2")?),
            ],
            self.assumptions("scalar"),
        )?
        .prolong(2)?;
        let mut expected = BTreeMap::new();
        for (k, v) in [
            ("u_x", "u_x*(1 - p*t)^2"),
            ("u_y", "u_y*(1 - p*t)^2"),
            ("u_t", "u_t*(1 - p*t)^2 - 2*p*(x*u_x + y*u_y)*(1 - p*t)"),
            ("u_xx", "u_xx*(1 - p*t)^4"),
            ("u_xy", "u_xy*(1 - p*t)^4"),
            ("u_yy", "u_yy*(1 - p*t)^4"),
            ("u_tx", "(1 - p*t)^3*((1 - p*t)*u_tx - 2*p*(x*u_xx + y*u_xy) - 2*p*u_x)"),
            ("u_ty", "(1 - p*t)^3*((1 - p*t)*u_ty - 2*p*(x*u_xy + y*u_yy) - 2*p*u_y)"),
        ] {
            expected.insert(sym(k), r.read(v)?);
        }
        self.add_transformation("projective_2_11", tr, Some(("cga2", "X1", 1)), expected, "projective transformations t/(1-pt), r/(1-pt)^2")?;
        let v1 = Symbol::param("v1");
        let tr = PointTransformation::new("acceleration_2_8", &sp, v1, [(sym("x"), r.read("x + v1*t^2")?)], Assumptions::new())?
            .prolong(2)?;
        self.add_transformation("acceleration_2_8", tr, Some(("cga2", "Y1_1", 1)), BTreeMap::new(), "constant acceleration along x")?;

        // three space dimensions
        let sp3 = self.space("scalar3")?.clone();
        let r3 = Reader::new(&sp3, self.assumptions("scalar3"));
        let fields = cga_fields(&r3, &sp3, &["x", "y", "z"], None, 1)?;
        self.add_algebra(Algebra {
            key: "cga3".into(),
            space: sp3.clone(),
            fields,
            table: cga_table(3, 1, false)?,
            description: "conformal Galilei algebra on (t, x, y, z | u)".into(),
        })?;
        let wi3 = r3.det(&[
            &["u_t", "u_x", "u_y", "u_z"],
            &["u_tx", "u_xx", "u_xy", "u_xz"],
            &["u_ty", "u_xy", "u_yy", "u_yz"],
            &["u_tz", "u_xz", "u_yz", "u_zz"],
        ])?;
        let wiii3 = r3.det(&[
            &["0", "u_x", "u_y", "u_z"],
            &["u_x", "u_xx", "u_xy", "u_xz"],
            &["u_y", "u_xy", "u_yy", "u_yz"],
            &["u_z", "u_xz", "u_yz", "u_zz"],
        ])?;
        self.add_invariant("galilei_WI_3d", "scalar3", wi3, "W^I in three space dimensions")?;
        self.add_invariant("galilei_WIII_3d", "scalar3", wiii3, "bordered spatial Hessian in three space dimensions")?;
        Ok(())
    }

    fn build_pair(&mut self) -> Result<(), CoreError> {
        let sp = self.space("pair")?.clone();
        let mut r = Reader::new(&sp, self.assumptions("pair"));
        let fields = cga_fields(&r, &sp, &["x", "y"], None, 1)?;
        self.add_algebra(Algebra {
            key: "cga2_pair".into(),
            space: sp.clone(),
            fields,
            table: cga_table(2, 1, false)?,
            description: "conformal Galilei algebra on (t, x, y | u, v)".into(),
        })?;
        r.define("uv", "u_x*v_x + u_y*v_y")?;
        r.define("Pu", "u_x^2 + u_y^2")?;
        let wi = |a: &str, b: &str, c: &str| -> Result<Expr, CoreError> {
            r.det(&[
                &[&format!("{}_t", a), &format!("{}_x", a), &format!("{}_y", a)],
                &[&format!("{}_tx", b), &format!("{}_xx", b), &format!("{}_xy", b)],
                &[&format!("{}_ty", c), &format!("{}_xy", c), &format!("{}_yy", c)],
            ])
        };
        let wiii = |a: &str, b: &str, c: &str| -> Result<Expr, CoreError> {
            r.det(&[
                &["0", &format!("{}_x", a), &format!("{}_y", a)],
                &[&format!("{}_x", b), &format!("{}_xx", b), &format!("{}_xy", b)],
                &[&format!("{}_y", c), &format!("{}_xy", c), &format!("{}_yy", c)],
            ])
        };
        let lam = |i: usize| Expr::sym(Symbol::param(&format!("l{}", i)));
        let combo = |f: &dyn Fn(&str, &str, &str) -> Result<Expr, CoreError>| -> Result<Expr, CoreError> {
            let parts = [
                lam(1).mul(&f("u", "u", "u")?),
                lam(2).mul(&f("v", "u", "u")?),
                lam(3).mul(&f("u", "v", "v")?),
                lam(4).mul(&f("v", "v", "v")?),
            ];
            Ok(Expr::sum(parts.iter()))
        };
        let zuv_num = combo(&wi)?;
        let cond = combo(&wiii)?;
        r.bind("N", zuv_num);
        let items = [
            ("Zu1", "Pu/uv"),
            ("Zv1", "(v_x^2 + v_y^2)/uv"),
            ("Zu2", "(u_xx + u_yy)/uv"),
            ("Zv2", "(v_xx + v_yy)/uv"),
            ("Zu3", "(u_x^2*u_xx + 2*u_x*u_y*u_xy + u_y^2*u_yy)/uv^2"),
            ("Zv3", "(v_x^2*v_xx + 2*v_x*v_y*v_xy + v_y^2*v_yy)/uv^2"),
            ("Zu4", "(u_xx*u_yy - u_xy^2)/uv^2"),
            ("Zv4", "(v_xx*v_yy - v_xy^2)/uv^2"),
            ("Zuv", "N*Pu^(-5/2)"),
        ];
        for (k, f) in items {
            let e = r.read(f)?;
            self.add_invariant(k, "pair", e, "two-function Galilei invariant")?;
        }
        self.add_invariant("Zuv_condition", "pair", cond, "lambda-combination of bordered determinants")?;
        Ok(())
    }

    fn build_ecga(&mut self) -> Result<(), CoreError> {
        let sp = self.space("ecga")?.clone();
        let mut r = Reader::new(&sp, self.assumptions("ecga"));
        let fields = ecga_fields(&r, &sp, "u1", "u2", "u3")?;
        let ecga = Algebra {
            key: "ecga".into(),
            space: sp.clone(),
            fields,
            table: ecga_table()?,
            description: "exotic conformal Galilei realization on (t, x, y | u1, u2, u3)".into(),
        };
        let ea1 = ecga.select("ea1", &EA1, "Galilei accelerations with the central generator")?;
        let ea2 = ecga.select("ea2", &EA2, "ea1 with dilatation and projective generator")?;
        let ea3 = ecga.select("ea3", &EA3, "ea1 with dilatation and rotation")?;
        self.add_algebra(ecga)?;
        self.add_algebra(ea1)?;
        self.add_algebra(ea2)?;
        self.add_algebra(ea3)?;
        let mut xinf = Vec::new();
        for k in 0..4 {
            xinf.push(field(&r, &sp, &format!("Xinf{}", k), &[("u3", &format!("t^{}", k))], None)?);
        }
        let names: Vec<String> = xinf.iter().map(|f| f.name().to_string()).collect();
        self.add_algebra(Algebra {
            key: "xinf".into(),
            space: sp.clone(),
            fields: xinf,
            table: CommutatorTable::new(&names),
            description: "phi(t) d/du3 with phi = t^k, k = 0..3".into(),
        })?;

        for (name, f) in [
            ("W1", "2*u1_t + 2*u3_y - 2*u1*u1_x + u1*u2_y - 3*u2*u1_y"),
            ("W2", "2*u2_t - 2*u3_x - 2*u2*u2_y + u2*u1_x - 3*u1*u2_x"),
            (
                "W3",
                "2*u3_t - u2*u1_t + u1*u2_t - 2*u1*u3_x - 2*u2*u3_y + u1*u2*u1_x - u1*u2*u2_y - u1^2*u2_x + u2^2*u1_y",
            ),
            ("d", "u1_y - u2_x"),
            ("U", "u1_x^2 + u1_y^2 + u2_x^2 + u2_y^2"),
        ] {
            r.define(name, f)?;
        }
        r.define("Wstar12", "(W1^2 + W2^2)/d^2")?;
        r.define("Wstar3", "W3/d")?;
        r.define("Wstar", "(u1_x*W1^2 + u2_y*W2^2 + (u1_y + u2_x)*W1*W2)/d^3")?;
        let items = [
            ("ecga_W1", "W1", "first ecga invariant combination"),
            ("ecga_W2", "W2", "second ecga invariant combination"),
            ("ecga_W3", "W3", "third ecga invariant combination"),
            ("ratio_W1", "W1/d", "W1 over vorticity"),
            ("ratio_W2", "W2/d", "W2 over vorticity"),
            ("ratio_W3", "W3/d", "W3 over vorticity"),
            ("ratio_shear", "(u1_x - u2_y)/d", "normal strain difference over vorticity"),
            ("ratio_u1y", "u1_y/d", "u1_y over vorticity"),
            ("Wstar12", "Wstar12", "(W1^2 + W2^2)/d^2"),
            ("Wstar3", "Wstar3", "W3/d"),
            ("Wstar", "Wstar", "strain-weighted quadratic form in W1, W2 over d^3"),
            ("ratio_div", "(u1_x + u2_y)/d", "divergence over vorticity"),
            ("ratio_norm", "U/d^2", "squared velocity gradient norm over d^2"),
            ("Ustar", "((u1_x - u2_y)^2 + 2*u1_y^2 + 2*u2_x^2)/d^2", "U*"),
            ("Vstar", "((u1_x - u2_y)*(W1^2 - W2^2) + 2*(u1_y + u2_x)*W1*W2)/d^3", "V*"),
        ];
        for (k, f, d) in items {
            let e = r.read(f)?;
            self.add_invariant(k, "ecga", e, d)?;
        }

        let p = Symbol::param("p");
        let proj = |sign: &str| -> Result<Vec<(Symbol, Expr)>, CoreError> {
            Ok(vec![
                (sym("t"), r.read("t/(1 - p*t)")?),
                (sym("x"), r.read("x/(1 - p*t)^2")?),
                (sym("y"), r.read("y/(1 - p*t)^2")?),
                (sym("u1"), r.read("u1 - 2*p*x/(1 - p*t)")?),
                (sym("u2"), r.read("u2 - 2*p*y/(1 - p*t)")?),
                (sym("u3"), r.read(&format!("u3 {} p*(x*u2 - y*u1)/(1 - p*t)", sign))?),
            ])
        };
        let mut expected = BTreeMap::new();
        for (k, v) in [
            ("u1_x", "(1 - p*t)^2*u1_x - 2*p*(1 - p*t)"),
            ("u2_y", "(1 - p*t)^2*u2_y - 2*p*(1 - p*t)"),
            ("u1_y", "(1 - p*t)^2*u1_y"),
            ("u2_x", "(1 - p*t)^2*u2_x"),
        ] {
            expected.insert(sym(k), r.read(v)?);
        }
        let tr = PointTransformation::new("ecga_projective", &sp, p, proj("+")?, self.assumptions("ecga"))?.prolong(1)?;
        self.add_transformation("ecga_projective", tr, Some(("ecga", "X1", 1)), expected.clone(), "finite projective transformations of the exotic realization")?;
        let tr = PointTransformation::new("ecga_projective_printed", &sp, p, proj("-")?, self.assumptions("ecga"))?.prolong(1)?;
        self.add_transformation(
            "ecga_projective_printed",
            tr,
            None,
            expected,
            "projective family with the opposite sign in the u3 map",
        )?;

        let (c, s) = (Symbol::param("c"), Symbol::param("s"));
        let relation = Polynomial::one() - Polynomial::var(c) * Polynomial::var(c);
        let at_zero: Substitution = [(p, Expr::zero()), (c, Expr::one()), (s, Expr::zero())].into_iter().collect();
        let series: Substitution = [(c, Expr::one()), (s, Expr::sym(p))].into_iter().collect();
        let rot = PointTransformation::family(
            "rotation",
            &sp,
            p,
            [
                (sym("x"), r.read("x*c + y*s")?),
                (sym("y"), r.read("-x*s + y*c")?),
                (sym("u1"), r.read("u1*c + u2*s")?),
                (sym("u2"), r.read("-u1*s + u2*c")?),
            ],
            Assumptions::new(),
            vec![(s, relation)],
            at_zero,
            series,
        )?
        .prolong(1)?;
        self.add_transformation("rotation", rot, Some(("ecga", "R", -1)), BTreeMap::new(), "rotation by angle p with c = cos p, s = sin p, c^2 + s^2 = 1")?;

        for k in 0..4 {
            let key = format!("xinf_t{}", k);
            let tr = PointTransformation::new(&key, &sp, p, [(sym("u3"), r.read(&format!("u3 + p*t^{}", k))?)], Assumptions::new())?
                .prolong(1)?;
            self.add_transformation(&key, tr, Some(("xinf", &format!("Xinf{}", k), -1)), BTreeMap::new(), "shift of u3 by p*phi(t)")?;
        }

        // systems on the exotic space
        let assume = self.assumptions("ecga");
        let w = |n: &str| r.read(n);
        let t = |n: &str| sym(n);
        let sys41 = [w("W1")?, w("W2")?, w("u1_x + u2_y")?];
        let solved = solve_linear(&[sys41[2].clone(), sys41[0].clone(), sys41[1].clone()], &[t("u2_y"), t("u1_t"), t("u2_t")], &assume)?;
        self.add_system("sys_4_1", &sp, sys41.to_vec(), solved, None, "W1 = 0, W2 = 0, divergence-free")?;
        let sys47 = [w("W1")?, w("W2")?, w("u1_y - u2_x")?];
        let solved = solve_linear(&[sys47[2].clone(), sys47[0].clone(), sys47[1].clone()], &[t("u2_x"), t("u1_t"), t("u2_t")], &assume)?;
        self.add_system("sys_4_7", &sp, sys47.to_vec(), solved, None, "W1 = 0, W2 = 0, irrotational")?;
        let sys48 = [w("W1")?, w("W2")?, w("W3")?];
        let solved = solve_linear(&sys48, &[t("u1_t"), t("u2_t"), t("u3_t")], &assume)?;
        self.add_system("sys_4_8", &sp, sys48.to_vec(), solved, None, "W1 = W2 = W3 = 0")?;
        Ok(())
    }

    fn build_fluid(&mut self) -> Result<(), CoreError> {
        let sp = self.space("fluid")?.clone();
        let r = Reader::new(&sp, self.assumptions("fluid"));
        let assume = Assumptions::new();
        let eqs = vec![
            r.read("u1_t + u1*u1_x + u2*u1_y - q*w_y")?,
            r.read("u2_t + u1*u2_x + u2*u2_y + q*w_x")?,
            r.read("u1_x + u2_y")?,
        ];
        let solved = solve_linear(&[eqs[2].clone(), eqs[0].clone(), eqs[1].clone()], &[sym("u2_y"), sym("u1_t"), sym("u2_t")], &assume)?;
        let alternate = solve_linear(&[eqs[2].clone(), eqs[0].clone(), eqs[1].clone()], &[sym("u1_x"), sym("u1_t"), sym("u2_t")], &assume)?;
        self.add_system("sys_4_2", &sp, eqs, solved, Some(alternate), "incompressible two-dimensional flow with a stream-like potential w")?;
        let eqs = vec![
            r.read("u1_t + u1*u1_x + u2*u1_y + q*w_x")?,
            r.read("u2_t + u1*u2_x + u2*u2_y + q*w_y")?,
            r.read("w_t + u1_x*w + u1*w_x + u2_y*w + u2*w_y")?,
        ];
        let solved = solve_linear(&eqs, &[sym("u1_t"), sym("u2_t"), sym("w_t")], &assume)?;
        self.add_system("shallow_water", &sp, eqs, solved, None, "shallow-water equations")?;

        let sw = [
            ("Xm1", vec![("t", "-1")]),
            ("Ym1_1", vec![("x", "-1")]),
            ("Ym1_2", vec![("y", "-1")]),
            ("Y0_1", vec![("x", "-t"), ("u1", "-1")]),
            ("Y0_2", vec![("y", "-t"), ("u2", "-1")]),
            ("X0", vec![("t", "-2*t"), ("x", "-x"), ("y", "-y"), ("u1", "u1"), ("u2", "u2"), ("w", "2*w")]),
            (
                "X1",
                vec![("t", "-t^2"), ("x", "-t*x"), ("y", "-t*y"), ("u1", "t*u1 - x"), ("u2", "t*u2 - y"), ("w", "2*t*w")],
            ),
            ("R", vec![("x", "y"), ("y", "-x"), ("u1", "u2"), ("u2", "-u1")]),
            ("D", vec![("t", "t"), ("x", "x"), ("y", "y")]),
        ];
        let fields = sw
            .iter()
            .map(|(n, it)| field(&r, &sp, n, it, None))
            .collect::<Result<Vec<_>, _>>()?;
        let names: Vec<&str> = sw.iter().map(|(n, _)| *n).collect();
        let mut t = CommutatorTable::new(&names);
        for (a, b, combo) in [
            ("Xm1", "Y0_1", vec![("Ym1_1", -1)]),
            ("Xm1", "Y0_2", vec![("Ym1_2", -1)]),
            ("Xm1", "X0", vec![("Xm1", -2)]),
            ("Xm1", "X1", vec![("X0", -1)]),
            ("Xm1", "D", vec![("Xm1", 1)]),
            ("Ym1_1", "X0", vec![("Ym1_1", -1)]),
            ("Ym1_2", "X0", vec![("Ym1_2", -1)]),
            ("Ym1_1", "X1", vec![("Y0_1", -1)]),
            ("Ym1_2", "X1", vec![("Y0_2", -1)]),
            ("Ym1_1", "R", vec![("Ym1_2", -1)]),
            ("Ym1_2", "R", vec![("Ym1_1", 1)]),
            ("Ym1_1", "D", vec![("Ym1_1", 1)]),
            ("Ym1_2", "D", vec![("Ym1_2", 1)]),
            ("Y0_1", "X0", vec![("Y0_1", 1)]),
            ("Y0_2", "X0", vec![("Y0_2", 1)]),
            ("Y0_1", "R", vec![("Y0_2", -1)]),
            ("Y0_2", "R", vec![("Y0_1", 1)]),
            ("X0", "X1", vec![("X1", -2)]),
            ("X1", "D", vec![("X1", -1)]),
        ] {
            let c: Vec<(&str, Expr)> = combo.iter().map(|(n, k)| (*n, int(*k))).collect();
            t.set(a, b, &c)?;
        }
        self.add_algebra(Algebra {
            key: "shallow_water_mai".into(),
            space: sp.clone(),
            fields,
            table: t,
            description: "nine point symmetries of the shallow-water equations".into(),
        })?;

        // exotic generators carried over by r_a = -(3/2) x_a, u3 = (3/2) q w
        let ecga = self.algebra("ecga")?.clone();
        let q = Symbol::param("q");
        let phi: Substitution = [
            (sym("x"), r.read("-3/2*x")?),
            (sym("y"), r.read("-3/2*y")?),
            (sym("u3"), r.read("3/2*q*w")?),
        ]
        .into_iter()
        .collect();
        let none = Assumptions::new();
        let mut fields = Vec::new();
        for f in &ecga.fields {
            let mut coeffs = Vec::new();
            for (s, c) in f.coeffs() {
                let c = c.substitute(&phi, &none)?;
                let (target, scale) = match s.name() {
                    "x" | "y" => (*s, Expr::rational(-2, 3)),
                    "u3" => (sym("w"), Expr::int(2).div(&Expr::int(3).mul(&Expr::sym(q)))?),
                    _ => (*s, Expr::one()),
                };
                coeffs.push((target, c.mul(&scale)));
            }
            fields.push(VectorField::new(f.name(), &sp, coeffs, None)?);
        }
        let names: Vec<String> = fields.iter().map(|f| f.name().to_string()).collect();
        let nm: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let moved = Algebra {
            key: "fluid_ecga".into(),
            space: sp.clone(),
            fields,
            table: restrict(&ecga.table, &nm)?,
            description: "exotic generators in the rescaled variables of the incompressible flow system".into(),
        };
        let fea3 = moved.select("fluid_ea3", &EA3, "ea3 in the rescaled variables")?;
        self.add_algebra(moved)?;
        self.add_algebra(fea3)?;
        let mut xinf = Vec::new();
        for k in 0..4 {
            xinf.push(field(&r, &sp, &format!("Xinf{}", k), &[("w", &format!("t^{}", k))], None)?);
        }
        let names: Vec<String> = xinf.iter().map(|f| f.name().to_string()).collect();
        self.add_algebra(Algebra {
            key: "fluid_xinf".into(),
            space: sp,
            fields: xinf,
            table: CommutatorTable::new(&names),
            description: "phi(t) d/dw with phi = t^k, k = 0..3".into(),
        })?;
        Ok(())
    }

    fn build_wave(&mut self) -> Result<(), CoreError> {
        let sp = self.space("wave")?.clone();
        let r = Reader::new(&sp, self.assumptions("wave"));
        let mut fields = ecga_fields(&r, &sp, "v1", "v2", "w")?;
        // weight lam = -1 on Psi: X_n gets -lam (n+1) t^n Psi d/dPsi
        for f in fields.iter_mut() {
            let extra = match f.name() {
                "X0" => "Psi",
                "X1" => "2*t*Psi",
                _ => continue,
            };
            let mut coeffs: Vec<(Symbol, Expr)> = f.coeffs().iter().map(|(a, b)| (*a, b.clone())).collect();
            coeffs.push((sym("Psi"), r.read(extra)?));
            *f = VectorField::new(f.name(), &sp, coeffs, None)?;
        }
        self.add_algebra(Algebra {
            key: "ecga_wave".into(),
            space: sp.clone(),
            fields,
            table: ecga_table()?,
            description: "exotic generators on (t, x, y, v1, v2, w | Psi) with weight -1 on Psi".into(),
        })?;
        let eq = r.read("Psi_tw - Psi_xv2 + Psi_yv1 - v1/2*Psi_xw - v2/2*Psi_yw")?;
        let solved = solve_linear(&[eq.clone()], &[sym("Psi_tw")], &Assumptions::new())?;
        self.add_system("mt_wave", &sp, vec![eq], solved, None, "second-order wave-type equation on the six-dimensional base")?;
        Ok(())
    }

    fn add_system(
        &mut self,
        key: &str,
        sp: &Arc<JetSpace>,
        eqs: Vec<Expr>,
        solved: Vec<(Symbol, Expr)>,
        alternate: Option<Vec<(Symbol, Expr)>>,
        description: &str,
    ) -> Result<(), CoreError> {
        let assume = self.assumptions(sp.name());
        let system = PdeSystem::new(key, sp, eqs, solved, assume.clone())?;
        if let Some(alt) = &alternate {
            PdeSystem::new(key, sp, system.equations().to_vec(), alt.clone(), assume)?;
        }
        self.systems.insert(
            key.to_string(),
            SystemEntry {
                key: key.to_string(),
                system,
                alternate,
                description: description.to_string(),
            },
        );
        Ok(())
    }

    fn add_transformation(
        &mut self,
        key: &str,
        transform: PointTransformation,
        generator: Option<(&str, &str, i64)>,
        expected: BTreeMap<Symbol, Expr>,
        description: &str,
    ) -> Result<(), CoreError> {
        let bad = transform.derivative_map_mismatches(&expected)?;
        if let Some(s) = bad.first() {
            return Err(CoreError::InconsistentTable(key.to_string(), s.name().to_string()));
        }
        self.transformations.insert(
            key.to_string(),
            TransformationEntry {
                key: key.to_string(),
                transform,
                generator: generator.map(|(a, f, s)| (a.to_string(), f.to_string(), s)),
                expected,
                description: description.to_string(),
            },
        );
        Ok(())
    }

    fn validate(&self) -> Result<(), CoreError> {
        for alg in self.algebras.values() {
            let names = alg.names();
            for (i, n) in names.iter().enumerate() {
                if names[i + 1..].contains(n) {
                    return Err(CoreError::DuplicateName(format!("{}:{}", alg.key, n)));
                }
            }
            for n in alg.table.names() {
                alg.field(n)?;
            }
        }
        for t in self.transformations.values() {
            if let Some((a, f, _)) = &t.generator {
                self.algebra(a)?.field(f)?;
            }
        }
        Ok(())
    }
}

fn sym(name: &str) -> Symbol {
    Symbol::lookup(name).unwrap_or_else(|| Symbol::param(name))
}
