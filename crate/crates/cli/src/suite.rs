//! Checks run by `verify-paper`.

use std::collections::BTreeSet;
use std::time::Instant;

use jetlie_core::catalog::{ecga_mutations, Algebra, Catalog, EA1};
use jetlie_core::invariance::{annihilates, equal, same_coefficients};
use jetlie_core::{
    check_seed, conditional_invariance, functional_rank, invariance_on_locus, jacobi_failures, manifold_invariance,
    orbit_rank, rank_balance, solve_linear, verify_table, CheckOutcome, CoreError, PairStatus, PdeSystem, VectorField,
    Verdict,
};
use jetlie_kernel::{Expr, Substitution, Symbol};
use rayon::prelude::*;

use crate::report::{CheckRecord, Expect, Observation, Report};

type Run = Box<dyn Fn(&Catalog, u64) -> Result<Observation, CoreError> + Send + Sync>;

pub struct Check {
    pub id: String,
    pub group: &'static str,
    pub criteria: Vec<u8>,
    pub description: String,
    /// Catalog entries exercised, as `kind:key`.
    pub covers: Vec<String>,
    pub expect: Expect,
    run: Run,
}

impl Check {
    pub fn matches(&self, only: &str) -> bool {
        self.group == only || self.id.starts_with(only)
    }

    pub fn execute(&self, cat: &Catalog, seed: u64) -> CheckRecord {
        let start = Instant::now();
        let mut rec = match (self.run)(cat, seed) {
            Ok(obs) => CheckRecord::new(&self.id, self.group, &self.description, self.expect, obs),
            Err(e) => CheckRecord::error(&self.id, self.group, &self.description, self.expect, e.to_string()),
        };
        rec.criteria = self.criteria.clone();
        rec.millis = start.elapsed().as_millis();
        rec
    }
}

fn alg(k: &str) -> String {
    format!("algebra:{}", k)
}
fn inv(k: &str) -> String {
    format!("invariant:{}", k)
}
fn sys(k: &str) -> String {
    format!("system:{}", k)
}
fn trf(k: &str) -> String {
    format!("transformation:{}", k)
}
fn tab(k: &str) -> String {
    format!("table:{}", k)
}

#[derive(Default)]
struct Builder {
    checks: Vec<Check>,
}

impl Builder {
    #[allow(clippy::too_many_arguments)]
    fn add<F>(&mut self, group: &'static str, criteria: &[u8], id: impl Into<String>, description: impl Into<String>, covers: Vec<String>, expect: Expect, run: F)
    where
        F: Fn(&Catalog, u64) -> Result<Observation, CoreError> + Send + Sync + 'static,
    {
        self.checks.push(Check {
            id: id.into(),
            group,
            criteria: criteria.to_vec(),
            description: description.into(),
            covers,
            expect,
            run: Box::new(run),
        });
    }
}

// ---------------------------------------------------------------------------
// helpers

fn strict_obs(fields: &[VectorField], target: &str, e: &Expr, seed: u64) -> Result<Observation, CoreError> {
    let outs = fields
        .par_iter()
        .map(|f| annihilates(f, target, e, seed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Observation::from_outcomes(&outs))
}

fn manifold_outcomes(fields: &[VectorField], system: &PdeSystem, seed: u64) -> Result<Vec<CheckOutcome>, CoreError> {
    let per: Vec<Vec<CheckOutcome>> = fields
        .par_iter()
        .map(|f| manifold_invariance(f, system, &[], seed))
        .collect::<Result<_, _>>()?;
    Ok(per.into_iter().flatten().collect())
}

fn manifold_obs(fields: &[VectorField], system: &PdeSystem, seed: u64) -> Result<Observation, CoreError> {
    Ok(Observation::from_outcomes(&manifold_outcomes(fields, system, seed)?))
}

fn pick(a: &Algebra, names: &[&str]) -> Result<Vec<VectorField>, CoreError> {
    names.iter().map(|n| a.field(n).cloned()).collect()
}

fn table_obs(fields: &[VectorField], table: &jetlie_core::CommutatorTable, seed: u64) -> Result<Observation, CoreError> {
    let rep = verify_table(fields, table, seed)?;
    let bad: Vec<_> = rep.failures().collect();
    if bad.is_empty() {
        let skipped = rep.pairs.len() - rep.checked();
        let mut d = format!("{} brackets match the table", rep.checked());
        if skipped > 0 {
            d.push_str(&format!(", {} out of range", skipped));
        }
        return Ok(Observation::holds(d));
    }
    let names: Vec<String> = bad.iter().map(|p| format!("[{}, {}]", p.a, p.b)).collect();
    let mut obs = Observation::fails(format!("{} of {} brackets differ: {}", bad.len(), rep.checked(), names.join(", ")));
    if let PairStatus::Fail { residual } = &bad[0].status {
        obs.residual = Some(residual.to_string());
    }
    Ok(obs)
}

fn rank_obs(label: &str, got: usize, want: usize, extra: String) -> Observation {
    Observation::check(got == want, format!("{} = {} (expected {}){}", label, got, want, extra))
}

fn identity_obs(cat: &Catalog, key: &str, lhs: &str, rhs: &str, seed: u64) -> Result<Observation, CoreError> {
    let entry = cat.transformation(key)?;
    let space = entry.transform.space().name().to_string();
    let l = cat.read(&space, lhs)?;
    let r = cat.read(&space, rhs)?;
    let v = entry.transform.verify_identity(&l, &r, seed, &format!("{}|{}", key, lhs))?;
    Ok(Observation::from_verdict(&v, format!("{}: ({})' = {}", key, lhs, rhs)))
}

fn exprs(cat: &Catalog, space: &str, srcs: &[&str]) -> Result<Vec<Expr>, CoreError> {
    srcs.iter().map(|s| cat.read(space, s)).collect()
}

fn sym(name: &str) -> Symbol {
    Symbol::lookup(name).unwrap_or_else(|| Symbol::param(name))
}

/// The system `e = 0` solved for `lead`.
fn single(cat: &Catalog, space: &str, name: &str, e: &Expr, lead: &str) -> Result<PdeSystem, CoreError> {
    let sp = cat.space(space)?;
    let assume = cat.assumptions(space);
    let solved = solve_linear(std::slice::from_ref(e), &[sym(lead)], &assume)?;
    PdeSystem::new(name, sp, vec![e.clone()], solved, assume)
}

/// `W^I = 0` with the side condition `W^III = 0` under `field`, or without it.
fn conditional_obs(cat: &Catalog, space: &str, wi: &str, wiii: &str, fields: &[VectorField], with_condition: bool, seed: u64) -> Result<Observation, CoreError> {
    let assume = cat.assumptions(space);
    let a = cat.invariant(wi)?.expr.clone();
    let c = cat.invariant(wiii)?.expr.clone();
    let system = single(cat, space, wi, &a, "u_t")?;
    let per: Vec<Vec<CheckOutcome>> = fields
        .par_iter()
        .map(|f| {
            if with_condition {
                let solved = solve_linear(&[c.clone(), a.clone()], &[sym("u_xx"), sym("u_t")], &assume)?;
                conditional_invariance(f, &system, std::slice::from_ref(&c), Some(solved), &[], seed)
            } else {
                manifold_invariance(f, &system, &[], seed)
            }
        })
        .collect::<Result<_, _>>()?;
    let outs: Vec<CheckOutcome> = per.into_iter().flatten().collect();
    Ok(Observation::from_outcomes(&outs))
}

// ---------------------------------------------------------------------------

/// Every check, in report order.
pub fn checks(cat: &Catalog) -> Vec<Check> {
    let mut b = Builder::default();
    tables(&mut b, cat);
    jacobi(&mut b, cat);
    prolongation(&mut b);
    theorem1(&mut b);
    theorem2(&mut b);
    theorem3(&mut b);
    theorem4(&mut b, cat);
    theorem5(&mut b, cat);
    theorem6(&mut b, cat);
    theorem7(&mut b, cat);
    ranks(&mut b);
    systems(&mut b);
    consistency(&mut b, cat);
    mutations(&mut b, cat);
    formulas(&mut b);
    b.checks
}

fn tables(b: &mut Builder, cat: &Catalog) {
    for key in cat.algebras.keys() {
        let k = key.clone();
        b.add("tables", &[1], format!("table_{}", key), format!("brackets of {} against its table", key), vec![alg(key)], Expect::Pass, move |cat, seed| {
            let a = cat.algebra(&k)?;
            table_obs(&a.fields, &a.table, seed)
        });
    }
    for (n, l) in [(2usize, 1i64), (2, 3), (3, 1), (3, 3)] {
        b.add(
            "tables",
            &[1],
            format!("table_cga_general_n{}_l{}", n, l),
            format!("symbolic lam and gamma realization, N = {}, levels up to {}", n, l),
            vec![],
            Expect::Pass,
            move |cat, seed| {
                let a = cat.cga_general(n, l)?;
                let want = (2 * l as usize + 1) * (n + 1) + n * (n - 1) / 2;
                if a.fields.len() != want {
                    return Ok(Observation::fails(format!("{} generators, expected {}", a.fields.len(), want)));
                }
                let mut obs = table_obs(&a.fields, &a.table, seed)?;
                obs.detail = format!("{} generators; {}", a.fields.len(), obs.detail);
                Ok(obs)
            },
        );
    }
    b.add(
        "tables",
        &[1],
        "table_ecga_central_brackets",
        "the central generator appears exactly in [Y0_1, Y0_2] = Theta and [Y1_1, Ym1_2] = [Ym1_1, Y1_2] = -2 Theta",
        vec![alg("ecga")],
        Expect::Pass,
        |cat, _| {
            let a = cat.algebra("ecga")?;
            let theta = a.field("Theta")?;
            let mut bad = Vec::new();
            for (x, y, k) in [("Y0_1", "Y0_2", 1), ("Y1_1", "Ym1_2", -2), ("Ym1_1", "Y1_2", -2)] {
                let br = a.field(x)?.bracket(a.field(y)?)?;
                if !br.same_action(&theta.scale(&Expr::int(k))) {
                    bad.push(format!("[{}, {}] = {}", x, y, br));
                }
            }
            let mut with_theta = 0;
            for (i, f) in a.fields.iter().enumerate() {
                for g in &a.fields[i + 1..] {
                    let c = a.table.get(f.name(), g.name())?;
                    if c.iter().any(|(n, e)| n == "Theta" && !e.is_zero()) {
                        with_theta += 1;
                    }
                }
            }
            if with_theta != 3 {
                bad.push(format!("{} table entries involve Theta", with_theta));
            }
            Ok(Observation::check(bad.is_empty(), if bad.is_empty() { "three central brackets as stated".to_string() } else { bad.join("; ") }))
        },
    );
}

fn jacobi(b: &mut Builder, cat: &Catalog) {
    for key in cat.algebras.keys() {
        let k = key.clone();
        b.add("jacobi", &[2], format!("jacobi_{}", key), format!("Jacobi identity for the realized {} and its table", key), vec![alg(key)], Expect::Pass, move |cat, _| {
            let a = cat.algebra(&k)?;
            let n = a.fields.len();
            let real = jacobi_failures(&a.fields)?;
            let abs = a.table.abstract_jacobi_failures();
            let triples = n * n.saturating_sub(1) * n.saturating_sub(2) / 6;
            let show = |v: &[(String, String, String)]| v.iter().map(|(x, y, z)| format!("({}, {}, {})", x, y, z)).collect::<Vec<_>>().join(", ");
            if real.is_empty() && abs.is_empty() {
                Ok(Observation::holds(format!("{} triples, realized and abstract", triples)))
            } else {
                Ok(Observation::fails(format!("realized: [{}]; abstract: [{}]", show(&real), show(&abs))))
            }
        });
    }
    for key in cat.tables.keys() {
        let k = key.clone();
        b.add("jacobi", &[2], format!("jacobi_table_{}", key), format!("Jacobi identity for the structure constants of {}", key), vec![tab(key)], Expect::Pass, move |cat, _| {
            let t = cat.table(&k)?;
            let bad = t.abstract_jacobi_failures();
            Ok(Observation::check(bad.is_empty(), format!("{} failing triples among {} generators", bad.len(), t.names().len())))
        });
    }
    for (n, l) in [(2usize, 3i64), (3, 3)] {
        b.add(
            "jacobi",
            &[2],
            format!("jacobi_cga_general_n{}_l{}", n, l),
            format!("Jacobi identity for the conformal Galilei structure constants, N = {}, levels up to {}", n, l),
            vec![],
            Expect::Pass,
            move |cat, _| {
                let a = cat.cga_general(n, l)?;
                let bad = a.table.abstract_jacobi_failures();
                Ok(Observation::check(bad.is_empty(), format!("{} failing triples among {} generators", bad.len(), a.fields.len())))
            },
        );
    }
}

fn acceleration_combination(cat: &Catalog) -> Result<VectorField, CoreError> {
    let a = cat.algebra("ecga")?;
    let (a1, a2) = (Expr::sym(Symbol::param("a1")), Expr::sym(Symbol::param("a2")));
    Ok(a.field("Y1_1")?.scale(&a1).add(&a.field("Y1_2")?.scale(&a2))?.scale(&Expr::int(-1)).renamed("alpha"))
}

fn prolongation(b: &mut Builder) {
    b.add(
        "prolongation",
        &[3],
        "prolongation_acceleration_combination",
        "first prolongation of -a1 Y1_1 - a2 Y1_2, coefficient by coefficient",
        vec![alg("ecga")],
        Expect::Pass,
        |cat, _| {
            let f = acceleration_combination(cat)?;
            let pf = f.prolong(1)?;
            let expected = [
                ("t", "0"),
                ("x", "a1*t^2"),
                ("y", "a2*t^2"),
                ("u1", "-2*a1*t"),
                ("u2", "-2*a2*t"),
                ("u3", "a1*(2*y + t*u2) - a2*(2*x + t*u1)"),
                ("u1_t", "-2*(a1 + a1*t*u1_x + a2*t*u1_y)"),
                ("u2_t", "-2*(a2 + a2*t*u2_y + a1*t*u2_x)"),
                ("u3_t", "a1*u2 - a2*u1 + a1*t*(u2_t - 2*u3_x) - a2*t*(u1_t + 2*u3_y)"),
                ("u3_x", "-2*a2 - a2*t*u1_x + a1*t*u2_x"),
                ("u3_y", "2*a1 - a2*t*u1_y + a1*t*u2_y"),
                ("u1_x", "0"),
                ("u1_y", "0"),
                ("u2_x", "0"),
                ("u2_y", "0"),
            ];
            let mut want = std::collections::BTreeMap::new();
            for (k, v) in expected {
                want.insert(sym(k), cat.read("ecga", v)?);
            }
            let cols = f.space().coordinates_to(1);
            if cols.len() != want.len() {
                return Ok(Observation::fails(format!("{} coordinates, expected {}", cols.len(), want.len())));
            }
            let bad: Vec<String> = cols
                .iter()
                .filter(|s| pf.coeff(**s) != want[*s])
                .map(|s| format!("{}: got {}, expected {}", s, pf.coeff(*s), want[s]))
                .collect();
            if !same_coefficients(pf.coeffs(), &want) || !bad.is_empty() {
                return Ok(Observation::fails(bad.join("; ")));
            }
            Ok(Observation::holds(format!("{} coefficients equal", cols.len())))
        },
    );
    b.add(
        "prolongation",
        &[3],
        "prolongation_acceleration_on_w_system",
        "-a1 Y1_1 - a2 Y1_2 on W1 = W2 = W3 = 0, split in a1, a2, t",
        vec![sys("sys_4_8")],
        Expect::Pass,
        |cat, seed| {
            let f = acceleration_combination(cat)?;
            let system = &cat.system("sys_4_8")?.system;
            let split = [Symbol::param("a1"), Symbol::param("a2"), sym("t")];
            let outs = manifold_invariance(&f, system, &split, seed)?;
            let mut obs = Observation::from_outcomes(&outs);
            let counts: Vec<String> = outs.iter().map(|o| format!("{}: {}", o.target, o.split_equations.unwrap_or(0))).collect();
            obs.detail = format!("{}; coefficient equations after splitting: {}", obs.detail, counts.join(", "));
            Ok(obs)
        },
    );
}

fn theorem1(b: &mut Builder) {
    for key in ["u", "Z1", "Z2", "Z3", "Z4"] {
        b.add(
            "theorem1",
            &[4],
            format!("theorem1_{}", key),
            format!("{} is annihilated by the Galilei algebra with dilatation", key),
            vec![inv(key), alg("gal0_2_dil")],
            Expect::Pass,
            move |cat, seed| strict_obs(&cat.algebra("gal0_2_dil")?.fields, key, &cat.invariant(key)?.expr, seed),
        );
    }
    for g in ["Y1_1", "Y1_2"] {
        b.add(
            "theorem1",
            &[4],
            format!("theorem1_WII_{}", g),
            format!("the Hessian determinant W^II is not annihilated by {}", g),
            vec![inv("galilei_WII"), alg("cga2")],
            Expect::Fail,
            move |cat, seed| {
                let f = cat.algebra("cga2")?.field(g)?.clone();
                strict_obs(&[f], "galilei_WII", &cat.invariant("galilei_WII")?.expr, seed)
            },
        );
    }
    for i in 1..=7 {
        let key = format!("galilei_arg_{}", i);
        b.add(
            "theorem1",
            &[4],
            format!("theorem1_{}", key),
            format!("Galilei argument {} is annihilated by the massless Galilei algebra", i),
            vec![inv(&key), alg("gal0_2")],
            Expect::Pass,
            move |cat, seed| strict_obs(&cat.algebra("gal0_2")?.fields, &key, &cat.invariant(&key)?.expr, seed),
        );
    }
    b.add(
        "theorem1",
        &[],
        "theorem1_WII_scaled",
        "W^II over |grad u|^6 is a further invariant of the Galilei algebra with dilatation",
        vec![inv("galilei_WII_scaled")],
        Expect::Pass,
        |cat, seed| strict_obs(&cat.algebra("gal0_2_dil")?.fields, "galilei_WII_scaled", &cat.invariant("galilei_WII_scaled")?.expr, seed),
    );
    b.add(
        "theorem1",
        &[4],
        "theorem1_WII_scaled_Y1",
        "W^II over |grad u|^6 is excluded by the accelerations",
        vec![inv("galilei_WII_scaled"), alg("cga2")],
        Expect::Fail,
        |cat, seed| {
            let a = cat.algebra("cga2")?;
            strict_obs(&pick(a, &["Y1_1", "Y1_2"])?, "galilei_WII_scaled", &cat.invariant("galilei_WII_scaled")?.expr, seed)
        },
    );
}

fn theorem2(b: &mut Builder) {
    for key in ["Z1", "Z2", "Z3"] {
        b.add(
            "theorem2",
            &[5],
            format!("theorem2_pullback_{}", key),
            format!("{} is unchanged by the finite projective transformations", key),
            vec![inv(key), trf("projective_2_11")],
            Expect::Pass,
            move |cat, seed| identity_obs(cat, "projective_2_11", key, key, seed),
        );
    }
    b.add(
        "theorem2",
        &[5],
        "theorem2_pullback_Z4",
        "Z4 picks up -2p/(1-pt) W^III |grad u|^-5 under the projective transformations",
        vec![inv("Z4"), inv("galilei_WIII"), trf("projective_2_11")],
        Expect::Pass,
        |cat, seed| identity_obs(cat, "projective_2_11", "Z4", "Z4 - 2*p/(1 - p*t)*galilei_WIII*(u_x^2 + u_y^2)^(-5/2)", seed),
    );
    b.add(
        "theorem2",
        &[5],
        "theorem2_pullback_Z4_bare",
        "Z4 law with an unnormalized W^III term",
        vec![inv("Z4"), trf("projective_2_11")],
        Expect::Fail,
        |cat, seed| identity_obs(cat, "projective_2_11", "Z4", "Z4 - 2*p/(1 - p*t)*galilei_WIII", seed),
    );
    b.add(
        "theorem2",
        &[5],
        "theorem2_derivative_maps",
        "prolonged projective transformations give the stated first and second derivative maps",
        vec![trf("projective_2_11")],
        Expect::Pass,
        |cat, _| {
            let e = cat.transformation("projective_2_11")?;
            let bad = e.transform.derivative_map_mismatches(&e.expected)?;
            let names: Vec<String> = bad.iter().map(|s| s.to_string()).collect();
            Ok(Observation::check(bad.is_empty(), if bad.is_empty() { format!("{} maps agree", e.expected.len()) } else { format!("differ: {}", names.join(", ")) }))
        },
    );
    b.add(
        "theorem2",
        &[5],
        "theorem2_conditional_X1",
        "W^I = 0 together with W^III = 0 is invariant under X1",
        vec![inv("galilei_WI"), inv("galilei_WIII"), alg("cga2")],
        Expect::Pass,
        |cat, seed| {
            let f = cat.algebra("cga2")?.field("X1")?.clone();
            conditional_obs(cat, "scalar", "galilei_WI", "galilei_WIII", &[f], true, seed)
        },
    );
    b.add(
        "theorem2",
        &[5],
        "theorem2_conditional_all",
        "W^I = 0 together with W^III = 0 is invariant under every conformal Galilei generator",
        vec![alg("cga2")],
        Expect::Pass,
        |cat, seed| conditional_obs(cat, "scalar", "galilei_WI", "galilei_WIII", &cat.algebra("cga2")?.fields, true, seed),
    );
    b.add(
        "theorem2",
        &[5],
        "theorem2_unconditioned_X1",
        "W^I = 0 alone is not invariant under X1",
        vec![alg("cga2")],
        Expect::Fail,
        |cat, seed| {
            let f = cat.algebra("cga2")?.field("X1")?.clone();
            conditional_obs(cat, "scalar", "galilei_WI", "galilei_WIII", &[f], false, seed)
        },
    );
    b.add(
        "theorem2",
        &[5],
        "theorem2_three_dimensions",
        "W^I = 0 with the bordered-Hessian condition is invariant under X1 in three space dimensions",
        vec![inv("galilei_WI_3d"), inv("galilei_WIII_3d"), alg("cga3")],
        Expect::Pass,
        |cat, seed| {
            let f = cat.algebra("cga3")?.field("X1")?.clone();
            conditional_obs(cat, "scalar3", "galilei_WI_3d", "galilei_WIII_3d", &[f], true, seed)
        },
    );
    b.add(
        "theorem2",
        &[5],
        "theorem2_three_dimensions_unconditioned",
        "W^I = 0 alone is not invariant under X1 in three space dimensions",
        vec![alg("cga3")],
        Expect::Fail,
        |cat, seed| {
            let f = cat.algebra("cga3")?.field("X1")?.clone();
            conditional_obs(cat, "scalar3", "galilei_WI_3d", "galilei_WIII_3d", &[f], false, seed)
        },
    );
}

fn theorem3(b: &mut Builder) {
    for key in ["Zu1", "Zu2", "Zu3", "Zu4", "Zv1", "Zv2", "Zv3", "Zv4"] {
        b.add(
            "theorem3",
            &[6],
            format!("theorem3_{}", key),
            format!("{} is annihilated by every conformal Galilei generator", key),
            vec![inv(key), alg("cga2_pair")],
            Expect::Pass,
            move |cat, seed| strict_obs(&cat.algebra("cga2_pair")?.fields, key, &cat.invariant(key)?.expr, seed),
        );
    }
    b.add(
        "theorem3",
        &[6],
        "theorem3_Zuv",
        "Zuv is annihilated by every generator other than X1",
        vec![inv("Zuv")],
        Expect::Pass,
        |cat, seed| {
            let a = cat.algebra("cga2_pair")?;
            let fields: Vec<VectorField> = a.fields.iter().filter(|f| f.name() != "X1").cloned().collect();
            strict_obs(&fields, "Zuv", &cat.invariant("Zuv")?.expr, seed)
        },
    );
    b.add(
        "theorem3",
        &[6],
        "theorem3_Zuv_X1_on_condition",
        "X1 annihilates Zuv on the lambda-combination of bordered determinants",
        vec![inv("Zuv"), inv("Zuv_condition")],
        Expect::Pass,
        |cat, seed| {
            let f = cat.algebra("cga2_pair")?.field("X1")?;
            let assume = cat.assumptions("pair");
            let cond = cat.invariant("Zuv_condition")?.expr.clone();
            let solved = solve_linear(&[cond], &[sym("u_xx")], &assume)?;
            let out = invariance_on_locus(f, "Zuv", &cat.invariant("Zuv")?.expr, &solved, &assume, seed)?;
            Ok(Observation::from_outcomes(&[out]))
        },
    );
    b.add(
        "theorem3",
        &[6],
        "theorem3_Zuv_X1_strict",
        "X1 does not annihilate Zuv off the condition",
        vec![inv("Zuv")],
        Expect::Fail,
        |cat, seed| {
            let f = cat.algebra("cga2_pair")?.field("X1")?.clone();
            strict_obs(&[f], "Zuv", &cat.invariant("Zuv")?.expr, seed)
        },
    );
}

const EA1_QUANTITIES: [&str; 7] = ["u1_x", "u1_y", "u2_x", "u2_y", "ecga_W1", "ecga_W2", "ecga_W3"];
const EA2_QUANTITIES: [&str; 5] = ["ratio_W1", "ratio_W2", "ratio_W3", "ratio_shear", "ratio_u1y"];
const EA3_QUANTITIES: [&str; 5] = ["Wstar12", "Wstar3", "Wstar", "ratio_div", "ratio_norm"];
const ECGA_QUANTITIES: [&str; 4] = ["Wstar12", "Wstar3", "Ustar", "Vstar"];

fn strict_group(b: &mut Builder, cat: &Catalog, group: &'static str, crit: u8, algebra: &'static str, keys: &'static [&'static str]) {
    for key in keys {
        let key: &'static str = key;
        let mut covers = vec![alg(algebra)];
        if cat.invariants.contains_key(key) {
            covers.push(inv(key));
        }
        b.add(
            group,
            &[crit],
            format!("{}_{}", group, key),
            format!("{} is annihilated by every generator of {}", key, algebra),
            covers,
            Expect::Pass,
            move |cat, seed| strict_obs(&cat.algebra(algebra)?.fields, key, &cat.read("ecga", key)?, seed),
        );
    }
}

fn theorem4(b: &mut Builder, cat: &Catalog) {
    strict_group(b, cat, "theorem4", 7, "ea1", &EA1_QUANTITIES);
}

fn theorem5(b: &mut Builder, cat: &Catalog) {
    b.add(
        "theorem5",
        &[8],
        "theorem5_derivative_maps",
        "first derivatives of u1, u2 under the finite projective transformations",
        vec![trf("ecga_projective")],
        Expect::Pass,
        |cat, _| {
            let e = cat.transformation("ecga_projective")?;
            let bad = e.transform.derivative_map_mismatches(&e.expected)?;
            let names: Vec<String> = bad.iter().map(|s| s.to_string()).collect();
            Ok(Observation::check(bad.is_empty(), if bad.is_empty() { format!("{} maps agree", e.expected.len()) } else { format!("differ: {}", names.join(", ")) }))
        },
    );
    for k in 1..=3 {
        b.add(
            "theorem5",
            &[8],
            format!("theorem5_W{}_law", k),
            format!("W{} scales by (1-pt)^2", k),
            vec![inv(&format!("ecga_W{}", k))],
            Expect::Pass,
            move |cat, seed| {
                let w = format!("ecga_W{}", k);
                identity_obs(cat, "ecga_projective", &w, &format!("(1 - p*t)^2*{}", w), seed)
            },
        );
    }
    b.add(
        "theorem5",
        &[8],
        "theorem5_printed_family_W3_law",
        "the W3 law under the family with the opposite u3 sign",
        vec![trf("ecga_projective_printed")],
        Expect::Fail,
        |cat, seed| identity_obs(cat, "ecga_projective_printed", "ecga_W3", "(1 - p*t)^2*ecga_W3", seed),
    );
    strict_group(b, cat, "theorem5", 8, "ea2", &EA2_QUANTITIES);
}

fn theorem6(b: &mut Builder, cat: &Catalog) {
    strict_group(b, cat, "theorem6", 9, "ea3", &EA3_QUANTITIES);
    for key in EA3_QUANTITIES {
        b.add(
            "theorem6",
            &[9],
            format!("theorem6_rotation_{}", key),
            format!("{} is unchanged by finite rotations", key),
            vec![trf("rotation")],
            Expect::Pass,
            move |cat, seed| identity_obs(cat, "rotation", key, key, seed),
        );
    }
}

fn theorem7(b: &mut Builder, cat: &Catalog) {
    strict_group(b, cat, "theorem7", 10, "ecga", &ECGA_QUANTITIES);
    let laws: [(&str, &str, &str); 5] = [
        ("Wstar12", "Wstar12", "Wstar12"),
        ("Wstar3", "Wstar3", "Wstar3"),
        ("Wstar", "Wstar", "Wstar - 2*p*Wstar12/((1 - p*t)*(u1_y - u2_x))"),
        ("ratio_div", "ratio_div", "ratio_div - 4*p/((1 - p*t)*(u1_y - u2_x))"),
        (
            "ratio_norm",
            "ratio_norm",
            "ratio_norm + 8*p^2/((1 - p*t)^2*(u1_y - u2_x)^2) - 4*p*(u1_x + u2_y)/((1 - p*t)*(u1_y - u2_x)^2)",
        ),
    ];
    for (name, lhs, rhs) in laws {
        b.add(
            "theorem7",
            &[10],
            format!("theorem7_law_{}", name),
            format!("finite projective law for {}", name),
            vec![trf("ecga_projective")],
            Expect::Pass,
            move |cat, seed| identity_obs(cat, "ecga_projective", lhs, rhs, seed),
        );
    }
}

fn ranks(b: &mut Builder) {
    b.add(
        "rank",
        &[4],
        "rank_theorem1_count",
        "functional rank of u, Z1..Z4, with the orbit rank of the Galilei algebra with dilatation",
        vec![],
        Expect::Pass,
        |cat, seed| {
            let sp = cat.space("scalar")?;
            let es: Vec<Expr> = ["u", "Z1", "Z2", "Z3", "Z4"].iter().map(|k| cat.invariant(k).map(|i| i.expr.clone())).collect::<Result<_, _>>()?;
            let f = functional_rank(&es, sp, 2, seed)?;
            let o = orbit_rank(&cat.algebra("gal0_2_dil")?.fields, 2, seed)?;
            let with_extra = {
                let mut v = es.clone();
                v.push(cat.invariant("galilei_WII_scaled")?.expr.clone());
                functional_rank(&v, sp, 2, seed)?.rank
            };
            Ok(rank_obs(
                "functional rank",
                f.rank,
                5,
                format!("; orbit rank {} on {} coordinates leaves {}; with W^II |grad u|^-6 the rank is {}", o.rank, o.columns, o.columns - o.rank, with_extra),
            ))
        },
    );
    let balance = |b: &mut Builder, id: &str, crit: u8, algebra: &'static str, space: &'static str, order: u32, keys: Vec<&'static str>, orbit: usize| {
        let total = keys.len() + orbit;
        b.add(
            "rank",
            &[crit],
            id.to_string(),
            format!("orbit rank of {} and functional rank of its invariants fill the jet space", algebra),
            vec![alg(algebra)],
            Expect::Pass,
            move |cat, seed| {
                let es = exprs(cat, space, &keys)?;
                let (o, f) = rank_balance(&cat.algebra(algebra)?.fields, &es, order, seed)?;
                let ok = o.rank == orbit && f.rank == keys.len() && o.rank + f.rank == o.columns && o.columns == total;
                Ok(Observation::check(ok, format!("orbit {} + functional {} = {} coordinates (expected {} + {})", o.rank, f.rank, o.columns, orbit, keys.len())))
            },
        );
    };
    balance(b, "rank_galilei_balance", 4, "gal0_2", "scalar", 2, vec!["galilei_arg_1", "galilei_arg_2", "galilei_arg_3", "galilei_arg_4", "galilei_arg_5", "galilei_arg_6", "galilei_arg_7"], 6);
    balance(b, "rank_ea1_balance", 7, "ea1", "ecga", 1, EA1_QUANTITIES.to_vec(), 8);
    balance(b, "rank_ea2_balance", 8, "ea2", "ecga", 1, EA2_QUANTITIES.to_vec(), 10);
    balance(b, "rank_ea3_balance", 9, "ea3", "ecga", 1, EA3_QUANTITIES.to_vec(), 10);
    balance(b, "rank_ecga_balance", 10, "ecga", "ecga", 1, ECGA_QUANTITIES.to_vec(), 11);
    b.add("rank", &[7], "rank_ea1_orbit_two_seeds", "orbit rank of ea1 on first-order jets at two independent seeds", vec![alg("ea1")], Expect::Pass, |cat, seed| {
        let f = &cat.algebra("ea1")?.fields;
        let r1 = orbit_rank(f, 1, seed)?;
        let r2 = orbit_rank(f, 1, check_seed(seed, "second seed"))?;
        Ok(Observation::check(
            r1.rank == 8 && r2.rank == 8 && r1.columns == 15,
            format!("rank {} and {} on {} coordinates, {} generators; {} invariants", r1.rank, r2.rank, r1.columns, EA1.len(), r1.columns - r1.rank),
        ))
    });
    b.add("rank", &[10], "rank_ecga_orbit", "orbit rank of the exotic algebra on first-order jets", vec![alg("ecga")], Expect::Pass, |cat, seed| {
        let r = orbit_rank(&cat.algebra("ecga")?.fields, 1, seed)?;
        Ok(rank_obs("orbit rank", r.rank, 11, format!(" on {} coordinates", r.columns)))
    });
    b.add("rank", &[10], "rank_ecga_invariants", "functional rank of W*12, W*3, U*, V*", vec![], Expect::Pass, |cat, seed| {
        let es = exprs(cat, "ecga", &ECGA_QUANTITIES)?;
        let r = functional_rank(&es, cat.space("ecga")?, 1, seed)?;
        Ok(rank_obs("functional rank", r.rank, 4, String::new()))
    });
}

fn system_check(b: &mut Builder, id: &str, description: &str, system: &'static str, algebra: &'static str, names: Option<&'static [&'static str]>, expect: Expect) {
    b.add("systems", &[11], id.to_string(), description.to_string(), vec![sys(system), alg(algebra)], expect, move |cat, seed| {
        let a = cat.algebra(algebra)?;
        let fields = match names {
            Some(n) => pick(a, n)?,
            None => a.fields.clone(),
        };
        manifold_obs(&fields, &cat.system(system)?.system, seed)
    });
}

/// Rewrites the first-order exotic variables through `x_a -> s x_a`, `u3 -> -s q w`.
fn rescaling(s: Expr) -> Result<Substitution, CoreError> {
    let q = Expr::sym(Symbol::param("q"));
    let inv_s = Expr::one().div(&s)?;
    let w = |n: &str| Expr::sym(sym(n));
    let mut m = Substitution::new();
    m.insert(sym("x"), s.mul(&w("x")));
    m.insert(sym("y"), s.mul(&w("y")));
    m.insert(sym("u3"), s.neg().mul(&q).mul(&w("w")));
    for d in ["u1_x", "u1_y", "u2_x", "u2_y"] {
        m.insert(sym(d), inv_s.mul(&w(d)));
    }
    m.insert(sym("u3_x"), q.neg().mul(&w("w_x")));
    m.insert(sym("u3_y"), q.neg().mul(&w("w_y")));
    m.insert(sym("u3_t"), s.neg().mul(&q).mul(&w("w_t")));
    Ok(m)
}

fn rescaling_obs(cat: &Catalog, s: Expr, seed: u64) -> Result<Observation, CoreError> {
    let m = rescaling(s)?;
    let none = jetlie_kernel::Assumptions::new();
    let fluid = &cat.system("sys_4_2")?.system;
    let on: Substitution = [(sym("u2_y"), cat.read("fluid", "-u1_x")?)].into_iter().collect();
    let eq = fluid.equations();
    let pairs = [("ecga_W1", &eq[0], Expr::int(2)), ("ecga_W2", &eq[1], Expr::int(2)), ("u1_x + u2_y", &eq[2], Expr::rational(-2, 3))];
    for (src, target, k) in pairs {
        let img = cat.read("ecga", src)?.substitute(&m, &none)?.substitute(&on, &none)?;
        let want = target.mul(&k).substitute(&on, &none)?;
        let v = equal(&img, &want, seed, src)?;
        if let Verdict::Fail { .. } = v {
            return Ok(Observation::from_verdict(&v, format!("image of {} is not {} times the flow equation", src, k)));
        }
    }
    Ok(Observation::holds("W1 -> 2 eq1, W2 -> 2 eq2, divergence -> -2/3 eq3"))
}

fn systems(b: &mut Builder) {
    system_check(b, "systems_shallow_water", "shallow-water equations under their nine point symmetries", "shallow_water", "shallow_water_mai", None, Expect::Pass);
    system_check(b, "systems_shallow_water_Y1_1", "shallow-water equations under the exotic acceleration", "shallow_water", "fluid_ecga", Some(&["Y1_1"]), Expect::Fail);
    system_check(b, "systems_flow_ea3", "incompressible flow system under ea3 in rescaled variables", "sys_4_2", "fluid_ea3", None, Expect::Pass);
    system_check(b, "systems_flow_xinf", "incompressible flow system under phi(t) d/dw", "sys_4_2", "fluid_xinf", None, Expect::Pass);
    system_check(b, "systems_flow_X1", "incompressible flow system under the projective generator", "sys_4_2", "fluid_ecga", Some(&["X1"]), Expect::Fail);
    b.add(
        "systems",
        &[11],
        "systems_flow_alternate_solved_form",
        "verdicts for the flow system do not depend on the solved form",
        vec![sys("sys_4_2"), alg("fluid_ecga")],
        Expect::Pass,
        |cat, seed| {
            let entry = cat.system("sys_4_2")?;
            let alt = entry.alternate.clone().ok_or_else(|| CoreError::UnknownKey("sys_4_2 alternate".into()))?;
            let fields = &cat.algebra("fluid_ecga")?.fields;
            let mut differ = Vec::new();
            let mut fails = 0;
            for f in fields {
                let a = manifold_invariance(f, &entry.system, &[], seed)?;
                let c = conditional_invariance(f, &entry.system, &[], Some(alt.clone()), &[], seed)?;
                let pa = a.iter().all(|o| o.passed());
                let pc = c.iter().all(|o| o.passed());
                if !pa {
                    fails += 1;
                }
                if pa != pc {
                    differ.push(f.name().to_string());
                }
            }
            Ok(Observation::check(
                differ.is_empty(),
                if differ.is_empty() { format!("{} generators agree ({} not symmetries)", fields.len(), fails) } else { format!("verdicts differ for {}", differ.join(", ")) },
            ))
        },
    );
    system_check(b, "systems_div_free_ea3", "W1 = W2 = 0 with zero divergence under ea3", "sys_4_1", "ea3", None, Expect::Pass);
    system_check(b, "systems_div_free_xinf", "W1 = W2 = 0 with zero divergence under phi(t) d/du3", "sys_4_1", "xinf", None, Expect::Pass);
    system_check(b, "systems_div_free_X1", "W1 = W2 = 0 with zero divergence under the projective generator", "sys_4_1", "ecga", Some(&["X1"]), Expect::Fail);
    system_check(b, "systems_irrotational_ecga", "W1 = W2 = 0 with zero vorticity under the exotic algebra", "sys_4_7", "ecga", None, Expect::Pass);
    system_check(b, "systems_irrotational_xinf", "W1 = W2 = 0 with zero vorticity under phi(t) d/du3", "sys_4_7", "xinf", None, Expect::Pass);
    system_check(b, "systems_w_system_ecga", "W1 = W2 = W3 = 0 under the exotic algebra", "sys_4_8", "ecga", None, Expect::Pass);
    system_check(b, "systems_w_system_xinf0", "W1 = W2 = W3 = 0 under d/du3", "sys_4_8", "xinf", Some(&["Xinf0"]), Expect::Pass);
    for k in 1..=3usize {
        const NAMES: [&[&str]; 4] = [&["Xinf0"], &["Xinf1"], &["Xinf2"], &["Xinf3"]];
        system_check(b, &format!("systems_w_system_xinf{}", k), &format!("W1 = W2 = W3 = 0 under t^{} d/du3", k), "sys_4_8", "xinf", Some(NAMES[k]), Expect::Fail);
    }
    system_check(b, "systems_wave_ecga", "wave-type equation under the weighted exotic generators", "mt_wave", "ecga_wave", None, Expect::Pass);
    b.add(
        "systems",
        &[11],
        "systems_wave_unweighted_X1",
        "wave-type equation under X1 without the weight on Psi",
        vec![sys("mt_wave")],
        Expect::Fail,
        |cat, seed| {
            let f = cat.algebra("ecga_wave")?.field("X1")?;
            let psi = sym("Psi");
            let coeffs: Vec<(Symbol, Expr)> = f.coeffs().iter().filter(|(s, _)| **s != psi).map(|(s, e)| (*s, e.clone())).collect();
            let bare = VectorField::new("X1", f.space(), coeffs, None)?;
            manifold_obs(&[bare], &cat.system("mt_wave")?.system, seed)
        },
    );
    b.add(
        "systems",
        &[11],
        "systems_rescaling",
        "x_a = -(3/2) r_a, q w = (2/3) u3 turns W1, W2 and the divergence into the flow equations",
        vec![sys("sys_4_2"), sys("sys_4_1")],
        Expect::Pass,
        |cat, seed| rescaling_obs(cat, Expr::rational(-3, 2), seed),
    );
    b.add(
        "systems",
        &[11],
        "systems_rescaling_positive",
        "the same substitution with x_a = (3/2) r_a",
        vec![],
        Expect::Fail,
        |cat, seed| rescaling_obs(cat, Expr::rational(3, 2), seed),
    );
}

fn consistency(b: &mut Builder, cat: &Catalog) {
    for (key, entry) in &cat.transformations {
        let k = key.clone();
        match &entry.generator {
            Some((a, f, s)) => {
                let (a, f, s) = (a.clone(), f.clone(), *s);
                b.add(
                    "consistency",
                    &[12],
                    format!("consistency_generator_{}", key),
                    format!("-d/dp at 0 of {} equals {} times {}:{}", key, s, a, f),
                    vec![trf(key)],
                    Expect::Pass,
                    move |cat, _| {
                        let gen = cat.transformation(&k)?.transform.infinitesimal()?;
                        let want = cat.algebra(&a)?.field(&f)?.scale(&Expr::int(s));
                        Ok(Observation::check(gen.same_action(&want), format!("infinitesimal {} vs {}", gen.operator(), want.operator())))
                    },
                );
            }
            None => {
                b.add(
                    "consistency",
                    &[12],
                    format!("consistency_generator_{}", key),
                    format!("-d/dp at 0 of {} against ecga:X1", key),
                    vec![trf(key)],
                    Expect::Fail,
                    move |cat, _| {
                        let gen = cat.transformation(&k)?.transform.infinitesimal()?;
                        let want = cat.algebra("ecga")?.field("X1")?.clone();
                        Ok(Observation::check(gen.same_action(&want), format!("infinitesimal {} vs {}", gen.operator(), want.operator())))
                    },
                );
            }
        }
        let k = key.clone();
        b.add(
            "consistency",
            &[12],
            format!("consistency_first_order_{}", key),
            format!("first order in p of every pullback under {} is the prolonged generator action", key),
            vec![trf(key)],
            Expect::Pass,
            move |cat, seed| {
                let tr = &cat.transformation(&k)?.transform;
                let space = tr.space().name().to_string();
                let mut targets: Vec<(String, Expr)> = cat
                    .invariants
                    .values()
                    .filter(|i| i.space.name() == space && tr.space().expr_order(&i.expr) <= tr.order())
                    .map(|i| (i.key.clone(), i.expr.clone()))
                    .collect();
                for s in tr.space().coordinates_to(tr.order()) {
                    targets.push((s.to_string(), Expr::sym(s)));
                }
                let n = targets.len();
                let bad: Vec<Observation> = targets
                    .par_iter()
                    .map(|(name, e)| -> Result<Option<Observation>, CoreError> {
                        let (d0, d1) = tr.first_order_defect(e)?;
                        for (part, d) in [("order 0", d0), ("order 1", d1)] {
                            let v = equal(&d, &Expr::zero(), seed, &format!("{}|{}|{}", k, name, part))?;
                            if !v.passed() {
                                return Ok(Some(Observation::from_verdict(&v, format!("{} defect at {} for {}", k, part, name))));
                            }
                        }
                        Ok(None)
                    })
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .flatten()
                    .collect();
                Ok(bad.into_iter().next().unwrap_or_else(|| Observation::holds(format!("{} expressions", n))))
            },
        );
    }
}

/// Whether the mutant realization still passes the table and the invariance checks.
fn mutant_obs(cat: &Catalog, fields: &[VectorField], seed: u64) -> Result<Observation, CoreError> {
    let a = cat.algebra("ecga")?;
    let t = table_obs(fields, &a.table, seed)?;
    if !t.holds {
        return Ok(Observation::fails(format!("caught by the table: {}", t.detail)));
    }
    for key in ECGA_QUANTITIES {
        let o = strict_obs(fields, key, &cat.invariant(key)?.expr, seed)?;
        if !o.holds {
            return Ok(Observation { detail: format!("caught by invariance: {}", o.detail), ..o });
        }
    }
    let o = manifold_obs(fields, &cat.system("sys_4_8")?.system, seed)?;
    if !o.holds {
        return Ok(Observation { detail: format!("caught by sys_4_8: {}", o.detail), ..o });
    }
    Ok(Observation::holds("mutant passes the table and every invariance check"))
}

fn mutations(b: &mut Builder, cat: &Catalog) {
    let list = match ecga_mutations(cat) {
        Ok(l) => l,
        Err(e) => {
            let msg = e.to_string();
            b.add("mutations", &[13], "mutation_list", "building the mutation list", vec![], Expect::Pass, move |_, _| Err(CoreError::BadParams(msg.clone())));
            return;
        }
    };
    let n = list.len();
    b.add("mutations", &[13], "mutation_count", "size of the single-sign-flip mutation list", vec![], Expect::Pass, move |_, _| {
        Ok(Observation::check(n >= 10, format!("{} mutations", n)))
    });
    for (label, fields) in list {
        let id = format!("mutation_{}", label.replace(':', "_"));
        b.add("mutations", &[13], id, format!("sign flip {} is detected", label), vec![], Expect::Fail, move |cat, seed| mutant_obs(cat, &fields, seed));
    }
    b.add(
        "mutations",
        &[13],
        "mutation_X1_unit_velocity_coefficient",
        "X1 with coefficient 1 on r_a d/du_a is detected",
        vec![],
        Expect::Fail,
        |cat, seed| {
            let a = cat.algebra("ecga")?;
            let mut fields = a.fields.clone();
            let i = fields.iter().position(|f| f.name() == "X1").ok_or_else(|| CoreError::UnknownGenerator("X1".into()))?;
            let mut coeffs: Vec<(Symbol, Expr)> = fields[i].coeffs().iter().map(|(s, e)| (*s, e.clone())).collect();
            for (s, e) in coeffs.iter_mut() {
                if s.name() == "u1" || s.name() == "u2" {
                    *e = e.mul(&Expr::rational(1, 2));
                }
            }
            fields[i] = VectorField::new("X1", &a.space, coeffs, None)?;
            mutant_obs(cat, &fields, seed)
        },
    );
}

fn formulas(b: &mut Builder) {
    let items: [(&str, &[u8], &str, &str, &str, &[&str]); 5] = [
        ("formula_WIII_expanded", &[5], "scalar", "galilei_WIII", "-(u_y^2*u_xx - 2*u_x*u_y*u_xy + u_x^2*u_yy)", &["galilei_WIII"]),
        ("formula_condition_as_Z1_minus_Z2", &[5], "scalar", "galilei_WIII", "-(u_x^2 + u_y^2)^2*(Z1 - Z2)", &["Z1", "Z2"]),
        ("formula_Ustar", &[10], "ecga", "Ustar", "2*ratio_norm - ratio_div^2", &["Ustar", "ratio_norm"]),
        ("formula_Vstar", &[10], "ecga", "Vstar", "2*Wstar - ratio_div*Wstar12", &["Vstar", "Wstar"]),
        ("formula_Wstar3", &[], "ecga", "Wstar3", "ratio_W3", &["Wstar3", "ratio_W3"]),
    ];
    for (id, crit, space, lhs, rhs, keys) in items {
        b.add("formulas", crit, id, format!("{} = {}", lhs, rhs), keys.iter().map(|k| inv(k)).collect(), Expect::Pass, move |cat, seed| {
            let l = cat.read(space, lhs)?;
            let r = cat.read(space, rhs)?;
            Ok(Observation::from_verdict(&equal(&l, &r, seed, id)?, format!("{} = {}", lhs, rhs)))
        });
    }
}

/// Runs the selected checks; adds the coverage check when nothing is filtered out.
pub fn run(cat: &Catalog, seed: u64, only: Option<&str>, command: &str) -> Result<Report, CoreError> {
    let all = checks(cat);
    let selected: Vec<&Check> = all.iter().filter(|c| only.map(|o| c.matches(o)).unwrap_or(true)).collect();
    if selected.is_empty() {
        return Err(CoreError::UnknownKey(format!("no checks match `{}`", only.unwrap_or(""))));
    }
    let mut report = Report::new(command, seed);
    report.checks = selected.par_iter().map(|c| c.execute(cat, seed)).collect();
    if only.is_none() {
        let covered: BTreeSet<&str> = all.iter().flat_map(|c| c.covers.iter().map(|s| s.as_str())).collect();
        let missing: Vec<String> = cat
            .entries()
            .into_iter()
            .map(|(k, key)| format!("{}:{}", k, key))
            .filter(|e| !covered.contains(e.as_str()))
            .collect();
        let total = cat.entries().len();
        let obs = Observation::check(
            missing.is_empty(),
            if missing.is_empty() { format!("all {} catalog entries have a check", total) } else { format!("no check for {}", missing.join(", ")) },
        );
        report.checks.push(CheckRecord::new("catalog_coverage", "coverage", "every catalog entry is exercised by some check", Expect::Pass, obs));
    }
    Ok(report)
}
