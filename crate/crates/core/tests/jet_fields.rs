use std::sync::Arc;

use jetlie_core::{JetSpace, VectorField};
use jetlie_kernel::{Expr, Symbol};
use proptest::prelude::*;

fn space(name: &str, ind: &[&str], dep: &[&str], order: u32) -> Arc<JetSpace> {
    Arc::new(JetSpace::new(name, ind, dep, order).unwrap())
}

fn jet(s: &JetSpace, dep: &str, along: &[&str]) -> Symbol {
    let d = s.coordinate(dep).unwrap();
    let a: Vec<Symbol> = along.iter().map(|n| s.coordinate(n).unwrap()).collect();
    s.jet_along(d, &a).unwrap()
}

fn e(s: Symbol) -> Expr {
    Expr::sym(s)
}

#[test]
fn coordinate_counts() {
    assert_eq!(space("jf_a", &["t", "x1", "x2"], &["u"], 2).coordinate_count(2), 13);
    assert_eq!(space("jf_b", &["t", "x1", "x2"], &["u1", "u2", "u3"], 1).coordinate_count(1), 15);
    assert_eq!(space("jf_c", &["t"], &["u"], 1).coordinate_count(1), 3);
    assert_eq!(space("jf_a", &["t", "x1", "x2"], &["u"], 2).coordinate_count(0), 4);
}

#[test]
fn mixed_jets_do_not_depend_on_order_of_differentiation() {
    let s = space("jf_d", &["t", "x"], &["u"], 2);
    assert_eq!(jet(&s, "u", &["t", "x"]), jet(&s, "u", &["x", "t"]));
}

#[test]
fn total_derivative_examples() {
    let s = space("jf_d", &["t", "x"], &["u"], 2);
    let x = s.coordinate("x").unwrap();
    let ux = e(jet(&s, "u", &["x"]));
    let uxx = e(jet(&s, "u", &["x", "x"]));
    let u = e(s.coordinate("u").unwrap());
    let f = ux.mul(&ux);
    let want = Expr::int(2).mul(&ux).mul(&uxx);
    assert_eq!(s.total_derivative_along(&f, x, false).unwrap(), want);
    let g = e(x).mul(&u);
    assert_eq!(s.total_derivative_along(&g, x, false).unwrap(), u.add(&e(x).mul(&ux)));
}

#[test]
fn scaling_prolongs_with_weights() {
    let s = space("jf_d", &["t", "x"], &["u"], 2);
    let x = s.coordinate("x").unwrap();
    let f = VectorField::new("D", &s, [(x, e(x))], None).unwrap();
    let pf = f.prolong(2).unwrap();
    let ux = jet(&s, "u", &["x"]);
    let uxx = jet(&s, "u", &["x", "x"]);
    let utx = jet(&s, "u", &["t", "x"]);
    assert_eq!(pf.coeff(ux), e(ux).neg());
    assert_eq!(pf.coeff(uxx), Expr::int(-2).mul(&e(uxx)));
    assert_eq!(pf.coeff(utx), e(utx).neg());
    assert!(pf.coeff(jet(&s, "u", &["t"])).is_zero());
}

#[test]
fn boost_prolongation() {
    // t@x - (x/2) u @u
    let s = space("jf_d", &["t", "x"], &["u"], 2);
    let (t, x, u) = (s.coordinate("t").unwrap(), s.coordinate("x").unwrap(), s.coordinate("u").unwrap());
    let half = Expr::rational(1, 2);
    let f = VectorField::new("G", &s, [(x, e(t)), (u, half.neg().mul(&e(x)).mul(&e(u)))], None).unwrap();
    let pf = f.prolong(2).unwrap();
    let (ut, ux, uxx) = (jet(&s, "u", &["t"]), jet(&s, "u", &["x"]), jet(&s, "u", &["x", "x"]));
    assert_eq!(pf.coeff(ux), half.neg().mul(&e(u)).sub(&half.mul(&e(x)).mul(&e(ux))));
    assert_eq!(pf.coeff(ut), half.neg().mul(&e(x)).mul(&e(ut)).sub(&e(ux)));
    assert_eq!(pf.coeff(uxx), e(ux).neg().sub(&half.mul(&e(x)).mul(&e(uxx))));
    // u_t - u_xx is carried to a multiple of itself
    let heat = e(ut).sub(&e(uxx));
    let image = pf.apply(&heat).unwrap();
    assert_eq!(image, half.neg().mul(&e(x)).mul(&heat));
}

#[test]
fn brackets() {
    let s = space("jf_d", &["t", "x"], &["u"], 2);
    let (t, x) = (s.coordinate("t").unwrap(), s.coordinate("x").unwrap());
    let px = VectorField::new("P", &s, [(x, Expr::one())], None).unwrap();
    let dx = VectorField::new("D", &s, [(x, e(x))], None).unwrap();
    let k = VectorField::new("K", &s, [(t, e(t).mul(&e(t))), (x, e(t).mul(&e(x)))], None).unwrap();
    let pt = VectorField::new("H", &s, [(t, Expr::one())], None).unwrap();
    assert!(px.bracket(&dx).unwrap().same_action(&px));
    assert!(dx.bracket(&px).unwrap().same_action(&px.scale(&Expr::int(-1))));
    // [@t, t^2@t + tx@x] = 2t@t + x@x
    let want = VectorField::new("W", &s, [(t, Expr::int(2).mul(&e(t))), (x, e(x))], None).unwrap();
    assert!(pt.bracket(&k).unwrap().same_action(&want));
    assert!(px.bracket(&px).unwrap().is_zero());
}

fn poly() -> impl Strategy<Value = Vec<(i64, usize, usize)>> {
    prop::collection::vec((-5i64..=5, 0usize..6, 0usize..6), 1..5)
}

fn build(s: &JetSpace, terms: &[(i64, usize, usize)]) -> Expr {
    let gens: Vec<Expr> = ["t", "x", "u"]
        .iter()
        .map(|n| e(s.coordinate(n).unwrap()))
        .chain([e(jet(s, "u", &["t"])), e(jet(s, "u", &["x"]))])
        .chain([Expr::one()])
        .collect();
    let mut acc = Expr::zero();
    for (c, i, j) in terms {
        acc = acc.add(&Expr::int(*c).mul(&gens[*i]).mul(&gens[*j]));
    }
    acc
}

proptest! {
    #[test]
    fn total_derivatives_commute(a in poly()) {
        let s = space("jf_e", &["t", "x"], &["u"], 3);
        let f = build(&s, &a);
        let (t, x) = (s.coordinate("t").unwrap(), s.coordinate("x").unwrap());
        let tx = s.total_derivative_along(&s.total_derivative_along(&f, x, false).unwrap(), t, false).unwrap();
        let xt = s.total_derivative_along(&s.total_derivative_along(&f, t, false).unwrap(), x, false).unwrap();
        prop_assert_eq!(tx, xt);
    }

    #[test]
    fn total_derivative_is_a_derivation(a in poly(), b in poly(), k in -4i64..=4) {
        let s = space("jf_e", &["t", "x"], &["u"], 3);
        let (f, g) = (build(&s, &a), build(&s, &b));
        let x = s.coordinate("x").unwrap();
        let d = |h: &Expr| s.total_derivative_along(h, x, false).unwrap();
        prop_assert_eq!(d(&f.add(&Expr::int(k).mul(&g))), d(&f).add(&Expr::int(k).mul(&d(&g))));
        prop_assert_eq!(d(&f.mul(&g)), d(&f).mul(&g).add(&f.mul(&d(&g))));
    }

    #[test]
    fn prolongation_is_linear(a in poly(), b in poly()) {
        let s = space("jf_e", &["t", "x"], &["u"], 3);
        let (t, x, u) = (s.coordinate("t").unwrap(), s.coordinate("x").unwrap(), s.coordinate("u").unwrap());
        let base = |p: &[(i64, usize, usize)]| -> Expr {
            // keep only point-coordinate generators
            let q: Vec<_> = p.iter().map(|&(c, i, j)| (c, i % 3, j % 3)).collect();
            build(&s, &q)
        };
        let f = VectorField::new("F", &s, [(t, base(&a)), (u, base(&b))], None).unwrap();
        let g = VectorField::new("G", &s, [(x, base(&b)), (u, base(&a))], None).unwrap();
        let sum = f.add(&g).unwrap().prolong(2).unwrap();
        let (pf, pg) = (f.prolong(2).unwrap(), g.prolong(2).unwrap());
        for c in s.coordinates_to(2) {
            prop_assert_eq!(sum.coeff(c), pf.coeff(c).add(&pg.coeff(c)));
        }
    }
}
