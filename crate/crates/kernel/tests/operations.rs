use std::collections::{BTreeSet, HashMap};

use jetlie_kernel::{
    certify_zero, normalize, q, Assumptions, Expr, KernelError, Monomial, Node, Point, Polynomial, Sampler, Symbol,
    SymbolKind, ZeroCheck, Q,
};

fn sym(n: &str) -> Symbol {
    Symbol::new(n, SymbolKind::Parameter)
}

fn e(n: &str) -> Expr {
    Expr::sym(sym(n))
}

fn half(n: i64) -> Q {
    q(n, 2)
}

fn uu() -> Expr {
    &(&e("u_1") * &e("u_1")) + &(&e("u_2") * &e("u_2"))
}

#[test]
fn radical_exponent_arithmetic() {
    let none = Assumptions::new();
    let a = uu().rpow(&half(-5), &none).unwrap();
    let prod = &a * &uu();
    assert_eq!(prod, uu().rpow(&half(-3), &none).unwrap());
    assert_eq!(prod.num_terms(), 1);
    let (m, _) = prod.terms().next().unwrap();
    assert_eq!(m.factors().len(), 1);
    assert_eq!(m.factors()[0].base, uu().as_polynomial().unwrap());
}

#[test]
fn perfect_square_under_positivity() {
    let p = sym("p");
    let t = sym("t");
    let one_pt = &Expr::one() - &(&Expr::sym(p) * &Expr::sym(t));
    let assume = Assumptions::new().with(one_pt.as_polynomial().unwrap());
    let inner = &one_pt.pow(4).unwrap() * &uu();
    let root = inner.rpow(&half(1), &assume).unwrap();
    let expected = &one_pt.pow(2).unwrap() * &uu().rpow(&half(1), &assume).unwrap();
    assert_eq!(root, expected);
}

#[test]
fn division_of_zero_numerator() {
    let t = Node::Sym(sym("t"));
    let tree = Node::div(
        Node::sub(Node::mul(t.clone(), t.clone()), Node::mul(t.clone(), t)),
        Node::Sym(sym("u_1")),
    );
    assert!(normalize(&tree, &Assumptions::new()).unwrap().is_zero());
    let bad = Node::div(Node::num(1), Node::sub(Node::Sym(sym("t")), Node::Sym(sym("t"))));
    assert_eq!(normalize(&bad, &Assumptions::new()), Err(KernelError::DivisionByZero));
}

#[test]
fn sum_under_root_is_rejected() {
    let none = Assumptions::new();
    let r = uu().rpow(&half(1), &none).unwrap();
    let s = &r + &e("t");
    assert!(matches!(s.rpow(&half(1), &none), Err(KernelError::UnsupportedRadical(_))));
}

#[test]
fn differentiation_rules() {
    let (p, t) = (e("p"), e("t"));
    let one_pt = &Expr::one() - &(&p * &t);
    let d = one_pt.pow(2).unwrap().diff(sym("t"));
    assert_eq!(d, &(&Expr::int(-2) * &p) * &one_pt);

    let none = Assumptions::new();
    let r = uu().rpow(&half(-5), &none).unwrap();
    let dr = r.diff(sym("u_1"));
    let expected = &(&Expr::int(-5) * &e("u_1")) * &uu().rpow(&half(-7), &none).unwrap();
    assert_eq!(dr, expected);

    let ut = Expr::sym(Symbol::new("u_t", SymbolKind::Jet));
    assert_eq!((&ut * &e("u_1")).diff(ut_sym()), e("u_1"));
}

fn ut_sym() -> Symbol {
    Symbol::new("u_t", SymbolKind::Jet)
}

#[test]
fn substitution_examples() {
    let none = Assumptions::new();
    let one_pt = &Expr::one() - &(&e("p") * &e("t"));
    let image = &e("u_1") * &one_pt.pow(2).unwrap();
    let map: HashMap<Symbol, Expr> = [(sym("u_1"), image.clone())].into_iter().collect();
    assert_eq!(e("u_1").substitute(&map, &none).unwrap(), image);

    let z = &e("u_1") * &e("t");
    assert_eq!(z.substitute(&HashMap::new(), &none).unwrap(), z);

    let root = uu().rpow(&half(1), &none).unwrap();
    let kill: HashMap<Symbol, Expr> = [(sym("u_2"), Expr::zero())].into_iter().collect();
    assert!(matches!(root.substitute(&kill, &none), Err(KernelError::UnsupportedRadical(_))));
    let pos = Assumptions::new().with(e("u_1").as_polynomial().unwrap());
    assert_eq!(root.substitute(&kill, &pos).unwrap(), e("u_1"));
}

#[test]
fn substitution_splits_rational_bases() {
    let none = Assumptions::new();
    let x = e("x");
    let root = x.rpow(&half(1), &none).unwrap();
    let img = &e("y") / &(&e("z") * &e("z"));
    let map: HashMap<Symbol, Expr> = [(sym("x"), img.unwrap())].into_iter().collect();
    assert!(matches!(root.substitute(&map, &none), Err(KernelError::UnsupportedRadical(_))));
    let pos = Assumptions::new().with(e("z").as_polynomial().unwrap());
    let out = root.substitute(&map, &pos).unwrap();
    let expected = (&e("y").rpow(&half(1), &none).unwrap() / &e("z")).unwrap();
    assert_eq!(out, expected);
}

#[test]
fn zero_test_examples() {
    assert!((&(&e("u_1") * &e("u_2")) - &(&e("u_2") * &e("u_1"))).is_zero());

    let ux = Expr::sym(Symbol::new("z_x", SymbolKind::Jet));
    let uy = Expr::sym(Symbol::new("z_y", SymbolKind::Jet));
    let uxx = Expr::sym(Symbol::new("z_xx", SymbolKind::Jet));
    let uxy = Expr::sym(Symbol::new("z_xy", SymbolKind::Jet));
    let uyy = Expr::sym(Symbol::new("z_yy", SymbolKind::Jet));
    let pp = &(&ux * &ux) + &(&uy * &uy);
    let lap = &uxx + &uyy;
    let mixed = &(&(&ux * &ux) * &uxx) + &(&(&Expr::int(2) * &ux) * &(&uy * &uxy));
    let mixed = &mixed + &(&(&uy * &uy) * &uyy);
    let z1 = (&lap / &pp).unwrap();
    let z2 = (&mixed / &pp.pow(2).unwrap()).unwrap();
    let w3 = (&(&(&pp * &lap) - &mixed) / &pp.pow(2).unwrap()).unwrap();
    assert!((&(&z1 - &z2) - &w3).is_zero());

    let hess = &(&uxx * &uyy) - &(&uxy * &uxy);
    assert!(!hess.is_zero());
}

#[test]
fn collect_examples() {
    let split: BTreeSet<Symbol> = ["a_1", "a_2", "t"].iter().map(|n| sym(n)).collect();
    let ex = &(&(&e("a_1") * &e("t")) * &e("u_1")) + &(&e("a_2") * &e("u_2"));
    let parts = ex.collect(&split).unwrap();
    assert_eq!(parts.len(), 2);
    let a1t = Monomial::from_pairs([(sym("a_1"), 1), (sym("t"), 1)]);
    let a2 = Monomial::var(sym("a_2"));
    assert!(parts.contains(&(a1t, e("u_1"))));
    assert!(parts.contains(&(a2, e("u_2"))));
    let back = parts.iter().fold(Expr::zero(), |acc, (m, c)| {
        &acc + &(&Expr::from(Polynomial::term(m.clone(), q(1, 1))) * c)
    });
    assert_eq!(back, ex);

    let p: BTreeSet<Symbol> = [sym("p")].into_iter().collect();
    assert!(Expr::zero().collect(&p).unwrap().is_empty());
    let bad = (&Expr::one() / &e("p")).unwrap();
    assert!(matches!(bad.collect(&p), Err(KernelError::NotPolynomialInSplitVars(_))));
}

#[test]
fn exact_evaluation() {
    let none = Assumptions::new();
    let z1 = (&(&e("u_11") + &e("u_22")) / &uu()).unwrap();
    let pt: Point = [("u_1", 1), ("u_2", 0), ("u_11", 2), ("u_22", 3)]
        .iter()
        .map(|(n, v)| (sym(n), q(*v, 1)))
        .collect();
    assert_eq!(z1.eval_exact(&pt).unwrap(), q(5, 1));

    let ut = Expr::sym(ut_sym());
    let pt: Point = [(ut_sym(), q(7, 3))].into_iter().collect();
    assert_eq!(ut.eval_exact(&pt).unwrap(), q(7, 3));

    let root = uu().rpow(&half(1), &none).unwrap();
    let pt: Point = [(sym("u_1"), q(3, 1)), (sym("u_2"), q(4, 1))].into_iter().collect();
    assert_eq!(root.eval_exact(&pt).unwrap(), q(5, 1));
    let pt: Point = [(sym("u_1"), q(1, 1)), (sym("u_2"), q(1, 1))].into_iter().collect();
    assert_eq!(root.eval_exact(&pt), Err(KernelError::IrrationalValue));
    let pt: Point = [(sym("u_1"), q(0, 1)), (sym("u_2"), q(0, 1))].into_iter().collect();
    assert_eq!(z1.eval_exact(&pt), Err(KernelError::SingularPoint));
}

#[test]
fn random_cross_check() {
    let none = Assumptions::new();
    let r = uu().rpow(&half(-3), &none).unwrap();
    let a = &r * &e("u_1");
    let b = (&(&e("u_1") * &uu().rpow(&half(1), &none).unwrap()) / &uu().pow(2).unwrap()).unwrap();
    let mut s = Sampler::new(7);
    assert_eq!(certify_zero(&[a.clone(), b.neg()], &[], &mut s, 3), ZeroCheck::Confirmed { points: 3 });
    assert!(matches!(
        certify_zero(&[a, b], &[], &mut s, 3),
        ZeroCheck::Contradicted { .. }
    ));
}

#[test]
fn display_is_readable() {
    let p = &(&e("x") * &e("x")).scale(&q(3, 2)) - &e("y");
    assert_eq!(p.to_string(), "3/2*x^2 - y");
    let r = (&Expr::one() / &(&e("x") + &Expr::one())).unwrap();
    assert_eq!(r.to_string(), "1/(x + 1)");
}
