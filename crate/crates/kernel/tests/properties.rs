use std::collections::HashMap;

use jetlie_kernel::{normalize, q, Assumptions, Expr, KernelError, Node, Point, Polynomial, Symbol, SymbolKind, Q};
use proptest::prelude::*;

fn s(n: &str) -> Symbol {
    Symbol::new(n, SymbolKind::Parameter)
}

fn root_leaf() -> Node {
    // (x^2 + y^2 + 1)^(1/2)
    let x = Node::Sym(s("px"));
    let y = Node::Sym(s("py"));
    let base = Node::add(Node::add(Node::mul(x.clone(), x), Node::mul(y.clone(), y)), Node::num(1));
    Node::pow(base, q(1, 2))
}

fn leaf(radicals: bool) -> BoxedStrategy<Node> {
    let mut choices = vec![
        (-4i64..=4).prop_map(Node::num).boxed(),
        prop_oneof![Just("px"), Just("py"), Just("pz")].prop_map(|n| Node::Sym(s(n))).boxed(),
    ];
    if radicals {
        choices.push(Just(root_leaf()).boxed());
    }
    proptest::strategy::Union::new(choices).boxed()
}

fn tree(radicals: bool) -> impl Strategy<Value = Node> {
    leaf(radicals).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::mul(a, b)),
            inner.clone().prop_map(Node::neg),
            (inner.clone(), 0i64..3).prop_map(|(a, k)| Node::pow(a, q(k, 1))),
            // divide by z + c with c != 0 so the denominator is never symbolically zero
            (inner, 1i64..4).prop_map(|(a, c)| Node::div(a, Node::add(Node::Sym(s("pz")), Node::num(c)))),
        ]
    })
}

fn norm(n: &Node) -> Expr {
    normalize(n, &Assumptions::new()).expect("well-formed tree")
}

fn poly_node(p: &Polynomial) -> Node {
    let mut acc = Node::num(0);
    for (m, c) in p.terms() {
        let mut t = Node::Num(c.clone());
        for &(v, e) in m.pairs() {
            t = Node::mul(t, Node::pow(Node::Sym(v), Q::from_integer(e.into())));
        }
        acc = Node::add(acc, t);
    }
    acc
}

/// Rebuilds a tree from the canonical parts of `e`.
fn to_node(e: &Expr) -> Node {
    let mut acc = Node::num(0);
    for (m, c) in e.terms() {
        let mut t = Node::div(poly_node(c.numer()), poly_node(c.denom()));
        for f in m.factors() {
            t = Node::mul(t, Node::pow(poly_node(&f.base), f.exponent.clone()));
        }
        acc = Node::add(acc, t);
    }
    acc
}

fn point(vals: (i64, i64, i64)) -> Point {
    [(s("px"), vals.0), (s("py"), vals.1), (s("pz"), vals.2)]
        .into_iter()
        .map(|(k, v)| (k, q(v, 7)))
        .collect()
}

fn eval_tree(n: &Node, pt: &Point) -> Option<Q> {
    Some(match n {
        Node::Sym(v) => pt.get(v)?.clone(),
        Node::Num(c) => c.clone(),
        Node::Add(a, b) => eval_tree(a, pt)? + eval_tree(b, pt)?,
        Node::Sub(a, b) => eval_tree(a, pt)? - eval_tree(b, pt)?,
        Node::Mul(a, b) => eval_tree(a, pt)? * eval_tree(b, pt)?,
        Node::Div(a, b) => {
            let d = eval_tree(b, pt)?;
            if d == q(0, 1) {
                return None;
            }
            eval_tree(a, pt)? / d
        }
        Node::Neg(a) => -eval_tree(a, pt)?,
        Node::Pow(a, e) => {
            if !e.is_integer() {
                return None;
            }
            let b = eval_tree(a, pt)?;
            let k: i32 = e.to_integer().try_into().ok()?;
            if k < 0 && b == q(0, 1) {
                return None;
            }
            num_traits::pow::Pow::pow(b, k)
        }
        Node::Value(_) => return None,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_idempotent(t in tree(true)) {
        let e = norm(&t);
        prop_assert_eq!(norm(&to_node(&e)), e);
    }

    #[test]
    fn addition_is_associative(a in tree(true), b in tree(true), c in tree(true)) {
        let (a, b, c) = (norm(&a), norm(&b), norm(&c));
        prop_assert_eq!(&a + &(&b + &c), &(&a + &b) + &c);
    }

    #[test]
    fn multiplication_distributes(a in tree(true), b in tree(true), c in tree(true)) {
        let (a, b, c) = (norm(&a), norm(&b), norm(&c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn derivative_is_a_derivation(a in tree(true), b in tree(true)) {
        let (a, b) = (norm(&a), norm(&b));
        let x = s("px");
        prop_assert_eq!((&a * &b).diff(x), &(&a.diff(x) * &b) + &(&a * &b.diff(x)));
        prop_assert_eq!((&a + &b).diff(x), &a.diff(x) + &b.diff(x));
    }

    #[test]
    fn evaluation_matches_tree(t in tree(false), v in (-20i64..20, -20i64..20, -20i64..20)) {
        let pt = point(v);
        let direct = eval_tree(&t, &pt);
        prop_assume!(direct.is_some());
        match norm(&t).eval_exact(&pt) {
            Ok(val) => prop_assert_eq!(Some(val), direct),
            Err(KernelError::SingularPoint) => {}
            Err(other) => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    #[test]
    fn substitution_commutes_with_evaluation(
        t in tree(false),
        g in tree(false),
        v in (-20i64..20, -20i64..20, -20i64..20),
    ) {
        let e = norm(&t);
        let img = norm(&g);
        let sigma: HashMap<Symbol, Expr> = [(s("px"), img.clone())].into_iter().collect();
        let lhs = e.substitute(&sigma, &Assumptions::new());
        prop_assume!(lhs.is_ok());
        let pt = point(v);
        let gv = img.eval_exact(&pt);
        prop_assume!(gv.is_ok());
        let mut moved = pt.clone();
        moved.insert(s("px"), gv.unwrap());
        let (l, r) = (lhs.unwrap().eval_exact(&pt), e.eval_exact(&moved));
        if let (Ok(l), Ok(r)) = (l, r) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn zero_verdict_agrees_with_points(a in tree(false), v in (-20i64..20, -20i64..20, -20i64..20)) {
        let e = norm(&a);
        let d = &e - &norm(&to_node(&e));
        prop_assert!(d.is_zero());
        if let Ok(val) = e.eval_exact(&point(v)) {
            if val != q(0, 1) {
                prop_assert!(!e.is_zero());
            }
        }
    }
}
