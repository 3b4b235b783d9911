use jetlie_cli::dsl::{parse, DslError, Item};
use jetlie_kernel::Symbol;

const SAMPLE: &str = "
space S { independent t, x; dependent u; order 2 }
field T on S = -@t;
space S2 { independent t, x, y; dependent u; order 2 }
param p, c, s;
assume S2: 1 - p*t > 0;
assume S2: u_x^2 + u_y^2 > 0;
expr Z1 on S2 = (u_xx + u_yy) / (u_x^2 + u_y^2);
expr Z4 on S2 = det[[u_t, u_x, u_y], [u_xt, u_xx, u_xy], [u_yt, u_yx, u_yy]] * (u_x^2 + u_y^2)^(-5/2);
field X1 on S2 = -t^2*@t - 2*t*x*@x - 2*t*y*@y + scalar(-t);
system Heat on S2 { u_t = u_xx + u_yy; solve for u_t; }
transform Proj on S2 with p { t -> t/(1 - p*t); x -> x/(1 - p*t)^2; y -> y/(1 - p*t)^2; prolong 2; }
transform Rot on S2 with q { x -> x*c + y*s; y -> -x*s + y*c; relation s^2 = 1 - c^2; identity c = 1, s = 0; series c = 1, s = q; prolong 1; }
table Sl2 (Xm1, X0, X1) { [Xm1, X0] = -Xm1; [Xm1, X1] = -2*X0; [X0, X1] = -X1; }
";

#[test]
fn spec_field_example() {
    let u = parse("space S { independent t, x; dependent u; order 2 } field T on S = -@t;").unwrap();
    let f = u.field("T").unwrap();
    let t = Symbol::lookup("t").unwrap();
    assert_eq!(f.coeff(t).to_string(), "-1");
}

#[test]
fn sample_parses_and_round_trips() {
    let u = parse(SAMPLE).unwrap();
    assert_eq!(u.statements.len(), 13);
    let printed = u.to_string();
    let again = parse(&printed).unwrap_or_else(|e| panic!("{}\n{}", e, printed));
    assert_eq!(u, again);
}

#[test]
fn subscripts_are_reordered() {
    let u = parse("space S { independent t, x; dependent u; order 2 } expr A on S = u_xt - u_tx;").unwrap();
    assert!(u.expr("A").unwrap().1.is_zero());
}

#[test]
fn errors_carry_positions() {
    let e = parse("space S { independent t; dependent u; order 1 }\nexpr A on S = u_t + w;").unwrap_err();
    assert!(matches!(e, DslError::UnknownSymbol { ref name, .. } if name == "w"), "{e}");
    assert_eq!((e.span().line, e.span().col), (2, 21));
    let e = parse("space S { independent t, x; dependent u; order 1 } expr A on S = det[[u_t, u_x]];").unwrap_err();
    assert!(matches!(e, DslError::Arity { .. }), "{e}");
    let e = parse("space S { independent t; dependent u; order 1 } expr A on S = (u_t;").unwrap_err();
    assert!(matches!(e, DslError::Syntax { .. }), "{e}");
    assert!(matches!(parse("table T (A, B) { [A] = B; }").unwrap_err(), DslError::Arity { .. }));
}

#[test]
fn items_in_order() {
    let u = parse(SAMPLE).unwrap();
    assert!(matches!(u.statements[0].item, Item::Space(_)));
    assert!(matches!(u.statements.last().unwrap().item, Item::Table { .. }));
}


fn term() -> impl proptest::strategy::Strategy<Value = String> {
    use proptest::prelude::*;
    let leaf = prop_oneof![
        (-9i32..10).prop_map(|n| format!("({})", n)),
        prop::sample::select(vec!["t", "x", "u", "u_x", "u_tx", "u_xx"]).prop_map(String::from),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({} + {})", a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({} - {})", a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({} * {})", a, b)),
            (inner.clone(), 0u32..3).prop_map(|(a, k)| format!("({})^{}", a, k)),
            inner.prop_map(|a| format!("({}) / (1 + u_x^2)", a)),
        ]
    })
}

proptest::proptest! {
    #[test]
    fn printed_units_parse_back(e in term()) {
        let src = format!("space S {{ independent t, x; dependent u; order 2 }} expr E on S = {};", e);
        let u = parse(&src).unwrap();
        let printed = u.to_string();
        let again = parse(&printed).unwrap_or_else(|err| panic!("{}\n{}", err, printed));
        proptest::prop_assert_eq!(u, again);
    }
}
