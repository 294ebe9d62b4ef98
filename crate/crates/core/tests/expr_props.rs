use proptest::prelude::*;
use varsub_core::expr::{eval, parse_expr, simplify, Assignment, Expr, Func, ParseContext, Symbol};
use varsub_core::oracle::{fd_check, random_polynomial, sample_symbols, OracleConfig};

fn ctx() -> ParseContext {
    ParseContext {
        base: Some("t".into()),
        fibers: vec!["x".into(), "y".into()],
        max_order: 4,
        params: vec!["k".into()],
    }
}

fn symbols() -> Vec<Symbol> {
    vec![
        Symbol::base("t"),
        Symbol::jet("x", 0),
        Symbol::jet("x", 1),
        Symbol::jet("y", 2),
        Symbol::jet("y", 3),
        Symbol::param("k"),
    ]
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-6i64..7).prop_map(Expr::int),
        (-5i64..6, 1i64..5).prop_map(|(n, d)| Expr::rational(n, d)),
        Just(Expr::pi()),
        (0..symbols().len()).prop_map(|i| Expr::var(symbols()[i].clone())),
    ]
}

fn tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::add),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::mul),
            (inner.clone(), -2i64..4).prop_map(|(b, n)| Expr::powi(b, n)),
            (inner.clone(), prop_oneof![Just((1, 2)), Just((1, 3)), Just((-3, 2))])
                .prop_map(|(b, (p, q))| Expr::pow(b, num::BigRational::new(p.into(), q.into()))),
            (inner, 0..Func::ALL.len()).prop_map(|(a, f)| Expr::func(Func::ALL[f], a)),
        ]
    })
}

fn point(seed: u64, i: u64) -> Assignment {
    let cfg = OracleConfig::default().with_seed(seed);
    sample_symbols(&symbols(), &cfg, i)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_is_a_fixed_point(e in tree()) {
        let printed = e.to_string();
        let back = parse_expr(&printed, &ctx()).unwrap();
        prop_assert_eq!(&back, &e, "printed as {}", printed);
        prop_assert_eq!(back.to_string(), printed);
        for i in 0..4 {
            let a = point(1, i);
            match (eval(&e, &a), eval(&back, &a)) {
                (Ok(u), Ok(v)) => prop_assert_eq!(u.to_bits(), v.to_bits()),
                (Err(_), Err(_)) => {}
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }

    #[test]
    fn simplify_preserves_value(e in tree()) {
        let s = simplify(&e);
        for i in 0..8 {
            let a = point(2, i);
            if let (Ok(u), Ok(v)) = (eval(&e, &a), eval(&s, &a)) {
                let scale = varsub_core::expr::eval_with_scale(&e, &a).unwrap().1;
                prop_assert!(
                    (u - v).abs() <= 1e-12 * (1.0 + u.abs()) + 1e-12 * scale,
                    "{} vs {}: {} != {}", e, s, u, v
                );
            }
        }
    }

    #[test]
    fn canonical_order_ignores_operand_order(mut terms in prop::collection::vec(tree(), 2..5), rot in 0usize..4) {
        let a = Expr::add(terms.clone());
        let p = Expr::mul(terms.clone());
        let k = rot % terms.len();
        terms.rotate_left(k);
        terms.reverse();
        prop_assert_eq!(Expr::add(terms.clone()), a);
        prop_assert_eq!(Expr::mul(terms), p);
    }

    #[test]
    fn diff_matches_central_differences(seed in 0u64..10_000) {
        let syms = &symbols()[..4];
        let e = random_polynomial(syms, 4, 6, seed);
        let cfg = OracleConfig { samples: 50, seed, ..OracleConfig::default() };
        for v in syms {
            let r = fd_check(&e, v, &cfg).unwrap();
            prop_assert!(r.max_rel_err <= 1e-6, "{} d/d{}: {}", e, v, r.max_rel_err);
        }
    }
}

#[test]
fn canonical_sum_of_product() {
    let a = parse_expr("k*x+t", &ctx()).unwrap();
    let b = parse_expr("t+x*k", &ctx()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn spec_simplify_examples() {
    let p = |s| parse_expr(s, &ctx()).unwrap();
    assert_eq!(simplify(&p("x + x")), p("2*x"));
    assert_eq!(simplify(&p("sin(t)^2 + cos(t)^2")), Expr::one());
    assert_eq!(simplify(&p("x'^2*y'' - y''*x'^2")), Expr::zero());
}

#[test]
fn subst_examples() {
    let c = ParseContext {
        fibers: vec!["x".into(), "q".into()],
        ..ctx()
    };
    let p = |s| parse_expr(s, &c).unwrap();
    let x = Symbol::jet("x", 0);
    let xd = Symbol::jet("x", 1);
    let m = std::collections::HashMap::from([(x.clone(), p("cos(q)"))]);
    assert_eq!(p("x^2").subst(&m), p("cos(q)^2"));
    let m = std::collections::HashMap::from([(x, p("q")), (xd, p("q'"))]);
    assert_eq!(p("x + x'").subst(&m), p("q + q'"));
    assert_eq!(p("t").subst(&Default::default()), p("t"));
}
