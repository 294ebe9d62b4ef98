mod common;

use common::{cfg, random_affine, random_lagrangian, source, space, zero_twice};
use proptest::prelude::*;
use varsub_core::expr::{simplify, Expr};
use varsub_core::jet::total_derivative;
use varsub_core::oracle::{fd_check, random_polynomial};
use varsub_core::variational::*;
use varsub_core::Error;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn euler_lagrange_image_is_variational(seed in 0u64..100_000, m in 1usize..4) {
        let names = ["x", "y", "z"];
        let js = space(&names[..m], 1);
        let lag = random_lagrangian(&js, 3, seed);
        let el = euler_lagrange(&lag);
        prop_assert!(el.space.order() == 2);
        prop_assert!(el.actual_order() <= 2);
        let report = helmholtz(&el, &cfg()).unwrap();
        prop_assert!(report.passed(), "{:?}", report.witness);
    }

    #[test]
    fn first_order_euler_lagrange_is_affine_in_acceleration(seed in 0u64..100_000) {
        let js = space(&["x", "y"], 1);
        let el = euler_lagrange(&random_lagrangian(&js, 3, seed));
        for c in &el.components {
            for a in 0..2 {
                for b in 0..2 {
                    let second = c.diff(&el.space.symbol(a, 2)).diff(&el.space.symbol(b, 2));
                    prop_assert!(zero_twice(&second));
                }
            }
        }
    }

    #[test]
    fn top_family_is_antisymmetric(seed in 0u64..100_000, r in 1u32..4) {
        let js = space(&["x", "y"], r);
        let syms = common::jets(&js, r);
        let comps: Vec<Expr> = (0..2).map(|s| random_polynomial(&syms, 3, 4, seed + s)).collect();
        let eps = SourceForm::new(js, comps).unwrap();
        let h = helmholtz_expressions(&eps);
        let top = &h[r as usize];
        let sign = if r % 2 == 0 { 1 } else { -1 };
        for nu in 0..2 {
            for sg in 0..2 {
                prop_assert!(zero_twice(&(&top[nu][sg] + Expr::int(sign) * &top[sg][nu])));
            }
        }
    }

    #[test]
    fn second_order_families_map_to_general_residuals(seed in 0u64..100_000) {
        let js = space(&["x", "y"], 2);
        let syms = common::jets(&js, 2);
        let comps: Vec<Expr> = (0..2).map(|s| random_polynomial(&syms, 3, 4, seed * 3 + s)).collect();
        let eps = SourceForm::new(js.clone(), comps).unwrap();
        let h = helmholtz_expressions(&eps);
        let report = helmholtz(&eps, &cfg()).unwrap();
        prop_assert_eq!(&report.normalization, SECOND_ORDER_NORMALIZATION);
        let half = Expr::rational(1, 2);
        for nu in 0..2 {
            for sg in 0..2 {
                let acc = &report.family("acceleration").unwrap().entry(nu, sg).unwrap().expr;
                let vel = &report.family("velocity").unwrap().entry(nu, sg).unwrap().expr;
                let pos = &report.family("position").unwrap().entry(nu, sg).unwrap().expr;
                prop_assert!(zero_twice(&(acc - &h[2][nu][sg])));
                let want_v = &h[1][nu][sg] - total_derivative(&h[2][nu][sg], &js);
                prop_assert!(zero_twice(&(vel - want_v)));
                let want_p = &h[0][nu][sg] - &half * total_derivative(&h[1][nu][sg], &js);
                prop_assert!(zero_twice(&(pos - want_p)));
            }
        }
        let general = helmholtz_general(&eps, &cfg()).unwrap();
        prop_assert_eq!(general.verdict, report.verdict);
    }

    #[test]
    fn decomposition_reconstructs(seed in 0u64..100_000) {
        let js = space(&["x", "y"], 2);
        let d0 = random_affine(&js, 2, seed);
        let eps = d0.reconstruct();
        let d = linear_accel_decompose(&eps, &cfg()).unwrap();
        let back = d.reconstruct();
        for (a, b) in back.components.iter().zip(&eps.components) {
            prop_assert!(zero_twice(&(a - b)));
        }
        for e in d.a.iter().chain(d.b.iter().flatten()) {
            prop_assert!(e.jet_order().unwrap_or(0) <= 1);
        }
    }
}

#[test]
fn coefficient_conditions_agree_with_full_residuals() {
    let js = space(&["x", "y"], 2);
    let mut pass = 0;
    for trial in 0..50u64 {
        let d = if trial % 2 == 0 {
            random_affine(&js, 2, trial)
        } else {
            let lag = random_lagrangian(&js.with_order(1), 3, trial);
            linear_accel_decompose(&euler_lagrange(&lag), &cfg()).unwrap()
        };
        let ab = helmholtz_ab(&d, &cfg()).unwrap();
        let full = helmholtz(&d.reconstruct(), &cfg()).unwrap();
        assert_eq!(ab.verdict, full.verdict, "trial {trial}");
        pass += ab.passed() as usize;
    }
    assert!(pass >= 25, "only {pass} variational trials");
}

#[test]
fn null_lagrangians() {
    let js = space(&["x", "y"], 2);
    for seed in 0..10 {
        let mut syms = common::jets(&js, 1);
        syms.push(js.base_symbol());
        let f = random_polynomial(&syms, 3, 4, seed);
        let lag = Lagrangian::new(js.clone(), total_derivative(&f, &js)).unwrap();
        assert!(is_null_lagrangian(&lag, &cfg()).unwrap());
    }
    let js1 = space(&["x"], 1);
    assert!(!is_null_lagrangian(&Lagrangian::parse(js1.clone(), "x'^2/2").unwrap(), &cfg()).unwrap());
    assert!(is_null_lagrangian(&Lagrangian::parse(js1, "3/2").unwrap(), &cfg()).unwrap());
}

#[test]
fn euler_lagrange_of_sphere_ambient_lagrangian() {
    let js = space(&["x", "y", "z"], 1);
    let lag = Lagrangian::parse(js, "-(x'^2 + y'^2 + z'^2)/2 + x + y + z").unwrap();
    let el = euler_lagrange(&lag);
    let want = source(&el.space, &["1 + x''", "1 + y''", "1 + z''"]);
    assert_eq!(el.components, want.components);
}

#[test]
fn euler_lagrange_of_quartic_velocity_lagrangian() {
    let js = space(&["u", "v"], 1);
    let el = euler_lagrange(&Lagrangian::parse(js, "-u'^2*v'^2/4").unwrap());
    let want = source(&el.space, &["(v'^2*u'' + 2*u'*v'*v'')/2", "(2*u'*v'*u'' + u'^2*v'')/2"]);
    for (a, b) in el.components.iter().zip(&want.components) {
        assert_eq!(a, &simplify(b));
    }
}

fn gyroscopic(alpha: &str, beta: &str, gamma: &str) -> SourceForm {
    let js = varsub_core::jet::JetSpace::with_params("t", &["x", "y", "z"], 2, &["a", "b", "c"]).unwrap();
    let e1 = format!("x'' - ({alpha})*y' - ({beta})*z'");
    let e2 = format!("y'' + ({alpha})*x' - ({gamma})*z'");
    let e3 = format!("z'' + ({beta})*x' + ({gamma})*y'");
    SourceForm::parse(js, &[&e1, &e2, &e3]).unwrap()
}

#[test]
fn gyroscopic_examples() {
    assert!(!is_locally_variational(&gyroscopic("z", "0", "x"), &cfg()).unwrap().passed());
    assert!(is_locally_variational(&gyroscopic("a", "b", "c"), &cfg()).unwrap().passed());
    assert!(is_locally_variational(&gyroscopic("z", "0", "-x"), &cfg()).unwrap().passed());
}

#[test]
fn helmholtz_spec_examples() {
    let js = space(&["x"], 2);
    assert!(helmholtz(&source(&js, &["-x''"]), &cfg()).unwrap().passed());

    let plane = space(&["x", "y"], 2);
    let circle_cubic = source(&plane, &["y' + x'*(x'*x'' + y'*y'')", "-x' + y'*(x'*x'' + y'*y'')"]);
    let r = helmholtz(&circle_cubic, &cfg()).unwrap();
    assert!(!r.passed());
    let vel = r.family("velocity").unwrap();
    assert_eq!(vel.entry(0, 0).unwrap().expr, plane.parse("2*y'*y''").unwrap());
    assert_eq!(vel.entry(1, 1).unwrap().expr, plane.parse("2*x'*x''").unwrap());

    let damped = source(&plane, &["x'' + y'' + x + x'", "x'' + y'' + y + y'"]);
    let r = helmholtz(&damped, &cfg()).unwrap();
    assert!(!r.passed());
    assert!(!r.family("velocity").unwrap().passed());
}

#[test]
fn decomposition_examples() {
    let plane = space(&["x", "y"], 2);
    let circle_cubic = source(&plane, &["y' + x'*(x'*x'' + y'*y'')", "-x' + y'*(x'*x'' + y'*y'')"]);
    let d = linear_accel_decompose(&circle_cubic, &cfg()).unwrap();
    assert_eq!(d.a, vec![plane.parse("y'").unwrap(), plane.parse("-x'").unwrap()]);
    for s in 0..2 {
        for n in 0..2 {
            assert_eq!(d.b[s][n], plane.coord(s, 1) * plane.coord(n, 1));
        }
    }
    let r = helmholtz_ab(&d, &cfg()).unwrap();
    assert!(r.family("B-symmetry").unwrap().passed());
    assert!(!r.family("B-velocity").unwrap().passed());

    let js3 = space(&["x", "y", "z"], 2);
    let bad = source(&js3, &["x'' + x*x''^2", "y''", "z''"]);
    assert!(matches!(linear_accel_decompose(&bad, &cfg()), Err(Error::Nonlinear { sigma: 0, nu: 0, .. })));
}

#[test]
fn adjusted_quartic_kinetic_system_satisfies_coefficient_symmetries() {
    let js = space(&["x", "y"], 2);
    let b = |s: usize, n: usize| {
        let delta = if s == n { "(1 + x'^2 + y'^2)" } else { "0" };
        let vs = ["x'", "y'"];
        js.parse(&format!("{delta} + 2*{}*{}", vs[s], vs[n])).unwrap()
    };
    let d = ABDecomposition::new(
        js.clone(),
        vec![js.coord(0, 0), js.coord(1, 0)],
        vec![vec![b(0, 0), b(0, 1)], vec![b(1, 0), b(1, 1)]],
    )
    .unwrap();
    let r = helmholtz_ab(&d, &cfg()).unwrap();
    assert!(r.family("B-symmetry").unwrap().passed());
    assert!(r.family("B-velocity").unwrap().passed());
}

#[test]
fn velocity_free_force_specialization() {
    let js = space(&["x", "y"], 2);
    let eps = source(&js, &["x'' - x^2*y", "y'' - sin(x)"]);
    let d = linear_accel_decompose(&eps, &cfg()).unwrap();
    let r = helmholtz_ab(&d, &cfg()).unwrap();
    for f in ["B-symmetry", "B-velocity", "A-velocity"] {
        assert!(r.family(f).unwrap().passed());
    }
    let curl = &r.family("A-position").unwrap().entry(0, 1).unwrap().expr;
    let want = d.a[1].diff(&js.symbol(0, 0)) - d.a[0].diff(&js.symbol(1, 0));
    assert_eq!(curl, &simplify(&want));
}

#[test]
fn partials_used_by_reports_pass_fd_checks() {
    let plane = space(&["x", "y"], 2);
    let circle_cubic = source(&plane, &["y' + x'*(x'*x'' + y'*y'')", "-x' + y'*(x'*x'' + y'*y'')"]);
    for c in &circle_cubic.components {
        for s in common::jets(&plane, 2) {
            assert!(fd_check(c, &s, &cfg()).unwrap().pass);
        }
    }
}
