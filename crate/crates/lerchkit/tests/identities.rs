use lerchkit::numeric::{Ctx, Cx, Tol};
use lerchkit::quad::reduce::eval_double;
use lerchkit::quad::registry::{
    cor21_lhs, eq57_lhs, hadjicostas_rhs, hadjicostas_rhs_split, identity_registry, Lhs, DOUBLE_TWINS,
};
use lerchkit::special::products::product_spec;
use rug::Float;

const PREC: u32 = 128;

#[test]
fn reduced_and_double_routes_agree() {
    let reg = identity_registry();
    let ctx = Ctx::new(PREC).with_tol(Tol::new(1e-11));
    let ctx2 = Ctx::new(PREC).with_tol(Tol::new(1e-10));
    assert_eq!(DOUBLE_TWINS.len(), 20);
    for id in DOUBLE_TWINS {
        let case = reg.iter().find(|c| c.id == id).unwrap();
        assert!(!matches!(case.lhs, Lhs::Double(_) | Lhs::Custom { .. }));
        let one = case.lhs.eval(&ctx).unwrap();
        let two = eval_double(&*case.lhs.double().unwrap(), &ctx2).unwrap();
        let d = one.dist(&two.value);
        assert!(d < 1e-8, "{id}: {d:.3e}");
    }
}

#[test]
fn hadjicostas_forms_agree() {
    let ctx = Ctx::new(PREC);
    for (z, u, s) in [(-1.0, 1.0, 0.5), (0.5, 1.5, 1.0), (1.0, 1.0, -0.5)] {
        let z = Cx::real(PREC, z);
        let a = hadjicostas_rhs(&z, s, u, &ctx).unwrap();
        let b = hadjicostas_rhs_split(&z, s, u, &ctx).unwrap();
        assert!(a.dist(&b.value) <= a.err_f64() + b.err_f64(), "z={z} u={u} s={s}");
    }
}

#[test]
fn semi_infinite_lerch_integral() {
    let ctx = Ctx::new(PREC).with_tol(Tol::new(1e-11));
    for (s, u, expect) in [(2.0, 1.0, 2.0 * 1.2020569031595942), (0.5, 1.5, f64::NAN)] {
        let v = cor21_lhs(s, u)(&ctx).unwrap();
        let pt = lerchkit::LerchPoint::new(Cx::real(PREC, 1), Cx::real(PREC, s + 1.0), u).unwrap();
        let rhs = lerchkit::lerch::phi_auto(&pt, &ctx).unwrap().times(&Cx::real(PREC, s));
        assert!(v.dist(&rhs.value) < 1e-8, "s={s} u={u}");
        if expect.is_finite() {
            assert!((v.re().to_f64() - expect).abs() < 1e-12);
        }
    }
}

#[test]
fn log_difference_integrals() {
    let ctx = Ctx::new(PREC).with_tol(Tol::new(1e-16));
    for n in [1u32, 2, 5] {
        for u in [1.0, 0.5, std::f64::consts::PI] {
            let q = eq57_lhs(n, u)(&ctx).unwrap();
            let a = Float::with_val(PREC, u);
            let b = Float::with_val(PREC, 1);
            let s = lerchkit::numeric::binomial::fdiff_log_sum(n, &a, &b, &ctx).unwrap();
            assert!(q.dist(&s.value) < 1e-12, "n={n} u={u}");
        }
    }
    // n = 1, u = 1: ln 2
    let q = eq57_lhs(1, 1.0)(&ctx).unwrap();
    assert!((q.re().to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
}

#[test]
fn registry_meets_size_and_tolerance_rules() {
    let reg = identity_registry();
    assert!(reg.len() >= 55);
    for c in &reg {
        assert!(c.tol > 0.0);
        let expected = if c.id.ends_with("/2d") || c.id == "ex3.21" || c.id.starts_with("cor2.1") {
            1e-8
        } else if c.id.starts_with("eq57") {
            1e-12
        } else {
            1e-10
        };
        assert_eq!(c.tol, expected, "{}", c.id);
    }
    // the product registry is separate from the identity registry
    assert!(product_spec("ex3.1").is_err());
}
