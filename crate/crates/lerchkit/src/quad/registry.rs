//! Integral identities with closed-form right-hand sides, each checked by
//! quadrature of the left-hand side.

use std::sync::Arc;

use rug::Float;

use crate::error::Result;
use crate::lerch::{phi_auto, LerchPoint};
use crate::numeric::binomial::fdiff_log_sum;
use crate::numeric::cx::{pow2, Cx};
use crate::numeric::{rounding_err, Approx, Ctx, Method, Tol};
use crate::quad::de::{tanh_sinh, Endpoint, Integrand1D, Interval};
use crate::quad::expr::{Rhs, Val};
use crate::quad::reduce::{eval_double, thm31_form, Fn2D, ReducedForm, TPoint, XFactor, XForm};
use crate::special::oracle::oracle;

pub type EvalFn = Arc<dyn Fn(&Ctx) -> Result<Approx> + Send + Sync>;

/// How the left-hand side is computed.
#[derive(Clone)]
pub enum Lhs {
    /// `∫∫ F(x) G(xy)` through the kernel in `t = -ln xy`.
    Reduced(ReducedForm),
    /// `∫∫ g(x)/(1 - xy)` after the `y` integration.
    XForm(XForm),
    /// Tensor quadrature over the unit square.
    Double(Arc<Fn2D>),
    /// Any other one-dimensional integral or series.
    Custom { route: &'static str, eval: EvalFn },
}

impl Lhs {
    pub fn route(&self) -> &'static str {
        match self {
            Lhs::Reduced(_) => "reduced-t",
            Lhs::XForm(_) => "x-form",
            Lhs::Double(_) => "double",
            Lhs::Custom { route, .. } => route,
        }
    }

    pub fn eval(&self, ctx: &Ctx) -> Result<Approx> {
        match self {
            Lhs::Reduced(f) => f.eval(ctx),
            Lhs::XForm(f) => f.eval(ctx),
            Lhs::Double(f) => eval_double(&**f, ctx),
            Lhs::Custom { eval, .. } => eval(ctx),
        }
    }

    /// The same integral as a function on the unit square, when it is one.
    pub fn double(&self) -> Option<Arc<Fn2D>> {
        match self {
            Lhs::Reduced(f) => Some(f.double()),
            Lhs::XForm(f) => Some(f.double()),
            Lhs::Double(f) => Some(f.clone()),
            Lhs::Custom { .. } => None,
        }
    }
}

#[derive(Clone)]
pub struct IdentityCase {
    pub id: String,
    /// The left-hand side as printed, for reports.
    pub integrand: String,
    pub lhs: Lhs,
    pub rhs: EvalFn,
    pub tol: f64,
    pub tags: Vec<&'static str>,
}

impl IdentityCase {
    pub fn route(&self) -> &'static str {
        self.lhs.route()
    }

    /// The id up to the parameter list or route suffix.
    pub fn base_id(&self) -> &str {
        self.id.split(['@', '/']).next().unwrap_or(&self.id)
    }
}

const DEFAULT_TOL: f64 = 1e-10;
const DOUBLE_TOL: f64 = 1e-8;


type Coef = Arc<dyn Fn(u32) -> Cx + Send + Sync>;

fn k(x: f64) -> Coef {
    Arc::new(move |p| Cx::real(p, x))
}

fn kc(re: f64, im: f64) -> Coef {
    Arc::new(move |p| Cx::from_f64(p, re, im))
}

/// `scale · φ^n` for the golden ratio `φ`.
fn kphi(n: i32, scale: f64) -> Coef {
    Arc::new(move |p| {
        let phi = oracle("golden_ratio", p + 8).expect("golden ratio oracle");
        let v = Float::with_val(p + 8, phi.pow_ref_i(n)) * scale;
        Cx::from_real(Float::with_val(p, v))
    })
}

trait PowI {
    fn pow_ref_i(&self, n: i32) -> Float;
}

impl PowI for Float {
    fn pow_ref_i(&self, n: i32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(n))
    }
}

/// `coef · X^b (-ln X)^s / (1 - z X^k)^m`.
fn lerch_g(coef: Coef, z: Coef, s: f64, b: f64, k: u32, m: u32) -> impl Fn(&TPoint) -> Result<Cx> + Send + Sync {
    move |pt| {
        let p = pt.prec();
        let mut num = pt.tpow(s);
        if b != 0.0 {
            num *= pt.xpow(b);
        }
        let mut v = coef(p).scale(&num);
        if m > 0 {
            let d = pt.one_minus_zxpow(&z(p), k);
            let mut dm = d.clone();
            for _ in 1..m {
                dm = &dm * &d;
            }
            v = &v / &dm;
        }
        Ok(v)
    }
}

/// Rational function `Σ n_i X^i / Σ d_i X^i`.
fn rational_g(num: Vec<f64>, den: Vec<f64>) -> impl Fn(&TPoint) -> Result<Cx> + Send + Sync {
    let horner = |c: &[f64], x: &Float| {
        let mut acc = Float::new(x.prec());
        for &ci in c.iter().rev() {
            acc *= x;
            acc += ci;
        }
        acc
    };
    move |pt| Ok(Cx::from_real(horner(&num, &pt.x) / horner(&den, &pt.x)))
}

fn rhs_fn(f: impl Fn(&Rhs) -> Result<Val> + Send + Sync + 'static) -> EvalFn {
    Arc::new(move |ctx: &Ctx| {
        let r = Rhs::new(ctx)?;
        Ok(f(&r)?.approx(ctx.prec))
    })
}

/// Reduced form whose `G` behaves like `t^s / t^pole` at `t = 0`.
fn red(xf: XFactor, s: f64, pole: u32, g: impl Fn(&TPoint) -> Result<Cx> + Send + Sync + 'static) -> Lhs {
    let left = s + xf.kernel_order() as f64 - pole as f64;
    Lhs::Reduced(ReducedForm::new(xf, Endpoint::Algebraic(left), g))
}

/// `x^(u-1) y^(v-1) = (xy)^(min-1) x^|u-v|` after swapping `x` and `y` if
/// needed.
fn two_param(u: f64, v: f64) -> (XFactor, f64) {
    (XFactor::monomial((u - v).abs()), u.min(v) - 1.0)
}

fn section(id: &str) -> &'static str {
    if id.starts_with("cor2") {
        "sec2"
    } else if id.starts_with("thm4") || id.starts_with("cor4") || id.starts_with("ex4") {
        "sec4"
    } else if id.starts_with("eq57") {
        "sec5"
    } else {
        "sec3"
    }
}

struct Reg(Vec<IdentityCase>);

impl Reg {
    fn push(&mut self, id: impl Into<String>, integrand: impl Into<String>, lhs: Lhs, rhs: impl Fn(&Rhs) -> Result<Val> + Send + Sync + 'static) {
        self.push_tol(id, integrand, DEFAULT_TOL, lhs, rhs);
    }

    fn push_tol(
        &mut self,
        id: impl Into<String>,
        integrand: impl Into<String>,
        tol: f64,
        lhs: Lhs,
        rhs: impl Fn(&Rhs) -> Result<Val> + Send + Sync + 'static,
    ) {
        let id = id.into();
        let integrand = integrand.into();
        let mut tags = vec![section(&id)];
        if integrand.contains('i') && (integrand.contains("+0.") || integrand.contains("i)") || integrand.contains("xyi")) {
            tags.push("complex");
        }
        self.0.push(IdentityCase {
            id,
            integrand,
            lhs,
            rhs: rhs_fn(rhs),
            tol,
            tags,
        });
    }
}

fn fmt_z(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else {
        format!("{re}{im:+}i")
    }
}

fn complex_val(re: Val, im: Val) -> Val {
    let p = re.v.prec();
    Val {
        v: Cx::from_parts(re.v.re.clone(), Float::with_val(p, &im.v.re)),
        e: re.e + im.e,
    }
}

/// `Li_n(y)` that also accepts real `y > 1`, read as `y - i0`.
fn li_any(r: &Rhs, n: i32, y: &Cx) -> Result<Val> {
    if y.im.is_zero() && y.re > 1 {
        r.li_above_one(n, y.re.to_f64())
    } else {
        r.li(n, y)
    }
}

fn thm31_cases(reg: &mut Reg) {
    let eq29 = [
        (0.5, 0.0, 0.5, 2.0, 1.0),
        (-1.0, 0.0, -0.5, 1.0, 0.5),
        (1.0, 0.0, 1.0, 1.5, 0.5),
        (0.3, 0.4, 2.0, 1.0, 3.0),
        (-1.0, 0.0, -1.5, 2.0, 1.0),
    ];
    for (zr, zi, s, u, v) in eq29 {
        let z = Cx::from_f64(64, zr, zi);
        let form = thm31_form(&z, s, u, Some(v), 64).expect("registry point in domain");
        let id = format!("thm3.1-eq29@z={},s={s},u={u},v={v}", fmt_z(zr, zi));
        let txt = format!("x^{} y^{} (-ln xy)^{s} / (1 - ({}) xy)", u - 1.0, v - 1.0, fmt_z(zr, zi));
        reg.push(id, txt, Lhs::Reduced(form), move |r| {
            let z = r.zc(zr, zi);
            let diff = r.phi(&z, s + 1.0, v)? - r.phi(&z, s + 1.0, u)?;
            Ok(r.gamma(s + 1.0)? * diff * (1.0 / (u - v)))
        });
    }
    let eq30 = [(1.0, 0.0, 0.0, 1.0), (-1.0, 0.0, -1.0, 1.0), (0.5, 0.0, -1.5, 2.0), (-0.5, 0.5, 0.5, 0.75)];
    for (zr, zi, s, u) in eq30 {
        let z = Cx::from_f64(64, zr, zi);
        let form = thm31_form(&z, s, u, None, 64).expect("registry point in domain");
        let id = format!("thm3.1-eq30@z={},s={s},u={u}", fmt_z(zr, zi));
        let txt = format!("(xy)^{} (-ln xy)^{s} / (1 - ({}) xy)", u - 1.0, fmt_z(zr, zi));
        reg.push(id, txt, Lhs::Reduced(form), move |r| Ok(r.gamma(s + 2.0)? * r.phi(&r.zc(zr, zi), s + 2.0, u)?));
    }
}

fn cor31_cases(reg: &mut Reg) {
    for (z, n) in [(0.5, 1i32), (-1.0, 2), (1.0, 0)] {
        let pole = u32::from(z == 1.0);
        let lhs = red(XFactor::one(), n as f64, pole, lerch_g(k(1.0), k(z), n as f64, 0.0, 1, 1));
        let txt = format!("(-ln xy)^{n} / (1 - ({z}) xy)");
        reg.push(format!("cor3.1@z={z},n={n}"), txt, lhs, move |r| {
            let fact: f64 = (1..=n + 1).map(f64::from).product();
            Ok(r.li(n + 2, &r.z(z))? * (fact / z))
        });
    }
    for z in [0.5, -2.0] {
        let lhs = red(XFactor::one(), -1.0, 0, lerch_g(k(1.0), k(z), -1.0, 0.0, 1, 1));
        let txt = format!("-1 / ((1 - ({z}) xy) ln xy)");
        reg.push(format!("cor3.1@z={z},n=-1"), txt, lhs, move |r| Ok(-(r.num(1.0 - z).ln()) * (1.0 / z)));
    }
}

fn examples_3_1_to_3_9(reg: &mut Reg) {
    reg.push(
        "ex3.1",
        "1 / (1 + xyi)",
        red(XFactor::one(), 0.0, 0, lerch_g(k(1.0), kc(0.0, -1.0), 0.0, 0.0, 1, 1)),
        |r| {
            let im = r.pi().square() * (-1.0 / 48.0);
            Ok(complex_val(r.c("catalan")?, im))
        },
    );
    reg.push(
        "ex3.2",
        "-x ln xy / (1 + x^2 y^2)",
        red(XFactor::monomial(1.0), 1.0, 0, lerch_g(k(1.0), k(-1.0), 1.0, 0.0, 2, 1)),
        |r| Ok(r.c("catalan")? - r.pi().square() * (1.0 / 48.0)),
    );
    reg.push(
        "ex3.3",
        "-x ln xy / (1 - x^2 y^2)",
        red(XFactor::monomial(1.0), 1.0, 1, lerch_g(k(1.0), k(1.0), 1.0, 0.0, 2, 1)),
        |r| Ok(r.pi().square() * (1.0 / 12.0)),
    );
    reg.push(
        "ex3.4a",
        "-1 / ((2 - xy) ln xy)",
        red(XFactor::one(), -1.0, 0, lerch_g(k(0.5), k(0.5), -1.0, 0.0, 1, 1)),
        |r| r.c("ln2"),
    );
    reg.push(
        "ex3.4b",
        "1 / (2 - xy)",
        red(XFactor::one(), 0.0, 0, lerch_g(k(0.5), k(0.5), 0.0, 0.0, 1, 1)),
        |r| Ok(r.pi().square() * (1.0 / 12.0) - r.c("ln2")?.square() * 0.5),
    );
    reg.push(
        "ex3.4c",
        "-ln xy / (2 - xy)",
        red(XFactor::one(), 1.0, 0, lerch_g(k(0.5), k(0.5), 1.0, 0.0, 1, 1)),
        |r| {
            let l = r.c("ln2")?;
            Ok(r.c("apery")? * (7.0 / 4.0) - r.pi().square() * l.clone() * (1.0 / 6.0) + l.clone() * l.square() * (1.0 / 3.0))
        },
    );

    // golden ratio family: (coef, z, s, rhs)
    type GoldenRhs = fn(&Rhs, Val, Val) -> Val;
    let golden: [(&str, &str, Coef, Coef, f64, GoldenRhs); 9] = [
        ("ex3.5a", "-1 / ((phi - xy) ln xy)", kphi(-1, 1.0), kphi(-1, 1.0), -1.0, |_, _, l| l * 2.0),
        ("ex3.5b", "1 / (phi - xy)", kphi(-1, 1.0), kphi(-1, 1.0), 0.0, |r, _, l| r.pi().square() * 0.1 - l.square()),
        ("ex3.5c", "-1 / ((phi^2 - xy) ln xy)", kphi(-2, 1.0), kphi(-2, 1.0), -1.0, |_, _, l| l),
        ("ex3.5d", "1 / (phi^2 - xy)", kphi(-2, 1.0), kphi(-2, 1.0), 0.0, |r, _, l| r.pi().square() * (1.0 / 15.0) - l.square()),
        ("ex3.5e", "-1 / ((1 + phi xy) ln xy)", k(1.0), kphi(1, -1.0), -1.0, |_, f, l| l * 2.0 / f),
        ("ex3.5f", "1 / (1 + phi xy)", k(1.0), kphi(1, -1.0), 0.0, |r, f, l| (r.pi().square() * 0.1 + l.square()) / f),
        ("ex3.5g", "-1 / ((phi + xy) ln xy)", kphi(-1, 1.0), kphi(-1, -1.0), -1.0, |_, _, l| l),
        ("ex3.5h", "1 / (phi + xy)", kphi(-1, 1.0), kphi(-1, -1.0), 0.0, |r, _, l| r.pi().square() * (1.0 / 15.0) - l.square() * 0.5),
        ("ex3.5i", "-ln xy / (phi^2 - xy)", kphi(-2, 1.0), kphi(-2, 1.0), 1.0, |r, _, l| {
            let z3 = r.c("apery").expect("apery oracle");
            z3 * 1.6 - r.pi().square() * l.clone() * (4.0 / 15.0) + l.clone() * l.square() * (4.0 / 3.0)
        }),
    ];
    for (id, txt, coef, z, s, f) in golden {
        let lhs = red(XFactor::one(), s, 0, lerch_g(coef, z, s, 0.0, 1, 1));
        reg.push(id, txt, lhs, move |r| {
            let phi = r.c("golden_ratio")?;
            Ok(f(r, phi.clone(), phi.ln()))
        });
    }

    reg.push(
        "ex3.6a",
        "(1 - 2xy) / ((8 + xy)(9 - xy))",
        red(XFactor::one(), 0.0, 0, rational_g(vec![1.0, -2.0], vec![72.0, 1.0, -1.0])),
        |r| Ok((r.q(9, 1) / r.q(8, 1)).ln().square() * 0.5),
    );
    reg.push(
        "ex3.6b",
        "(52 - 7xy) / ((2 + xy)(9 - xy))",
        red(XFactor::one(), 0.0, 0, rational_g(vec![52.0, -7.0], vec![18.0, 7.0, -1.0])),
        |r| {
            let l2 = r.c("ln2")?;
            let l3 = r.num(3.0).ln();
            Ok(r.pi().square() * (1.0 / 3.0) + l2.square() * 3.0 + l3.square() * 2.0 - l2 * l3 * 6.0)
        },
    );
    reg.push(
        "ex3.6c",
        "(9 + xy) / (9 - x^2 y^2)",
        red(XFactor::one(), 0.0, 0, rational_g(vec![9.0, 1.0], vec![9.0, 0.0, -1.0])),
        |r| Ok(r.pi().square() * (1.0 / 6.0) - r.num(3.0).ln().square() * 0.5),
    );
    reg.push(
        "ex3.7",
        "(4 + 2xy + x^2 y^2)(4 - 8xy + x^2 y^2) / (64 - x^6 y^6)",
        red(
            XFactor::one(),
            0.0,
            0,
            rational_g(vec![16.0, -24.0, -8.0, -6.0, 1.0], vec![64.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]),
        ),
        |r| Ok(r.pi().square() * (1.0 / 72.0)),
    );
    reg.push(
        "ex3.8a",
        "1 / (1 - xy)",
        red(XFactor::one(), 0.0, 1, lerch_g(k(1.0), k(1.0), 0.0, 0.0, 1, 1)),
        |r| Ok(r.pi().square() * (1.0 / 6.0)),
    );
    reg.push(
        "ex3.8b",
        "-ln xy / (1 - xy)",
        red(XFactor::one(), 1.0, 1, lerch_g(k(1.0), k(1.0), 1.0, 0.0, 1, 1)),
        |r| Ok(r.c("apery")? * 2.0),
    );
    reg.push(
        "ex3.9a",
        "-1 / ((1 + x^2 y^2) ln xy)",
        red(XFactor::one(), -1.0, 0, lerch_g(k(1.0), k(-1.0), -1.0, 0.0, 2, 1)),
        |r| Ok(r.pi() * 0.25),
    );
    reg.push(
        "ex3.9b",
        "1 / (1 + x^2 y^2)",
        red(XFactor::one(), 0.0, 0, lerch_g(k(1.0), k(-1.0), 0.0, 0.0, 2, 1)),
        |r| r.c("catalan"),
    );
    reg.push(
        "ex3.9c",
        "-ln xy / (1 + x^2 y^2)",
        red(XFactor::one(), 1.0, 0, lerch_g(k(1.0), k(-1.0), 1.0, 0.0, 2, 1)),
        |r| {
            let pi = r.pi();
            Ok(pi.clone() * pi.square() * (1.0 / 16.0))
        },
    );
}

fn cor32_33_cases(reg: &mut Reg) {
    for s in [0.5, -0.5] {
        let lhs = red(XFactor::one(), s, 1, lerch_g(k(1.0), k(1.0), s, 0.0, 1, 1));
        reg.push(format!("cor3.2-eq31@s={s}"), format!("(-ln xy)^{s} / (1 - xy)"), lhs, move |r| {
            Ok(r.gamma(s + 2.0)? * r.zeta(s + 2.0)?)
        });
    }
    for s in [-1.5, 1.5] {
        let lhs = red(XFactor::one(), s, 0, lerch_g(k(1.0), k(-1.0), s, 0.0, 1, 1));
        reg.push(format!("cor3.2-eq32@s={s}"), format!("(-ln xy)^{s} / (1 + xy)"), lhs, move |r| {
            Ok(r.gamma(s + 2.0)? * r.zeta_star(s + 2.0)?)
        });
    }
    for s in [-1.5, 0.5] {
        let lhs = red(XFactor::one(), s, 0, lerch_g(k(1.0), k(-1.0), s, 0.0, 2, 1));
        reg.push(format!("cor3.2-eq33@s={s}"), format!("(-ln xy)^{s} / (1 + x^2 y^2)"), lhs, move |r| {
            Ok(r.gamma(s + 2.0)? * r.beta(s + 2.0)?)
        });
    }
    for (zr, zi, s) in [(0.5, 0.0, 0.5), (0.0, 0.5, 0.0), (-0.7, 0.0, -1.5)] {
        let z2 = Cx::from_f64(64, zr, zi).square();
        let (z2r, z2i) = z2.to_f64_pair();
        let lhs = red(XFactor::one(), s, 0, lerch_g(k(1.0), kc(z2r, z2i), s, 0.0, 2, 1));
        let txt = format!("(-ln xy)^{s} / (1 - x^2 y^2 ({})^2)", fmt_z(zr, zi));
        reg.push(format!("cor3.3@z={},s={s}", fmt_z(zr, zi)), txt, lhs, move |r| {
            let z = r.zc(zr, zi);
            Ok(r.gamma(s + 2.0)? * r.chi(s + 2.0, &z)? / Val::exact(z))
        });
    }
    reg.push(
        "ex3.11a",
        "1 / (1 - x^2 y^2 tan^2(pi/8))",
        red(
            XFactor::one(),
            0.0,
            0,
            lerch_g(
                k(1.0),
                Arc::new(|p| {
                    let t = Float::with_val(p + 8, 2).sqrt() - 1u32;
                    Cx::from_real(Float::with_val(p, t.square()))
                }),
                0.0,
                0.0,
                2,
                1,
            ),
        ),
        |r| {
            let tau = r.num(2.0).sqrt() - 1.0;
            Ok((r.pi().square() * (1.0 / 16.0) - tau.ln().square() * 0.25) / tau)
        },
    );
    reg.push(
        "ex3.11b",
        "1 / (phi^6 - x^2 y^2)",
        red(XFactor::one(), 0.0, 0, lerch_g(kphi(-6, 1.0), kphi(-6, 1.0), 0.0, 0.0, 2, 1)),
        |r| {
            let phi = r.c("golden_ratio")?;
            let phi3 = phi.clone() * phi.square();
            Ok((r.pi().square() * (1.0 / 24.0) - phi.ln().square() * 0.75) / phi3)
        },
    );
}

fn cor34_to_36_cases(reg: &mut Reg) {
    for (z, u, v) in [(-1.0, 2.0, 0.5), (0.25, 1.0, 3.0)] {
        let (xf, b) = two_param(u, v);
        let lhs = red(xf, -1.0, 0, lerch_g(k(1.0), k(z), -1.0, b, 1, 1));
        let txt = format!("-x^{} y^{} / ((1 - ({z}) xy) ln xy)", u - 1.0, v - 1.0);
        reg.push(format!("cor3.4-eq35@z={z},u={u},v={v}"), txt, lhs, move |r| {
            let z = r.z(z);
            Ok((r.dphi(&z, 0, v)? - r.dphi(&z, 0, u)?) * (1.0 / (u - v)))
        });
    }
    for (zr, zi, u) in [(0.5, 0.5, 0.5), (-3.0, 0.0, 2.0)] {
        let lhs = red(XFactor::one(), -1.0, 0, lerch_g(k(1.0), kc(zr, zi), -1.0, u - 1.0, 1, 1));
        let txt = format!("-(xy)^{} / ((1 - ({}) xy) ln xy)", u - 1.0, fmt_z(zr, zi));
        reg.push(format!("cor3.4-eq36@z={},u={u}", fmt_z(zr, zi)), txt, lhs, move |r| r.phi(&r.zc(zr, zi), 1.0, u));
    }
    let (xf, b) = two_param(3.0, 0.5);
    reg.push(
        "ex3.12a@u=3,v=0.5",
        "x^2 y^-0.5 / (-ln xy)",
        red(xf, -1.0, 0, lerch_g(k(1.0), k(0.0), -1.0, b, 1, 0)),
        |r| Ok(r.num(6.0).ln() * (1.0 / 2.5)),
    );
    reg.push(
        "ex3.12b@u=2.5",
        "(xy)^1.5 / (-ln xy)",
        red(XFactor::one(), -1.0, 0, lerch_g(k(1.0), k(0.0), -1.0, 1.5, 1, 0)),
        |r| Ok(r.q(2, 5)),
    );
    reg.push(
        "ex3.13",
        "-x / ((2 - xy) ln xy)",
        red(XFactor::monomial(1.0), -1.0, 0, lerch_g(k(0.5), k(0.5), -1.0, 0.0, 1, 1)),
        |r| Ok(r.c("somos_sigma")?.ln()),
    );
    reg.push(
        "ex3.14a",
        "(1 + x) / ((1 + xy)(-ln xy))",
        red(XFactor::new(vec![(1.0, 0.0), (1.0, 1.0)]), -1.0, 0, lerch_g(k(1.0), k(-1.0), -1.0, 0.0, 1, 1)),
        |r| Ok(r.pi().ln()),
    );
    reg.push(
        "ex3.14b",
        "(1 - x) / ((1 + xy)(-ln xy))",
        red(XFactor::new(vec![(1.0, 0.0), (-1.0, 1.0)]), -1.0, 0, lerch_g(k(1.0), k(-1.0), -1.0, 0.0, 1, 1)),
        |r| Ok((r.num(4.0) / r.pi()).ln()),
    );
    reg.push(
        "ex3.15",
        "-x / ((1 + x^2 y^2) ln xy)",
        red(XFactor::monomial(1.0), -1.0, 0, lerch_g(k(1.0), k(-1.0), -1.0, 0.0, 2, 1)),
        |r| Ok((r.pi() * 2.0).ln() * 0.5 - r.lngamma(0.75)? * 2.0),
    );
    for (u, v) in [(3.0, 1.0), (0.5, 2.5)] {
        let (xf, b) = two_param(u, v);
        let lhs = red(xf, -1.0, 0, lerch_g(k(1.0), k(-1.0), -1.0, b, 1, 1));
        let txt = format!("-x^{} y^{} / ((1 + xy) ln xy)", u - 1.0, v - 1.0);
        reg.push(format!("cor3.5-eq38@u={u},v={v}"), txt, lhs, move |r| {
            let num = r.lngamma(v / 2.0)? + r.lngamma((u + 1.0) / 2.0)?;
            let den = r.lngamma(u / 2.0)? + r.lngamma((v + 1.0) / 2.0)?;
            Ok((num - den) * (1.0 / (u - v)))
        });
    }
    for u in [0.5, 3.0] {
        let lhs = red(XFactor::one(), -1.0, 0, lerch_g(k(1.0), k(-1.0), -1.0, u - 1.0, 1, 1));
        let txt = format!("-(xy)^{} / ((1 + xy) ln xy)", u - 1.0);
        reg.push(format!("cor3.5-eq39@u={u}"), txt, lhs, move |r| {
            Ok((r.psi((u + 1.0) / 2.0)? - r.psi(u / 2.0)?) * 0.5)
        });
    }
    for (u, v) in [(2.0, 0.5), (1.5, 1.0)] {
        let (xf, b) = two_param(u, v);
        let lhs = red(xf, 0.0, 1, lerch_g(k(1.0), k(1.0), 0.0, b, 1, 1));
        let txt = format!("x^{} y^{} / (1 - xy)", u - 1.0, v - 1.0);
        reg.push(format!("cor3.6-eq40@u={u},v={v}"), txt, lhs, move |r| {
            Ok((r.psi(u)? - r.psi(v)?) * (1.0 / (u - v)))
        });
    }
    for u in [0.5, 2.0] {
        let lhs = red(XFactor::one(), 0.0, 1, lerch_g(k(1.0), k(1.0), 0.0, u - 1.0, 1, 1));
        reg.push(format!("cor3.6-eq41@u={u}"), format!("(xy)^{} / (1 - xy)", u - 1.0), lhs, move |r| r.trigamma(u));
    }
    reg.push(
        "ex3.16",
        "y / (1 - x^3 y^3)",
        red(XFactor::monomial(1.0), 0.0, 1, lerch_g(k(1.0), k(1.0), 0.0, 0.0, 3, 1)),
        |r| Ok(r.pi() / (r.num(3.0).sqrt() * 3.0)),
    );
    reg.push(
        "ex3.17",
        "1 / (1 - x^2 y^2)",
        red(XFactor::one(), 0.0, 1, lerch_g(k(1.0), k(1.0), 0.0, 0.0, 2, 1)),
        |r| Ok(r.pi().square() * 0.125),
    );
}

fn cor37_to_39_cases(reg: &mut Reg) {
    for (s, u, v) in [(1.0, 2.0, 1.0), (-1.5, 3.0, 0.5)] {
        let (xf, b) = two_param(u, v);
        let lhs = red(xf, s, 0, lerch_g(k(1.0), k(0.0), s, b, 1, 0));
        let txt = format!("x^{} y^{} (-ln xy)^{s}", u - 1.0, v - 1.0);
        reg.push(format!("cor3.7-eq43@s={s},u={u},v={v}"), txt, lhs, move |r| {
            let d = r.num(v).powf(-s - 1.0) - r.num(u).powf(-s - 1.0);
            Ok(r.gamma(s + 1.0)? * d * (1.0 / (u - v)))
        });
    }
    for (s, u) in [(-1.5, 1.0), (2.5, 0.5)] {
        let lhs = red(XFactor::one(), s, 0, lerch_g(k(1.0), k(0.0), s, u - 1.0, 1, 0));
        let txt = format!("(xy)^{} (-ln xy)^{s}", u - 1.0);
        reg.push(format!("cor3.7-eq44@s={s},u={u}"), txt, lhs, move |r| {
            Ok(r.gamma(s + 2.0)? * r.num(u).powf(-s - 2.0))
        });
    }
    reg.push(
        "ex3.18",
        "x / (-ln xy)^(3/2)",
        red(XFactor::monomial(1.0), -1.5, 0, lerch_g(k(1.0), k(0.0), -1.5, 0.0, 1, 0)),
        |r| Ok((r.num(2.0).sqrt() - 1.0) * r.pi().sqrt() * 2.0),
    );
    reg.push(
        "ex3.19a",
        "1 / (-ln xy)^(3/2)",
        red(XFactor::one(), -1.5, 0, lerch_g(k(1.0), k(0.0), -1.5, 0.0, 1, 0)),
        |r| Ok(r.pi().sqrt()),
    );
    reg.push(
        "ex3.19b",
        "1 / (-ln xy)^(5/4)",
        red(XFactor::one(), -1.25, 0, lerch_g(k(1.0), k(0.0), -1.25, 0.0, 1, 0)),
        |r| r.gamma(0.75),
    );
    for (z, s, u, v) in [(0.5, 1.0, 2.0, 1.0), (-1.0, 0.5, 0.5, 1.5)] {
        let (xf, b) = two_param(u, v);
        let lhs = red(xf, s, 0, lerch_g(k(1.0), k(z), s, b, 1, 2));
        let txt = format!("x^{} y^{} (-ln xy)^{s} / (1 - ({z}) xy)^2", u - 1.0, v - 1.0);
        reg.push(format!("cor3.8-eq45@z={z},s={s},u={u},v={v}"), txt, lhs, move |r| {
            let z = r.z(z);
            let bracket = r.phi(&z, s + 1.0, v)? * (1.0 - v) + r.phi(&z, s, v)? + r.phi(&z, s + 1.0, u)? * (u - 1.0)
                - r.phi(&z, s, u)?;
            Ok(r.gamma(s + 1.0)? * bracket * (1.0 / (u - v)))
        });
    }
    for (zr, zi, s, u) in [(-1.0, 0.0, -1.5, 1.0), (0.0, 0.5, 1.0, 2.0)] {
        let lhs = red(XFactor::one(), s, 0, lerch_g(k(1.0), kc(zr, zi), s, u - 1.0, 1, 2));
        let txt = format!("(xy)^{} (-ln xy)^{s} / (1 - ({}) xy)^2", u - 1.0, fmt_z(zr, zi));
        reg.push(format!("cor3.8-eq46@z={},s={s},u={u}", fmt_z(zr, zi)), txt, lhs, move |r| {
            let z = r.zc(zr, zi);
            let bracket = r.phi(&z, s + 2.0, u)? * (1.0 - u) + r.phi(&z, s + 1.0, u)?;
            Ok(r.gamma(s + 2.0)? * bracket)
        });
    }
    reg.push(
        "ex3.20",
        "x ln^2 xy / (1 + x^2 y^2)^2",
        red(XFactor::monomial(1.0), 2.0, 0, lerch_g(k(1.0), k(-1.0), 2.0, 0.0, 2, 2)),
        |r| {
            let pi = r.pi();
            Ok(r.c("catalan")? - pi.square() * (1.0 / 48.0) + pi.clone() * pi.square() * (1.0 / 32.0))
        },
    );
    reg.push_tol(
        "ex3.21",
        "ln^4 xy / (1 + xy)^2",
        1e-8,
        red(XFactor::one(), 4.0, 0, lerch_g(k(1.0), k(-1.0), 4.0, 0.0, 1, 2)),
        |r| Ok(r.zeta(5.0)? * 112.5),
    );
    reg.push(
        "ex3.22",
        "-1 / ((1 + x^2 y^2)^2 ln xy)",
        red(XFactor::one(), -1.0, 0, lerch_g(k(1.0), k(-1.0), -1.0, 0.0, 2, 2)),
        |r| Ok((r.pi() + 2.0) * 0.125),
    );
    for (z, u, v) in [(0.25, 3.0, 0.5), (-0.5, 1.0, 2.0), (-1.0, 1.5, 1.0)] {
        let (xf, b) = two_param(u, v);
        let lhs = red(xf, -1.0, 0, lerch_g(k(1.0), k(z), -1.0, b, 1, 2));
        let txt = format!("-x^{} y^{} / ((1 - ({z}) xy)^2 ln xy)", u - 1.0, v - 1.0);
        reg.push(format!("cor3.9@z={z},u={u},v={v}"), txt, lhs, move |r| {
            let z = r.z(z);
            let side = |w: f64| -> Result<Val> { Ok(r.dphi(&z, 0, w)? * (1.0 - w) + r.dphi(&z, 1, w)?) };
            Ok((side(v)? - side(u)?) * (1.0 / (u - v)))
        });
    }
    reg.push(
        "ex3.23",
        "-x / ((1 + xy)^2 ln xy)",
        red(XFactor::monomial(1.0), -1.0, 0, lerch_g(k(1.0), k(-1.0), -1.0, 0.0, 1, 2)),
        |r| {
            let a = r.c("glaisher")?.ln() * 6.0;
            Ok(a - r.c("ln2")? * (1.0 / 6.0) - r.pi().ln() * 0.5 - 0.5)
        },
    );
    reg.push(
        "ex3.24",
        "-x^2 / ((1 + x^2 y^2)^2 ln xy)",
        red(XFactor::monomial(2.0), -1.0, 0, lerch_g(k(1.0), k(-1.0), -1.0, 0.0, 2, 2)),
        |r| Ok(r.c("catalan")? / r.pi()),
    );
}

/// `Σ_{n<=N} (H_{n,2}/n + 2 H_n/n²) z^n` with the geometric tail bound.
fn lemma31_series(z: &Cx, ctx: &Ctx) -> Result<Approx> {
    let work = ctx.guarded(24)?;
    let zabs = z.abs_f64();
    let n_max = ((work as f64 + 16.0) / -zabs.log2()).ceil() as u32 + 8;
    let z = z.with_prec(work);
    let mut h1 = Float::new(work);
    let mut h2 = Float::new(work);
    let mut zn = Cx::real(work, 1);
    let mut sum = Cx::zero(work);
    for n in 1..=n_max {
        let nf = Float::with_val(work, n);
        h1 += Float::with_val(work, nf.recip_ref());
        h2 += Float::with_val(work, nf.square_ref()).recip();
        zn = &zn * &z;
        let c = Float::with_val(work, &h2 / &nf) + Float::with_val(work, &h1 * 2u32) / nf.square();
        sum += &zn.scale(&c);
    }
    let value = sum.with_prec(ctx.prec);
    let tail = (2.0 + 2.0 * ((n_max as f64).ln() + 1.0)) * zabs.powi(n_max as i32 + 1) / (1.0 - zabs);
    let err = pow2(tail.log2()) + rounding_err(&value, ctx.prec);
    Ok(Approx::new(value, err, Method::DirectSeries, n_max as usize, work))
}

fn thm32_rhs(r: &Rhs, zr: f64, zi: f64, which: u32) -> Result<Val> {
    let z = r.zc(zr, zi);
    let omz = z.one_minus();
    let ln_omz = Val::exact(omz.ln());
    let z3 = r.c("apery")?;
    let li2_omz = li_any(r, 2, &omz)?;
    let li3_omz = li_any(r, 3, &omz)?;
    let li3_z = r.li(3, &z)?;
    if which == 48 {
        let ln_z = Val::exact(z.ln());
        Ok((ln_z * ln_omz.clone() * 0.5 + li2_omz) * ln_omz + li3_z - li3_omz + z3)
    } else {
        Ok(li2_omz * ln_omz - li3_z - li3_omz * 2.0 + z3 * 2.0)
    }
}

/// `-ln(1 - xz)` for the x-form of the first Ramanujan integral.
fn neg_ln_one_minus(zr: f64, zi: f64) -> impl Fn(&Float, &Float) -> Result<Cx> + Send + Sync {
    move |x, _| {
        let p = x.prec();
        let xz = Cx::from_f64(p, zr, zi).scale(x);
        Ok(-&xz.one_minus().ln())
    }
}

fn neg_ln_one_minus_zx(zr: f64, zi: f64) -> impl Fn(&TPoint) -> Result<Cx> + Send + Sync {
    move |pt| {
        let p = pt.prec();
        let d = pt.one_minus_zxpow(&Cx::from_f64(p, zr, zi), 1);
        Ok((-&d.ln()).div_real(&pt.omx))
    }
}

/// Reduced form of `-ln(1 - xyz)/(1 - xy)`.
pub fn thm32_eq49_lhs(zr: f64, zi: f64) -> Lhs {
    red(XFactor::one(), 0.0, 1, neg_ln_one_minus_zx(zr, zi))
}

/// x-form of `-ln(1 - xz)/(1 - xy)`.
pub fn thm32_eq48_lhs(zr: f64, zi: f64) -> Lhs {
    Lhs::XForm(XForm::new(neg_ln_one_minus(zr, zi)))
}

/// Right-hand side of the first (`which = 48`) or second Ramanujan
/// integral as a function of `z`.
pub fn thm32_rhs_fn(zr: f64, zi: f64, which: u32) -> EvalFn {
    rhs_fn(move |r| thm32_rhs(r, zr, zi, which))
}

fn lemma_thm32_cases(reg: &mut Reg) {
    for (zr, zi) in [(0.5, 0.0), (-0.5, 0.0), (0.3, 0.4)] {
        let eval: EvalFn = Arc::new(move |ctx: &Ctx| lemma31_series(&Cx::from_f64(ctx.prec, zr, zi), ctx));
        let txt = format!("sum H(n,2)/n z^n + 2 sum H(n)/n^2 z^n at z = {}", fmt_z(zr, zi));
        reg.push(format!("lemma3.1@z={}", fmt_z(zr, zi)), txt, Lhs::Custom { route: "series", eval }, move |r| {
            let z = r.zc(zr, zi);
            let ln_omz = Val::exact(z.one_minus().ln());
            Ok(r.li(3, &z)? * 3.0 - r.li(2, &z)? * ln_omz)
        });
    }
    for (zr, zi) in [(0.5, 0.0), (-1.0, 0.0), (0.3, 0.4)] {
        let zs = fmt_z(zr, zi);
        reg.push(
            format!("thm3.2-eq48@z={zs}"),
            format!("-ln(1 - ({zs}) x) / (1 - xy)"),
            thm32_eq48_lhs(zr, zi),
            move |r| thm32_rhs(r, zr, zi, 48),
        );
        reg.push(
            format!("thm3.2-eq49@z={zs}"),
            format!("-ln(1 - ({zs}) xy) / (1 - xy)"),
            thm32_eq49_lhs(zr, zi),
            move |r| thm32_rhs(r, zr, zi, 49),
        );
    }
    let a = |r: &Rhs| Ok(r.pi().square() * r.c("ln2")? * 0.25 - r.c("apery")?);
    let b = |r: &Rhs| Ok(r.c("apery")? * 0.625);
    reg.push(
        "ex3.25a",
        "ln(2 - x) / (1 - xy)",
        Lhs::XForm(XForm::new(|_, omx| Ok(Cx::from_real(Float::with_val(omx.prec(), omx.ln_1p_ref()))))),
        a,
    );
    reg.push(
        "ex3.25b",
        "ln(1 + xy) / (1 - xy)",
        red(XFactor::one(), 0.0, 1, |pt: &TPoint| {
            Ok(Cx::from_real(Float::with_val(pt.prec(), pt.x.ln_1p_ref()) / &pt.omx))
        }),
        a,
    );
    reg.push(
        "ex3.25c",
        "ln(2 - xy) / (1 - xy)",
        red(XFactor::one(), 0.0, 1, |pt: &TPoint| {
            Ok(Cx::from_real(Float::with_val(pt.prec(), pt.omx.ln_1p_ref()) / &pt.omx))
        }),
        b,
    );
    reg.push(
        "ex3.25d",
        "ln(1 + x) / (1 - xy)",
        Lhs::XForm(XForm::new(|x, _| Ok(Cx::from_real(Float::with_val(x.prec(), x.ln_1p_ref()))))),
        b,
    );
    reg.push(
        "ex3.26a",
        "-ln(1 - x) / (1 - xy)",
        Lhs::XForm(XForm::new(|_, omx| Ok(Cx::from_real(-Float::with_val(omx.prec(), omx.ln_ref()))))),
        |r| Ok(r.c("apery")? * 2.0),
    );
    reg.push(
        "ex3.26b",
        "-ln(1 - xy) / (1 - xy)",
        red(XFactor::one(), 0.0, 1, |pt: &TPoint| {
            Ok(Cx::from_real(-Float::with_val(pt.prec(), pt.omx.ln_ref()) / &pt.omx))
        }),
        |r| r.c("apery"),
    );
}

fn one_minus_x() -> XFactor {
    XFactor::new(vec![(1.0, 0.0), (-1.0, 1.0)])
}

/// `∫∫ (1-x)(xy)^(u-1)(-ln xy)^s / (1 - xyz)`.
pub fn hadjicostas_lhs(zr: f64, zi: f64, s: f64, u: f64) -> Lhs {
    let pole = u32::from(zr == 1.0 && zi == 0.0);
    let zero = zr == 0.0 && zi == 0.0;
    red(one_minus_x(), s, pole, lerch_g(k(1.0), kc(zr, zi), s, u - 1.0, 1, u32::from(!zero)))
}

/// `Γ(s+2)[Φ(z,s+2,u) + ((1-z)Φ(z,s+1,u) - u^(-s-1))/(z(s+1))]`, with the
/// removable singularity at `s = -1` replaced by its limit when
/// `|s + 1| < 2^(-p/4)`: `ln u - ψ(u)` at `z = 1` and
/// `Φ(z,1,u) + ((1-z) ∂Φ/∂s(z,0,u) + ln u)/z` otherwise.
pub fn hadjicostas_rhs(z: &Cx, s: f64, u: f64, ctx: &Ctx) -> Result<Approx> {
    let r = Rhs::new(ctx)?;
    Ok(hadjicostas_val(&r, z, s, u)?.approx(ctx.prec))
}

fn hadjicostas_val(r: &Rhs, z: &Cx, s: f64, u: f64) -> Result<Val> {
    let z = z.with_prec(r.p);
    let z_one = z.im.is_zero() && z.re == 1;
    if z.is_zero() {
        return Err(crate::Error::domain("z = 0 divides by zero; use the z = 0 corollary"));
    }
    let near = (s + 1.0).abs() < (-(r.p as f64) / 4.0).exp2();
    if near {
        let lnu = r.num(u).ln();
        if z_one {
            return Ok(lnu - r.psi(u)?);
        }
        let d = r.dphi(&z, 0, u)? * Val::exact(z.one_minus());
        return Ok(r.phi(&z, 1.0, u)? + (d + lnu) / Val::exact(z));
    }
    let head = r.phi(&z, s + 2.0, u)?;
    let upow = r.num(u).powf(-s - 1.0);
    let num = if z_one {
        -upow
    } else {
        r.phi(&z, s + 1.0, u)? * Val::exact(z.one_minus()) - upow
    };
    let tail = num / (Val::exact(z) * (s + 1.0));
    Ok(r.gamma(s + 2.0)? * (head + tail))
}

/// `Γ(s+2)Φ(z,s+2,u) + Γ(s+1)[Φ(z,s+1,u+1) - Φ(z,s+1,u)]`.
pub fn hadjicostas_rhs_split(z: &Cx, s: f64, u: f64, ctx: &Ctx) -> Result<Approx> {
    let r = Rhs::new(ctx)?;
    let z = z.with_prec(r.p);
    let a = r.gamma(s + 2.0)? * r.phi(&z, s + 2.0, u)?;
    let b = r.gamma(s + 1.0)? * (r.phi(&z, s + 1.0, u + 1.0)? - r.phi(&z, s + 1.0, u)?);
    Ok((a + b).approx(ctx.prec))
}

/// The nine `(z, s, u)` points of the Hadjicostas check, one for each
/// pairing of the three values of `z` and `s` with `u` set by a Latin
/// square.
pub const HADJICOSTAS_POINTS: [(f64, f64, f64); 9] = [
    (-1.0, -0.5, 0.5),
    (-1.0, 0.0, 1.0),
    (-1.0, 1.0, 2.0),
    (0.5, -0.5, 1.0),
    (0.5, 0.0, 2.0),
    (0.5, 1.0, 0.5),
    (1.0, -0.5, 2.0),
    (1.0, 0.0, 0.5),
    (1.0, 1.0, 1.0),
];

fn section4_cases(reg: &mut Reg) {
    let mut points = HADJICOSTAS_POINTS.to_vec();
    points.push((-1.0, -2.5, 1.0));
    for (z, s, u) in points {
        let txt = format!("(1 - x)(xy)^{} (-ln xy)^{s} / (1 - ({z}) xy)", u - 1.0);
        reg.push(format!("thm4.1-eq50@z={z},s={s},u={u}"), txt, hadjicostas_lhs(z, 0.0, s, u), move |r| {
            hadjicostas_val(r, &r.z(z), s, u)
        });
    }
    for s in [0.0, 1.0, -0.5] {
        let txt = format!("(1 - x)(-ln xy)^{s} / (1 - xy)");
        reg.push(format!("ex4.1@s={s}"), txt, hadjicostas_lhs(1.0, 0.0, s, 1.0), move |r| {
            Ok(r.gamma(s + 2.0)? * (r.zeta(s + 2.0)? - 1.0 / (s + 1.0)))
        });
    }
    for s in [1.0, -0.5, -2.5] {
        let txt = format!("(1 - x)(-ln xy)^{s} / (1 + xy)");
        reg.push(format!("ex4.2@s={s}"), txt, hadjicostas_lhs(-1.0, 0.0, s, 1.0), move |r| {
            let inner = r.zeta_star(s + 2.0)? + (r.num(1.0) - r.zeta_star(s + 1.0)? * 2.0) * (1.0 / (s + 1.0));
            Ok(r.gamma(s + 2.0)? * inner)
        });
    }
    for u in [0.5, 1.0, 3.0] {
        let txt = format!("(1 - x)(xy)^{} / ((1 - xy)(-ln xy))", u - 1.0);
        reg.push(format!("cor4.1@u={u}"), txt, hadjicostas_lhs(1.0, 0.0, -1.0, u), move |r| {
            Ok(r.num(u).ln() - r.psi(u)?)
        });
    }
    reg.push("ex4.4", "(1 - x) / ((1 - xy)(-ln xy))", hadjicostas_lhs(1.0, 0.0, -1.0, 1.0), |r| r.c("gamma"));
    for (z, u) in [(-1.0, 1.0), (0.25, 2.0), (-0.5, 0.5)] {
        let txt = format!("(1 - x)(xy)^{} / ((1 - ({z}) xy) ln^2 xy)", u - 1.0);
        reg.push(format!("cor4.2@z={z},u={u}"), txt, hadjicostas_lhs(z, 0.0, -2.0, u), move |r| {
            let zc = r.z(z);
            let inner = r.dphi(&zc, 1, u)? * (z - 1.0) - r.num(u).ln() * u;
            Ok(r.dphi(&zc, 0, u)? + inner * (1.0 / z) + 1.0 / (z - 1.0))
        });
    }
    reg.push(
        "ex4.5",
        "(1 - x^2) / ((1 + x^2 y^2) ln^2 xy)",
        red(XFactor::new(vec![(1.0, 0.0), (-1.0, 2.0)]), -2.0, 0, lerch_g(k(1.0), k(-1.0), -2.0, 0.0, 2, 1)),
        |r| {
            let lg = r.lngamma(0.25)? - r.lngamma(0.75)? - r.c("ln2")?;
            Ok(lg + r.c("catalan")? * 2.0 / r.pi() - 0.5)
        },
    );
    for u in [1.0, 0.5] {
        let txt = format!("(1 - x)(xy)^{} / ln^2 xy", u - 1.0);
        reg.push(format!("ex4.6@u={u}"), txt, hadjicostas_lhs(0.0, 0.0, -2.0, u), move |r| {
            Ok(r.num(1.0 + 1.0 / u).ln() * (u + 1.0) - 1.0)
        });
    }
    for (s, u) in [(0.5, 2.0), (-1.5, 0.5), (-2.5, 3.0)] {
        let txt = format!("(1 - x)(xy)^{} (-ln xy)^{s}", u - 1.0);
        reg.push(format!("cor4.3@s={s},u={u}"), txt, hadjicostas_lhs(0.0, 0.0, s, u), move |r| {
            let a = r.num(u).powf(-s - 2.0) * (s + 1.0 - u);
            let b = r.num(u + 1.0).powf(-s - 1.0);
            Ok(r.gamma(s + 1.0)? * (a + b))
        });
    }
    reg.push("ex4.7", "(1 - x)(-ln xy)^(-5/2)", hadjicostas_lhs(0.0, 0.0, -2.5, 1.0), |r| {
        Ok(r.pi().sqrt() * (1.0 / 3.0) * (r.num(2.0).sqrt() * 8.0 - 10.0))
    });
}

/// `∫₀^∞ Φ(-z, s, u)/(1 + z) dz` by exp-sinh, `Φ` from the dispatcher.
pub fn cor21_lhs(s: f64, u: f64) -> EvalFn {
    Arc::new(move |ctx: &Ctx| {
        let inner = ctx.with_prec(ctx.prec.min(96)).with_tol(ctx.tol.scaled(-8.0));
        let f = Integrand1D::new(Interval::positive_axis(), |a| {
            let p = a.x.prec();
            let pt = LerchPoint::from_parts(Cx::from_real(-a.x.clone()), Cx::real(p, s), Float::with_val(p, u))?;
            let phi = phi_auto(&pt, &inner)?;
            let d = Float::with_val(p, &a.x + 1u32);
            Ok(phi.value.with_prec(p).div_real(&d))
        });
        let r = tanh_sinh(&f, &inner)?;
        Ok(r.add_err(&inner.tol.as_float()))
    })
}

/// `∫₀^∞ e^(-ut)(1 - e^(-t))^n / t dt`, the `x = e^(-t)` form of
/// `∫₀¹ x^(u-1)(1-x)^n/(-ln x) dx`.
pub fn eq57_lhs(n: u32, u: f64) -> EvalFn {
    Arc::new(move |ctx: &Ctx| {
        let f = Integrand1D::new(Interval::positive_axis(), |a| {
            let pt = TPoint::from_t(&a.from_a);
            let p = pt.prec();
            let mut v = pt.xpow(u) / &pt.t;
            v *= Float::with_val(p, rug::ops::Pow::pow(&pt.omx, n));
            Ok(Cx::from_real(v))
        })
        .with_endpoints(Endpoint::Algebraic(n as f64 - 1.0), Endpoint::Regular);
        tanh_sinh(&f, ctx)
    })
}

fn misc_cases(reg: &mut Reg) {
    for (s, u) in [(2.0, 1.0), (0.5, 1.5)] {
        let txt = format!("int_0^inf Phi(-z, {s}, {u}) / (1 + z) dz");
        let lhs = Lhs::Custom {
            route: "semi-infinite",
            eval: cor21_lhs(s, u),
        };
        reg.push_tol(format!("cor2.1@s={s},u={u}"), txt, 1e-8, lhs, move |r| Ok(r.phi(&r.z(1.0), s + 1.0, u)? * s));
    }
    for n in [1u32, 2, 5] {
        for (u, ut) in [(1.0, "1"), (0.5, "0.5"), (std::f64::consts::PI, "pi")] {
            let txt = format!("int_0^1 x^(u-1) (1-x)^{n} / (-ln x) dx, u = {ut}");
            let lhs = Lhs::Custom {
                route: "direct-1d",
                eval: eq57_lhs(n, u),
            };
            reg.push_tol(format!("eq57@n={n},u={ut}"), txt, 1e-12, lhs, move |r| {
                let a = Float::with_val(r.p, u);
                let one = Float::with_val(r.p, 1);
                Ok(fdiff_log_sum(n, &a, &one, &r.ctx)?.into())
            });
        }
    }
}

/// Cases that also get a direct two-dimensional evaluation.
pub const DOUBLE_TWINS: [&str; 20] = [
    "cor3.2-eq31@s=0.5",
    "ex3.1",
    "ex3.16",
    "ex3.17",
    "ex3.2",
    "ex3.20",
    "ex3.25a",
    "ex3.25d",
    "ex3.3",
    "ex3.4b",
    "ex3.4c",
    "ex3.5b",
    "ex3.6a",
    "ex3.7",
    "ex3.8a",
    "ex3.8b",
    "ex3.9b",
    "ex3.9c",
    "ex4.1@s=0",
    "ex4.1@s=1",
];

/// Every registered identity, sorted by id.
pub fn identity_registry() -> Vec<IdentityCase> {
    let mut reg = Reg(Vec::new());
    thm31_cases(&mut reg);
    cor31_cases(&mut reg);
    examples_3_1_to_3_9(&mut reg);
    cor32_33_cases(&mut reg);
    cor34_to_36_cases(&mut reg);
    cor37_to_39_cases(&mut reg);
    lemma_thm32_cases(&mut reg);
    section4_cases(&mut reg);
    misc_cases(&mut reg);
    let mut twins = Vec::new();
    for id in DOUBLE_TWINS {
        let base = reg.0.iter().find(|c| c.id == id).expect("twin id registered");
        let f = base.lhs.double().expect("twin has a unit-square form");
        let mut tags = base.tags.clone();
        tags.extend(["2d", "slow"]);
        twins.push(IdentityCase {
            id: format!("{id}/2d"),
            integrand: base.integrand.clone(),
            lhs: Lhs::Double(f),
            rhs: base.rhs.clone(),
            tol: DOUBLE_TOL,
            tags,
        });
    }
    reg.0.extend(twins);
    reg.0.sort_by(|a, b| a.id.cmp(&b.id));
    reg.0
}

/// A case whose two sides differ by `2^-40`, far above its tolerance, for
/// exercising the failure path of reports.
pub fn injected_failure_case() -> IdentityCase {
    let eval: EvalFn = Arc::new(|ctx: &Ctx| {
        let f = Integrand1D::new(Interval::unit(), |a| Ok(Cx::from_real(a.x.clone())));
        tanh_sinh(&f, ctx)
    });
    IdentityCase {
        id: "zz-injected-failure".into(),
        integrand: "x on (0, 1) against 1/2 + 2^-40".into(),
        lhs: Lhs::Custom { route: "direct-1d", eval },
        rhs: rhs_fn(|r| Ok(r.q(1, 2) + (-40f64).exp2())),
        tol: 1e-20,
        tags: vec!["test"],
    }
}

/// Quadrature tolerance used for a case: well inside its comparison
/// tolerance so that the comparison measures the identity, not the
/// integrator.
pub fn quad_ctx(case: &IdentityCase, prec: u32) -> Ctx {
    let factor = if matches!(case.lhs, Lhs::Double(_)) { 1e-2 } else { 1e-3 };
    Ctx::new(prec).with_tol(Tol::new(case.tol * factor))
}

/// Outcome of checking one identity.
#[derive(Debug, Clone)]
pub struct VerifyRecord {
    pub id: String,
    pub route: &'static str,
    pub lhs: Option<Approx>,
    pub rhs: Option<Approx>,
    pub abs_err: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    pub seconds: f64,
    /// Why the case failed, when it did not get as far as a comparison.
    pub reason: Option<String>,
}

/// Evaluate both sides of `case` at `prec` bits and compare. A case passes
/// when both error estimates are within the tolerance and the difference
/// is within the tolerance plus those estimates.
pub fn verify(case: &IdentityCase, prec: u32) -> VerifyRecord {
    let start = std::time::Instant::now();
    let ctx = quad_ctx(case, prec);
    let lhs = case.lhs.eval(&ctx);
    let rhs = (case.rhs)(&Ctx::new(prec));
    let mut rec = VerifyRecord {
        id: case.id.clone(),
        route: case.route(),
        lhs: None,
        rhs: None,
        abs_err: None,
        tol: case.tol,
        pass: false,
        seconds: 0.0,
        reason: None,
    };
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => {
            let d = l.dist(&r.value);
            let errs = l.err_f64() + r.err_f64();
            rec.pass = d <= case.tol + errs && errs <= case.tol;
            if errs > case.tol {
                rec.reason = Some(format!("error estimate {errs:.3e} exceeds tolerance"));
            }
            rec.abs_err = Some(d);
            rec.lhs = Some(l);
            rec.rhs = Some(r);
        }
        (l, r) => {
            let why = |side: &str, e: &crate::Error| format!("{side}: {e}");
            rec.reason = Some(match (&l, &r) {
                (Err(e), _) => why("lhs", e),
                (_, Err(e)) => why("rhs", e),
                _ => unreachable!(),
            });
            rec.lhs = l.ok();
            rec.rhs = r.ok();
        }
    }
    rec.seconds = start.elapsed().as_secs_f64();
    rec
}

/// Verify `cases` on `jobs` threads; records come back sorted by id.
pub fn verify_all(cases: &[IdentityCase], prec: u32, jobs: usize) -> Vec<VerifyRecord> {
    use rayon::prelude::*;
    let run = || cases.par_iter().map(|c| verify(c, prec)).collect::<Vec<_>>();
    let mut out = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    };
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

/// Select cases by a glob on the id (or on the id before `@`), or by tag
/// with `tag:<name>`.
pub fn filter_cases(cases: Vec<IdentityCase>, filter: &str) -> std::result::Result<Vec<IdentityCase>, glob::PatternError> {
    if let Some(tag) = filter.strip_prefix("tag:") {
        return Ok(cases.into_iter().filter(|c| c.tags.contains(&tag)).collect());
    }
    let pat = glob::Pattern::new(filter)?;
    Ok(cases
        .into_iter()
        .filter(|c| pat.matches(&c.id) || pat.matches(c.id.split('@').next().unwrap_or(&c.id)))
        .collect())
}
