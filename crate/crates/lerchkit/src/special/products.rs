//! Infinite products whose logarithms are weighted sums of alternating
//! binomial log sums.
//!
//! A partial product is first collected exactly as a rational combination
//! `Σ_a c_a ln a` over positive integers `a`, then evaluated once with
//! enough guard bits to absorb the cancellation among the `c_a`.

use std::collections::BTreeMap;
use std::fmt;

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::binomial::binomial_row;
use crate::numeric::cx::{log2_abs, pi, pow2, Cx};
use crate::numeric::{rounding_err, Approx, Ctx, Method, PolyQ, ERR_PREC};
use crate::special::oracle::{ln_gamma, oracle, zeta_real};

/// Sign pattern over the inner index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// `(-1)^k`
    Even,
    /// `(-1)^(k+1)`
    Odd,
}

/// `ln((a + b k + c n) / den)` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogArg {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub den: u64,
}

impl LogArg {
    /// `ln(a + b k)`.
    pub fn linear(a: i64, b: i64) -> Self {
        LogArg { a, b, c: 0, den: 1 }
    }
}

/// `Σ_k sign(k) C(row, k - shift) factor(k) ln(arg(k, n))` with
/// `row = n + row_offset`, or the fixed `row_offset` when `fixed_row`.
#[derive(Debug, Clone)]
pub struct Component {
    pub row_offset: i64,
    pub fixed_row: bool,
    pub k_shift: u32,
    pub sign: Sign,
    pub factor: PolyQ,
    pub arg: LogArg,
}

impl Component {
    /// `Σ_k sign(k) C(n,k) ln(a + b k)`.
    pub fn plain(sign: Sign, a: i64, b: i64) -> Self {
        Component {
            row_offset: 0,
            fixed_row: false,
            k_shift: 0,
            sign,
            factor: PolyQ::constant(Rational::from(1)),
            arg: LogArg::linear(a, b),
        }
    }

    pub fn with_factor(mut self, factor: PolyQ) -> Self {
        self.factor = factor;
        self
    }
}

type WeightFn = Box<dyn Fn(u64) -> Rational + Send + Sync>;
type ValueFn = Box<dyn Fn(u32) -> Result<Float> + Send + Sync>;
type ConstantFn = Box<dyn Fn(&Float) -> Float + Send + Sync>;

/// `Π_{n>=n0} exp(weight(n) · Σ_components)`, with the logarithm of its
/// limit and optionally a map from the product to a named constant.
pub struct ProductSpec {
    pub id: String,
    /// The limit, written out.
    pub target: String,
    pub n0: u64,
    pub weight: WeightFn,
    pub inner: Vec<Component>,
    /// `ln` of the limit from the oracles.
    pub target_ln: ValueFn,
    /// Registry key of the constant recovered from the product, if any.
    pub constant: Option<&'static str>,
    pub to_constant: Option<ConstantFn>,
    /// Weights decay geometrically in `n`.
    pub geometric: bool,
}

impl fmt::Debug for ProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProductSpec")
            .field("id", &self.id)
            .field("target", &self.target)
            .field("n0", &self.n0)
            .finish_non_exhaustive()
    }
}

/// `Σ_a c_a ln a` over integers `a >= 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogCombination {
    terms: BTreeMap<Integer, Rational>,
}

impl LogCombination {
    fn add(&mut self, a: Integer, c: &Rational) {
        if a == 1 || *c == 0 {
            return;
        }
        let slot = self.terms.entry(a).or_default();
        *slot += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| *c != 0);
    }

    pub fn terms(&self) -> &BTreeMap<Integer, Rational> {
        &self.terms
    }

    /// The value at `ctx.prec` bits, computed with guard bits for the
    /// largest `|c_a ln a|`.
    pub fn eval(&self, ctx: &Ctx) -> Result<Approx> {
        let mut big = 0f64;
        for (a, c) in &self.terms {
            let la = (a.significant_bits() as f64).log2();
            let lc = log2_abs(&Float::with_val(64, c));
            big = big.max(lc + la);
        }
        let count = (self.terms.len().max(1) as f64).log2();
        let work = ctx.guarded((big.max(0.0) + count).ceil() as u32 + 16)?;
        let mut sum = Float::new(work);
        for (a, c) in &self.terms {
            let la = Float::with_val(work, a).ln();
            sum += la * Float::with_val(work, c);
        }
        let value = Cx::from_real(sum).with_prec(ctx.prec);
        let err = pow2(big + count - work as f64 + 2.0) + rounding_err(&value, ctx.prec);
        Ok(Approx::new(value, err, Method::Product, self.terms.len(), work))
    }
}

fn sign_of(sign: Sign, k: u64) -> i32 {
    let odd = k % 2 == 1;
    match (sign, odd) {
        (Sign::Even, false) | (Sign::Odd, true) => 1,
        _ => -1,
    }
}

/// Adds the `n`-th outer term of `spec` to `acc`.
fn accumulate(spec: &ProductSpec, n: u64, acc: &mut LogCombination) -> Result<()> {
    let w = (spec.weight)(n);
    if w == 0 {
        return Ok(());
    }
    for comp in &spec.inner {
        let row = if comp.fixed_row {
            comp.row_offset
        } else {
            n as i64 + comp.row_offset
        };
        if row < 0 {
            continue;
        }
        for (j, c) in binomial_row(row as u32).iter().enumerate() {
            let k = j as u64 + comp.k_shift as u64;
            let f = comp.factor.eval(&Rational::from(k));
            if f == 0 {
                continue;
            }
            let arg = Integer::from(comp.arg.a) + Integer::from(comp.arg.b) * k + Integer::from(comp.arg.c) * n;
            if arg <= 0 {
                return Err(Error::domain(format!("product {}: log argument {arg} at k={k}, n={n}", spec.id)));
            }
            let mut coeff = Rational::from(c * sign_of(comp.sign, k)) * &w * f;
            acc.add(arg, &coeff);
            if comp.arg.den != 1 {
                coeff = -coeff;
                acc.add(Integer::from(comp.arg.den), &coeff);
            }
        }
    }
    Ok(())
}

/// The exact log-sum of the outer terms `n0 <= n <= N`.
pub fn log_combination(spec: &ProductSpec, n_max: u64) -> Result<LogCombination> {
    let mut acc = LogCombination::default();
    for n in spec.n0..=n_max {
        accumulate(spec, n, &mut acc)?;
    }
    acc.prune();
    Ok(acc)
}

/// One partial product.
#[derive(Debug, Clone)]
pub struct PartialProduct {
    pub n: u64,
    /// `ln` of the partial product.
    pub log_sum: Approx,
    pub value: Approx,
}

fn finish(n: u64, log_sum: Approx, previous: Option<&Approx>, ctx: &Ctx) -> PartialProduct {
    let mut log_sum = log_sum;
    if let Some(prev) = previous {
        let drift = Float::with_val(ERR_PREC, &log_sum.value.re - &prev.value.re).abs();
        log_sum.err += drift;
    }
    let v = Float::with_val(ctx.prec + 8, log_sum.re().exp_ref());
    let value = Cx::from_real(v.clone()).with_prec(ctx.prec);
    let err = Float::with_val(ERR_PREC, &log_sum.err * &v) + rounding_err(&value, ctx.prec);
    let value = Approx::new(value, err, Method::Product, log_sum.terms_used, log_sum.precision_used);
    PartialProduct { n, log_sum, value }
}

/// Partial products at each `N` in `checkpoints` (ascending).
///
/// Each error adds the drift over the last tenth of the outer terms to
/// the evaluation error; it says how much the product still moves, not
/// how far it is from the limit.
pub fn product_trajectory(spec: &ProductSpec, checkpoints: &[u64], ctx: &Ctx) -> Result<Vec<PartialProduct>> {
    let mut acc = LogCombination::default();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = spec.n0;
    for &n_max in checkpoints {
        let back = n_max.saturating_sub((n_max / 10).max(1));
        let mut earlier = None;
        while next <= n_max {
            accumulate(spec, next, &mut acc)?;
            if next == back {
                acc.prune();
                earlier = Some(acc.eval(ctx)?);
            }
            next += 1;
        }
        acc.prune();
        let now = acc.eval(ctx)?;
        out.push(finish(n_max, now, earlier.as_ref(), ctx));
    }
    Ok(out)
}

/// The partial product up to `N`.
pub fn product_eval(spec: &ProductSpec, n_max: u64, ctx: &Ctx) -> Result<PartialProduct> {
    Ok(product_trajectory(spec, &[n_max], ctx)?.remove(0))
}

/// The limit of the product, from the oracles.
pub fn product_target(spec: &ProductSpec, prec: u32) -> Result<Float> {
    Ok(Float::with_val(prec, (spec.target_ln)(prec + 16)?.exp()))
}

fn w_pow2(poly: impl Fn(u64) -> i64 + Send + Sync + 'static, shift: u32) -> WeightFn {
    Box::new(move |n| Rational::from((poly(n), Integer::from(1) << (n as u32 + shift))))
}

fn w_recip(scale: i64, offset: i64, mult: i64) -> WeightFn {
    Box::new(move |n| Rational::from((scale, mult * n as i64 + offset)))
}

fn poly(c: &[i64]) -> PolyQ {
    PolyQ::from_coeffs(c.iter().map(|&x| Rational::from(x)).collect())
}

fn ln_const(name: &'static str) -> impl Fn(u32) -> Result<Float> {
    move |p| Ok(oracle(name, p)?.ln())
}

#[allow(clippy::too_many_arguments)]
fn spec(
    id: &str,
    target: &str,
    n0: u64,
    weight: WeightFn,
    inner: Vec<Component>,
    target_ln: impl Fn(u32) -> Result<Float> + Send + Sync + 'static,
    constant: Option<(&'static str, ConstantFn)>,
    geometric: bool,
) -> ProductSpec {
    let (constant, to_constant) = match constant {
        Some((c, f)) => (Some(c), Some(f)),
        None => (None, None),
    };
    ProductSpec {
        id: id.to_string(),
        target: target.to_string(),
        n0,
        weight,
        inner,
        target_ln: Box::new(target_ln),
        constant,
        to_constant,
        geometric,
    }
}

fn plus_one() -> Vec<Component> {
    vec![Component::plain(Sign::Odd, 1, 1)]
}

fn odd_args() -> Vec<Component> {
    vec![Component::plain(Sign::Odd, 1, 2)]
}

/// `e^x = Π_{n>=1} (Π_k (k p + q)^((-1)^(k+1) C(n,k)))^(1/n)` for `x = p/q`,
/// either with factors `k p + q` or, unsimplified, `(k p + q)/q`.
pub fn exp_product(p: u64, q: u64, simplified: bool) -> ProductSpec {
    let den = if simplified { 1 } else { q };
    let inner = vec![Component {
        arg: LogArg {
            a: q as i64,
            b: p as i64,
            c: 0,
            den,
        },
        ..Component::plain(Sign::Odd, 0, 0)
    }];
    let x = Rational::from((p, q));
    let xs = if q == 1 { p.to_string() } else { format!("{p}/{q}") };
    let id = if simplified {
        format!("thm5.3@x={xs}")
    } else {
        format!("thm5.3-raw@x={xs}")
    };
    let inv = Rational::from((q, p));
    spec(
        &id,
        &format!("e^{xs}"),
        1,
        w_recip(1, 0, 1),
        inner,
        move |prec| Ok(Float::with_val(prec, &x)),
        Some(("e", Box::new(move |v: &Float| (Float::with_val(v.prec(), v.ln_ref()) * &inv).exp()))),
        false,
    )
}

/// `e^(1/j) = Π_{n>=j} (Π_k (k+1)^((-1)^(k+1) C(n,k)))^(1/(n-j+1))`.
pub fn exp_root_product(j: u64) -> ProductSpec {
    let id = if j == 1 { "ex5.12".to_string() } else { format!("ex5.12@j={j}") };
    let jj = j;
    spec(
        &id,
        &format!("e^(1/{j})"),
        j,
        Box::new(move |n| if n >= jj { Rational::from((1, n - jj + 1)) } else { Rational::new() }),
        plus_one(),
        move |p| Ok(Float::with_val(p, 1) / jj as u32),
        Some(("e", Box::new(move |v: &Float| (Float::with_val(v.prec(), v.ln_ref()) * jj as u32).exp()))),
        false,
    )
}

/// All registered products, ordered by id.
pub fn product_specs() -> Vec<ProductSpec> {
    let mut out = vec![
        spec(
            "ex5.1",
            "pi/2",
            0,
            w_pow2(|_| 1, 0),
            plus_one(),
            |p| Ok(Float::with_val(p, pi(p) / 2u32).ln()),
            Some(("pi", Box::new(|v: &Float| Float::with_val(v.prec(), v * 2u32)))),
            true,
        ),
        spec(
            "ex5.2",
            "A^12/(2^(4/3) e)",
            0,
            w_pow2(|n| n as i64 + 1, 0),
            plus_one(),
            |p| {
                let ln2 = Float::with_val(p, Constant::Log2);
                Ok(oracle("glaisher", p)?.ln() * 12u32 - ln2 * 4u32 / 3u32 - 1u32)
            },
            Some((
                "glaisher",
                Box::new(|v: &Float| {
                    let p = v.prec();
                    let ln2 = Float::with_val(p, Constant::Log2);
                    ((Float::with_val(p, v.ln_ref()) + ln2 * 4u32 / 3u32 + 1u32) / 12u32).exp()
                }),
            )),
            true,
        ),
        spec(
            "ex5.3",
            "e^(7 zeta(3)/(4 pi^2))",
            0,
            w_pow2(|n| (n * n + n) as i64, 3),
            plus_one(),
            |p| Ok(zeta_real(&Float::with_val(p, 3), p)? * 7u32 / (Float::with_val(p, pi(p).square()) * 4u32)),
            Some((
                "apery",
                Box::new(|v: &Float| {
                    let p = v.prec();
                    Float::with_val(p, v.ln_ref()) * Float::with_val(p, pi(p).square()) * 4u32 / 7u32
                }),
            )),
            true,
        ),
        spec(
            "ex5.4",
            "Gamma(1/4)/(2 Gamma(3/4))",
            0,
            w_pow2(|_| 1, 1),
            odd_args(),
            |p| {
                let a = ln_gamma(&Float::with_val(p, 0.25), p)?;
                let b = ln_gamma(&Float::with_val(p, 0.75), p)?;
                Ok(a - b - Float::with_val(p, Constant::Log2))
            },
            None,
            true,
        ),
        spec(
            "ex5.5",
            "e^(G/pi)",
            0,
            w_pow2(|n| n as i64, 2),
            odd_args(),
            |p| Ok(oracle("catalan", p)? / pi(p)),
            Some((
                "catalan",
                Box::new(|v: &Float| Float::with_val(v.prec(), v.ln_ref()) * pi(v.prec())),
            )),
            true,
        ),
        spec(
            "ex5.6",
            "2 pi/e",
            0,
            w_recip(2, 1, 1),
            vec![Component::plain(Sign::Odd, 1, 1).with_factor(poly(&[1, 1]))],
            |p| Ok(Float::with_val(p, pi(p) * 2u32).ln() - 1u32),
            Some((
                "pi",
                Box::new(|v: &Float| Float::with_val(v.prec(), v * Float::with_val(v.prec(), 1).exp()) / 2u32),
            )),
            false,
        ),
        spec(
            "ex5.7",
            "A/e^(1/8)",
            0,
            w_recip(1, 2, 2),
            vec![Component::plain(Sign::Odd, 1, 1).with_factor(poly(&[1, 2, 1]))],
            |p| Ok(oracle("glaisher", p)?.ln() - Float::with_val(p, 0.125)),
            Some((
                "glaisher",
                Box::new(|v: &Float| Float::with_val(v.prec(), v * Float::with_val(v.prec(), 0.125).exp())),
            )),
            false,
        ),
        spec(
            "ex5.8",
            "e^gamma",
            0,
            w_recip(1, 1, 1),
            plus_one(),
            |p| oracle("gamma", p),
            Some(("gamma", Box::new(|v: &Float| Float::with_val(v.prec(), v.ln_ref())))),
            false,
        ),
        spec(
            "ex5.9",
            "e^pi",
            0,
            w_recip(1, 1, 1),
            vec![Component::plain(Sign::Even, 3, 4), Component::plain(Sign::Odd, 1, 4)],
            |p| Ok(pi(p)),
            Some(("pi", Box::new(|v: &Float| Float::with_val(v.prec(), v.ln_ref())))),
            false,
        ),
        spec(
            "eq58",
            "sigma",
            1,
            Box::new(|n| Rational::from(if n % 2 == 0 { 1 } else { -1 })),
            vec![Component::plain(Sign::Even, 1, 1)],
            ln_const("somos_sigma"),
            Some(("somos_sigma", Box::new(|v: &Float| v.clone()))),
            false,
        ),
        spec(
            "eq59",
            "sigma",
            1,
            w_pow2(|_| 1, 0),
            vec![Component {
                row_offset: 1,
                fixed_row: true,
                arg: LogArg { a: 0, b: 1, c: 1, den: 1 },
                ..Component::plain(Sign::Odd, 0, 0)
            }],
            ln_const("somos_sigma"),
            Some(("somos_sigma", Box::new(|v: &Float| v.clone()))),
            true,
        ),
        spec(
            "ex5.11",
            "A",
            1,
            w_recip(1, 0, 2),
            vec![
                Component {
                    row_offset: -1,
                    k_shift: 1,
                    ..Component::plain(Sign::Even, 0, 1).with_factor(poly(&[0, 0, 1]))
                },
                Component {
                    row_offset: 3,
                    k_shift: 1,
                    ..Component::plain(Sign::Even, 0, 1)
                },
            ],
            ln_const("glaisher"),
            Some(("glaisher", Box::new(|v: &Float| v.clone()))),
            false,
        ),
        exp_root_product(1),
        exp_root_product(2),
        {
            let mut s = exp_product(2, 1, true);
            s.id = "ex5.13".into();
            s
        },
        exp_product(1, 1, true),
        exp_product(2, 1, true),
        exp_product(2, 3, true),
        exp_product(1, 2, true),
    ];
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

/// The product registered under `id`.
pub fn product_spec(id: &str) -> Result<ProductSpec> {
    product_specs()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownKey(format!("product:{id}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn miss(spec: &ProductSpec, n: u64, prec: u32) -> f64 {
        let ctx = Ctx::new(prec);
        let v = product_eval(spec, n, &ctx).unwrap();
        let t = product_target(spec, prec).unwrap();
        v.value.dist(&Cx::from_real(t))
    }

    #[test]
    fn first_factors_match_printed_products() {
        let ctx = Ctx::new(128);
        // π/2: (2/1)^(1/2) (2²/(1·3))^(1/4)
        let s = product_spec("ex5.1").unwrap();
        let v = product_eval(&s, 2, &ctx).unwrap();
        let expect = (2f64).powf(0.5) * (4f64 / 3.0).powf(0.25);
        assert!((v.value.re().to_f64() - expect).abs() < 1e-15);
        // σ: 2/1 · (1·3)/2² · (2³·4)/(1·3³)
        let s = product_spec("eq58").unwrap();
        let v = product_eval(&s, 3, &ctx).unwrap();
        assert!((v.value.re().to_f64() - 2.0 * 0.75 * 32.0 / 27.0).abs() < 1e-15);
        // e^(2/3): (5/3)^1 (5²/(3·7))^(1/2)
        let s = product_spec("thm5.3@x=2/3").unwrap();
        let v = product_eval(&s, 2, &ctx).unwrap();
        let expect = 5.0 / 3.0 * (25f64 / 21.0).sqrt();
        assert!((v.value.re().to_f64() - expect).abs() < 1e-15);
        // A: (2^4·4^4/(1·3^6·5))^(1/2)
        let s = product_spec("ex5.11").unwrap();
        let v = product_eval(&s, 1, &ctx).unwrap();
        let expect = (4096f64 / (729.0 * 5.0)).sqrt();
        assert!((v.value.re().to_f64() - expect).abs() < 1e-15, "{}", v.value.re().to_f64());
        // e^π: first factor 3/1 with exponent 1
        let s = product_spec("ex5.9").unwrap();
        let v = product_eval(&s, 0, &ctx).unwrap();
        assert!((v.value.re().to_f64() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn geometric_products_converge() {
        for id in ["ex5.1", "ex5.2", "ex5.3", "ex5.4", "ex5.5", "eq59"] {
            let s = product_spec(id).unwrap();
            assert!(s.geometric);
            assert!(miss(&s, 60, 256) < 1e-12, "{id}: {}", miss(&s, 60, 256));
        }
        assert!(miss(&product_spec("ex5.1").unwrap(), 60, 256) < 1e-15);
    }

    #[test]
    fn alternating_sigma_product_brackets_the_limit() {
        let ctx = Ctx::new(128);
        let s = product_spec("eq58").unwrap();
        let sigma = oracle("somos_sigma", 128).unwrap();
        let traj = product_trajectory(&s, &(1..=12).collect::<Vec<_>>(), &ctx).unwrap();
        for (i, pp) in traj.iter().enumerate() {
            let above = *pp.value.re() > sigma;
            assert_eq!(above, i % 2 == 0, "N={}", pp.n);
        }
        let fast = product_spec("eq59").unwrap();
        for n in [8, 16, 32] {
            assert!(miss(&fast, n, 128) < miss(&s, n, 128), "N={n}");
        }
    }

    #[test]
    fn rational_simplification_is_exact() {
        for (p, q) in [(2, 3), (1, 2), (5, 4), (2, 1)] {
            let a = exp_product(p, q, true);
            let b = exp_product(p, q, false);
            for n in [1, 2, 7, 30] {
                let ca = log_combination(&a, n).unwrap();
                let cb = log_combination(&b, n).unwrap();
                assert_eq!(ca, cb, "x={p}/{q} N={n}");
                let ctx = Ctx::new(192);
                let va = ca.eval(&ctx).unwrap();
                let vb = cb.eval(&ctx).unwrap();
                assert_eq!(va.value.re, vb.value.re);
            }
        }
    }

    #[test]
    fn slow_products_improve() {
        for id in ["ex5.6", "ex5.7", "ex5.8", "ex5.12", "thm5.3@x=1", "thm5.3@x=2/3"] {
            let s = product_spec(id).unwrap();
            let m25 = miss(&s, 25, 128);
            let m100 = miss(&s, 100, 128);
            assert!(m100 < m25, "{id}");
        }
    }

    #[test]
    fn constants_recovered_from_products() {
        let ctx = Ctx::new(256);
        let s = product_spec("ex5.1").unwrap();
        let v = product_eval(&s, 64, &ctx).unwrap();
        let pi_ = (s.to_constant.as_ref().unwrap())(v.value.re());
        assert!((pi_ - pi(256)).abs().to_f64() < 1e-15);
        let s = product_spec("eq59").unwrap();
        let v = product_eval(&s, 40, &ctx).unwrap();
        let sigma = (s.to_constant.as_ref().unwrap())(v.value.re());
        assert!((sigma - oracle("somos_sigma", 256).unwrap()).abs().to_f64() < 1e-10);
    }

    #[test]
    fn unknown_product() {
        assert!(matches!(product_spec("ex9.9"), Err(Error::UnknownKey(_))));
    }
}
