//! Reduction of unit-square integrals `∫∫ x^c G(xy) dx dy` to one variable.
//!
//! With `x = X/Y`, `y = Y` the inner `Y` integral of `x^c` over `(X, 1)` is
//! `K_c(X) = (1 - X^c)/c` (and `-ln X` for `c = 0`), leaving
//! `∫₀¹ G(X) K(X) dX`. Writing `t = -ln X` turns this into an integral over
//! `(0, ∞)` whose only singular behaviour is a power of `t` at `t = 0`.

use std::sync::Arc;

use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::cx::Cx;
use crate::numeric::{Approx, Ctx};
use crate::quad::de::{tanh_sinh, Abscissa, Endpoint, Integrand1D, Interval};

/// A point of the reduced variable: `t = -ln X` together with `X` and
/// `1 - X`, the latter computed without cancellation.
#[derive(Debug, Clone)]
pub struct TPoint {
    pub t: Float,
    pub x: Float,
    pub omx: Float,
}

impl TPoint {
    pub fn from_t(t: &Float) -> Self {
        let p = t.prec();
        let neg = Float::with_val(p, -t);
        let x = neg.clone().exp();
        let omx = -neg.exp_m1();
        TPoint { t: t.clone(), x, omx }
    }

    /// The point `X = xy` for two quadrature nodes on `(0, 1)`.
    pub fn from_xy(a: &Abscissa, b: &Abscissa) -> Self {
        let p = a.x.prec();
        let t = neg_ln(a) + neg_ln(b);
        let x = Float::with_val(p, &a.x * &b.x);
        let omx = one_minus_product(a, b);
        TPoint { t, x, omx }
    }

    pub fn prec(&self) -> u32 {
        self.t.prec()
    }

    /// `X^b = e^(-bt)`.
    pub fn xpow(&self, b: f64) -> Float {
        Float::with_val(self.prec(), &self.t * -b).exp()
    }

    /// `(-ln X)^s = t^s`.
    pub fn tpow(&self, s: f64) -> Float {
        if s == 0.0 {
            return Float::with_val(self.prec(), 1);
        }
        (Float::with_val(self.prec(), self.t.ln_ref()) * s).exp()
    }

    /// `1 - X^k`.
    pub fn one_minus_xpow(&self, k: u32) -> Float {
        if k == 1 {
            return self.omx.clone();
        }
        -Float::with_val(self.prec(), &self.t * -(k as f64)).exp_m1()
    }

    /// `1 - z X^k`, written as `(1 - z) + z (1 - X^k)` so that it keeps
    /// its relative accuracy for `z` near 1 and `X` near 1.
    pub fn one_minus_zxpow(&self, z: &Cx, k: u32) -> Cx {
        let p = self.prec();
        let z = z.with_prec(p);
        (&z.one_minus() + &z.scale(&self.one_minus_xpow(k))).with_prec(p)
    }

    /// `a + b X^k` for real `a`, `b`.
    pub fn affine(&self, a: f64, b: f64, k: u32) -> Float {
        let p = self.prec();
        if a + b == 0.0 {
            return Float::with_val(p, self.one_minus_xpow(k) * a);
        }
        Float::with_val(p, self.xpow(k as f64) * b) + a
    }
}

/// `-ln x` at a node of `(0, 1)`, through `ln(1 - (1-x))` near 1.
pub fn neg_ln(a: &Abscissa) -> Float {
    let p = a.x.prec();
    match &a.to_b {
        Some(d) if a.x > 0.5 => -Float::with_val(p, -d).ln_1p(),
        _ => -Float::with_val(p, a.x.ln_ref()),
    }
}

/// `1 - xy = (1 - x) + x (1 - y)` at two nodes of `(0, 1)`.
pub fn one_minus_product(a: &Abscissa, b: &Abscissa) -> Float {
    let p = a.x.prec();
    let one = Float::with_val(p, 1);
    let ox = a.to_b.clone().unwrap_or_else(|| Float::with_val(p, &one - &a.x));
    let oy = b.to_b.clone().unwrap_or_else(|| Float::with_val(p, &one - &b.x));
    Float::with_val(p, &a.x * &oy) + ox
}

/// `Σ a_i x^(c_i)` with `c_i >= 0`, the part of an integrand not carried
/// by `xy`.
#[derive(Debug, Clone, PartialEq)]
pub struct XFactor {
    terms: Vec<(f64, f64)>,
}

impl XFactor {
    pub fn one() -> Self {
        XFactor { terms: vec![(1.0, 0.0)] }
    }

    pub fn monomial(c: f64) -> Self {
        XFactor { terms: vec![(1.0, c)] }
    }

    /// Terms `(a_i, c_i)`; panics on a negative exponent, which the caller
    /// removes by swapping `x` and `y`.
    pub fn new(terms: Vec<(f64, f64)>) -> Self {
        assert!(terms.iter().all(|&(_, c)| c >= 0.0), "x exponents must be >= 0");
        XFactor { terms }
    }

    fn max_exponent(&self) -> f64 {
        self.terms.iter().map(|&(_, c)| c).fold(0.0, f64::max)
    }

    /// `x ↦ Σ a_i x^(c_i)` at a quadrature node.
    pub fn eval(&self, x: &Float) -> Float {
        let p = x.prec();
        let mut acc = Float::new(p);
        for &(a, c) in &self.terms {
            if c == 0.0 {
                acc += a;
            } else {
                acc += (Float::with_val(p, x.ln_ref()) * c).exp() * a;
            }
        }
        acc
    }

    /// Order of vanishing of the kernel at `t = 0`.
    pub fn kernel_order(&self) -> u32 {
        let mut j = 0;
        while j < 16 {
            let m: f64 = self.terms.iter().map(|&(a, c)| a * c.powi(j)).sum();
            if m.abs() > 1e-12 {
                return j as u32 + 1;
            }
            j += 1;
        }
        j as u32 + 1
    }

    /// `K(t) = Σ a_i (1 - e^(-c_i t))/c_i`, with `t` in place of the `c = 0`
    /// quotient. For small `t` the Taylor series
    /// `Σ_k (-1)^(k+1) m_(k-1) t^k / k!`, `m_j = Σ a_i c_i^j`, keeps the
    /// cancellation between terms exact.
    pub fn kernel(&self, t: &Float) -> Float {
        let p = t.prec();
        let cmax = self.max_exponent().max(1.0);
        if t.to_f64() * cmax > 1.0 {
            let mut acc = Float::new(p);
            for &(a, c) in &self.terms {
                if c == 0.0 {
                    acc += Float::with_val(p, t * a);
                } else {
                    let e = -Float::with_val(p, t * -c).exp_m1();
                    acc += e * (a / c);
                }
            }
            return acc;
        }
        let scale: f64 = self.terms.iter().map(|&(a, _)| a.abs()).sum();
        let mut acc = Float::new(p);
        let mut tk = Float::with_val(p, 1);
        let mut powers: Vec<Float> = self.terms.iter().map(|_| Float::with_val(p, 1)).collect();
        let mut cpow = Float::with_val(p, 1);
        for k in 1..=4 * p as usize {
            tk *= t;
            tk /= k as u32;
            let mut m = Float::new(p);
            for ((a, c), pw) in self.terms.iter().zip(powers.iter_mut()) {
                m += Float::with_val(p, &*pw * *a);
                *pw *= *c;
            }
            let term = Float::with_val(p, &tk * &m);
            if k % 2 == 1 {
                acc += &term;
            } else {
                acc -= &term;
            }
            // remaining terms are bounded by scale (t cmax)^k / k!
            cpow *= cmax;
            let bound = Float::with_val(p, &tk * scale) * &cpow;
            if !acc.is_zero() && k > 1 && bound < Float::with_val(p, acc.abs_ref()) >> p {
                break;
            }
            if acc.is_zero() && bound.is_zero() {
                break;
            }
        }
        acc
    }
}

type GFn = dyn Fn(&TPoint) -> Result<Cx> + Send + Sync;

/// `∫₀¹∫₀¹ F(x) G(xy) dx dy` with `F` an [`XFactor`].
/// Beyond this `t` every reduced integrand in use is far below any working
/// precision (they decay at least like `e^(-t/100)`), while factors such as
/// `X^(-1/2)` would overflow.
const T_CUTOFF: f64 = 1e6;

#[derive(Clone)]
pub struct ReducedForm {
    pub xfactor: XFactor,
    pub g: Arc<GFn>,
    /// Exponent of the reduced integrand at `t = 0`.
    pub left: Endpoint,
}

impl ReducedForm {
    pub fn new(xfactor: XFactor, left: Endpoint, g: impl Fn(&TPoint) -> Result<Cx> + Send + Sync + 'static) -> Self {
        ReducedForm {
            xfactor,
            g: Arc::new(g),
            left,
        }
    }

    /// `G(e^(-t)) K(t) e^(-t)` on `(0, ∞)`.
    pub fn integrand(&self) -> Integrand1D<'static> {
        let form = self.clone();
        Integrand1D::new(Interval::positive_axis(), move |a| {
            if a.from_a > T_CUTOFF {
                return Ok(Cx::zero(a.x.prec()));
            }
            let pt = TPoint::from_t(&a.from_a);
            let g = (form.g)(&pt)?;
            let k = form.xfactor.kernel(&pt.t);
            Ok(g.scale(&(k * &pt.x)))
        })
        .with_endpoints(self.left, Endpoint::Regular)
    }

    /// The unreduced integrand `F(x) G(xy)` on the unit square.
    pub fn double(&self) -> Arc<Fn2D> {
        let form = self.clone();
        Arc::new(move |a: &Abscissa, b: &Abscissa| {
            let pt = TPoint::from_xy(a, b);
            let g = (form.g)(&pt)?;
            Ok(g.scale(&form.xfactor.eval(&a.x)))
        })
    }

    pub fn eval(&self, ctx: &Ctx) -> Result<Approx> {
        tanh_sinh(&self.integrand(), ctx)
    }
}

pub type Fn2D = dyn Fn(&Abscissa, &Abscissa) -> Result<Cx> + Send + Sync;

type XFn = dyn Fn(&Float, &Float) -> Result<Cx> + Send + Sync;

/// `∫₀¹∫₀¹ g(x)/(1 - xy) dx dy = ∫₀¹ g(x) (-ln(1-x))/x dx`.
#[derive(Clone)]
pub struct XForm {
    /// `g` as a function of `x` and `1 - x`.
    pub g: Arc<XFn>,
}

impl XForm {
    pub fn new(g: impl Fn(&Float, &Float) -> Result<Cx> + Send + Sync + 'static) -> Self {
        XForm { g: Arc::new(g) }
    }

    pub fn integrand(&self) -> Integrand1D<'static> {
        let g = self.g.clone();
        Integrand1D::new(Interval::unit(), move |a| {
            let p = a.x.prec();
            let omx = a.to_b.clone().unwrap_or_else(|| Float::with_val(p, 1 - &a.x));
            let y_integral = if a.x < 0.5 {
                -Float::with_val(p, -&a.x).ln_1p() / &a.x
            } else {
                -Float::with_val(p, omx.ln_ref()) / &a.x
            };
            Ok(g(&a.x, &omx)?.scale(&y_integral))
        })
        .with_endpoints(Endpoint::Regular, Endpoint::Log)
    }

    pub fn double(&self) -> Arc<Fn2D> {
        let g = self.g.clone();
        Arc::new(move |a: &Abscissa, b: &Abscissa| {
            let p = a.x.prec();
            let omx = a.to_b.clone().unwrap_or_else(|| Float::with_val(p, 1 - &a.x));
            Ok(g(&a.x, &omx)?.div_real(&one_minus_product(a, b)))
        })
    }

    pub fn eval(&self, ctx: &Ctx) -> Result<Approx> {
        tanh_sinh(&self.integrand(), ctx)
    }
}

/// The reduced form of
/// `∫∫ x^(u-1) y^(v-1) (-ln xy)^s / (1 - xyz) dx dy`, or of its confluent
/// version `∫∫ (xy)^(u-1) (-ln xy)^s / (1 - xyz) dx dy` when `v` is `None`
/// or `|u - v| < 2^(-p/3)`.
pub fn thm31_form(z: &Cx, s: f64, u: f64, v: Option<f64>, prec: u32) -> Result<ReducedForm> {
    let z_one = z.im.is_zero() && z.re == 1;
    if z.im.is_zero() && z.re > 1 {
        return Err(Error::domain("z must not lie on (1, inf)"));
    }
    let s_floor = if z_one { -1.0 } else { -2.0 };
    // also rejects NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(s > s_floor) {
        return Err(Error::domain(format!("need Re s > {s_floor} at this z")));
    }
    if !(u > 0.0 && v.is_none_or(|v| v > 0.0)) {
        return Err(Error::domain("u and v must be positive"));
    }
    let threshold = (-(prec as f64) / 3.0).exp2();
    let (lo, c) = match v {
        Some(v) if (u - v).abs() >= threshold => (u.min(v), (u - v).abs()),
        _ => (u, 0.0),
    };
    let xfactor = if c == 0.0 { XFactor::one() } else { XFactor::monomial(c) };
    let pole = if z_one { 1.0 } else { 0.0 };
    let left = Endpoint::Algebraic(s + 1.0 - pole);
    let z = z.clone();
    Ok(ReducedForm::new(xfactor, left, move |pt| {
        let num = pt.xpow(lo - 1.0) * pt.tpow(s);
        Ok(pt.one_minus_zxpow(&z, 1).recip().scale(&num))
    }))
}

/// Reduced integrand of the Thm 3.1 double integrals in `t = -ln X`, for
/// example `e^(-ut) t^(s+1) / (1 - z e^(-t))` in the confluent case.
pub fn reduce_thm31(z: &Cx, s: f64, u: f64, v: Option<f64>, prec: u32) -> Result<Integrand1D<'static>> {
    Ok(thm31_form(z, s, u, v, prec)?.integrand())
}

/// `∫₀¹∫₀¹ g(xy) dx dy = ∫₀¹ g(X) (-ln X) dX` as an integrand on `(0, 1)`;
/// `g` receives the node so it can use `1 - X` directly.
pub fn product_kernel_reduce<'a>(g: impl Fn(&Abscissa) -> Result<Cx> + Sync + 'a) -> Integrand1D<'a> {
    Integrand1D::new(Interval::unit(), move |a| Ok(g(a)?.scale(&neg_ln(a)))).with_endpoints(Endpoint::Log, Endpoint::Regular)
}

/// Tensor-product tanh-sinh over the unit square, each direction held to
/// half of `ctx.tol`.
pub fn eval_double(f: &Fn2D, ctx: &Ctx) -> Result<Approx> {
    let half = ctx.with_tol(ctx.tol.scaled(-1.0));
    let outer = Integrand1D::new(Interval::unit(), |a| {
        let inner = Integrand1D::new(Interval::unit(), |b| f(a, b));
        Ok(tanh_sinh(&inner, &half)?.value)
    });
    let r = tanh_sinh(&outer, &half)?;
    Ok(r.add_err(&half.tol.as_float()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Tol;
    use crate::special::oracle::oracle;

    fn ctx(prec: u32, tol: f64) -> Ctx {
        Ctx::new(prec).with_tol(Tol::new(tol))
    }

    fn zeta_f64(s: i32) -> f64 {
        (1..200000).map(|k| (k as f64).powi(-s)).sum()
    }

    #[test]
    fn kernel_matches_direct_form() {
        let f = XFactor::new(vec![(1.0, 0.0), (-1.0, 1.0), (0.5, 2.5)]);
        for t in [1e-20f64, 1e-3, 0.3, 0.99, 2.0, 40.0] {
            let tf = Float::with_val(256, t);
            let series = f.kernel(&tf).to_f64();
            let direct = t + (-t).exp_m1() - 0.5 * (-2.5 * t).exp_m1() / 2.5;
            let rel = ((series - direct) / direct).abs();
            assert!(rel < 1e-9 || (series - direct).abs() < 1e-300, "t={t}: {series} vs {direct}");
        }
        assert_eq!(f.kernel_order(), 1);
        assert_eq!(XFactor::new(vec![(1.0, 0.0), (-1.0, 1.0)]).kernel_order(), 2);
    }

    #[test]
    fn kernel_small_t_keeps_relative_accuracy() {
        // 1 - x: K(t) = t - 1 + e^(-t) = t²/2 - t³/6 + ...
        let f = XFactor::new(vec![(1.0, 0.0), (-1.0, 1.0)]);
        let t = Float::with_val(128, 1e-30);
        let k = f.kernel(&t).to_f64();
        assert!((k / 5e-61 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beukers_confluent() {
        let c = ctx(128, 1e-30);
        let r = reduce_thm31(&Cx::real(128, 1), 0.0, 1.0, None, 128).unwrap();
        let v = tanh_sinh(&r, &c).unwrap();
        let pi = oracle("pi", 128).unwrap();
        let z2 = Float::with_val(128, pi.square_ref()) / 6u32;
        assert!(v.dist(&Cx::from_real(z2)) < 1e-28);
    }

    #[test]
    fn alternating_log_two() {
        let c = ctx(128, 1e-30);
        let r = reduce_thm31(&Cx::real(128, -1), -1.0, 1.0, None, 128).unwrap();
        let v = tanh_sinh(&r, &c).unwrap();
        let ln2 = oracle("ln2", 128).unwrap();
        assert!(v.dist(&Cx::from_real(ln2)) < 1e-28);
    }

    #[test]
    fn two_parameter_at_z_zero() {
        let c = ctx(128, 1e-30);
        let r = reduce_thm31(&Cx::real(128, 0), 1.0, 2.0, Some(1.0), 128).unwrap();
        let v = tanh_sinh(&r, &c).unwrap();
        assert!(v.dist(&Cx::from_f64(128, 0.75, 0.0)) < 1e-28);
    }

    #[test]
    fn near_coincident_parameters_use_confluent_form() {
        let c = ctx(128, 1e-25);
        let tiny = 1e-20;
        let near = thm31_form(&Cx::real(128, 0.5), 0.5, 1.5 + tiny, Some(1.5), 128).unwrap();
        assert_eq!(near.xfactor, XFactor::one());
        let conf = thm31_form(&Cx::real(128, 0.5), 0.5, 1.5, None, 128).unwrap();
        let a = near.eval(&c).unwrap();
        let b = conf.eval(&c).unwrap();
        assert!(a.dist(&b.value) < 1e-24);
    }

    #[test]
    fn two_parameter_below_minus_one() {
        // s = -3/2, z = 0: Γ(-1/2)(v^(1/2) - u^(1/2))/(u - v)
        let c = ctx(128, 1e-25);
        let r = reduce_thm31(&Cx::real(128, 0), -1.5, 2.0, Some(1.0), 128).unwrap();
        let v = tanh_sinh(&r, &c).unwrap().re().to_f64();
        let expect = -2.0 * std::f64::consts::PI.sqrt() * (1.0 - 2f64.sqrt());
        assert!((v - expect).abs() < 1e-14, "{v} vs {expect}");
    }

    #[test]
    fn domain_errors() {
        assert!(reduce_thm31(&Cx::real(64, 2), 0.0, 1.0, None, 64).is_err());
        assert!(reduce_thm31(&Cx::real(64, 1), -1.0, 1.0, None, 64).is_err());
        assert!(reduce_thm31(&Cx::real(64, 0.5), -2.5, 1.0, None, 64).is_err());
        assert!(reduce_thm31(&Cx::real(64, 0.5), 0.0, -1.0, None, 64).is_err());
    }

    #[test]
    fn product_kernel_examples() {
        let c = ctx(128, 1e-28);
        let one = product_kernel_reduce(|a| Ok(Cx::real(a.x.prec(), 1)));
        assert!(tanh_sinh(&one, &c).unwrap().dist(&Cx::real(128, 1)) < 1e-26);
        // g = 1/(1 - X/2): twice ∫∫ 1/(2 - xy) = π²/6 - ln²2
        let g = product_kernel_reduce(|a| {
            let p = a.x.prec();
            let d = Float::with_val(p, 1) - Float::with_val(p, &a.x / 2u32);
            Ok(Cx::from_real(d.recip()))
        });
        let v = tanh_sinh(&g, &c).unwrap().re().to_f64();
        let ln2 = std::f64::consts::LN_2;
        assert!((v - (std::f64::consts::PI.powi(2) / 6.0 - ln2 * ln2)).abs() < 1e-15);
        // g = ln(1 + X)/(1 - X): π² ln 2 / 4 - ζ(3)
        let h = product_kernel_reduce(|a| {
            let p = a.x.prec();
            let omx = a.to_b.clone().unwrap();
            Ok(Cx::from_real(Float::with_val(p, a.x.ln_1p_ref()) / omx))
        });
        let v = tanh_sinh(&h, &c).unwrap().re().to_f64();
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((v - (pi2 * ln2 / 4.0 - zeta_f64(3))).abs() < 1e-9);
    }

    #[test]
    fn double_examples() {
        let c = ctx(64, 1e-11);
        let beukers = |a: &Abscissa, b: &Abscissa| Ok(Cx::from_real(one_minus_product(a, b).recip()));
        let v = eval_double(&beukers, &c).unwrap();
        assert!((v.re().to_f64() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
        let catalan = oracle("catalan", 64).unwrap().to_f64();
        let sq = |a: &Abscissa, b: &Abscissa| {
            let xy = Float::with_val(a.x.prec(), &a.x * &b.x);
            Ok(Cx::from_real((xy.square() + 1u32).recip()))
        };
        let v = eval_double(&sq, &c).unwrap();
        assert!((v.re().to_f64() - catalan).abs() < 1e-10);
        let cplx = |a: &Abscissa, b: &Abscissa| {
            let p = a.x.prec();
            let xy = Float::with_val(p, &a.x * &b.x);
            Ok(Cx::from_parts(Float::with_val(p, 1), xy).recip())
        };
        let v = eval_double(&cplx, &c).unwrap();
        assert!((v.re().to_f64() - catalan).abs() < 1e-10);
        assert!((v.im().to_f64() + std::f64::consts::PI.powi(2) / 48.0).abs() < 1e-10);
    }

    #[test]
    fn reduced_and_double_agree() {
        // (1 - x)/(1 - xy)
        let f = ReducedForm::new(XFactor::new(vec![(1.0, 0.0), (-1.0, 1.0)]), Endpoint::Algebraic(1.0), |pt| {
            Ok(Cx::from_real(pt.omx.clone().recip()))
        });
        let c = ctx(64, 1e-11);
        let a = f.eval(&c).unwrap();
        let b = eval_double(&*f.double(), &c).unwrap();
        assert!(a.dist(&b.value) < 1e-9);
        // ∫∫ (1-x)/(1-xy) = ζ(2) - 1
        assert!((a.re().to_f64() - (std::f64::consts::PI.powi(2) / 6.0 - 1.0)).abs() < 1e-10);
    }
}
