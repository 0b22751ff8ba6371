//! Lerch transcendent `Φ(z, s, u)` by several independent routes and a
//! dispatcher that picks one per point.

pub mod closed;
pub mod hasse;
pub mod integral;
pub mod series;
pub mod split;

use std::fmt;

use rug::Float;

pub use closed::{bernoulli_poly, euler_poly, phi_closed_nonpos_int_s, phi_closed_rational};
pub use hasse::phi_hasse;
pub use integral::phi_integral;
pub use series::{phi_series_direct, phi_series_negz};
pub use split::phi_split;

use crate::error::{Error, Result};
use crate::numeric::cx::{pow2, Cx};
use crate::numeric::{rounding_err, Approx, Ctx, Method, ERR_PREC};

/// `x^(-s)` for real `x > 0`.
pub(crate) fn pow_neg(x: &Float, s: &Cx) -> Cx {
    Cx::pow_neg_from_ln(&Float::with_val(x.prec(), x.ln_ref()), s)
}

/// Which part of the `(z, s)` domain a point lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainClass {
    ZEqOne,
    /// `Re z < 1/2`.
    ZHalfPlane,
    /// `|z| < 1`, `Re z >= 1/2`.
    ZUnitShrinkable,
    /// `|z| >= 1`, `Re z >= 1/2`, off the cut.
    ZIntegralOnly,
    /// Real `z > 1`.
    ZCut,
}

impl DomainClass {
    pub fn tag(self) -> &'static str {
        match self {
            DomainClass::ZEqOne => "Z_EQ_ONE",
            DomainClass::ZHalfPlane => "Z_HALF_PLANE",
            DomainClass::ZUnitShrinkable => "Z_UNIT_SHRINKABLE",
            DomainClass::ZIntegralOnly => "Z_INTEGRAL_ONLY",
            DomainClass::ZCut => "Z_CUT",
        }
    }
}

/// Argument triple of `Φ`.
#[derive(Debug, Clone)]
pub struct LerchPoint {
    pub z: Cx,
    pub s: Cx,
    pub u: Float,
}

impl LerchPoint {
    /// Point with `u` given as `f64`, stored at the precision of `z`.
    pub fn new(z: Cx, s: Cx, u: f64) -> Result<Self> {
        let p = z.prec().max(s.prec());
        Self::from_parts(z, s, Float::with_val(p, u))
    }

    pub fn from_parts(z: Cx, s: Cx, u: Float) -> Result<Self> {
        if !(u.is_finite() && u.is_sign_positive() && !u.is_zero()) {
            return Err(Error::domain("u must be a positive real"));
        }
        if !z.is_finite() || !s.is_finite() {
            return Err(Error::domain("z and s must be finite"));
        }
        Ok(LerchPoint { z, s, u })
    }

    pub fn is_z_one(&self) -> bool {
        self.z.im.is_zero() && self.z.re == 1
    }

    /// `Some(m)` when `s = -m` for an integer `m >= 0`.
    pub fn nonpositive_int_s(&self) -> Option<u32> {
        if self.s.im.is_zero() && self.s.re.is_integer() && self.s.re <= 0 {
            let m = -self.s.re.to_f64();
            if m <= u32::MAX as f64 {
                return Some(m as u32);
            }
        }
        None
    }

    pub fn classify(&self) -> DomainClass {
        if self.is_z_one() {
            DomainClass::ZEqOne
        } else if self.z.im.is_zero() && self.z.re > 1 {
            DomainClass::ZCut
        } else if self.z.re < 0.5 {
            DomainClass::ZHalfPlane
        } else if self.z.norm_sqr() < 1 {
            DomainClass::ZUnitShrinkable
        } else {
            DomainClass::ZIntegralOnly
        }
    }
}

impl fmt::Display for LerchPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(z={}, s={}, u={})", self.z, self.s, self.u.to_f64())
    }
}

/// Half-plane ratio above which the dispatcher prefers the integral.
const NEGZ_PREFER_INTEGRAL: f64 = 0.95;

/// Largest precision increase spent on moving `u` into `(0, 2]`.
const MAX_SHIFT_BITS: f64 = 512.0;

/// Evaluate `Φ(z, s, u)` on a route suited to the point.
///
/// `z = 1` goes to the Hasse series, non-positive integer `s` to the closed
/// form, `Re z < 1/2` to the half-plane series (or the integral when that
/// series would crawl and `Re s > 0`), the rest of the unit disk to the
/// splitting formula and everything else off the cut with `Re s > 0` to
/// the integral. For `u > 2`, the series routes first move `u` into `(0, 2]`
/// with `Φ(z,s,u+1) = (Φ(z,s,u) - u^(-s))/z`.
pub fn phi_auto(pt: &LerchPoint, ctx: &Ctx) -> Result<Approx> {
    let class = pt.classify();
    if class == DomainClass::ZEqOne {
        return phi_hasse(&pt.s, &pt.u, ctx);
    }
    if let Some(m) = pt.nonpositive_int_s() {
        return phi_closed_nonpos_int_s(&pt.z, m, &pt.u, ctx);
    }
    if class == DomainClass::ZCut {
        return Err(Error::domain("unsupported domain: z on the cut (1, inf)"));
    }
    if class == DomainClass::ZIntegralOnly && pt.s.re <= 0 {
        return Err(Error::domain(
            "unsupported domain: |z| >= 1 with Re z >= 1/2 needs Re s > 0",
        ));
    }
    if pt.u > 2 && !pt.z.is_zero() {
        if let Some(r) = shifted(pt, ctx)? {
            return Ok(r);
        }
    }
    dispatch(pt, class, ctx)
}

fn dispatch(pt: &LerchPoint, class: DomainClass, ctx: &Ctx) -> Result<Approx> {
    match class {
        DomainClass::ZHalfPlane => {
            let ratio = (pt.z.log2_abs() - pt.z.one_minus().log2_abs()).exp2();
            if ratio > NEGZ_PREFER_INTEGRAL && pt.s.re > 0 {
                phi_integral(pt, ctx)
            } else {
                phi_series_negz(pt, ctx)
            }
        }
        // squaring cannot leave the disc fast enough when z is very close to 1
        DomainClass::ZUnitShrinkable => match phi_split(pt, ctx) {
            Err(Error::Domain(_)) if pt.s.re > 0 => phi_integral(pt, ctx),
            r => r,
        },
        DomainClass::ZIntegralOnly => phi_integral(pt, ctx),
        DomainClass::ZEqOne | DomainClass::ZCut => unreachable!("handled by phi_auto"),
    }
}

/// Downward shift of `u` by `K` steps:
/// `Φ(z,s,u0+K) = z^(-K) [Φ(z,s,u0) - Σ_{j<K} z^j (u0+j)^(-s)]`.
/// For `|z| < 1` the division by `z^K` costs `K log2(1/|z|)` bits, which are
/// added up front; `None` when that cost is unreasonable.
fn shifted(pt: &LerchPoint, ctx: &Ctx) -> Result<Option<Approx>> {
    let k = (pt.u.to_f64() - 2.0).ceil().max(0.0) as u32;
    if k == 0 {
        return Ok(None);
    }
    let loss = (k as f64) * (-pt.z.log2_abs()).max(0.0);
    if loss > MAX_SHIFT_BITS {
        return Ok(None);
    }
    let extra = loss.ceil() as u32 + 16;
    let inner = ctx.raised(extra)?;
    let p = inner.prec;
    let u0 = Float::with_val(p, &pt.u - k);
    let base = LerchPoint::from_parts(pt.z.with_prec(p), pt.s.with_prec(p), u0.clone())?;
    let r = dispatch(&base, base.classify(), &inner)?;
    let z = pt.z.with_prec(p);
    let s = pt.s.with_prec(p);
    let mut head = Cx::zero(p);
    let mut zj = Cx::real(p, 1);
    for j in 0..k {
        head += &(&zj * &pow_neg(&Float::with_val(p, &u0 + j), &s));
        zj = &zj * &z;
    }
    // zj now holds z^K
    let inv = zj.recip();
    let value = (&(&r.value.with_prec(p) - &head) * &inv).with_prec(ctx.prec);
    let mut err = Float::with_val(ERR_PREC, &r.err * &inv.abs());
    err += pow2(head.log2_abs() + inv.log2_abs() - p as f64 + 4.0);
    err += rounding_err(&value, ctx.prec);
    Ok(Some(Approx::new(value, err, Method::UShift7, r.terms_used + k as usize, p)))
}
