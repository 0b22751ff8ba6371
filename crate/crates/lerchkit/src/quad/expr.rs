//! Closed-form right-hand sides: values carried with a first-order error
//! estimate through the arithmetic that combines library functions.

use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::Float;

use crate::deriv::{dphi_ds_fd, dphi_ds_negz};
use crate::error::Result;
use crate::lerch::{phi_auto, LerchPoint};
use crate::numeric::cx::{pi, Cx};
use crate::numeric::{rounding_err, Approx, Ctx, Method, ERR_PREC};
use crate::special::functions::{beta_dirichlet, chi, polylog, zeta, zeta_star};
use crate::special::oracle::{digamma, gamma_cx, hurwitz_zeta_em, oracle};

/// A complex value with an absolute error estimate.
#[derive(Debug, Clone)]
pub struct Val {
    pub v: Cx,
    pub e: f64,
}

impl Val {
    fn mag(&self) -> f64 {
        self.v.abs_f64()
    }

    pub fn ln(&self) -> Val {
        Val {
            e: self.e / self.mag() + (4.0 - self.v.prec() as f64).exp2(),
            v: self.v.ln(),
        }
    }

    pub fn exp(&self) -> Val {
        let v = self.v.exp();
        Val { e: v.abs_f64() * self.e, v }
    }

    pub fn sqrt(&self) -> Val {
        let v = self.v.sqrt();
        Val { e: self.e / (2.0 * v.abs_f64()), v }
    }

    pub fn square(&self) -> Val {
        self.clone() * self.clone()
    }

    pub fn recip(&self) -> Val {
        let m = self.mag();
        Val {
            v: self.v.recip(),
            e: self.e / (m * m),
        }
    }

    /// `self^r` for real `r`, principal branch.
    pub fn powf(&self, r: f64) -> Val {
        let p = self.v.prec();
        let v = self.v.pow(&Cx::real(p, r));
        let e = r.abs() * v.abs_f64() / self.mag() * self.e + v.abs_f64() * (4.0 - p as f64).exp2();
        Val { v, e }
    }

    pub fn re(&self) -> Val {
        Val {
            v: Cx::from_real(self.v.re.clone()),
            e: self.e,
        }
    }

    /// Round to `prec` bits as an [`Approx`].
    pub fn approx(self, prec: u32) -> Approx {
        let value = self.v.with_prec(prec);
        let err = Float::with_val(ERR_PREC, self.e) + rounding_err(&value, prec);
        Approx::new(value, err, Method::ClosedForm, 0, self.v.prec())
    }
}

impl From<Approx> for Val {
    fn from(a: Approx) -> Val {
        Val {
            e: a.err_f64(),
            v: a.value,
        }
    }
}

impl Add for Val {
    type Output = Val;
    fn add(self, o: Val) -> Val {
        Val {
            v: &self.v + &o.v,
            e: self.e + o.e,
        }
    }
}

impl Sub for Val {
    type Output = Val;
    fn sub(self, o: Val) -> Val {
        Val {
            v: &self.v - &o.v,
            e: self.e + o.e,
        }
    }
}

impl Mul for Val {
    type Output = Val;
    fn mul(self, o: Val) -> Val {
        Val {
            e: self.mag() * o.e + o.mag() * self.e + self.e * o.e,
            v: &self.v * &o.v,
        }
    }
}

impl Div for Val {
    type Output = Val;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Val) -> Val {
        self * o.recip()
    }
}

impl Neg for Val {
    type Output = Val;
    fn neg(self) -> Val {
        Val { v: -&self.v, e: self.e }
    }
}

impl Mul<f64> for Val {
    type Output = Val;
    fn mul(self, c: f64) -> Val {
        let p = self.v.prec();
        self * Val::exact(Cx::real(p, c))
    }
}

impl Add<f64> for Val {
    type Output = Val;
    fn add(self, c: f64) -> Val {
        let p = self.v.prec();
        self + Val::exact(Cx::real(p, c))
    }
}

impl Sub<f64> for Val {
    type Output = Val;
    fn sub(self, c: f64) -> Val {
        self + (-c)
    }
}

impl Val {
    pub fn exact(v: Cx) -> Val {
        Val { v, e: 0.0 }
    }
}

/// Evaluation context for right-hand sides, working a few guard bits above
/// the requested precision.
pub struct Rhs {
    pub ctx: Ctx,
    pub p: u32,
}

impl Rhs {
    pub fn new(ctx: &Ctx) -> Result<Rhs> {
        let ctx = ctx.raised(24)?;
        Ok(Rhs { p: ctx.prec, ctx })
    }

    pub fn num(&self, x: f64) -> Val {
        Val::exact(Cx::real(self.p, x))
    }

    /// `n / d` rounded once.
    pub fn q(&self, n: i64, d: i64) -> Val {
        let v = Float::with_val(self.p, n) / d;
        Val {
            e: v.to_f64().abs() * (1.0 - self.p as f64).exp2(),
            v: Cx::from_real(v),
        }
    }

    pub fn zc(&self, re: f64, im: f64) -> Cx {
        Cx::from_f64(self.p, re, im)
    }

    pub fn z(&self, re: f64) -> Cx {
        Cx::real(self.p, re)
    }

    pub fn pi(&self) -> Val {
        let v = Cx::from_real(pi(self.p));
        Val { e: v.abs_f64() * (2.0 - self.p as f64).exp2(), v }
    }

    /// A named oracle constant.
    pub fn c(&self, name: &str) -> Result<Val> {
        let v = oracle(name, self.p)?;
        let e = v.to_f64().abs().max(1.0) * (4.0 - self.p as f64).exp2();
        Ok(Val { v: Cx::from_real(v), e })
    }

    pub fn phi(&self, z: &Cx, s: f64, u: f64) -> Result<Val> {
        let pt = LerchPoint::from_parts(z.clone(), Cx::real(self.p, s), Float::with_val(self.p, u))?;
        Ok(phi_auto(&pt, &self.ctx)?.into())
    }

    pub fn gamma(&self, x: f64) -> Result<Val> {
        let v = gamma_cx(&Cx::real(self.p, x), self.p)?;
        Ok(Val { e: v.abs_f64() * (8.0 - self.p as f64).exp2(), v })
    }

    pub fn zeta(&self, s: f64) -> Result<Val> {
        Ok(zeta(&Cx::real(self.p, s), &self.ctx)?.into())
    }

    pub fn zeta_star(&self, s: f64) -> Result<Val> {
        Ok(zeta_star(&Cx::real(self.p, s), &self.ctx)?.into())
    }

    pub fn beta(&self, s: f64) -> Result<Val> {
        Ok(beta_dirichlet(&Cx::real(self.p, s), &self.ctx)?.into())
    }

    pub fn chi(&self, s: f64, z: &Cx) -> Result<Val> {
        Ok(chi(&Cx::real(self.p, s), z, &self.ctx)?.into())
    }

    pub fn li(&self, n: i32, z: &Cx) -> Result<Val> {
        Ok(polylog(n, z, &self.ctx)?.into())
    }

    /// `Li_n(y - i0)` for real `y > 1`, `n = 2, 3`, by inversion with
    /// `ln(-y) = ln y + iπ`.
    pub fn li_above_one(&self, n: i32, y: f64) -> Result<Val> {
        let inv = self.li(n, &self.z(1.0 / y))?;
        let pi = self.pi();
        let ln_neg = self.num(y).ln() + Val::exact(Cx::from_parts(Float::new(self.p), pi.v.re.clone()));
        let pi2_6 = pi.square() * (1.0 / 6.0);
        match n {
            2 => Ok(-pi2_6 - ln_neg.square() * 0.5 - inv),
            3 => Ok(inv - pi2_6 * ln_neg.clone() - ln_neg.clone() * ln_neg.square() * (1.0 / 6.0)),
            _ => Err(crate::Error::domain("inversion only for orders 2 and 3")),
        }
    }

    pub fn psi(&self, u: f64) -> Result<Val> {
        let v = digamma(&Float::with_val(self.p, u), self.p)?;
        let e = v.to_f64().abs().max(1.0) * (8.0 - self.p as f64).exp2();
        Ok(Val { v: Cx::from_real(v), e })
    }

    /// `ψ'(u) = ζ(2, u)`.
    pub fn trigamma(&self, u: f64) -> Result<Val> {
        let (v, _) = hurwitz_zeta_em(&Cx::real(self.p, 2), &Float::with_val(self.p, u), self.p)?;
        Ok(Val { e: v.abs_f64() * (8.0 - self.p as f64).exp2(), v })
    }

    pub fn lngamma(&self, u: f64) -> Result<Val> {
        Ok(self.gamma(u)?.ln())
    }

    /// `∂Φ/∂s(z, -m, u)`: the differentiated half-plane series for
    /// `Re z < 1/2`, a central difference elsewhere.
    pub fn dphi(&self, z: &Cx, m: u32, u: f64) -> Result<Val> {
        let uf = Float::with_val(self.p, u);
        if z.re < 0.5 {
            Ok(dphi_ds_negz(m, z, &uf, &self.ctx)?.into())
        } else {
            let pt = LerchPoint::from_parts(z.clone(), Cx::real(self.p, -(m as f64)), uf)?;
            Ok(dphi_ds_fd(&pt, &self.ctx)?.into())
        }
    }
}
