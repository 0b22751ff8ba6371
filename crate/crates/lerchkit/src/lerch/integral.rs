use rug::Float;

use super::{DomainClass, LerchPoint};
use crate::error::{Error, Result};
use crate::numeric::cx::Cx;
use crate::numeric::{rounding_err, Approx, Ctx, Method, ERR_PREC};
use crate::quad::de::{tanh_sinh, Endpoint, Integrand1D, Interval};
use crate::special::oracle::gamma_cx;

/// `Φ = (1/Γ(s)) ∫_0^∞ e^(-ut) t^(s-1) / (1 - z e^(-t)) dt` for `z` off
/// `[1, ∞)` and `Re s > 0`.
pub fn phi_integral(pt: &LerchPoint, ctx: &Ctx) -> Result<Approx> {
    if matches!(pt.classify(), DomainClass::ZCut | DomainClass::ZEqOne) {
        return Err(Error::domain("integral representation needs z off [1, inf)"));
    }
    if pt.s.re <= 0 {
        return Err(Error::domain("integral representation needs Re s > 0"));
    }
    let work = ctx.guarded(16)?;
    let gamma = gamma_cx(&pt.s, work)?;
    let inner = ctx
        .with_prec(work)
        .with_tol(ctx.tol.scaled(gamma.log2_abs().min(0.0)));
    let z = pt.z.clone();
    let s_minus_1 = pt.s.add_real(&Float::with_val(pt.s.prec(), -1));
    let u = pt.u.clone();
    let integrand = Integrand1D::new(Interval::positive_axis(), move |a| {
        let p = a.x.prec();
        let t = &a.from_a;
        let lt = Float::with_val(p, t.ln_ref());
        let power = Cx::from_real(lt).with_prec(p);
        let mut num = (&s_minus_1.with_prec(p) * &power).exp();
        num = num.scale(&Float::with_val(p, -(Float::with_val(p, &u * t))).exp());
        let et = Float::with_val(p, -t).exp();
        let den = z.with_prec(p).scale(&et).one_minus();
        Ok(&num / &den)
    })
    .with_endpoints(Endpoint::Algebraic(pt.s.re.to_f64() - 1.0), Endpoint::Regular);
    let q = tanh_sinh(&integrand, &inner)?;
    let inv = gamma.recip();
    let value = (&q.value.with_prec(work) * &inv).with_prec(ctx.prec);
    let err = Float::with_val(ERR_PREC, &q.err * &inv.abs()) + rounding_err(&value, ctx.prec);
    Ok(Approx::new(value, err, Method::IntegralRep, q.terms_used, q.precision_used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Tol;
    use rug::float::Constant;

    fn pt(z: (f64, f64), s: f64, u: f64) -> LerchPoint {
        LerchPoint::new(Cx::from_f64(128, z.0, z.1), Cx::real(128, s), u).unwrap()
    }

    #[test]
    fn log_case() {
        let ctx = Ctx::new(128).with_tol(Tol::new(1e-30));
        let r = phi_integral(&pt((0.5, 0.0), 1.0, 1.0), &ctx).unwrap();
        let expect = Float::with_val(128, Constant::Log2) * 2u32;
        assert!(r.dist(&Cx::from_real(expect)) < 1e-29);
    }

    #[test]
    fn catalan_cases() {
        let ctx = Ctx::new(128).with_tol(Tol::new(1e-30));
        let g = Float::with_val(128, Constant::Catalan);
        let r = phi_integral(&pt((-1.0, 0.0), 2.0, 0.5), &ctx).unwrap();
        assert!(r.dist(&Cx::from_real(Float::with_val(128, &g * 4u32))) < 1e-28);
        let r = phi_integral(&pt((0.0, 1.0), 2.0, 1.0), &ctx).unwrap();
        assert!((Float::with_val(128, r.re() - &g)).abs() < 1e-28);
    }

    #[test]
    fn rejects_cut_and_nonpositive_s() {
        let ctx = Ctx::new(128);
        assert!(phi_integral(&pt((2.0, 0.0), 2.0, 1.0), &ctx).is_err());
        assert!(phi_integral(&pt((0.5, 0.0), -0.5, 1.0), &ctx).is_err());
    }
}
