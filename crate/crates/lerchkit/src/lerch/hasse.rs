use rug::Float;

use super::pow_neg;
use crate::error::{Error, Result};
use crate::numeric::binomial::{BinomialSeries, Tail};
use crate::numeric::cx::{pow2, Cx};
use crate::numeric::{rounding_err, Approx, Ctx, Method, ERR_PREC};

const HASSE_PATIENCE: usize = 12;

/// Offset the Hasse series is evaluated at. The inner sums decay only like
/// `n^-U`, so small `u` is first moved up to `U` with the head
/// `Σ_{k<K} (u+k)^(-s)` summed directly.
pub(crate) fn shift_count(u: &Float, ctx: &Ctx) -> usize {
    let target = (0.5 * ctx.tol.bits()).max(8.0);
    (target - u.to_f64()).max(0.0).ceil() as usize
}

pub(crate) fn weights_harmonic(p: u32, cap: usize) -> Vec<Cx> {
    (0..=cap)
        .map(|n| Cx::from_real(Float::with_val(p, n + 1).recip()))
        .collect()
}

/// `|s - 1| < 2^(-p/4)` counts as the pole.
pub(crate) fn near_pole(s: &Cx, prec: u32) -> bool {
    let one = Float::with_val(s.prec(), 1);
    s.add_real(&-one).log2_abs() < -(prec as f64) / 4.0
}

/// Extra guard bits for the growth of `(U+k)^(1-s)` when `Re s < 1`.
pub(crate) fn growth_guard(s: &Cx, upper: f64) -> u32 {
    let excess = (1.0 - s.re.to_f64()).max(0.0);
    (excess * upper.max(2.0).log2()).ceil() as u32 + 8
}

/// Hurwitz zeta `Φ(1, s, u)` from
/// `(1/(s-1)) Σ_n (1/(n+1)) Σ_k (-1)^k C(n,k) (u+k)^(1-s)`.
pub fn phi_hasse(s: &Cx, u: &Float, ctx: &Ctx) -> Result<Approx> {
    if near_pole(s, ctx.prec) {
        return Err(Error::Pole("s=1".into()));
    }
    if !(u.is_sign_positive() && !u.is_zero()) {
        return Err(Error::domain("u must be positive"));
    }
    let shift = shift_count(u, ctx);
    let big_u = Float::with_val(ctx.prec + 16, u + shift as u32);
    let guard = growth_guard(s, big_u.to_f64() + 4.0 * ctx.tol.bits());
    let head_prec = ctx.guarded(guard + 16)?;

    let s_minus_1 = s.with_prec(head_prec).add_real(&Float::with_val(head_prec, -1));
    let values = |p: u32, cap: usize| -> Result<Vec<Cx>> {
        let e = s_minus_1.with_prec(p);
        Ok((0..=cap)
            .map(|k| pow_neg(&Float::with_val(p, &big_u + k as u32), &e))
            .collect())
    };
    let series = BinomialSeries {
        name: "phi_hasse",
        values: &values,
        weights: &weights_harmonic,
        patience: HASSE_PATIENCE,
        tail: Tail::Algebraic(big_u.to_f64()),
        initial_terms: 2 * big_u.to_f64() as usize + 16,
        extra_guard: guard,
    };
    let sum = series.sum(ctx)?;
    let p = sum.prec;
    let inv = s_minus_1.with_prec(p).recip();
    let mut value = &sum.value * &inv;
    let mut err = Float::with_val(ERR_PREC, &sum.err * &inv.abs());

    let s_p = s.with_prec(p);
    let mut head = Cx::zero(p);
    for k in 0..shift {
        head += &pow_neg(&Float::with_val(p, u + k as u32), &s_p);
    }
    err += pow2(head.log2_abs() + (shift.max(1) as f64).log2() - p as f64);
    value += &head;
    let value = value.with_prec(ctx.prec);
    err += rounding_err(&value, ctx.prec);
    Ok(Approx::new(value, err, Method::HasseSeries, sum.terms + shift, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::cx::pi;
    use crate::special::oracle::hurwitz_zeta_em;

    fn one(p: u32) -> Float {
        Float::with_val(p, 1)
    }

    #[test]
    fn zeta_two() {
        let r = phi_hasse(&Cx::real(128, 2), &one(128), &Ctx::new(128)).unwrap();
        let z2 = Float::with_val(128, pi(128).square()) / 6u32;
        assert!(r.dist(&Cx::from_real(z2)) < 1e-33);
    }

    #[test]
    fn zeta_zero_and_minus_one() {
        let ctx = Ctx::new(128);
        let r = phi_hasse(&Cx::real(128, 0), &one(128), &ctx).unwrap();
        assert!(r.dist(&Cx::real(128, -0.5)) < 1e-34);
        let r = phi_hasse(&Cx::real(128, -1), &one(128), &ctx).unwrap();
        let expect = Float::with_val(128, -1) / 12u32;
        assert!(r.dist(&Cx::from_real(expect)) < 1e-34);
    }

    #[test]
    fn pole() {
        let ctx = Ctx::new(128);
        assert!(matches!(phi_hasse(&Cx::real(128, 1), &one(128), &ctx), Err(Error::Pole(_))));
        let close = Cx::from_f64(128, 1.0 + 1e-12, 0.0);
        assert!(matches!(phi_hasse(&close, &one(128), &ctx), Err(Error::Pole(_))));
    }

    #[test]
    fn matches_euler_maclaurin_grid() {
        let ctx = Ctx::new(128);
        for (sr, si) in [(2.0, 0.0), (3.0, 0.0), (0.5, 0.0), (-0.5, 2.0)] {
            for u in [1.0, 0.5, 3.0] {
                let s = Cx::from_f64(128, sr, si);
                let u = Float::with_val(128, u);
                let r = phi_hasse(&s, &u, &ctx).unwrap();
                let (o, _) = hurwitz_zeta_em(&s, &u, 160).unwrap();
                assert!(r.dist(&o) < 1e-30, "s={sr}+{si}i u={u}: {}", r.dist(&o));
            }
        }
    }
}
