use rug::Float;

use super::series::phi_series_negz;
use super::LerchPoint;
use crate::error::{Error, Result};
use crate::numeric::cx::Cx;
use crate::numeric::{rounding_err, Approx, Ctx, Method, ERR_PREC};

const MAX_SQUARINGS: u32 = 12;

/// Leaves must sit well inside the half-plane series' region.
const LEAF_RATIO: f64 = 0.8;

fn leaf_ok(zeta: &Cx) -> bool {
    if zeta.re >= 0.5 || zeta.abs_f64() >= 0.9 {
        return false;
    }
    let w = zeta.abs_f64() / zeta.one_minus().abs_f64();
    w <= LEAF_RATIO
}

/// Splitting the series into even and odd indices `d` times:
/// `Φ(z,s,u) = 2^(-ds) Σ_{j<2^d} z^j Φ(z^(2^d), s, (u+j)/2^d)`,
/// with the smallest `d >= 1` whose leaves suit the half-plane series.
pub fn phi_split(pt: &LerchPoint, ctx: &Ctx) -> Result<Approx> {
    let work = ctx.guarded(16)?;
    let z = pt.z.with_prec(work);
    let mut zeta = z.clone();
    let mut d = 0u32;
    loop {
        if d == MAX_SQUARINGS {
            return Err(Error::domain("splitting found no leaf inside |z^(2^d)| < 0.9"));
        }
        zeta = zeta.square();
        d += 1;
        if leaf_ok(&zeta) {
            break;
        }
    }
    let count = 1usize << d;
    let leaf_ctx = ctx.with_prec(work).with_tol(ctx.tol.scaled(-(d as f64)));
    let mut sum = Cx::zero(work);
    let mut err = Float::with_val(ERR_PREC, 0);
    let mut terms = 0;
    let mut zj = Cx::real(work, 1);
    for j in 0..count {
        if !zj.is_zero() || j == 0 {
            let mut uj = Float::with_val(work, &pt.u + j as u32);
            uj >>= d;
            let leaf = LerchPoint::from_parts(zeta.clone(), pt.s.with_prec(work), uj)?;
            let r = phi_series_negz(&leaf, &leaf_ctx)?;
            err += Float::with_val(ERR_PREC, &r.err * &zj.abs());
            sum += &(&zj * &r.value);
            terms += r.terms_used;
        }
        zj = &zj * &z;
    }
    // 2^(-ds) = exp(-s d ln 2)
    let ln2d = Float::with_val(work, rug::float::Constant::Log2) * d;
    let scale = Cx::pow_neg_from_ln(&ln2d, &pt.s.with_prec(work));
    let value = (&sum * &scale).with_prec(ctx.prec);
    err *= scale.abs();
    err += rounding_err(&value, ctx.prec);
    Ok(Approx::new(value, err, Method::Split27, terms, work))
}
