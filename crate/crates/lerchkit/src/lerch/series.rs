use rug::Float;

use super::{pow_neg, LerchPoint};
use crate::error::{Error, Result};
use crate::numeric::binomial::{BinomialSeries, Tail};
use crate::numeric::cx::{pow2, Cx};
use crate::numeric::{rounding_err, Approx, Ctx, Method, ERR_PREC};

const DIRECT_PATIENCE: usize = 4;
const NEGZ_PATIENCE: usize = 6;

/// Largest `|-z/(1-z)|` the half-plane series accepts.
pub const NEGZ_RATIO_LIMIT: f64 = 0.99;

/// `Σ_k z^k (u+k)^(-s)` summed term by term.
///
/// Inside the unit disk the tail is geometric. On the unit circle
/// (`Re s > 1` at `z = 1`, `Re s > 0` elsewhere) the partial sum gets an
/// explicit tail correction and the stopping rule uses its residual.
pub fn phi_series_direct(pt: &LerchPoint, ctx: &Ctx) -> Result<Approx> {
    let r = pt.z.abs_f64();
    let slack = 2f64.powi(-(ctx.prec as i32) / 2);
    if r < 1.0 - slack {
        return direct_disk(pt, ctx, r);
    }
    if (r - 1.0).abs() > slack {
        return Err(Error::domain("direct series needs |z| <= 1"));
    }
    let sigma = pt.s.re.to_f64();
    if pt.is_z_one() {
        if sigma <= 1.0 {
            return Err(Error::domain("direct series at z = 1 needs Re s > 1"));
        }
    } else if sigma <= 0.0 {
        return Err(Error::domain("direct series on |z| = 1 needs Re s > 0"));
    }
    direct_circle(pt, ctx)
}

fn direct_disk(pt: &LerchPoint, ctx: &Ctx, r: f64) -> Result<Approx> {
    let work = ctx.guarded(16)?;
    let z = pt.z.with_prec(work);
    let s = pt.s.with_prec(work);
    let mut zk = Cx::real(work, 1);
    let mut sum = Cx::zero(work);
    let mut biggest = f64::NEG_INFINITY;
    let mut quiet = 0;
    for k in 0..ctx.limits.max_terms {
        let term = &zk * &pow_neg(&Float::with_val(work, &pt.u + k as u32), &s);
        sum += &term;
        let mag = term.log2_abs();
        biggest = biggest.max(mag);
        if ctx.tol.negligible(mag, sum.log2_abs().max(biggest)) {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= DIRECT_PATIENCE || z.is_zero() {
            let value = sum.with_prec(ctx.prec);
            let tail = if z.is_zero() {
                f64::NEG_INFINITY
            } else {
                mag + (r / (1.0 - r)).log2()
            };
            let err = pow2(tail) + pow2(biggest + ((k + 1) as f64).log2() - work as f64)
                + rounding_err(&value, ctx.prec);
            return Ok(Approx::new(value, err, Method::DirectSeries, k + 1, work));
        }
        zk = &zk * &z;
    }
    Err(Error::NonConvergence {
        method: "phi_series_direct",
        work: ctx.limits.max_terms,
    })
}

/// Unit-circle summation. With `a_k = (u+k)^(-s)` the tail from `N` on is
/// approximated by repeated summation by parts,
/// `Σ_{j<3} z^(N+j) Δ^j a_N / (1-z)^(j+1)`, or at `z = 1` by the integral
/// plus endpoint corrections.
fn direct_circle(pt: &LerchPoint, ctx: &Ctx) -> Result<Approx> {
    let work = ctx.guarded(32)?;
    let z = pt.z.with_prec(work);
    let s = pt.s.with_prec(work);
    let z_one = pt.is_z_one();
    let one_minus = z.one_minus();
    let inv = one_minus.recip();
    let one = Float::with_val(work, 1);
    let s_abs = s.abs_f64();

    let a = |k: usize| pow_neg(&Float::with_val(work, &pt.u + k as u32), &s);
    // window holds a_N..a_{N+3}
    let mut window: Vec<Cx> = (0..4).map(a).collect();
    let mut partial = Cx::zero(work);
    let mut zn = Cx::real(work, 1);
    for n in 0..ctx.limits.max_terms {
        let x = Float::with_val(work, &pt.u + n as u32);
        let (tail, residual_log2) = if z_one {
            // (u+N)^(1-s)/(s-1) + a_N/2 + s a_N / (12 (u+N))
            let sm1 = s.add_real(&-one.clone());
            let mut t = &pow_neg(&x, &sm1) * &sm1.recip();
            t += &window[0].mul_pow2(-1);
            t += &(&window[0] * &s).div_real(&Float::with_val(work, &x * 12u32));
            let c = s_abs * (s_abs + 1.0) * (s_abs + 2.0) / 720.0;
            (t, c.log2() - (pt.s.re.to_f64() + 3.0) * x.to_f64().log2())
        } else {
            let d1 = &window[1] - &window[0];
            let d2 = &(&window[2] - &window[1]) - &d1;
            let d3 = &(&(&window[3] - &window[2]) - &(&window[2] - &window[1])) - &d2;
            let mut t = &(&zn * &window[0]) * &inv;
            let zn1 = &zn * &z;
            t += &(&(&zn1 * &d1) * &inv.square());
            let zn2 = &zn1 * &z;
            t += &(&(&zn2 * &d2) * &(&inv.square() * &inv));
            (t, d3.log2_abs() + 4.0 * inv.log2_abs())
        };
        let estimate = &partial + &tail;
        if n > 0 && ctx.tol.negligible(residual_log2, estimate.log2_abs().max(0.0)) {
            let value = estimate.with_prec(ctx.prec);
            let err = pow2(residual_log2 + 1.0)
                + pow2(estimate.log2_abs().max(0.0) + ((n + 1) as f64).log2() - work as f64)
                + rounding_err(&value, ctx.prec);
            return Ok(Approx::new(value, err, Method::DirectSeries, n + 4, work));
        }
        partial += &(&zn * &window[0]);
        zn = &zn * &z;
        window.remove(0);
        window.push(a(n + 4));
    }
    Err(Error::NonConvergence {
        method: "phi_series_direct",
        work: ctx.limits.max_terms,
    })
}

/// `Φ = (1/(1-z)) Σ_n w^n Σ_k (-1)^k C(n,k) (u+k)^(-s)` with `w = -z/(1-z)`,
/// valid for `Re z < 1/2`.
pub fn phi_series_negz(pt: &LerchPoint, ctx: &Ctx) -> Result<Approx> {
    if pt.z.re >= 0.5 {
        return Err(Error::domain("half-plane series needs Re z < 1/2"));
    }
    let work0 = ctx.guarded(16)?;
    let z = pt.z.with_prec(work0);
    let inv = z.one_minus().recip();
    let w = -&(&z * &inv);
    let ratio = w.abs_f64();
    if ratio > NEGZ_RATIO_LIMIT {
        return Err(Error::SlowConvergence {
            ratio,
            limit: NEGZ_RATIO_LIMIT,
        });
    }
    let u = &pt.u;
    let s = &pt.s;
    let values = |p: u32, cap: usize| -> Result<Vec<Cx>> {
        let s = s.with_prec(p);
        Ok((0..=cap)
            .map(|k| pow_neg(&Float::with_val(p, u + k as u32), &s))
            .collect())
    };
    let weights = |p: u32, cap: usize| -> Vec<Cx> {
        let w = w.with_prec(p);
        let mut out = Vec::with_capacity(cap + 1);
        let mut acc = Cx::real(p, 1);
        for _ in 0..=cap {
            out.push(acc.clone());
            acc = &acc * &w;
        }
        out
    };
    let initial = if ratio > 0.0 {
        (ctx.tol.bits() / -ratio.log2()).ceil() as usize + 8
    } else {
        1
    };
    let series = BinomialSeries {
        name: "phi_series_negz",
        values: &values,
        weights: &weights,
        patience: NEGZ_PATIENCE,
        tail: Tail::Geometric(ratio),
        initial_terms: initial,
        extra_guard: 8,
    };
    let sum = series.sum(ctx)?;
    let inv = inv.with_prec(sum.prec);
    let value = (&sum.value * &inv).with_prec(ctx.prec);
    let err = Float::with_val(ERR_PREC, &sum.err * &inv.abs()) + rounding_err(&value, ctx.prec);
    Ok(Approx::new(value, err, Method::NegzSeries, sum.terms, sum.prec))
}
