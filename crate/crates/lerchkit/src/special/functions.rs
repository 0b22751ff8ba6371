use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::lerch::hasse::near_pole;
use crate::lerch::{phi_auto, phi_hasse, phi_series_negz, LerchPoint};
use crate::numeric::binomial::difference_table_real;
use crate::numeric::cx::{log2_abs, pow2, Cx};
use crate::numeric::{rounding_err, Approx, Ctx, Method, ERR_PREC};

fn two_pow_neg(s: &Cx, p: u32) -> Cx {
    Cx::pow_neg_from_ln(&Float::with_val(p, Constant::Log2), &s.with_prec(p))
}

fn point(z: Cx, s: Cx, u: Float) -> Result<LerchPoint> {
    LerchPoint::from_parts(z, s, u)
}

/// Riemann `ζ(s)` from the Knopp–Hasse series
/// `(1 - 2^(1-s))^-1 Σ_n 2^-(n+1) Σ_k (-1)^k C(n,k) (k+1)^-s`.
///
/// Where `2^(1-s)` is too close to 1 the Hasse series for `Φ(1,s,1)` is
/// used instead.
pub fn zeta(s: &Cx, ctx: &Ctx) -> Result<Approx> {
    if near_pole(s, ctx.prec) {
        return Err(Error::Pole("s=1".into()));
    }
    let p = ctx.prec + 16;
    let sm1 = s.with_prec(p).add_real(&Float::with_val(p, -1));
    // 1 - 2^(1-s)
    let factor = two_pow_neg(&sm1, p).one_minus();
    let amp = -factor.log2_abs();
    if amp > ctx.prec as f64 / 4.0 {
        return phi_hasse(s, &Float::with_val(ctx.prec, 1), ctx);
    }
    let inner = ctx.raised(amp.max(0.0).ceil() as u32 + 4)?;
    let q = inner.prec;
    let eta = phi_series_negz(&point(Cx::real(q, -1), s.with_prec(q), Float::with_val(q, 1))?, &inner)?;
    Ok(eta.times(&factor.recip()).rounded(ctx.prec).with_method(Method::KnoppHasse))
}

/// `ζ*(s) = Σ (-1)^(k-1) k^-s = Φ(-1, s, 1)`.
pub fn zeta_star(s: &Cx, ctx: &Ctx) -> Result<Approx> {
    let p = ctx.prec;
    phi_auto(&point(Cx::real(p, -1), s.clone(), Float::with_val(p, 1))?, ctx)
}

/// Dirichlet `β(s) = 2^-s Φ(-1, s, 1/2)`.
pub fn beta_dirichlet(s: &Cx, ctx: &Ctx) -> Result<Approx> {
    let p = ctx.prec;
    let inner = ctx.raised(4)?;
    let phi = phi_auto(&point(Cx::real(p, -1), s.clone(), Float::with_val(p, 0.5))?, &inner)?;
    Ok(phi.times(&two_pow_neg(s, inner.prec)).rounded(p))
}

/// Legendre `χ_s(z) = 2^-s z Φ(z², s, 1/2)`.
pub fn chi(s: &Cx, z: &Cx, ctx: &Ctx) -> Result<Approx> {
    let p = ctx.prec;
    let inner = ctx.raised(4)?;
    let phi = phi_auto(&point(z.square(), s.clone(), Float::with_val(p, 0.5))?, &inner)?;
    let c = &two_pow_neg(s, inner.prec) * &z.with_prec(inner.prec);
    Ok(phi.times(&c).rounded(p))
}

/// `Li_n(z) = z Φ(z, n, 1)`.
pub fn polylog(n: i32, z: &Cx, ctx: &Ctx) -> Result<Approx> {
    let p = ctx.prec;
    if z.im.is_zero() && z.re > 1 {
        return Err(Error::domain("unsupported domain: polylog at real z > 1"));
    }
    if z.is_zero() {
        return Ok(Approx::exact(Cx::zero(p), Method::DirectSeries, p));
    }
    if z.im.is_zero() && z.re == 1 && n <= 1 {
        return Err(Error::Pole(format!("polylog order {n} at z=1")));
    }
    let inner = ctx.raised(4)?;
    let phi = phi_auto(&point(z.clone(), Cx::real(p, n), Float::with_val(p, 1))?, &inner)?;
    Ok(phi.times(z).rounded(p))
}

/// `Σ_{n<=N} c_n Σ_k (-1)^k C(n,k) ln(u+k)` for weights `c_n` (zero where
/// `None`), with the drift over the last decade `N/10 < n <= N` as the
/// error.
fn log_series(u: &Float, n_cap: usize, ctx: &Ctx, weight: impl Fn(usize) -> Option<Rational>) -> Result<Approx> {
    if !(u.is_sign_positive() && !u.is_zero()) {
        return Err(Error::domain("u must be positive"));
    }
    let work = ctx.guarded(n_cap as u32 + 24)?;
    let values: Vec<Float> = (0..=n_cap)
        .map(|k| Float::with_val(work, u + k as u32).ln())
        .collect();
    let top = log2_abs(&values[n_cap]).max(0.0);
    let diffs = difference_table_real(values);
    let mut sum = Float::new(work);
    let mut earlier = Float::new(work);
    let check = n_cap / 10;
    let mut terms = 0;
    for (n, d) in diffs.iter().enumerate() {
        if let Some(c) = weight(n) {
            sum += Float::with_val(work, d * &c);
            terms += 1;
        }
        if n == check {
            earlier.clone_from(&sum);
        }
    }
    let value = Cx::from_real(sum.clone()).with_prec(ctx.prec);
    let mut err = Float::with_val(ERR_PREC, &sum - &earlier).abs();
    err += pow2(n_cap as f64 + top - work as f64 + 2.0);
    err += rounding_err(&value, ctx.prec);
    Ok(Approx::new(value, err, Method::LogSeries, terms, work))
}

/// `ψ(u) ≈ Σ_{n<=N} (1/(n+1)) Σ_k (-1)^k C(n,k) ln(u+k)`.
///
/// The error is the change between `N/10` and `N` terms, an estimate of how
/// far the partial sum still moves, not a bound.
pub fn digamma_series(u: &Float, ctx: &Ctx, n_cap: usize) -> Result<Approx> {
    log_series(u, n_cap.max(1), ctx, |n| Some(Rational::from((1, n as u64 + 1))))
}

/// `B(u, j) ≈ Σ_{j<=n<=N} (1/(n-j+1)) Σ_k (-1)^(k+1) C(n,k) ln(u+k)`.
pub fn euler_beta_series(u: &Float, j: usize, ctx: &Ctx, n_cap: usize) -> Result<Approx> {
    if j == 0 {
        return Err(Error::domain("j must be at least 1"));
    }
    log_series(u, n_cap.max(j + 1), ctx, |n| {
        (n >= j).then(|| Rational::from((-1, (n - j + 1) as u64)))
    })
}

/// `H_{n,r} = Σ_{k<=n} k^-r`.
pub fn harmonic(n: u64, r: u32) -> Rational {
    let mut h = Rational::new();
    for k in 1..=n {
        let kr = rug::Integer::from(k).pow(r);
        h += Rational::from((1, kr));
    }
    h
}

/// `|Σ_{n<=N} (H_{n,2}/n + 2 H_n/n²) z^n - (3 Li_3(z) - Li_2(z) ln(1-z))|`.
pub fn ramanujan_identity_residual(z: &Cx, n_terms: usize, ctx: &Ctx) -> Result<Float> {
    if z.norm_sqr() >= 1 {
        return Err(Error::domain("needs |z| < 1"));
    }
    let inner = ctx.raised(8)?;
    let p = inner.prec;
    let z = z.with_prec(p);
    let mut lhs = Cx::zero(p);
    let mut h1 = Rational::new();
    let mut h2 = Rational::new();
    let mut zn = Cx::real(p, 1);
    for n in 1..=n_terms as u64 {
        h1 += Rational::from((1, n));
        h2 += Rational::from((1, n * n));
        zn = &zn * &z;
        let c = Rational::from(&h2 / n) + Rational::from(&h1 * 2u32) / (n * n);
        lhs += &zn.scale(&Float::with_val(p, &c));
    }
    let li3 = polylog(3, &z, &inner)?;
    let li2 = polylog(2, &z, &inner)?;
    let rhs = &li3.value.scale(&Float::with_val(p, 3)) - &(&li2.value * &z.one_minus().ln());
    Ok((&lhs - &rhs).abs())
}
