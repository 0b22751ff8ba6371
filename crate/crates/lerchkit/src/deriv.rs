//! `∂Φ/∂s` at non-positive integers and along `z = 1`, tabulated special
//! values, and a finite-difference cross-check.

use std::fmt;

use rug::Float;

use crate::error::{Error, Result};
use crate::lerch::hasse::{growth_guard, near_pole, shift_count, weights_harmonic};
use crate::lerch::series::NEGZ_RATIO_LIMIT;
use crate::lerch::{phi_auto, LerchPoint};
use crate::numeric::binomial::{BinomialSeries, Tail};
use crate::numeric::cx::{pi, pow2, Cx};
use crate::numeric::{rounding_err, Approx, Ctx, Method, ERR_PREC};
use crate::special::oracle::{ln_gamma, oracle, oracle_err, zeta_real};

const NEGZ_PATIENCE: usize = 6;
const HASSE_PATIENCE: usize = 12;

/// Coefficients `c_j(n)` with `(u + z d/dz)^m [w^n/(1-z)] =
/// Σ_j c_j (-w)^j w^n / (1-z)` where `w = -z/(1-z)`.
///
/// One application maps `w^a/(1-z)` to `((u+a) w^a - (a+1) w^(a+1))/(1-z)`.
fn operator_weights(m: u32, n: usize, u: &Float, p: u32) -> Vec<Float> {
    let mut c = vec![Float::with_val(p, 1)];
    for _ in 0..m {
        let mut next = vec![Float::new(p); c.len() + 1];
        for (j, cj) in c.iter().enumerate() {
            let a = Float::with_val(p, u + (n + j) as u32);
            next[j] += Float::with_val(p, &a * cj);
            next[j + 1] += Float::with_val(p, cj * (n + j + 1) as u32);
        }
        c = next;
    }
    c
}

/// `∂Φ/∂s(z, -m, u)` for `Re z < 1/2`, from the differentiated half-plane
/// series with `(u + z d/dz)^m` carried out on each outer term:
/// `(1/(1-z)) Σ_n w^n W_n Σ_k (-1)^(k+1) C(n,k) ln(u+k)`,
/// `W_n = Σ_j c_j(n) (-w)^j`.
pub fn dphi_ds_negz(m: u32, z: &Cx, u: &Float, ctx: &Ctx) -> Result<Approx> {
    if z.re >= 0.5 {
        return Err(Error::domain("derivative series needs Re z < 1/2"));
    }
    if !(u.is_sign_positive() && !u.is_zero()) {
        return Err(Error::domain("u must be positive"));
    }
    let p0 = ctx.guarded(16)?;
    let z0 = z.with_prec(p0);
    let inv = z0.one_minus().recip();
    let w = -&(&z0 * &inv);
    let ratio = w.abs_f64();
    if ratio > NEGZ_RATIO_LIMIT {
        return Err(Error::SlowConvergence {
            ratio,
            limit: NEGZ_RATIO_LIMIT,
        });
    }
    let values = |p: u32, cap: usize| -> Result<Vec<Cx>> {
        Ok((0..=cap)
            .map(|k| Cx::from_real(-Float::with_val(p, u + k as u32).ln()))
            .collect())
    };
    let weights = |p: u32, cap: usize| -> Vec<Cx> {
        let w = w.with_prec(p);
        let neg_w = -&w;
        let up = Float::with_val(p, u);
        let mut out = Vec::with_capacity(cap + 1);
        let mut wn = Cx::real(p, 1);
        for n in 0..=cap {
            let c = operator_weights(m, n, &up, p);
            let mut poly = Cx::zero(p);
            for cj in c.iter().rev() {
                poly = &poly * &neg_w;
                poly.re += cj;
            }
            out.push(&wn * &poly);
            wn = &wn * &w;
        }
        out
    };
    let growth = (m as f64) * 8.0;
    let initial = if ratio > 0.0 {
        ((ctx.tol.bits() + growth) / -ratio.log2()).ceil() as usize + 8
    } else {
        1
    };
    let series = BinomialSeries {
        name: "dphi_ds_negz",
        values: &values,
        weights: &weights,
        patience: NEGZ_PATIENCE,
        tail: Tail::Geometric(ratio.max(0.5)),
        initial_terms: initial,
        extra_guard: 8 + 2 * m,
    };
    let sum = series.sum(ctx)?;
    let inv = inv.with_prec(sum.prec);
    let value = (&sum.value * &inv).with_prec(ctx.prec);
    let err = Float::with_val(ERR_PREC, &sum.err * &inv.abs()) + rounding_err(&value, ctx.prec);
    Ok(Approx::new(value, err, Method::NegzSeries, sum.terms, sum.prec))
}

/// `Σ_n (1/(n+1)) Σ_k (-1)^(k+1) C(n,k) ln(u+k) (u+k)^(1-s)`, i.e.
/// `d/ds [(s-1) Φ(1,s,u)]`, with `u` first moved up to `U = u + K`:
/// `combo(s,u) = Σ_{k<K} (u+k)^(-s) [1 - (s-1) ln(u+k)] + combo(s,U)`.
fn combo_core(s: &Cx, u: &Float, ctx: &Ctx) -> Result<(Approx, usize)> {
    if !(u.is_sign_positive() && !u.is_zero()) {
        return Err(Error::domain("u must be positive"));
    }
    let shift = shift_count(u, ctx);
    let big_u = Float::with_val(ctx.prec + 16, u + shift as u32);
    let guard = growth_guard(s, big_u.to_f64() + 4.0 * ctx.tol.bits()) + 8;
    let p0 = ctx.guarded(guard + 16)?;
    let e = s.with_prec(p0).add_real(&Float::with_val(p0, -1));
    let values = |p: u32, cap: usize| -> Result<Vec<Cx>> {
        let e = e.with_prec(p);
        Ok((0..=cap)
            .map(|k| {
                let x = Float::with_val(p, &big_u + k as u32);
                let lx = Float::with_val(p, x.ln_ref());
                Cx::pow_neg_from_ln(&lx, &e).scale(&-lx)
            })
            .collect())
    };
    let series = BinomialSeries {
        name: "dphi_ds_hasse_combo",
        values: &values,
        weights: &weights_harmonic,
        patience: HASSE_PATIENCE,
        tail: Tail::Algebraic(big_u.to_f64()),
        initial_terms: 2 * big_u.to_f64() as usize + 16,
        extra_guard: guard,
    };
    let sum = series.sum(ctx)?;
    let p = sum.prec;
    let s_p = s.with_prec(p);
    let e = e.with_prec(p);
    let mut head = Cx::zero(p);
    for k in 0..shift {
        let x = Float::with_val(p, u + k as u32);
        let lx = Float::with_val(p, x.ln_ref());
        let t = Cx::pow_neg_from_ln(&lx, &s_p);
        let factor = (&e * &Cx::from_real(lx)).one_minus();
        head += &(&t * &factor);
    }
    let mut err = sum.err;
    err += pow2(head.log2_abs() + (shift.max(1) as f64).log2() - p as f64 + 2.0);
    let value = (&sum.value + &head).with_prec(ctx.prec);
    err += rounding_err(&value, ctx.prec);
    Ok((Approx::new(value, err, Method::HasseSeries, sum.terms + shift, p), shift))
}

/// `Φ(1,s,u) + (s-1) ∂Φ/∂s(1,s,u)`.
pub fn dphi_ds_hasse_combo(s: &Cx, u: &Float, ctx: &Ctx) -> Result<Approx> {
    if near_pole(s, ctx.prec) {
        return Err(Error::Pole("s=1".into()));
    }
    Ok(combo_core(s, u, ctx)?.0)
}

/// `∂Φ/∂s(1, s, u)` recovered from the combination and the Hasse value.
pub fn dphi_ds_hurwitz(s: &Cx, u: &Float, ctx: &Ctx) -> Result<Approx> {
    let one = Float::with_val(s.prec(), 1);
    let sm1 = s.add_real(&-one);
    let amp = (-sm1.log2_abs()).max(0.0).ceil() as u32;
    let inner = ctx.raised(amp + 8)?;
    let combo = dphi_ds_hasse_combo(s, u, &inner)?;
    let phi = crate::lerch::phi_hasse(s, u, &inner)?;
    let inv = sm1.with_prec(inner.prec).recip();
    let value = (&(&combo.value - &phi.value) * &inv).with_prec(ctx.prec);
    let err = Float::with_val(ERR_PREC, (combo.err + &phi.err) * inv.abs()) + rounding_err(&value, ctx.prec);
    Ok(Approx::new(value, err, Method::HasseSeries, combo.terms_used + phi.terms_used, inner.prec))
}

/// `-ψ(u) = lim_{s→1} (Φ(1,s,u) - 1/(s-1))`, the value of the combination
/// at `s = 1`.
pub fn digamma_limit(u: &Float, ctx: &Ctx) -> Result<Approx> {
    let one = Cx::real(ctx.prec, 1);
    let (r, _) = combo_core(&one, u, ctx)?;
    Ok(r.with_method(Method::LimitForm))
}

/// Tabulated closed forms of `∂Φ/∂s` at special points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DsKey {
    /// `(z,s,u) = (-1,-1,1)`: `ln(A^3 / (2^(1/3) e^(1/4)))`.
    GlaisherAlternating,
    /// `(-1,-2,1)`: `7ζ(3)/(4π²)`.
    AperyAlternating,
    /// `(-1,-1,1/2)`: `G/π`.
    CatalanHalf,
    /// `(-1,0,u)`: `ln(Γ(u/2) / (Γ((u+1)/2) √2))`.
    GammaRatio(f64),
    /// `(1/2,0,1)`: `-2 ln σ`.
    Somos,
    /// `(1,0,u)`: `ln(Γ(u)/√(2π))`.
    LnGamma(f64),
}

impl DsKey {
    pub fn point(self) -> (Cx, i32, f64) {
        let p = 64;
        match self {
            DsKey::GlaisherAlternating => (Cx::real(p, -1), -1, 1.0),
            DsKey::AperyAlternating => (Cx::real(p, -1), -2, 1.0),
            DsKey::CatalanHalf => (Cx::real(p, -1), -1, 0.5),
            DsKey::GammaRatio(u) => (Cx::real(p, -1), 0, u),
            DsKey::Somos => (Cx::real(p, 0.5), 0, 1.0),
            DsKey::LnGamma(u) => (Cx::real(p, 1), 0, u),
        }
    }

    /// Parse `glaisher_alt`, `apery_alt`, `catalan_half`, `gamma_ratio:u`,
    /// `somos`, `lngamma:u`.
    pub fn parse(key: &str) -> Result<Self> {
        let (head, arg) = match key.split_once(':') {
            Some((h, a)) => {
                let v: f64 = a.parse().map_err(|_| Error::UnknownKey(key.to_string()))?;
                (h, Some(v))
            }
            None => (key, None),
        };
        match (head, arg) {
            ("glaisher_alt", None) => Ok(DsKey::GlaisherAlternating),
            ("apery_alt", None) => Ok(DsKey::AperyAlternating),
            ("catalan_half", None) => Ok(DsKey::CatalanHalf),
            ("somos", None) => Ok(DsKey::Somos),
            ("gamma_ratio", Some(u)) if u > 0.0 => Ok(DsKey::GammaRatio(u)),
            ("lngamma", Some(u)) if u > 0.0 => Ok(DsKey::LnGamma(u)),
            _ => Err(Error::UnknownKey(key.to_string())),
        }
    }
}

impl fmt::Display for DsKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DsKey::GlaisherAlternating => f.write_str("glaisher_alt"),
            DsKey::AperyAlternating => f.write_str("apery_alt"),
            DsKey::CatalanHalf => f.write_str("catalan_half"),
            DsKey::GammaRatio(u) => write!(f, "gamma_ratio:{u}"),
            DsKey::Somos => f.write_str("somos"),
            DsKey::LnGamma(u) => write!(f, "lngamma:{u}"),
        }
    }
}

/// Closed-form value for a tabulated key, from the oracle constants.
pub fn dphi_ds_registry(key: DsKey, prec: u32) -> Result<Approx> {
    let p = prec + 16;
    let ln2 = oracle("ln2", p)?;
    let v = match key {
        DsKey::GlaisherAlternating => {
            let a = oracle("glaisher", p)?.ln() * 3u32;
            a - ln2 / 3u32 - Float::with_val(p, 0.25)
        }
        DsKey::AperyAlternating => {
            let z3 = zeta_real(&Float::with_val(p, 3), p)?;
            z3 * 7u32 / (Float::with_val(p, pi(p).square()) * 4u32)
        }
        DsKey::CatalanHalf => oracle("catalan", p)? / pi(p),
        DsKey::GammaRatio(u) => {
            let u = Float::with_val(p, u);
            let a = ln_gamma(&Float::with_val(p, &u / 2u32), p)?;
            let b = ln_gamma(&Float::with_val(p, (u + 1u32) / 2u32), p)?;
            a - b - ln2 / 2u32
        }
        DsKey::Somos => oracle("somos_sigma", p)?.ln() * -2i32,
        DsKey::LnGamma(u) => {
            let l = ln_gamma(&Float::with_val(p, u), p)?;
            l - Float::with_val(p, pi(p) * 2u32).ln() / 2u32
        }
    };
    let value = Cx::from_real(v).with_prec(prec);
    let err = oracle_err(&value.re, prec);
    Ok(Approx::new(value, err, Method::Oracle, 0, p))
}

/// Central difference `(Φ(z,s+h,u) - Φ(z,s-h,u)) / (2h)` with
/// `h = 2^(-p/3)`, each side evaluated `p/3` bits higher.
pub fn dphi_ds_fd(pt: &LerchPoint, ctx: &Ctx) -> Result<Approx> {
    let third = ctx.prec / 3;
    let inner = ctx.raised(third + 8)?;
    let p = inner.prec;
    let mut h = Float::with_val(p, 1);
    h >>= third;
    let at = |sign: i32| -> Result<Approx> {
        let s = pt.s.with_prec(p).add_real(&Float::with_val(p, &h * sign));
        let q = LerchPoint::from_parts(pt.z.with_prec(p), s, Float::with_val(p, &pt.u))?;
        phi_auto(&q, &inner)
    };
    let plus = at(1)?;
    let minus = at(-1)?;
    let two_h = Float::with_val(p, &h * 2u32);
    let value = (&plus.value - &minus.value).div_real(&two_h).with_prec(ctx.prec);
    let scale = plus.value.abs_f64().max(1.0).log2();
    let mut err = Float::with_val(ERR_PREC, plus.err.clone().max(&minus.err) / &h);
    err += pow2(scale + 3.0 - 2.0 * third as f64);
    err += rounding_err(&value, ctx.prec);
    let terms = plus.terms_used + minus.terms_used;
    Ok(Approx::new(value, err, Method::FiniteDifference, terms, p))
}

/// `∂Φ/∂s(1, s, u)` at a tabulated `u` by the chosen series route, used
/// to pair registry values with the series they check.
pub fn lngamma_series(u: &Float, ctx: &Ctx) -> Result<Approx> {
    dphi_ds_hurwitz(&Cx::real(ctx.prec, 0), u, ctx)
}
