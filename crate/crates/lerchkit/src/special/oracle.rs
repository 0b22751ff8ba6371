//! Reference implementations that share no code with the binomial series
//! routes: Stirling-type asymptotics for lnΓ and ψ, Euler–Maclaurin for the
//! Hurwitz zeta function, and the named constants.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::binomial::{euler_transform_to_tol, GUARD_BITS};
use crate::numeric::cx::{log2_abs, pi, pow2, Cx};
use crate::numeric::{Ctx, Tol};

/// Stable constant keys accepted by [`oracle`].
pub const CONSTANT_KEYS: [&str; 9] = [
    "gamma",
    "catalan",
    "glaisher",
    "somos_sigma",
    "golden_ratio",
    "apery",
    "pi",
    "e",
    "ln2",
];

static BERNOULLI: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// `B_0..=B_m` with `B_1 = -1/2`, from `Σ_{k<=m} C(m+1,k) B_k = 0`.
pub fn bernoulli_numbers(m: usize) -> Vec<Rational> {
    let cache = BERNOULLI.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut b = cache.lock().unwrap_or_else(|e| e.into_inner());
    while b.len() <= m {
        let n = b.len();
        let mut acc = Rational::new();
        let mut c = Integer::from(1);
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from(bk * &c);
            c *= (n + 1 - k) as u32;
            c /= (k + 1) as u32;
        }
        acc /= -((n + 1) as i64);
        b.push(acc);
    }
    b[..=m].to_vec()
}

/// Working precision and shift threshold for the asymptotic expansions.
fn asymptotic_setup(prec: u32) -> (u32, f64) {
    let work = prec + 32;
    (work, 0.3 * work as f64 + 12.0)
}

/// `lnΓ(z)` for complex `z` away from the poles. The imaginary part is
/// correct modulo `2π`, which is all `exp` needs.
pub fn ln_gamma_cx(z: &Cx, prec: u32) -> Result<Cx> {
    let (work, threshold) = asymptotic_setup(prec);
    let z = z.with_prec(work);
    if z.re < 0.5 {
        if z.is_real() && z.re.is_integer() {
            return Err(Error::Pole(format!("Γ at {}", z.re.to_f64())));
        }
        // Γ(z) Γ(1 - z) = π / sin(πz)
        let piz = z.scale(&pi(work));
        let sin = piz.sin();
        let refl = ln_gamma_cx(&z.one_minus(), work)?;
        let ln_pi = Cx::from_real(pi(work).ln());
        return Ok((&(&ln_pi - &sin.ln()) - &refl).with_prec(prec));
    }
    let mut w = z.clone();
    let mut shift_logs = Cx::zero(work);
    while w.abs_f64() < threshold {
        shift_logs += &w.ln();
        w = w.add_real(&Float::with_val(work, 1));
    }
    let b = bernoulli_numbers(2 * threshold as usize + 40);
    let half = Float::with_val(work, 0.5);
    let mut acc = &(&w.add_real(&-half) * &w.ln()) - &w;
    acc.re += Float::with_val(work, pi(work) * 2u32).ln() / 2u32;
    let w_inv = w.recip();
    let w_inv2 = w_inv.square();
    let mut pw = w_inv;
    let ref_log2 = acc.log2_abs();
    for j in 1..b.len() / 2 {
        let c = Rational::from(&b[2 * j] / Integer::from(2 * j * (2 * j - 1)));
        let term = pw.scale(&Float::with_val(work, &c));
        acc += &term;
        if term.log2_abs() < ref_log2 - work as f64 {
            break;
        }
        pw = &pw * &w_inv2;
    }
    Ok((&acc - &shift_logs).with_prec(prec))
}

/// `Γ(z)` for complex `z`.
pub fn gamma_cx(z: &Cx, prec: u32) -> Result<Cx> {
    Ok(ln_gamma_cx(z, prec + 16)?.exp().with_prec(prec))
}

/// `lnΓ(x)` for real `x > 0`.
pub fn ln_gamma(x: &Float, prec: u32) -> Result<Float> {
    if !(x.is_sign_positive() && !x.is_zero()) {
        return Err(Error::domain("ln_gamma oracle needs x > 0"));
    }
    Ok(ln_gamma_cx(&Cx::from_real(x.clone()), prec)?.re)
}

/// Euler beta `B(u, v) = Γ(u)Γ(v)/Γ(u+v)` for positive reals.
pub fn euler_beta(u: &Float, v: &Float, prec: u32) -> Result<Float> {
    let p = prec + 16;
    let uv = Float::with_val(p, u + v);
    let l = ln_gamma(u, p)? + ln_gamma(v, p)? - ln_gamma(&uv, p)?;
    Ok(Float::with_val(prec, l.exp()))
}

/// `ψ(x)` for real `x > 0`, via `ψ(x) = ψ(x+K) - Σ_{k<K} 1/(x+k)` and the
/// asymptotic series at `x + K`.
pub fn digamma(x: &Float, prec: u32) -> Result<Float> {
    if !(x.is_sign_positive() && !x.is_zero()) {
        return Err(Error::domain("digamma oracle needs x > 0"));
    }
    let (work, threshold) = asymptotic_setup(prec);
    let mut w = Float::with_val(work, x);
    let mut shift = Float::new(work);
    while w < threshold {
        shift += Float::with_val(work, w.recip_ref());
        w += 1u32;
    }
    let b = bernoulli_numbers(2 * threshold as usize + 40);
    let mut acc = Float::with_val(work, w.ln_ref()) - Float::with_val(work, 2u32 * &w).recip();
    let w_inv2 = Float::with_val(work, w.square_ref()).recip();
    let mut pw = w_inv2.clone();
    for j in 1..b.len() / 2 {
        let c = Rational::from(&b[2 * j] / Integer::from(2 * j));
        let term = Float::with_val(work, &pw * &c);
        acc -= &term;
        if log2_abs(&term) < -(work as f64) {
            break;
        }
        pw *= &w_inv2;
    }
    acc -= shift;
    Ok(Float::with_val(prec, acc))
}

/// Hurwitz zeta `ζ(s, u)` and its `s`-derivative by Euler–Maclaurin
/// summation, for complex `s ≠ 1` and real `u > 0`.
pub fn hurwitz_zeta_em(s: &Cx, u: &Float, prec: u32) -> Result<(Cx, Cx)> {
    let work = prec + 32 + (s.abs_f64().max(1.0).log2() as u32) * 4;
    let s = s.with_prec(work);
    let one = Float::with_val(work, 1);
    let s_minus_1 = s.add_real(&-one.clone());
    if s_minus_1.is_zero() {
        return Err(Error::Pole("s=1".into()));
    }
    if !(u.is_sign_positive() && !u.is_zero()) {
        return Err(Error::domain("Hurwitz zeta oracle needs u > 0"));
    }
    let n_terms = (0.4 * work as f64 + 2.0 * s.abs_f64()).ceil() as u32 + 8;
    let mut val = Cx::zero(work);
    let mut der = Cx::zero(work);
    for k in 0..n_terms {
        let x = Float::with_val(work, u + k);
        let lx = x.ln();
        let t = Cx::pow_neg_from_ln(&lx, &s);
        der -= &t.scale(&lx);
        val += &t;
    }
    let x = Float::with_val(work, u + n_terms);
    let lx = Float::with_val(work, x.ln_ref());
    let lx_c = Cx::from_real(lx.clone());
    // x^(1-s)/(s-1)
    let x_1s = Cx::pow_neg_from_ln(&lx, &s_minus_1);
    let inv = s_minus_1.recip();
    let tail = &x_1s * &inv;
    val += &tail;
    der -= &(&tail * &lx_c);
    der -= &(&tail * &inv);
    // x^(-s)/2
    let x_s = Cx::pow_neg_from_ln(&lx, &s);
    let half = x_s.mul_pow2(-1);
    val += &half;
    der -= &(&half * &lx_c);
    // Σ B_{2j}/(2j)! (s)_{2j-1} x^(-s-2j+1)
    let b = bernoulli_numbers(work as usize / 2 + 64);
    let mut poch = s.clone();
    let mut dpoch = Cx::real(work, 1);
    let x_inv = Float::with_val(work, x.recip_ref());
    let x_inv2 = Float::with_val(work, x_inv.square_ref());
    let mut xp = x_s.scale(&x_inv);
    let mut fact = Integer::from(2);
    let ref_log2 = val.log2_abs().max(der.log2_abs());
    let mut prev = f64::INFINITY;
    for j in 1..b.len() / 2 {
        let c = Float::with_val(work, Rational::from(&b[2 * j] / &fact));
        let term_v = (&poch * &xp).scale(&c);
        let term_d = (&(&dpoch * &xp) - &(&(&poch * &xp) * &lx_c)).scale(&c);
        let mag = term_v.log2_abs().max(term_d.log2_abs());
        if mag > prev {
            break;
        }
        val += &term_v;
        der += &term_d;
        if mag < ref_log2 - work as f64 {
            break;
        }
        prev = mag;
        for i in [2 * j - 1, 2 * j] {
            let si = s.add_real(&Float::with_val(work, i));
            dpoch = &(&dpoch * &si) + &poch;
            poch = &poch * &si;
        }
        xp = xp.scale(&x_inv2);
        fact *= (2 * j + 1) as u32 * (2 * j + 2) as u32;
    }
    Ok((val.with_prec(prec), der.with_prec(prec)))
}

/// Riemann `ζ(s)` for real `s ≠ 1`.
pub fn zeta_real(s: &Float, prec: u32) -> Result<Float> {
    let one = Float::with_val(prec, 1);
    Ok(hurwitz_zeta_em(&Cx::from_real(s.clone()), &one, prec)?.0.re)
}

/// Catalan's constant from the Euler-transformed `Σ (-1)^k/(2k+1)^2`.
fn catalan(prec: u32) -> Result<Float> {
    let a = |k: usize, p: u32| Float::with_val(p, (2 * k + 1) as u64).square().recip();
    let ctx = Ctx::new(prec).with_tol(Tol::from_bits(prec as f64 + 4.0));
    Ok(euler_transform_to_tol(&a, &ctx)?.value.re)
}

/// Somos's quadratic recurrence constant `σ = exp(Σ_{k>=2} ln k / 2^k)`.
fn somos_sigma(prec: u32) -> Float {
    let work = prec + GUARD_BITS;
    let mut acc = Float::new(work);
    let mut k = 2u32;
    loop {
        let mut t = Float::with_val(work, k).ln();
        t >>= k;
        acc += &t;
        if log2_abs(&t) < -(work as f64) {
            break;
        }
        k += 1;
    }
    Float::with_val(prec, acc.exp())
}

/// Glaisher–Kinkelin `A = exp(1/12 - ζ'(-1))`.
fn glaisher(prec: u32) -> Result<Float> {
    let work = prec + 16;
    let (_, d) = hurwitz_zeta_em(&Cx::real(work, -1), &Float::with_val(work, 1), work)?;
    let x = Float::with_val(work, Rational::from((1, 12))) - d.re;
    Ok(Float::with_val(prec, x.exp()))
}

fn compute(name: &str, prec: u32) -> Result<Float> {
    let work = prec + 16;
    let v = match name {
        "gamma" => -digamma(&Float::with_val(work, 1), work)?,
        "catalan" => catalan(work)?,
        "glaisher" => glaisher(work)?,
        "somos_sigma" => somos_sigma(work),
        "golden_ratio" => (Float::with_val(work, 5).sqrt() + 1u32) / 2u32,
        "apery" => zeta_real(&Float::with_val(work, 3), work)?,
        "pi" => Float::with_val(work, Constant::Pi),
        "e" => Float::with_val(work, 1).exp(),
        "ln2" => Float::with_val(work, Constant::Log2),
        _ => return Err(Error::UnknownKey(name.to_string())),
    };
    Ok(Float::with_val(prec, v))
}

type Cache = Mutex<HashMap<(String, u32), Float>>;
static CONSTANTS: OnceLock<Cache> = OnceLock::new();

/// Named constant at `prec` bits, cached per precision.
pub fn oracle(name: &str, prec: u32) -> Result<Float> {
    let cache = CONSTANTS.get_or_init(Default::default);
    let key = (name.to_string(), prec);
    if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(v.clone());
    }
    let v = compute(name, prec)?;
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, v.clone());
    Ok(v)
}

/// Relative-looking absolute error `2^(log2|v| - prec + 4)` used when an
/// oracle value enters a comparison.
pub fn oracle_err(v: &Float, prec: u32) -> Float {
    pow2(log2_abs(v).max(0.0) - prec as f64 + 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec().max(b.prec()), a - b).abs() < tol
    }

    #[test]
    fn bernoulli_first_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[3], 0);
        assert_eq!(b[12], Rational::from((-691, 2730)));
    }

    #[test]
    fn gamma_constant_digits() {
        let g = oracle("gamma", 128).unwrap();
        assert!(g.to_string_radix(10, Some(11)).starts_with("5.772156649"));
        assert!(close(&g, &Float::with_val(128, Constant::Euler), 1e-36));
    }

    #[test]
    fn catalan_constant_digits() {
        let g = oracle("catalan", 200).unwrap();
        assert!(close(&g, &Float::with_val(200, Constant::Catalan), 1e-58));
        assert!((g.to_f64() - 0.9159655942).abs() < 1e-10);
    }

    #[test]
    fn somos_and_glaisher() {
        let s = oracle("somos_sigma", 128).unwrap();
        assert!((s.to_f64() - 1.6616879496).abs() < 1e-10);
        let a = oracle("glaisher", 128).unwrap();
        assert!((a.to_f64() - 1.2824271291).abs() < 1e-10);
    }

    #[test]
    fn unknown_key_is_rejected() {
        assert!(matches!(oracle("tau", 64), Err(Error::UnknownKey(_))));
    }

    #[test]
    fn ln_gamma_matches_mpfr() {
        for x in [0.1, 0.5, 1.0, 2.5, 7.25, 40.0] {
            let fx = Float::with_val(160, x);
            let ours = ln_gamma(&fx, 160).unwrap();
            let theirs = Float::with_val(160, fx.ln_gamma_ref());
            assert!(close(&ours, &theirs, 1e-44), "x={x}");
        }
    }

    #[test]
    fn complex_gamma_reflection_and_recurrence() {
        let z = Cx::from_f64(128, -1.3, 0.7);
        let g = gamma_cx(&z, 128).unwrap();
        let g1 = gamma_cx(&z.add_real(&Float::with_val(128, 1)), 128).unwrap();
        assert!(g1.dist_f64(&(&g * &z)) < 1e-34);
        let half = gamma_cx(&Cx::real(128, 0.5), 128).unwrap();
        let sqrt_pi = pi(128).sqrt();
        assert!(close(&half.re, &sqrt_pi, 1e-36));
        assert!(matches!(gamma_cx(&Cx::real(128, -2), 128), Err(Error::Pole(_))));
    }

    #[test]
    fn digamma_matches_mpfr() {
        for x in [0.25, 0.5, 1.0, 1.5, std::f64::consts::PI, 30.0] {
            let fx = Float::with_val(160, x);
            let ours = digamma(&fx, 160).unwrap();
            let theirs = Float::with_val(160, fx.digamma_ref());
            assert!(close(&ours, &theirs, 1e-44), "x={x}");
        }
    }

    #[test]
    fn hurwitz_matches_mpfr_zeta() {
        for s in [2.0, 3.0, 0.5, -1.0, -2.5, 10.0] {
            let fs = Float::with_val(160, s);
            let (z, _) = hurwitz_zeta_em(&Cx::from_real(fs.clone()), &Float::with_val(160, 1), 160).unwrap();
            let theirs = Float::with_val(160, fs.zeta_ref());
            assert!(close(&z.re, &theirs, 1e-43), "s={s}");
        }
    }

    #[test]
    fn hurwitz_shift_and_derivative() {
        let p = 128;
        let s = Cx::from_f64(p, -0.5, 2.0);
        let u = Float::with_val(p, 0.5);
        let (a, da) = hurwitz_zeta_em(&s, &u, p).unwrap();
        let (b, db) = hurwitz_zeta_em(&s, &Float::with_val(p, 1.5), p).unwrap();
        // ζ(s,u) - ζ(s,u+1) = u^-s
        let head = Cx::pow_neg_from_ln(&u.clone().ln(), &s);
        assert!((&a - &b).dist_f64(&head) < 1e-34);
        let dhead = head.scale(&-u.ln());
        assert!((&da - &db).dist_f64(&dhead) < 1e-34);
        // ζ'(0) = -ln(2π)/2
        let (_, d0) = hurwitz_zeta_em(&Cx::real(p, 0), &Float::with_val(p, 1), p).unwrap();
        let expect = -(Float::with_val(p, pi(p) * 2u32).ln() / 2u32);
        assert!(close(&d0.re, &expect, 1e-35));
        assert!(matches!(
            hurwitz_zeta_em(&Cx::real(p, 1), &Float::with_val(p, 1), p),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn euler_beta_values() {
        let b = euler_beta(&Float::with_val(128, 1), &Float::with_val(128, 4), 128).unwrap();
        assert!(close(&b, &Float::with_val(128, 0.25), 1e-36));
    }
}
