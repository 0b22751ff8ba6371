use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::binomial::binomial_row;
use crate::numeric::cx::{pow2, Cx};
use crate::numeric::{rounding_err, Approx, Ctx, Method, PolyQ};

/// Numerator of `Φ(z, -m, u) = P_m(z, u) / (1-z)^(m+1)` as coefficients of
/// `z^i`, each a polynomial in `u`.
///
/// Applying `u + z ∂/∂z` to `P/(1-z)^(m+1)` gives
/// `P_{m+1} = (uP + zP')(1-z) + (m+1) z P`, starting from `P_0 = 1`.
pub fn closed_form_numerator(m: u32) -> Vec<PolyQ> {
    let one = PolyQ::constant(Rational::from(1));
    let mut p = vec![one];
    for step in 0..m {
        let mut next = vec![PolyQ::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            // (u + i) c_i z^i
            let a = PolyQ::from_coeffs(vec![Rational::from(i as u32), Rational::from(1)]);
            next[i] = &next[i] + &(&a * c);
            // (step + 2 - u - (i + 1)) c_i z^(i+1)
            let k = step as i64 + 1 - i as i64;
            let b = PolyQ::from_coeffs(vec![Rational::from(k), Rational::from(-1)]);
            next[i + 1] = &next[i + 1] + &(&b * c);
        }
        while next.last().is_some_and(PolyQ::is_zero) && next.len() > 1 {
            next.pop();
        }
        p = next;
    }
    p
}

/// Exact `Φ(z, -m, u)` for rational `z ≠ 1` and `u`.
pub fn phi_closed_rational(z: &Rational, m: u32, u: &Rational) -> Result<Rational> {
    if *z == 1 {
        return Err(Error::Pole("z=1".into()));
    }
    let num = closed_form_numerator(m);
    let mut acc = Rational::new();
    for c in num.iter().rev() {
        acc *= z;
        acc += c.eval(u);
    }
    let den = 1 - z.clone();
    let mut d = Rational::from(1);
    for _ in 0..=m {
        d *= &den;
    }
    Ok(acc / d)
}

/// `Φ(z, -m, u)` from its rational closed form.
pub fn phi_closed_nonpos_int_s(z: &Cx, m: u32, u: &Float, ctx: &Ctx) -> Result<Approx> {
    let work = ctx.guarded(32 + 2 * m)?;
    let z = z.with_prec(work);
    let one_minus = z.one_minus();
    if one_minus.is_zero() {
        return Err(Error::Pole("z=1".into()));
    }
    let u = Cx::from_real(Float::with_val(work, u));
    let num = closed_form_numerator(m);
    let mut acc = Cx::zero(work);
    let mut magnitude = 0f64;
    let zabs = z.abs_f64();
    for (i, c) in num.iter().enumerate().rev() {
        acc = &acc * &z;
        let ci = c.eval_cx(&u);
        magnitude = magnitude.max(ci.log2_abs() + i as f64 * zabs.max(1e-300).log2());
        acc += &ci;
    }
    let mut den = Cx::real(work, 1);
    for _ in 0..=m {
        den = &den * &one_minus;
    }
    let value = (&acc / &den).with_prec(ctx.prec);
    let spread = magnitude + ((num.len() + 1) as f64).log2() - den.log2_abs();
    let err = pow2(spread - work as f64 + 4.0) + rounding_err(&value, ctx.prec);
    Ok(Approx::new(value, err, Method::ClosedForm, num.len(), work))
}

/// `(x + k)^m` as a polynomial in `x`.
fn shifted_power(k: u32, m: u32) -> PolyQ {
    let row = binomial_row(m);
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    for (j, c) in row.iter().enumerate() {
        let kp = Integer::from(k).pow((m as usize - j) as u32);
        coeffs.push(Rational::from(c * kp));
    }
    PolyQ::from_coeffs(coeffs)
}

/// `Σ_{n<=m} weight(n) Σ_k (-1)^k C(n,k) (x+k)^m`.
fn binomial_poly(m: u32, weight: impl Fn(u32) -> Rational) -> PolyQ {
    let powers: Vec<PolyQ> = (0..=m).map(|k| shifted_power(k, m)).collect();
    let mut acc = PolyQ::zero();
    for n in 0..=m {
        let mut inner = PolyQ::zero();
        for (k, c) in binomial_row(n).iter().enumerate() {
            let mut c = Rational::from(c);
            if k % 2 == 1 {
                c = -c;
            }
            inner = &inner + &powers[k].scale(&c);
        }
        acc = &acc + &inner.scale(&weight(n));
    }
    acc
}

/// Bernoulli polynomial `B_m(x) = Σ_{n<=m} 1/(n+1) Σ_k (-1)^k C(n,k) (x+k)^m`.
pub fn bernoulli_poly(m: u32) -> PolyQ {
    binomial_poly(m, |n| Rational::from((1, n + 1)))
}

/// Euler polynomial `E_m(x) = Σ_{n<=m} 2^-n Σ_k (-1)^k C(n,k) (x+k)^m`.
pub fn euler_poly(m: u32) -> PolyQ {
    binomial_poly(m, |n| Rational::from((1, Integer::from(1) << n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::oracle::bernoulli_numbers;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn umbral_bernoulli(m: u32) -> PolyQ {
        let b = bernoulli_numbers(m as usize);
        let row = binomial_row(m);
        let mut coeffs = vec![Rational::new(); m as usize + 1];
        for k in 0..=m as usize {
            coeffs[m as usize - k] = Rational::from(&b[k] * &row[k]);
        }
        PolyQ::from_coeffs(coeffs)
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(phi_closed_rational(&q(1, 2), 0, &q(7, 1)).unwrap(), 2);
        assert_eq!(phi_closed_rational(&q(-1, 1), 1, &q(1, 4)).unwrap(), q(-1, 8));
        assert_eq!(phi_closed_rational(&q(-3, 1), 0, &q(5, 1)).unwrap(), q(1, 4));
        assert!(matches!(phi_closed_rational(&q(1, 1), 2, &q(1, 1)), Err(Error::Pole(_))));
        // ζ*(-2) = Φ(-1, -2, 1) = 0
        assert_eq!(phi_closed_rational(&q(-1, 1), 2, &q(1, 1)).unwrap(), 0);
    }

    #[test]
    fn closed_form_matches_finite_series() {
        // Φ(z,-m,u) for |z| < 1 from a long exact partial sum bound
        let z = q(1, 3);
        for m in 0..6u32 {
            let exact = phi_closed_rational(&z, m, &q(5, 2)).unwrap();
            let mut partial = Rational::new();
            let mut zk = Rational::from(1);
            for k in 0..400 {
                let base = q(5, 2) + Rational::from(k);
                partial += &zk * base.pow(m as i32);
                zk *= &z;
            }
            let gap = Rational::from(&exact - &partial).abs().to_f64();
            assert!(gap < 1e-150, "m={m}");
        }
    }

    #[test]
    fn numeric_closed_form() {
        let ctx = Ctx::new(128);
        let r = phi_closed_nonpos_int_s(&Cx::from_f64(128, 0.3, -0.8), 4, &Float::with_val(128, 0.75), &ctx)
            .unwrap();
        let d = crate::lerch::series::phi_series_direct(
            &crate::LerchPoint::new(Cx::from_f64(128, 0.3, -0.8), Cx::real(128, -4), 0.75).unwrap(),
            &ctx,
        )
        .unwrap();
        assert!(r.dist(&d.value) < 1e-30);
    }

    #[test]
    fn bernoulli_small() {
        assert_eq!(bernoulli_poly(0), PolyQ::constant(q(1, 1)));
        assert_eq!(bernoulli_poly(1).to_string(), "x - 1/2");
        assert_eq!(bernoulli_poly(2).to_string(), "x^2 - x + 1/6");
    }

    #[test]
    fn euler_small() {
        assert_eq!(euler_poly(0), PolyQ::constant(q(1, 1)));
        assert_eq!(euler_poly(1).to_string(), "x - 1/2");
        assert_eq!(euler_poly(2).to_string(), "x^2 - x");
    }

    #[test]
    fn bernoulli_matches_umbral_form() {
        for m in 0..=12 {
            assert_eq!(bernoulli_poly(m), umbral_bernoulli(m), "m={m}");
        }
    }

    #[test]
    fn euler_matches_functional_equation_and_closed_form() {
        for m in 0..=12u32 {
            let e = euler_poly(m);
            // E_m(x+1) + E_m(x) = 2 x^m pins down a degree-m polynomial
            let shifted = e.compose_linear(&q(1, 1), &q(1, 1));
            let mut two_xm = vec![Rational::new(); m as usize + 1];
            two_xm[m as usize] = Rational::from(2);
            assert_eq!(&shifted + &e, PolyQ::from_coeffs(two_xm), "m={m}");
            // E_m(u) = 2 Φ(-1, -m, u)
            for u in [q(1, 3), q(5, 2), q(-7, 4)] {
                let c = phi_closed_rational(&q(-1, 1), m, &u).unwrap() * 2u32;
                assert_eq!(e.eval(&u), c);
            }
        }
    }

    #[test]
    fn reflection_symmetry() {
        for m in 0..=12u32 {
            let sign = if m % 2 == 0 { q(1, 1) } else { q(-1, 1) };
            let b = bernoulli_poly(m);
            assert_eq!(b.compose_linear(&q(1, 1), &q(-1, 1)), b.scale(&sign));
            let e = euler_poly(m);
            assert_eq!(e.compose_linear(&q(1, 1), &q(-1, 1)), e.scale(&sign));
        }
    }
}
