//! Alternating binomial sums and the series built from them.
//!
//! A sum `Σ_k (-1)^k C(n,k) v_k` can be as much as `2^n` times smaller
//! than its largest term, so every such sum runs at `p + n + 16` bits and
//! is rounded back afterwards.

use rug::{Float, Integer};

use super::approx::{rounding_err, Approx, Ctx, Method, ERR_PREC};
use super::cx::{log2_abs, pow2, Cx};
use crate::error::{Error, Result};

/// Extra bits on top of `p + n` for an n-term alternating binomial sum.
pub const GUARD_BITS: u32 = 16;

/// Exact binomial coefficient; zero outside `0 <= k <= n`.
pub fn binom(n: u32, k: i64) -> Integer {
    if k < 0 || k > n as i64 {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n, k as u32))
}

/// Row `C(n, 0..=n)` by the multiplicative recurrence.
pub fn binomial_row(n: u32) -> Vec<Integer> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = Integer::from(1);
    row.push(c.clone());
    for k in 0..n {
        c *= n - k;
        c /= k + 1;
        row.push(c.clone());
    }
    row
}

/// `Σ_{k=0}^n (-1)^(k+1) C(n,k) ln(a + b k)`.
pub fn fdiff_log_sum(n: u32, a: &Float, b: &Float, ctx: &Ctx) -> Result<Approx> {
    if !(a.is_sign_positive() && !a.is_zero() && b.is_sign_positive() && !b.is_zero()) {
        return Err(Error::domain("fdiff_log_sum needs a > 0 and b > 0"));
    }
    let work = ctx.guarded(n + GUARD_BITS)?;
    let row = binomial_row(n);
    let mut sum = Float::new(work);
    let mut biggest = f64::NEG_INFINITY;
    for (k, c) in row.iter().enumerate() {
        let mut x = Float::with_val(work, b * k as u32);
        x += a;
        let mut t = x.ln();
        t *= c;
        biggest = biggest.max(log2_abs(&t));
        if k % 2 == 0 {
            sum -= &t;
        } else {
            sum += &t;
        }
    }
    Ok(finish_sum(Cx::from_real(sum), biggest, work, n, ctx.prec))
}

/// `Σ_{k=0}^n (-1)^k C(n,k) (u + k)^(-s)` with the power taken through the
/// real logarithm of `u + k`.
pub fn fdiff_pow_sum(n: u32, u: &Float, s: &Cx, ctx: &Ctx) -> Result<Approx> {
    if !(u.is_sign_positive() && !u.is_zero()) {
        return Err(Error::domain("fdiff_pow_sum needs u > 0"));
    }
    let work = ctx.guarded(n + GUARD_BITS)?;
    let s = s.with_prec(work);
    let row = binomial_row(n);
    let mut sum = Cx::zero(work);
    let mut biggest = f64::NEG_INFINITY;
    for (k, c) in row.iter().enumerate() {
        let x = Float::with_val(work, u + k as u32);
        let lx = x.ln();
        // exp(-s ln x) magnifies the rounding of its exponent by |s ln x|
        let amp = (2.0 + s.abs_f64() * lx.to_f64().abs()).log2();
        let mut t = Cx::pow_neg_from_ln(&lx, &s);
        t.re *= c;
        t.im *= c;
        biggest = biggest.max(t.log2_abs() + amp);
        if k % 2 == 0 {
            sum += &t;
        } else {
            sum -= &t;
        }
    }
    Ok(finish_sum(sum, biggest, work, n, ctx.prec))
}

fn finish_sum(sum: Cx, biggest_log2: f64, work: u32, n: u32, prec: u32) -> Approx {
    let value = sum.with_prec(prec);
    let mut err = pow2(biggest_log2 - work as f64 + ((n + 1) as f64).log2());
    err += rounding_err(&value, prec);
    Approx::new(value, err, Method::BinomialSum, n as usize + 1, work)
}

/// All sums `d_n = Σ_k (-1)^k C(n,k) v_k` for `n < v.len()` by repeated
/// differencing `v_k <- v_k - v_{k+1}`. Values must already carry guard
/// bits.
pub fn difference_table(mut v: Vec<Cx>) -> Vec<Cx> {
    let len = v.len();
    let mut out = Vec::with_capacity(len);
    for n in 0..len {
        out.push(v[0].clone());
        for k in 0..len - n - 1 {
            let (head, tail) = v.split_at_mut(k + 1);
            head[k] -= &tail[0];
        }
    }
    out
}

/// Real-valued [`difference_table`].
pub fn difference_table_real(mut v: Vec<Float>) -> Vec<Float> {
    let len = v.len();
    let mut out = Vec::with_capacity(len);
    for n in 0..len {
        out.push(v[0].clone());
        for k in 0..len - n - 1 {
            let (head, tail) = v.split_at_mut(k + 1);
            head[k] -= &tail[0];
        }
    }
    out
}

/// How the tail past the last summed term is estimated.
#[derive(Debug, Clone, Copy)]
pub enum Tail {
    /// Terms shrink by about `ratio` per step.
    Geometric(f64),
    /// Terms behave like `n^-(1+exponent)`.
    Algebraic(f64),
}

/// An outer series `Σ_n w_n d_n` whose inner sums `d_n` are alternating
/// binomial transforms of a value sequence.
pub struct BinomialSeries<'a> {
    pub name: &'static str,
    /// `v_0..=v_N` at the given precision.
    pub values: &'a (dyn Fn(u32, usize) -> Result<Vec<Cx>> + Sync),
    /// `w_0..=w_N` at the given precision.
    pub weights: &'a (dyn Fn(u32, usize) -> Vec<Cx> + Sync),
    /// Consecutive negligible terms required before stopping.
    pub patience: usize,
    pub tail: Tail,
    /// First guess at the number of terms.
    pub initial_terms: usize,
    /// Bits on top of the usual `n + 16` guard.
    pub extra_guard: u32,
}

#[derive(Debug, Clone)]
pub struct SeriesSum {
    pub value: Cx,
    pub err: Float,
    pub terms: usize,
    pub prec: u32,
}

impl BinomialSeries<'_> {
    pub fn sum(&self, ctx: &Ctx) -> Result<SeriesSum> {
        let mut cap = self.initial_terms.max(2 * self.patience).max(16);
        loop {
            if cap > ctx.limits.max_terms {
                return Err(Error::NonConvergence {
                    method: self.name,
                    work: ctx.limits.max_terms,
                });
            }
            let work = ctx.guarded(cap as u32 + GUARD_BITS + self.extra_guard)?;
            if let Some(done) = self.attempt(ctx, work, cap)? {
                return Ok(done);
            }
            cap *= 2;
        }
    }

    fn attempt(&self, ctx: &Ctx, work: u32, cap: usize) -> Result<Option<SeriesSum>> {
        let values = (self.values)(work, cap)?;
        let max_v = values.iter().map(Cx::log2_abs).fold(f64::NEG_INFINITY, f64::max);
        let weights = (self.weights)(work, cap);
        let diffs = difference_table(values);

        let mut partial = Cx::zero(work);
        let mut biggest = f64::NEG_INFINITY;
        let mut quiet = 0usize;
        let mut canc = f64::NEG_INFINITY;
        for (n, (w, d)) in weights.iter().zip(diffs.iter()).enumerate() {
            let term = w * d;
            partial += &term;
            let mag = term.log2_abs();
            biggest = biggest.max(mag);
            canc = canc.max(w.log2_abs() + n as f64);
            let reference = partial.log2_abs().max(biggest);
            if ctx.tol.negligible(mag, reference) {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if quiet >= self.patience {
                let tail = match self.tail {
                    Tail::Geometric(r) => {
                        let r = r.clamp(0.0, 0.999);
                        mag + (r / (1.0 - r)).log2()
                    }
                    Tail::Algebraic(a) => mag + ((n + 1) as f64 / a.max(1e-3)).log2(),
                };
                let mut err = pow2(tail);
                err += pow2(canc + max_v - work as f64 + ((cap + 1) as f64).log2());
                return Ok(Some(SeriesSum {
                    value: partial,
                    err: Float::with_val(ERR_PREC, err),
                    terms: n + 1,
                    prec: work,
                }));
            }
        }
        Ok(None)
    }
}

/// Euler's transformation of `Σ_{n>=0} (-1)^n a_n`: the sum
/// `Σ_{n<=N} Δ^n a_0 / 2^(n+1)` with `Δ a_n = a_n - a_{n+1}`.
pub fn euler_transform(
    a: &dyn Fn(usize, u32) -> Float,
    terms: usize,
    ctx: &Ctx,
) -> Result<Approx> {
    let work = ctx.guarded(terms as u32 + GUARD_BITS)?;
    let values: Vec<Float> = (0..=terms).map(|n| a(n, work)).collect();
    let diffs = difference_table_real(values);
    let mut sum = Float::new(work);
    let mut last = Float::new(work);
    for (n, d) in diffs.iter().enumerate() {
        last = Float::with_val(work, d);
        last >>= (n + 1) as u32;
        sum += &last;
    }
    let value = Cx::from_real(sum).with_prec(ctx.prec);
    let err = Float::with_val(ERR_PREC, last.abs_ref()) + rounding_err(&value, ctx.prec);
    Ok(Approx::new(value, err, Method::EulerTransform, terms + 1, work))
}

/// [`euler_transform`] with the number of terms chosen from the tolerance.
pub fn euler_transform_to_tol(a: &(dyn Fn(usize, u32) -> Float + Sync), ctx: &Ctx) -> Result<Approx> {
    let values = |p: u32, cap: usize| -> Result<Vec<Cx>> {
        Ok((0..=cap).map(|n| Cx::from_real(a(n, p))).collect())
    };
    let weights = |p: u32, cap: usize| -> Vec<Cx> {
        (0..=cap)
            .map(|n| {
                let mut w = Float::with_val(p, 1);
                w >>= (n + 1) as u32;
                Cx::from_real(w)
            })
            .collect()
    };
    let series = BinomialSeries {
        name: "euler_transform",
        values: &values,
        weights: &weights,
        patience: 4,
        tail: Tail::Geometric(0.5),
        initial_terms: ctx.tol.bits() as usize + 8,
        extra_guard: 0,
    };
    let s = series.sum(ctx)?;
    let value = s.value.with_prec(ctx.prec);
    let err = s.err + rounding_err(&value, ctx.prec);
    Ok(Approx::new(value, err, Method::EulerTransform, s.terms, s.prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::approx::Tol;
    use proptest::prelude::*;
    use rug::Rational;

    fn pascal(n: usize) -> Vec<Vec<Integer>> {
        let mut rows = vec![vec![Integer::from(1)]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![Integer::from(1)];
            for k in 1..i {
                row.push(Integer::from(&prev[k - 1] + &prev[k]));
            }
            row.push(Integer::from(1));
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binom_small_and_out_of_range() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(7, -1), 0);
        assert_eq!(binom(3, 4), 0);
    }

    #[test]
    fn binom_matches_pascal_triangle() {
        let rows = pascal(40);
        assert_eq!(rows[40][20], 137_846_528_820u64);
        assert_eq!(binom(40, 20), 137_846_528_820u64);
        for n in 0..=40u32 {
            assert_eq!(binomial_row(n), rows[n as usize]);
        }
    }

    #[test]
    fn log_sum_small_cases() {
        let ctx = Ctx::new(128);
        let one = Float::with_val(128, 1);
        let r0 = fdiff_log_sum(0, &one, &one, &ctx).unwrap();
        assert!(r0.re().is_zero());
        let r1 = fdiff_log_sum(1, &one, &one, &ctx).unwrap();
        assert!((r1.re().to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        // 3 ln 2 - 3 ln 3 + ln 4 = ln(32/27), from a 4-term evaluation at 200 bits
        let r3 = fdiff_log_sum(3, &one, &one, &ctx).unwrap();
        let oracle = Float::with_val(200, Rational::from((32, 27))).ln();
        let d = Float::with_val(200, r3.re() - &oracle);
        assert!(d.clone().abs() < 1e-36, "{}", d.to_f64());
    }

    #[test]
    fn pow_sum_small_cases() {
        let ctx = Ctx::new(128);
        let one = Float::with_val(128, 1);
        let three = Float::with_val(128, 3);
        let r = fdiff_pow_sum(2, &one, &Cx::real(128, -1), &ctx).unwrap();
        assert!(r.value.abs() < 1e-35);
        let r = fdiff_pow_sum(0, &three, &Cx::real(128, 2), &ctx).unwrap();
        let ninth = Float::with_val(128, Rational::from((1, 9)));
        assert!(Float::with_val(128, r.re() - &ninth).abs() < 1e-37);
        let r = fdiff_pow_sum(3, &one, &Cx::real(128, 2), &ctx).unwrap();
        let oracle = Float::with_val(128, Rational::from((25, 48)));
        assert!(Float::with_val(128, r.re() - &oracle).abs() < 1e-36);
    }

    #[test]
    fn precision_overflow_is_reported() {
        let mut ctx = Ctx::new(128);
        ctx.limits.max_prec = 256;
        let one = Float::with_val(128, 1);
        let e = fdiff_log_sum(200, &one, &one, &ctx).unwrap_err();
        assert!(matches!(e, Error::PrecisionOverflow { .. }));
    }

    #[test]
    fn difference_table_matches_explicit_sums() {
        let ctx = Ctx::new(96);
        let u = Float::with_val(200, 0.37);
        let s = Cx::from_f64(200, 1.5, 0.7);
        let vals: Vec<Cx> = (0..30)
            .map(|k| {
                let x = Float::with_val(200, &u + k as u32);
                Cx::pow_neg_from_ln(&x.ln(), &s)
            })
            .collect();
        let table = difference_table(vals);
        for n in [0u32, 1, 7, 29] {
            let direct = fdiff_pow_sum(n, &u, &s, &ctx).unwrap();
            assert!(direct.dist(&table[n as usize]) < 1e-27, "n={n}");
        }
    }

    #[test]
    fn euler_transform_ln2() {
        let ctx = Ctx::new(100);
        let a = |n: usize, p: u32| Float::with_val(p, 1) / Float::with_val(p, n + 1);
        let r = euler_transform(&a, 30, &ctx).unwrap();
        let ln2 = Float::with_val(100, rug::float::Constant::Log2);
        assert!(r.dist(&Cx::from_real(ln2)) < 1e-9);
        assert_eq!(r.terms_used, 31);
    }

    #[test]
    fn euler_transform_constant_sequence_is_half() {
        let ctx = Ctx::new(100);
        let a = |_: usize, p: u32| Float::with_val(p, 1);
        for n in [0, 3, 17] {
            let r = euler_transform(&a, n, &ctx).unwrap();
            assert_eq!(r.re().to_f64(), 0.5);
        }
    }

    #[test]
    fn euler_transform_beats_direct_summation() {
        let ctx = Ctx::new(100).with_tol(Tol::new(1e-12));
        let a = |n: usize, p: u32| Float::with_val(p, 1) / Float::with_val(p, n + 1);
        let r = euler_transform_to_tol(&a, &ctx).unwrap();
        let ln2 = Float::with_val(100, rug::float::Constant::Log2);
        assert!(r.dist(&Cx::from_real(ln2)) < 1e-12);
        // Direct summation of the alternating series: the error after N
        // terms is about 1/(2N), so 1e-12 needs N of order 5e11.
        let mut direct_terms = 0usize;
        let mut sum = 0.0f64;
        let cap = 1_000_000;
        while direct_terms < cap {
            let n = direct_terms as f64;
            sum += if direct_terms.is_multiple_of(2) { 1.0 } else { -1.0 } / (n + 1.0);
            direct_terms += 1;
            if (sum - std::f64::consts::LN_2).abs() < 1e-12 {
                break;
            }
        }
        assert_eq!(direct_terms, cap);
        assert!(r.terms_used < direct_terms);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn pow_sum_vanishes_below_degree(n in 1u32..14, m in 0u32..13, u in 0.1f64..6.0) {
            prop_assume!(m < n);
            let ctx = Ctx::new(128);
            let u = Float::with_val(128, u);
            let s = Cx::real(128, -(m as i32));
            let r = fdiff_pow_sum(n, &u, &s, &ctx).unwrap();
            prop_assert!(r.value.abs() <= r.err);
        }

        #[test]
        fn log_sum_is_scale_invariant(n in 1u32..25, a in 0.05f64..5.0, b in 0.05f64..5.0, c in 0.1f64..10.0) {
            let ctx = Ctx::new(128);
            let (fa, fb) = (Float::with_val(128, a), Float::with_val(128, b));
            let ca = Float::with_val(128, &fa * c);
            let cb = Float::with_val(128, &fb * c);
            let r1 = fdiff_log_sum(n, &fa, &fb, &ctx).unwrap();
            let r2 = fdiff_log_sum(n, &ca, &cb, &ctx).unwrap();
            let gap = r1.dist(&r2.value);
            prop_assert!(gap <= (r1.err.to_f64() + r2.err.to_f64()) * 4.0 + 1e-36, "gap {}", gap);
        }

        #[test]
        fn raising_precision_stays_within_err(n in 0u32..60, a in 0.05f64..8.0, b in 0.05f64..8.0, sre in -3.0f64..4.0, sim in -3.0f64..3.0) {
            let lo = Ctx::new(96);
            let hi = Ctx::new(96 + 64);
            let (fa, fb) = (Float::with_val(96, a), Float::with_val(96, b));
            let l1 = fdiff_log_sum(n, &fa, &fb, &lo).unwrap();
            let l2 = fdiff_log_sum(n, &fa, &fb, &hi).unwrap();
            prop_assert!(l1.dist(&l2.value) < l1.err.to_f64());
            let s = Cx::from_f64(96, sre, sim);
            let p1 = fdiff_pow_sum(n, &fa, &s, &lo).unwrap();
            let p2 = fdiff_pow_sum(n, &fa, &s, &hi).unwrap();
            prop_assert!(p1.dist(&p2.value) < p1.err.to_f64());
        }
    }
}
