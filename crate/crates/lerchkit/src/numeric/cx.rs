//! Complex numbers as a pair of MPFR floats.
//!
//! Every result takes the precision of the left operand. Elementary
//! functions use principal branches: `ln` has imaginary part in (-π, π].

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::Float;

/// Base-2 logarithm of |x|; `-inf` for zero.
pub fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    if !x.is_finite() {
        return f64::INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + e as f64
}

/// 2^e as a 64-bit float; exponent range is MPFR's, not f64's.
pub fn pow2(e: f64) -> Float {
    if e == f64::NEG_INFINITY {
        return Float::with_val(64, 0);
    }
    Float::with_val(64, e).exp2()
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

#[derive(Clone, PartialEq)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (self.re.to_f64(), self.im.to_f64());
        if im == 0.0 {
            write!(f, "{re}")
        } else if im < 0.0 {
            write!(f, "{re} - {}i", -im)
        } else {
            write!(f, "{re} + {im}i")
        }
    }
}

impl Cx {
    pub fn zero(prec: u32) -> Self {
        Cx {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Cx {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Cx { re, im }
    }

    pub fn real<T>(prec: u32, v: T) -> Self
    where
        Float: rug::Assign<T>,
    {
        Cx::from_real(Float::with_val(prec, v))
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        Cx { re, im }
    }

    /// The imaginary unit.
    pub fn i(prec: u32) -> Self {
        Cx::from_f64(prec, 0.0, 1.0)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Cx {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        Cx {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let mut n = Float::with_val(p, self.re.square_ref());
        n += Float::with_val(p, self.im.square_ref());
        n
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    /// log2 |z|; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        let a = log2_abs(&self.re);
        let b = log2_abs(&self.im);
        let hi = a.max(b);
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        let lo = a.min(b);
        hi + 0.5 * (1.0 + (2.0f64).powf(2.0 * (lo - hi))).log2()
    }

    pub fn abs_f64(&self) -> f64 {
        self.log2_abs().exp2()
    }

    pub fn scale(&self, r: &Float) -> Self {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re * r),
            im: Float::with_val(p, &self.im * r),
        }
    }

    pub fn div_real(&self, r: &Float) -> Self {
        let p = self.prec();
        Cx {
            re: Float::with_val(p, &self.re / r),
            im: Float::with_val(p, &self.im / r),
        }
    }

    /// Multiplication by 2^k, exact.
    pub fn mul_pow2(&self, k: i32) -> Self {
        let mut out = self.clone();
        out.re <<= k;
        out.im <<= k;
        out
    }

    pub fn add_real(&self, r: &Float) -> Self {
        Cx {
            re: Float::with_val(self.prec(), &self.re + r),
            im: self.im.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let n = self.norm_sqr();
        Cx {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        Cx {
            re: Float::with_val(p, &m * &c),
            im: Float::with_val(p, &m * &s),
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        if self.im.is_zero() && self.re.is_sign_positive() {
            return Cx::from_real(Float::with_val(p, self.re.ln_ref()));
        }
        Cx {
            re: Float::with_val(p, self.abs().ln_ref()),
            im: self.arg(),
        }
    }

    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.prec();
        if self.im.is_zero() {
            return if self.re.is_sign_positive() {
                Cx::from_real(Float::with_val(p, self.re.sqrt_ref()))
            } else {
                Cx::from_parts(Float::new(p), Float::with_val(p, -&self.re).sqrt())
            };
        }
        let r = self.abs();
        if self.re.is_sign_positive() {
            let mut a = Float::with_val(p, &r + &self.re);
            a >>= 1;
            let re = a.sqrt();
            let mut im = Float::with_val(p, &self.im / &re);
            im >>= 1;
            Cx { re, im }
        } else {
            let mut a = Float::with_val(p, &r - &self.re);
            a >>= 1;
            let t = a.sqrt();
            let mut re = Float::with_val(p, self.im.abs_ref()) / &t;
            re >>= 1;
            let im = if self.im.is_sign_negative() { -t } else { t };
            Cx { re, im }
        }
    }

    /// Principal power `self^w = exp(w ln self)`.
    pub fn pow(&self, w: &Cx) -> Self {
        if self.is_zero() {
            return Cx::zero(self.prec());
        }
        (w * &self.ln()).exp()
    }

    /// `base^(-s)` for a real positive base, given `ln(base)`.
    pub fn pow_neg_from_ln(ln_base: &Float, s: &Cx) -> Self {
        let p = ln_base.prec().max(s.prec());
        Cx {
            re: -Float::with_val(p, &s.re * ln_base),
            im: -Float::with_val(p, &s.im * ln_base),
        }
        .exp()
    }

    pub fn sin(&self) -> Self {
        let p = self.prec();
        let (s, c) = Float::with_val(p, &self.re).sin_cos(Float::new(p));
        let ch = Float::with_val(p, self.im.cosh_ref());
        let sh = Float::with_val(p, self.im.sinh_ref());
        Cx {
            re: Float::with_val(p, &s * &ch),
            im: Float::with_val(p, &c * &sh),
        }
    }

    pub fn sub_from_real(r: &Float, z: &Cx) -> Self {
        let p = z.prec().max(r.prec());
        Cx {
            re: Float::with_val(p, r - &z.re),
            im: Float::with_val(p, -&z.im),
        }
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Self {
        Cx::sub_from_real(&Float::with_val(self.prec(), 1), self)
    }

    /// Distance in the max norm, as an f64 for reporting.
    pub fn dist_f64(&self, other: &Cx) -> f64 {
        (self - other).abs_f64()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b Cx> for &'a Cx {
            type Output = Cx;
            fn $m(self, rhs: &'b Cx) -> Cx {
                let f: fn(&Cx, &Cx) -> Cx = $body;
                f(self, rhs)
            }
        }
        impl $tr<Cx> for Cx {
            type Output = Cx;
            fn $m(self, rhs: Cx) -> Cx {
                (&self).$m(&rhs)
            }
        }
        impl<'b> $tr<&'b Cx> for Cx {
            type Output = Cx;
            fn $m(self, rhs: &'b Cx) -> Cx {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Cx> for &'a Cx {
            type Output = Cx;
            fn $m(self, rhs: Cx) -> Cx {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    let p = a.prec();
    Cx {
        re: Float::with_val(p, &a.re + &b.re),
        im: Float::with_val(p, &a.im + &b.im),
    }
});

binop!(Sub, sub, |a, b| {
    let p = a.prec();
    Cx {
        re: Float::with_val(p, &a.re - &b.re),
        im: Float::with_val(p, &a.im - &b.im),
    }
});

binop!(Mul, mul, |a, b| {
    let p = a.prec();
    if b.im.is_zero() {
        return a.scale(&b.re);
    }
    if a.im.is_zero() {
        let mut out = b.scale(&a.re);
        out.re.set_prec(p);
        out.im.set_prec(p);
        return out;
    }
    let ac = Float::with_val(p + 8, &a.re * &b.re);
    let bd = Float::with_val(p + 8, &a.im * &b.im);
    let ad = Float::with_val(p + 8, &a.re * &b.im);
    let bc = Float::with_val(p + 8, &a.im * &b.re);
    Cx {
        re: Float::with_val(p, &ac - &bd),
        im: Float::with_val(p, &ad + &bc),
    }
});

binop!(Div, div, |a, b| {
    if b.im.is_zero() {
        return a.div_real(&b.re);
    }
    a * &b.recip()
});

impl Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }
}

impl Neg for Cx {
    type Output = Cx;
    fn neg(mut self) -> Cx {
        self.re = -self.re;
        self.im = -self.im;
        self
    }
}

impl AddAssign<&Cx> for Cx {
    fn add_assign(&mut self, rhs: &Cx) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Cx> for Cx {
    fn sub_assign(&mut self, rhs: &Cx) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Cx> for Cx {
    fn mul_assign(&mut self, rhs: &Cx) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn close(a: &Cx, b: &Cx, tol: f64) -> bool {
        a.dist_f64(b) < tol
    }

    #[test]
    fn exp_ln_roundtrip() {
        let z = Cx::from_f64(P, -0.75, 2.5);
        assert!(close(&z.ln().exp(), &z, 1e-35));
    }

    #[test]
    fn ln_branch_on_negative_axis() {
        let z = Cx::real(P, -1);
        let l = z.ln();
        assert!(l.re.is_zero());
        assert!((l.im.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn sqrt_squares_back() {
        for (re, im) in [(3.0, 4.0), (-2.0, 0.0), (-1.0, -1e-3), (0.25, 0.0)] {
            let z = Cx::from_f64(P, re, im);
            let r = z.sqrt();
            assert!(close(&r.square(), &z, 1e-35), "{z:?}");
            assert!(r.re.is_sign_positive() || r.re.is_zero());
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = Cx::from_f64(P, 1.25, -3.0);
        let b = Cx::from_f64(P, -0.5, 0.75);
        assert!(close(&(&(&a * &b) / &b), &a, 1e-35));
    }

    #[test]
    fn sin_matches_exponential_form() {
        let z = Cx::from_f64(P, 0.3, -1.1);
        let i = Cx::i(P);
        let e1 = (&i * &z).exp();
        let e2 = (-(&i * &z)).exp();
        let two_i = i.mul_pow2(1);
        let s = &(&e1 - &e2) / &two_i;
        assert!(close(&z.sin(), &s, 1e-35));
    }

    #[test]
    fn log2_abs_handles_extremes() {
        let tiny = Float::with_val(64, -100_000).exp2();
        assert!((log2_abs(&tiny) + 100_000.0).abs() < 1e-9);
        assert_eq!(log2_abs(&Float::new(64)), f64::NEG_INFINITY);
        let z = Cx::from_f64(P, 3.0, 4.0);
        assert!((z.log2_abs() - 5f64.log2()).abs() < 1e-12);
    }
}
