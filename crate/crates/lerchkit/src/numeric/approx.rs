//! Results with error accounting, tolerances and the evaluation context.

use std::fmt;

use rug::Float;

use super::cx::{log2_abs, pow2, Cx};
use crate::error::{Error, Result};

/// Precision used for error magnitudes. Only the exponent range matters.
pub const ERR_PREC: u32 = 64;

/// Smallest working precision accepted anywhere in the crate.
pub const MIN_PREC: u32 = 64;

/// Identifies which evaluation route produced an [`Approx`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    DirectSeries,
    NegzSeries,
    HasseSeries,
    IntegralRep,
    Split27,
    ClosedForm,
    UShift7,
    LimitForm,
    BinomialSum,
    EulerTransform,
    KnoppHasse,
    Quadrature,
    LogSeries,
    Product,
    FiniteDifference,
    Oracle,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::DirectSeries => "DIRECT_SERIES",
            Method::NegzSeries => "NEGZ_SERIES",
            Method::HasseSeries => "HASSE_SERIES",
            Method::IntegralRep => "INTEGRAL_REP",
            Method::Split27 => "SPLIT_27",
            Method::ClosedForm => "CLOSED_FORM",
            Method::UShift7 => "U_SHIFT_7",
            Method::LimitForm => "LIMIT_FORM",
            Method::BinomialSum => "BINOMIAL_SUM",
            Method::EulerTransform => "EULER_TRANSFORM",
            Method::KnoppHasse => "KNOPP_HASSE",
            Method::Quadrature => "QUADRATURE",
            Method::LogSeries => "LOG_SERIES",
            Method::Product => "PRODUCT",
            Method::FiniteDifference => "FINITE_DIFFERENCE",
            Method::Oracle => "ORACLE",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A value with a heuristic absolute error estimate.
///
/// `err` is last-term plus cancellation accounting, not a rigorous
/// enclosure.
#[derive(Debug, Clone)]
pub struct Approx {
    pub value: Cx,
    pub err: Float,
    pub method: Method,
    pub terms_used: usize,
    pub precision_used: u32,
}

impl Approx {
    pub fn new(value: Cx, err: Float, method: Method, terms_used: usize, precision_used: u32) -> Self {
        let err = Float::with_val(ERR_PREC, err.abs_ref());
        Approx {
            value,
            err,
            method,
            terms_used,
            precision_used,
        }
    }

    /// An exactly known value, rounded to `prec` bits.
    pub fn exact(value: Cx, method: Method, prec: u32) -> Self {
        let value = value.with_prec(prec);
        let err = rounding_err(&value, prec);
        Approx::new(value, err, method, 0, prec)
    }

    pub fn re(&self) -> &Float {
        &self.value.re
    }

    pub fn im(&self) -> &Float {
        &self.value.im
    }

    pub fn err_f64(&self) -> f64 {
        self.err.to_f64()
    }

    pub fn err_log2(&self) -> f64 {
        log2_abs(&self.err)
    }

    /// Round the value to `prec` bits, folding the rounding into `err`.
    pub fn rounded(mut self, prec: u32) -> Self {
        self.value = self.value.with_prec(prec);
        self.err += rounding_err(&self.value, prec);
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn add_err(mut self, extra: &Float) -> Self {
        self.err += Float::with_val(ERR_PREC, extra.abs_ref());
        self
    }

    /// `c · self`, with the error scaled by `|c|` plus rounding.
    pub fn times(mut self, c: &Cx) -> Self {
        let prec = self.value.prec();
        self.value = (&self.value * &c.with_prec(prec.max(c.prec()))).with_prec(prec);
        self.err *= c.abs();
        self.err += rounding_err(&self.value, prec);
        self
    }

    /// |self - other|, as f64.
    pub fn dist(&self, other: &Cx) -> f64 {
        self.value.dist_f64(other)
    }
}

/// Two ulps of |v| at `prec` bits.
pub fn rounding_err(v: &Cx, prec: u32) -> Float {
    let l = v.log2_abs();
    if l == f64::NEG_INFINITY {
        return pow2(-(prec as f64) * 4.0);
    }
    pow2(l + 1.0 - prec as f64)
}

/// A tolerance stored as its base-2 logarithm, so values far below the
/// f64 range remain representable.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Tol {
    log2: f64,
}

impl Tol {
    pub fn new(tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        Tol { log2: tol.log2() }
    }

    pub fn from_bits(bits: f64) -> Self {
        Tol { log2: -bits }
    }

    pub fn from_digits(digits: u32) -> Self {
        Tol {
            log2: -(digits as f64) * std::f64::consts::LOG2_10,
        }
    }

    pub fn log2(self) -> f64 {
        self.log2
    }

    /// Number of bits the tolerance asks for.
    pub fn bits(self) -> f64 {
        -self.log2
    }

    pub fn as_float(self) -> Float {
        pow2(self.log2)
    }

    pub fn to_f64(self) -> f64 {
        self.log2.exp2()
    }

    pub fn scaled(self, factor_log2: f64) -> Self {
        Tol {
            log2: self.log2 + factor_log2,
        }
    }

    /// True when a quantity of magnitude `2^mag_log2` is negligible
    /// against a reference of magnitude `2^ref_log2`.
    pub fn negligible(self, mag_log2: f64, ref_log2: f64) -> bool {
        mag_log2 == f64::NEG_INFINITY || mag_log2 < self.log2 + ref_log2
    }
}

/// Work caps shared by all routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_prec: u32,
    pub max_terms: usize,
    pub max_levels: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_prec: 8192,
            max_terms: 200_000,
            max_levels: 12,
        }
    }
}

/// Working precision, target tolerance and work caps for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ctx {
    pub prec: u32,
    pub tol: Tol,
    pub limits: Limits,
}

impl Ctx {
    /// Context at `prec` bits with a tolerance eight bits above rounding.
    pub fn new(prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        Ctx {
            prec,
            tol: Tol::from_bits(prec as f64 - 8.0),
            limits: Limits::default(),
        }
    }

    pub fn with_tol(mut self, tol: Tol) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec.max(MIN_PREC);
        self
    }

    /// `prec + extra`, or an overflow error past the configured cap.
    pub fn guarded(&self, extra: u32) -> Result<u32> {
        let needed = self.prec.saturating_add(extra);
        if needed > self.limits.max_prec {
            return Err(Error::PrecisionOverflow {
                needed,
                max: self.limits.max_prec,
            });
        }
        Ok(needed)
    }

    /// A copy working `extra` bits higher with the tolerance tightened to
    /// match, for sub-evaluations whose result gets amplified.
    pub fn raised(&self, extra: u32) -> Result<Ctx> {
        let prec = self.guarded(extra)?;
        Ok(Ctx {
            prec,
            tol: self.tol.scaled(-(extra as f64)),
            limits: self.limits,
        })
    }
}
