//! Double-exponential quadrature: tanh-sinh on finite intervals and
//! exp-sinh on `(a, ∞)`, refined by halving the step.

use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::cx::{log2_abs, pi, pow2, Cx};
use crate::numeric::{rounding_err, Approx, Ctx, Method, ERR_PREC};

/// Largest |τ| ever visited; far beyond where any weight is still
/// significant at the precisions this crate supports.
const TAU_MAX: f64 = 12.0;

/// Negligible terms in a row that end a sweep in one direction.
const QUIET_RUN: usize = 3;

const MIN_LEVELS: u32 = 3;

#[derive(Debug, Clone)]
pub enum Interval {
    Finite(Float, Float),
    SemiInfinite(Float),
}

impl Interval {
    pub fn unit() -> Self {
        Interval::Finite(Float::with_val(64, 0), Float::with_val(64, 1))
    }

    pub fn positive_axis() -> Self {
        Interval::SemiInfinite(Float::with_val(64, 0))
    }
}

/// Declared endpoint behaviour of an integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Regular,
    /// Like `|x - e|^α` with `α > -1`.
    Algebraic(f64),
    /// Like a power of `ln |x - e|`.
    Log,
}

/// A quadrature node. The distances to the endpoints are computed directly
/// from the transformation, so they keep full relative precision even where
/// `x` itself has rounded onto the endpoint.
#[derive(Debug, Clone)]
pub struct Abscissa {
    pub x: Float,
    pub from_a: Float,
    /// `None` on a semi-infinite interval.
    pub to_b: Option<Float>,
}

type Eval<'a> = dyn Fn(&Abscissa) -> Result<Cx> + Sync + 'a;

/// A one-dimensional integrand over an interval.
pub struct Integrand1D<'a> {
    pub f: Box<Eval<'a>>,
    pub interval: Interval,
    pub endpoints: (Endpoint, Endpoint),
}

impl<'a> Integrand1D<'a> {
    pub fn new(interval: Interval, f: impl Fn(&Abscissa) -> Result<Cx> + Sync + 'a) -> Self {
        Integrand1D {
            f: Box::new(f),
            interval,
            endpoints: (Endpoint::Regular, Endpoint::Regular),
        }
    }

    pub fn with_endpoints(mut self, left: Endpoint, right: Endpoint) -> Self {
        self.endpoints = (left, right);
        self
    }

    fn check(&self) -> Result<()> {
        for e in [self.endpoints.0, self.endpoints.1] {
            if let Endpoint::Algebraic(a) = e {
                if a <= -1.0 {
                    return Err(Error::domain(format!("endpoint exponent {a} is not integrable")));
                }
            }
        }
        Ok(())
    }
}

struct Nodes {
    work: u32,
    half_pi: Float,
    interval: Interval,
}

impl Nodes {
    fn new(interval: &Interval, work: u32) -> Self {
        Nodes {
            work,
            half_pi: Float::with_val(work, pi(work) / 2u32),
            interval: match interval {
                Interval::Finite(a, b) => {
                    Interval::Finite(Float::with_val(work, a), Float::with_val(work, b))
                }
                Interval::SemiInfinite(a) => Interval::SemiInfinite(Float::with_val(work, a)),
            },
        }
    }

    /// Abscissa and weight at `τ`, or `None` once the node has collapsed
    /// onto an endpoint.
    fn at(&self, tau: &Float) -> Option<(Abscissa, Float)> {
        let w = self.work;
        let v = Float::with_val(w, tau.sinh_ref()) * &self.half_pi;
        let dv = Float::with_val(w, tau.cosh_ref()) * &self.half_pi;
        match &self.interval {
            Interval::Finite(a, b) => {
                let half = Float::with_val(w, b - a) / 2u32;
                // 1 - tanh|v| = 2/(e^(2|v|) + 1)
                let e2 = (Float::with_val(w, v.abs_ref()) * 2u32).exp();
                let near = Float::with_val(w, &half * 2u32) / (Float::with_val(w, &e2) + 1u32);
                if near.is_zero() {
                    return None;
                }
                let far = Float::with_val(w, b - a) - &near;
                let (from_a, to_b) = if v.is_sign_negative() { (near, far) } else { (far, near) };
                let x = Float::with_val(w, a + &from_a);
                // half · dv · sech²v, sech²v = 4 e^(2|v|)/(e^(2|v|)+1)²
                let denom = Float::with_val(w, &e2 + 1u32).square();
                let weight = half * dv * e2 * 4u32 / denom;
                Some((Abscissa { x, from_a, to_b: Some(to_b) }, weight))
            }
            Interval::SemiInfinite(a) => {
                let ev = v.exp();
                if ev.is_zero() || ev.is_infinite() {
                    return None;
                }
                let x = Float::with_val(w, a + &ev);
                let weight = dv * &ev;
                Some((Abscissa { x, from_a: ev, to_b: None }, weight))
            }
        }
    }
}

/// Sum `w f` over `τ = start, start ± step, …` outward in both directions.
/// Returns the sum and the magnitude of the largest term.
fn sweep(
    nodes: &Nodes,
    f: &Eval<'_>,
    start: &Float,
    step: &Float,
    include_start: bool,
    reference_log2: f64,
) -> Result<(Cx, f64)> {
    let w = nodes.work;
    let mut total = Cx::zero(w);
    let mut biggest = f64::NEG_INFINITY;
    let mut first = true;
    for sign in [1i32, -1] {
        let mut tau = Float::with_val(w, start * sign);
        if sign == -1 && tau.is_zero() {
            tau -= step;
        }
        let mut quiet = 0usize;
        while tau.clone().abs() <= TAU_MAX {
            let skip = sign == 1 && first && !include_start;
            first = false;
            if !skip {
                let Some((abscissa, weight)) = nodes.at(&tau) else { break };
                let term = f(&abscissa)?.scale(&weight);
                let mag = term.log2_abs();
                if !term.is_finite() {
                    return Err(Error::domain(format!(
                        "integrand not finite at x = {}",
                        abscissa.x.to_f64()
                    )));
                }
                biggest = biggest.max(mag);
                total += &term;
                let reference = reference_log2.max(total.log2_abs()).max(biggest);
                if mag == f64::NEG_INFINITY || mag < reference - w as f64 {
                    quiet += 1;
                    if quiet >= QUIET_RUN {
                        break;
                    }
                } else {
                    quiet = 0;
                }
            }
            if sign == 1 {
                tau += step;
            } else {
                tau -= step;
            }
        }
    }
    Ok((total, biggest))
}

/// Integrate `f` over its interval: tanh-sinh for finite intervals,
/// exp-sinh for `(a, ∞)`. Levels halve the step until two successive
/// estimates differ by less than `ctx.tol`; the reported error is that last
/// difference.
pub fn tanh_sinh(f: &Integrand1D<'_>, ctx: &Ctx) -> Result<Approx> {
    f.check()?;
    let work = ctx.guarded(24)?;
    let nodes = Nodes::new(&f.interval, work);
    let tol = ctx.tol.as_float();
    let mut h = Float::with_val(work, 1);
    let zero = Float::new(work);
    let (sum0, mut big) = sweep(&nodes, &*f.f, &zero, &h, true, f64::NEG_INFINITY)?;
    let mut estimate = sum0;
    let mut evals = 0usize;
    for level in 1..=ctx.limits.max_levels {
        let step = h.clone();
        h /= 2u32;
        let reference = estimate.log2_abs().max(big);
        let (fresh, b) = sweep(&nodes, &*f.f, &h, &step, true, reference)?;
        big = big.max(b);
        let prev = estimate.scale(&step);
        estimate += &fresh;
        let now = estimate.scale(&h);
        let diff = Float::with_val(ERR_PREC, (&now - &prev).abs());
        evals += 1usize << level;
        if level >= MIN_LEVELS && diff <= tol {
            let value = now.with_prec(ctx.prec);
            let err = diff + rounding_err(&value, ctx.prec) + pow2(big - work as f64 + 8.0);
            return Ok(Approx::new(value, err, Method::Quadrature, evals, work));
        }
        if log2_abs(&diff) > 0.0 && level > 8 {
            break;
        }
    }
    Err(Error::NonConvergence {
        method: "tanh_sinh",
        work: ctx.limits.max_levels as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Tol;
    use crate::special::oracle::euler_beta;

    fn ctx(prec: u32, tol: f64) -> Ctx {
        Ctx::new(prec).with_tol(Tol::new(tol))
    }

    #[test]
    fn constant_on_unit_interval() {
        let f = Integrand1D::new(Interval::unit(), |a| Ok(Cx::real(a.x.prec(), 1)));
        let r = tanh_sinh(&f, &ctx(128, 1e-30)).unwrap();
        assert!((r.re().to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn log_singularity() {
        let f = Integrand1D::new(Interval::unit(), |a| Ok(Cx::from_real(-a.from_a.clone().ln())))
            .with_endpoints(Endpoint::Log, Endpoint::Regular);
        let r = tanh_sinh(&f, &ctx(128, 1e-30)).unwrap();
        assert!(r.dist(&Cx::real(128, 1)) < 1e-30);
    }

    #[test]
    fn algebraic_endpoint_singularity() {
        let f = Integrand1D::new(Interval::unit(), |a| {
            let b = a.to_b.as_ref().unwrap();
            Ok(Cx::from_real(Float::with_val(a.x.prec(), a.from_a.sqrt_ref()) / b.clone().sqrt()))
        })
        .with_endpoints(Endpoint::Algebraic(0.5), Endpoint::Algebraic(-0.5));
        let r = tanh_sinh(&f, &ctx(128, 1e-30)).unwrap();
        let expect = euler_beta(&Float::with_val(128, 1.5), &Float::with_val(128, 0.5), 128).unwrap();
        assert!(r.dist(&Cx::from_real(expect.clone())) < 1e-30);
        assert!((expect.to_f64() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn exp_sinh_gamma_integral() {
        // ∫ t^(1/2) e^(-t) dt = Γ(3/2) = √π/2
        let f = Integrand1D::new(Interval::positive_axis(), |a| {
            let p = a.x.prec();
            Ok(Cx::from_real(Float::with_val(p, a.x.sqrt_ref()) * Float::with_val(p, -&a.x).exp()))
        });
        let r = tanh_sinh(&f, &ctx(128, 1e-30)).unwrap();
        let expect = Float::with_val(128, pi(128).sqrt()) / 2u32;
        assert!(r.dist(&Cx::from_real(expect)) < 1e-30);
    }

    #[test]
    fn rejects_non_integrable_hint() {
        let f = Integrand1D::new(Interval::unit(), |a| Ok(Cx::real(a.x.prec(), 1)))
            .with_endpoints(Endpoint::Algebraic(-1.5), Endpoint::Regular);
        assert!(matches!(tanh_sinh(&f, &ctx(64, 1e-10)), Err(Error::Domain(_))));
    }

    #[test]
    fn reports_nonconvergence_for_oscillation() {
        // sin(1/x) near zero defeats the transformation
        let f = Integrand1D::new(Interval::unit(), |a| {
            let p = a.x.prec();
            Ok(Cx::from_real(Float::with_val(p, a.from_a.recip_ref()).sin() / &a.from_a))
        });
        let mut c = ctx(64, 1e-15);
        c.limits.max_levels = 5;
        assert!(tanh_sinh(&f, &c).is_err());
    }
}
