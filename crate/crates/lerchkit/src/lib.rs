//! Arbitrary-precision evaluation of the Lerch transcendent
//! `Φ(z, s, u) = Σ_k z^k / (u + k)^s`, its `s`-derivative, the zeta-type
//! functions and constants built from it, and a harness that checks
//! integral and series identities numerically.
//!
//! ```
//! use lerchkit::{lerch, Ctx, Cx, LerchPoint};
//!
//! let ctx = Ctx::new(128);
//! let pt = LerchPoint::new(Cx::real(128, -1), Cx::real(128, 2), 1.0).unwrap();
//! let v = lerch::phi_auto(&pt, &ctx).unwrap();
//! let pi2_12 = std::f64::consts::PI.powi(2) / 12.0;
//! assert!((v.re().to_f64() - pi2_12).abs() < 1e-15);
//! ```

pub mod cli;
pub mod deriv;
pub mod error;
pub mod lerch;
pub mod numeric;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
pub use lerch::{DomainClass, LerchPoint};
pub use numeric::{Approx, Ctx, Cx, Method, PolyQ, Rat, Tol};
