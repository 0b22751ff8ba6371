//! Precision contract, complex numbers, exact polynomials and the
//! alternating binomial kernels every series route is built on.

pub mod approx;
pub mod binomial;
pub mod cx;
pub mod poly;

pub use approx::{rounding_err, Approx, Ctx, Limits, Method, Tol, ERR_PREC, MIN_PREC};
pub use binomial::{
    binom, binomial_row, euler_transform, euler_transform_to_tol, fdiff_log_sum, fdiff_pow_sum,
};
pub use cx::Cx;
pub use poly::PolyQ;

/// Exact rational type used for polynomial coefficients and harmonic sums.
pub type Rat = rug::Rational;
