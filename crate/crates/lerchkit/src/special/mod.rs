//! Functions reduced to `Φ`, logarithmic series for `ψ` and `B`, infinite
//! products, and independent oracles for the constants they target.

pub mod functions;
pub mod oracle;
pub mod products;

pub use functions::{
    beta_dirichlet, chi, digamma_series, euler_beta_series, harmonic, polylog, ramanujan_identity_residual, zeta,
    zeta_star,
};
pub use oracle::{oracle, CONSTANT_KEYS};
pub use products::{product_eval, product_spec, product_specs, product_target, product_trajectory, ProductSpec};
