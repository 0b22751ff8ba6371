use thiserror::Error;

/// Failure modes shared by every evaluation route.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The arguments lie outside the region the requested route covers.
    #[error("domain error: {0}")]
    Domain(String),

    /// The point is a pole of the function being evaluated.
    #[error("pole at {0}")]
    Pole(String),

    /// A series or quadrature hit its configured work cap.
    #[error("{method} did not converge within {work} terms/levels")]
    NonConvergence { method: &'static str, work: usize },

    /// The outer ratio of the half-plane series is too close to one.
    #[error("slow convergence: |-z/(1-z)| = {ratio:.6} exceeds {limit}")]
    SlowConvergence { ratio: f64, limit: f64 },

    /// Guard bits pushed the working precision over the configured cap.
    #[error("required precision {needed} bits exceeds cap of {max} bits")]
    PrecisionOverflow { needed: u32, max: u32 },

    #[error("unknown key `{0}`")]
    UnknownKey(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
