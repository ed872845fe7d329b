//! Error type shared by all modules of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A caller-supplied parameter violates a documented precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Nearest-point query on an empty set; the caller must regenerate or
    /// enlarge the window.
    #[error("empty point set: no candidate point")]
    EmptyPointSet,

    /// The path-loss exponent makes the interference integral diverge.
    #[error("interference integral diverges for alpha = {alpha} (requires alpha > 2)")]
    Divergence { alpha: f64 },

    /// Adaptive quadrature ran out of subdivisions before reaching the
    /// requested tolerance. Carries the best estimate so the failure can be
    /// diagnosed instead of silently clipped.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error bound {error:e}, requested {requested:e})"
    )]
    QuadratureNonConvergence {
        estimate: f64,
        error: f64,
        requested: f64,
        subdivisions: usize,
    },

    /// A throughput-gain denominator vanished.
    #[error("degenerate configuration: {0}")]
    DegenerateConfig(String),

    /// Deployment sampling kept producing an empty tier.
    #[error("failed to draw non-empty base-station tiers after {attempts} attempts")]
    DrawExhausted { attempts: u32 },

    /// Monte Carlo sample count below the supported minimum.
    #[error("sample count {n} is below the minimum of {min}")]
    TooFewSamples { n: u64, min: u64 },
}
