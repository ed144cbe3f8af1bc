use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// More than the allowed fraction of trajectories hit the divergence
    /// bound, which signals an invalid regime for the positive-P integration.
    #[error(
        "{n_diverged} of {n_traj} trajectories diverged (limit {limit_percent}%); \
         the positive-P integration is not trustworthy in this regime"
    )]
    DivergenceLimit {
        n_diverged: u64,
        n_traj: u64,
        limit_percent: f64,
    },

    /// A conditioning variance in the Reid inference dropped below the
    /// degeneracy threshold.
    #[error("degenerate conditioning variance {value:e} (threshold {threshold:e})")]
    DegenerateVariance { value: f64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
