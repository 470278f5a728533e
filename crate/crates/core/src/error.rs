use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Every variant describes a domain violation of the inputs or a point where
/// the requested quantity is mathematically undefined; none of them are
/// transient.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("k = {k} exceeds n = {n}")]
    IndexExceedsOrder { n: u64, k: u64 },

    #[error("argument x = {0} lies outside [-1, 1]")]
    OutOfUnitInterval(f64),

    #[error("modified Bessel function of order {0} is not supported (only 0 and 1)")]
    UnsupportedBesselOrder(u32),

    #[error("photon number {requested} exceeds truncation cutoff {cutoff}")]
    ExceedsCutoff { requested: usize, cutoff: usize },

    #[error("cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },

    #[error("coefficient list is empty")]
    EmptyCoefficients,

    #[error("squeezing parameter |xi| = {0} must be strictly below 1")]
    SqueezeOutOfRange(f64),

    #[error("cutoff {cutoff} leaves tail mass {tail:e} above tolerance {tolerance:e}")]
    CutoffTooSmall {
        cutoff: usize,
        tail: f64,
        tolerance: f64,
    },

    #[error("state norm {norm} violates declared tail bound {tail_bound:e}")]
    NotNormalized { norm: f64, tail_bound: f64 },

    #[error("Mandel Q is undefined for a marginal with zero mean photon number")]
    UndefinedMandelQ,

    #[error("phase uncertainty diverges at phi = {phi}: parity slope vanishes")]
    DivergentUncertainty { phi: f64 },

    #[error("signal-to-noise ratio diverges at phi = {phi}: parity variance vanishes")]
    InfiniteSnr { phi: f64 },

    #[error("root finding for target mean {target} did not converge")]
    NoConvergence { target: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
