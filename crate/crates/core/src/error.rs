use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Variants split into two families: invalid input (a caller mistake) and
/// numerical failure (a well-formed request with no finite answer). The CLI
/// maps them to exit codes 2 and 3 respectively via [`Error::is_numerical`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode count must be at least 1")]
    ZeroModes,
    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { index: usize, n_modes: usize },
    #[error("modes must be distinct (got {0} twice)")]
    DuplicateMode(usize),
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("entangled multi-phase scheme needs an even phase count, got M = {0}")]
    OddPhaseCount(usize),
    #[error("weights must satisfy |b1| + ... + |bM| = 1 (sum is {0})")]
    UnnormalizedWeights(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("measured power {measured_dbm} dBm does not exceed the noise floor {noise_dbm} dBm")]
    SignalBelowNoise { measured_dbm: f64, noise_dbm: f64 },
    #[error("signal slope is zero; the linear estimator is singular")]
    SingularEstimator,
    #[error("{0} matrix is singular")]
    SingularMatrix(&'static str),
    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("photon budget n = {n} over M = {m} phases is infeasible")]
    InfeasibleBudget { m: usize, n: f64 },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularEstimator
                | Error::SingularMatrix(_)
                | Error::NotPositiveDefinite
                | Error::InfeasibleBudget { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_param(
    name: &'static str,
    value: f64,
    ok: bool,
    reason: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
