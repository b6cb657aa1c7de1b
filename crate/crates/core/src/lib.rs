//! Gaussian quantum-optics toolkit for distributed phase sensing.
//!
//! The crate models bright two-mode squeezed light in a truncated SU(1,1)
//! interferometer (a parametric amplifier followed directly by two homodyne
//! detectors) and the classical and separable configurations it is compared
//! against. It is organised in layers:
//!
//! * [`gauss`]: exact Gaussian states in ladder-operator form and the
//!   Bogoliubov transforms acting on them (squeezers, phases, beam
//!   splitters, loss, balanced splitting networks).
//! * [`metrology`]: joint homodyne quadrature statistics, limit of
//!   detection, quantum Fisher information and Cramér-Rao bounds, and SNR
//!   utilities.
//! * [`schemes`]: closed-form sensitivities of the two-phase and M-phase
//!   configurations, the state builders that reproduce them, and the
//!   constrained photon-budget optimizer.
//! * [`montecarlo`]: a homodyne sampling oracle that checks the closed
//!   forms statistically.
//! * [`cli`]: the `dqsense` command-line front end.

pub mod cli;
pub mod error;
pub mod gauss;
pub mod metrology;
pub mod montecarlo;
pub mod schemes;

pub use error::{Error, Result};
pub use gauss::{GaussianState, SymplecticTransform};
pub use metrology::{FisherMatrix, HomodyneChannel, QuadratureStats};
pub use num_complex::Complex64;
pub use schemes::{BetaWeights, InterferometerParams, LodResult, MultiPhaseParams, Scheme};
