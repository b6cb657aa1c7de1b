//! Measurement-side statistics: joint homodyne quadratures, limit of
//! detection, quantum Fisher information and SNR utilities.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{check_param, Error, Result};
use crate::gauss::GaussianState;

/// Default central-difference step for phase derivatives (radians).
pub const DEFAULT_PHASE_STEP: f64 = 1e-6;

/// Tolerance on `sum |beta_k| = 1`.
const WEIGHT_NORM_TOL: f64 = 1e-12;

/// One balanced homodyne detector: measures
/// `X(theta) = e^{-i theta} a^† + e^{i theta} a` on `mode` and scales the
/// record by `weight` before it enters the joint quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneChannel {
    pub mode: usize,
    pub theta: f64,
    pub weight: f64,
}

impl HomodyneChannel {
    pub fn new(mode: usize, theta: f64, weight: f64) -> Self {
        Self {
            mode,
            theta,
            weight,
        }
    }

    /// Phase-quadrature detector (`theta = pi/2`).
    pub fn phase_quadrature(mode: usize, weight: f64) -> Self {
        Self::new(mode, std::f64::consts::FRAC_PI_2, weight)
    }

    /// Coefficients `c` with `X = sum_i c_i A_i` (unit weight).
    fn coefficients(&self, n_modes: usize) -> DVector<Complex64> {
        let mut c = DVector::zeros(2 * n_modes);
        c[self.mode] = Complex64::from_polar(1.0, self.theta);
        c[n_modes + self.mode] = Complex64::from_polar(1.0, -self.theta);
        c
    }
}

/// Exact first and second moments of a set of homodyne records and of their
/// weighted sum `X_+ = sum_k w_k X_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureStats {
    /// `<X_k>` per channel (unweighted).
    pub channel_means: Vec<f64>,
    /// Symmetrised covariance of the unweighted channel records.
    pub covariance: DMatrix<f64>,
    /// `<X_+>`.
    pub mean: f64,
    /// `Var(X_+) = w^T C w`.
    pub variance: f64,
}

fn validate_channels(state: &GaussianState, channels: &[HomodyneChannel]) -> Result<()> {
    if channels.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: 0,
        });
    }
    for (i, ch) in channels.iter().enumerate() {
        state.check_mode(ch.mode)?;
        check_param("theta", ch.theta, true, "must be finite")?;
        check_param("weight", ch.weight, true, "must be finite")?;
        if channels[..i].iter().any(|o| o.mode == ch.mode) {
            return Err(Error::DuplicateMode(ch.mode));
        }
    }
    Ok(())
}

/// Moments of the joint quadrature measured by `channels` on `state`.
///
/// No small-angle or bright-beam approximation: the result is exact for the
/// Gaussian state given.
pub fn joint_quadrature_stats(
    state: &GaussianState,
    channels: &[HomodyneChannel],
) -> Result<QuadratureStats> {
    validate_channels(state, channels)?;
    let n = state.n_modes();
    let d = state.displacement();
    let sigma = state.covariance();
    let coeffs: Vec<DVector<Complex64>> = channels.iter().map(|ch| ch.coefficients(n)).collect();

    let channel_means: Vec<f64> = coeffs.iter().map(|c| c.dot(d).re).collect();
    let k = channels.len();
    let sigma_conj: Vec<DVector<Complex64>> =
        coeffs.iter().map(|c| sigma * c.conjugate()).collect();
    let mut covariance = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = 0.5 * coeffs[i].dot(&sigma_conj[j]).re;
            covariance[(i, j)] = v;
            covariance[(j, i)] = v;
        }
    }
    let w = DVector::from_iterator(k, channels.iter().map(|ch| ch.weight));
    let mean = channels
        .iter()
        .zip(&channel_means)
        .map(|(ch, m)| ch.weight * m)
        .sum();
    let variance = (w.transpose() * &covariance * &w)[(0, 0)];
    Ok(QuadratureStats {
        channel_means,
        covariance,
        mean,
        variance,
    })
}

/// Limit of detection `Var(X_+) / (d<X_+>/dphi)^2`.
pub fn lod(slope: f64, variance: f64) -> Result<f64> {
    check_param(
        "variance",
        variance,
        variance >= 0.0,
        "must be non-negative",
    )?;
    if slope == 0.0 || !slope.is_finite() {
        return Err(Error::SingularEstimator);
    }
    Ok(variance / (slope * slope))
}

/// Signal-to-noise ratio `slope^2 * delta_phi_sq / variance`.
pub fn snr(slope: f64, variance: f64, delta_phi_sq: f64) -> Result<f64> {
    check_param("variance", variance, variance > 0.0, "must be positive")?;
    Ok(slope * slope * delta_phi_sq / variance)
}

/// Derivative of `<X_+>` with respect to a common shift of every phase,
/// by central differences of the exact mean.
///
/// When the estimated phase is a normalised combination
/// `phi = sum_k beta_k phi_k`, shifting all `phi_k` by `h` shifts `phi` by
/// `h`, so this is the slope that enters the limit of detection.
pub fn common_phase_slope<F>(
    builder: F,
    phases: &[f64],
    channels: &[HomodyneChannel],
    step: f64,
) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<GaussianState>,
{
    check_param("step", step, step > 0.0, "must be positive")?;
    let shifted = |h: f64| -> Result<f64> {
        let p: Vec<f64> = phases.iter().map(|x| x + h).collect();
        Ok(joint_quadrature_stats(&builder(&p)?, channels)?.mean)
    };
    Ok((shifted(step)? - shifted(-step)?) / (2.0 * step))
}

/// Real symmetric Fisher information matrix over `m` phases.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherMatrix {
    entries: DMatrix<f64>,
}

impl FisherMatrix {
    /// Symmetrises `entries`; errors unless it is square.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        let entries = (&entries + entries.transpose()).scale(0.5);
        Ok(Self { entries })
    }

    pub fn m(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn smallest_eigenvalue(&self) -> f64 {
        self.entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn inverse(&self) -> Result<DMatrix<f64>> {
        self.entries
            .clone()
            .cholesky()
            .map(|c| c.inverse())
            .ok_or(Error::SingularMatrix("Fisher information"))
    }
}

/// Bright-beam quantum Fisher information
/// `F_ij = 2 Re(d_i d^† sigma^{-1} d_j d)`, with the displacement derivatives
/// taken by central differences of step `step` around `phases`.
///
/// Only the displacement term is kept; covariance derivatives are neglected,
/// which is accurate when the mean fields dominate.
pub fn qfi_matrix<F>(builder: F, phases: &[f64], step: f64) -> Result<FisherMatrix>
where
    F: Fn(&[f64]) -> Result<GaussianState>,
{
    check_param("step", step, step > 0.0, "must be positive")?;
    let base = builder(phases)?;
    let sigma_inv = base
        .covariance()
        .clone()
        .try_inverse()
        .ok_or(Error::SingularMatrix("covariance"))?;
    let m = phases.len();
    let mut derivs = Vec::with_capacity(m);
    for k in 0..m {
        let mut plus = phases.to_vec();
        let mut minus = phases.to_vec();
        plus[k] += step;
        minus[k] -= step;
        let dp = builder(&plus)?;
        let dm = builder(&minus)?;
        derivs.push((dp.displacement() - dm.displacement()).unscale(2.0 * step));
    }
    let weighted: Vec<DVector<Complex64>> = derivs.iter().map(|dv| &sigma_inv * dv).collect();
    let entries = DMatrix::from_fn(m, m, |i, j| 2.0 * derivs[i].dotc(&weighted[j]).re);
    FisherMatrix::new(entries)
}

/// Quantum Cramér-Rao bound `beta^T F^{-1} beta` for the combination
/// `phi = sum_k beta_k phi_k`, with `sum |beta_k| = 1`.
pub fn qcrb(fisher: &FisherMatrix, beta: &[f64]) -> Result<f64> {
    if beta.len() != fisher.m() {
        return Err(Error::DimensionMismatch {
            expected: fisher.m(),
            got: beta.len(),
        });
    }
    let norm: f64 = beta.iter().map(|b| b.abs()).sum();
    if !norm.is_finite() || (norm - 1.0).abs() > WEIGHT_NORM_TOL {
        return Err(Error::UnnormalizedWeights(norm));
    }
    let chol = fisher
        .entries
        .clone()
        .cholesky()
        .ok_or(Error::SingularMatrix("Fisher information"))?;
    let b = DVector::from_column_slice(beta);
    let x = chol.solve(&b);
    Ok(b.dot(&x))
}

/// Power ratio in decibels.
pub fn db(ratio: f64) -> Result<f64> {
    check_param("ratio", ratio, ratio > 0.0, "must be positive")?;
    Ok(10.0 * ratio.log10())
}

/// Inverse of [`db`].
pub fn undb(decibels: f64) -> f64 {
    10f64.powf(decibels / 10.0)
}

/// Actual SNR in dB recovered from a spectrum-analyzer reading.
///
/// The measured trace holds signal plus noise power, so the signal power is
/// recovered by linear subtraction:
/// `SNR = 10 log10(10^{(measured - noise)/10} - 1)`.
pub fn snr_correct(measured_dbm: f64, noise_dbm: f64) -> Result<f64> {
    check_param("measured_dbm", measured_dbm, true, "must be finite")?;
    check_param("noise_dbm", noise_dbm, true, "must be finite")?;
    if measured_dbm <= noise_dbm {
        return Err(Error::SignalBelowNoise {
            measured_dbm,
            noise_dbm,
        });
    }
    let gap = measured_dbm - noise_dbm;
    let excess = (gap / 10.0 * std::f64::consts::LN_10).exp_m1();
    db(excess)
}

/// Noise reduction in dB of `variance` below `benchmark`; positive when the
/// variance is below the benchmark.
pub fn noise_reduction_db(variance: f64, benchmark: f64) -> Result<f64> {
    check_param("benchmark", benchmark, benchmark > 0.0, "must be positive")?;
    Ok(-db(variance / benchmark)?)
}
