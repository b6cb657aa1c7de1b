//! Homodyne sampling oracle.
//!
//! Outcome records are drawn from the exact multivariate normal law of the
//! channel quadratures (means and covariance from
//! [`joint_quadrature_stats`](crate::metrology::joint_quadrature_stats)),
//! combined into the joint quadrature, and turned into phase estimates with
//! the linear estimator `phi_hat = x_+ / slope`. The empirical variance of
//! `phi_hat` is an independent statistical check on every closed-form limit
//! of detection.
//!
//! Random streams: sample indices are cut into fixed chunks of
//! [`CHUNK_SIZE`]; chunk `c` draws from ChaCha8 seeded with the user seed and
//! stream number `c`, normals by the ziggurat method. Chunks are reduced in
//! index order, so results are bit-identical for a given seed whatever the
//! thread count.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::gauss::GaussianState;
use crate::metrology::{self, HomodyneChannel, QuadratureStats};
use crate::schemes::{Network, PIPELINE_SLOPE_STEP};

pub const MIN_SAMPLES: usize = 1000;
pub const CHUNK_SIZE: usize = 1 << 16;
/// Recorded in every [`McResult`].
pub const GENERATOR: &str = "chacha8/stream-per-chunk/ziggurat";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        if samples < MIN_SAMPLES {
            return Err(Error::InvalidParameter {
                name: "samples",
                value: samples as f64,
                reason: "need at least 1000 samples",
            });
        }
        Ok(Self { samples, seed })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McResult {
    pub empirical_lod: f64,
    pub standard_error: f64,
    pub analytic_lod: f64,
    pub z_score: f64,
    pub samples: usize,
    pub seed: u64,
    pub generator: &'static str,
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Moments { count, mean, m2 }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

/// Multivariate normal sampler for a set of homodyne channels.
#[derive(Debug, Clone)]
pub struct QuadratureSampler {
    mean: DVector<f64>,
    factor: DMatrix<f64>,
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

impl QuadratureSampler {
    /// Factorises the channel covariance `C = L L^T`.
    pub fn new(stats: &QuadratureStats) -> Result<Self> {
        let factor = stats
            .covariance
            .clone()
            .cholesky()
            .ok_or(Error::NotPositiveDefinite)?
            .l();
        Ok(Self {
            mean: DVector::from_column_slice(&stats.channel_means),
            factor,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    fn chunk_bounds(total: usize) -> impl IndexedParallelIterator<Item = (usize, usize)> {
        let chunks = total.div_ceil(CHUNK_SIZE);
        (0..chunks)
            .into_par_iter()
            .map(move |c| (c, CHUNK_SIZE.min(total - c * CHUNK_SIZE)))
    }

    fn draw(&self, rng: &mut ChaCha8Rng, z: &mut DVector<f64>, out: &mut DVector<f64>) {
        for v in z.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        out.copy_from(&self.mean);
        out.gemv(1.0, &self.factor, z, 1.0);
    }

    /// `count` outcome vectors (one entry per channel).
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let per_chunk: Vec<Vec<Vec<f64>>> = Self::chunk_bounds(count)
            .map(|(c, len)| {
                let mut rng = chunk_rng(seed, c);
                let mut z = DVector::zeros(self.dim());
                let mut x = DVector::zeros(self.dim());
                (0..len)
                    .map(|_| {
                        self.draw(&mut rng, &mut z, &mut x);
                        x.as_slice().to_vec()
                    })
                    .collect()
            })
            .collect();
        per_chunk.into_iter().flatten().collect()
    }

    /// Moments of `scale * sum_k weights[k] x_k` over `count` draws; the
    /// draws are the same as those of [`QuadratureSampler::sample`].
    pub fn weighted_moments(
        &self,
        count: usize,
        seed: u64,
        weights: &[f64],
        scale: f64,
    ) -> Moments {
        let w = DVector::from_column_slice(weights);
        let per_chunk: Vec<Moments> = Self::chunk_bounds(count)
            .map(|(c, len)| {
                let mut rng = chunk_rng(seed, c);
                let mut z = DVector::zeros(self.dim());
                let mut x = DVector::zeros(self.dim());
                let mut m = Moments::default();
                for _ in 0..len {
                    self.draw(&mut rng, &mut z, &mut x);
                    m.push(scale * x.dot(&w));
                }
                m
            })
            .collect();
        per_chunk
            .into_iter()
            .fold(Moments::default(), Moments::merge)
    }
}

/// Draws `count` homodyne outcome vectors for `channels` on `state`.
pub fn sample_quadratures(
    state: &GaussianState,
    channels: &[HomodyneChannel],
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let stats = metrology::joint_quadrature_stats(state, channels)?;
    Ok(QuadratureSampler::new(&stats)?.sample(count, seed))
}

/// Per-record linear phase estimate `sum_k w_k x_k / slope`.
pub fn estimate_phase(
    samples: &[Vec<f64>],
    channels: &[HomodyneChannel],
    slope: f64,
) -> Result<Vec<f64>> {
    if slope == 0.0 || !slope.is_finite() {
        return Err(Error::SingularEstimator);
    }
    samples
        .iter()
        .map(|x| {
            if x.len() != channels.len() {
                return Err(Error::DimensionMismatch {
                    expected: channels.len(),
                    got: x.len(),
                });
            }
            Ok(x.iter()
                .zip(channels)
                .map(|(v, ch)| v * ch.weight)
                .sum::<f64>()
                / slope)
        })
        .collect()
}

fn network_slope(network: &Network) -> Result<f64> {
    metrology::common_phase_slope(
        |p| network.build(p),
        &network.operating_phases(),
        &network.channels(),
        PIPELINE_SLOPE_STEP,
    )
}

fn weighted_stream(
    network: &Network,
    phases: &[f64],
    config: &McConfig,
    scale: f64,
) -> Result<Moments> {
    let channels = network.channels();
    let state = network.build(phases)?;
    let stats = metrology::joint_quadrature_stats(&state, &channels)?;
    let sampler = QuadratureSampler::new(&stats)?;
    let weights: Vec<f64> = channels.iter().map(|c| c.weight).collect();
    Ok(sampler.weighted_moments(config.samples, config.seed, &weights, scale))
}

/// Empirical limit of detection of `network` at its operating point,
/// compared against the closed form.
pub fn mc_lod(network: &Network, config: &McConfig) -> Result<McResult> {
    let slope = network_slope(network)?;
    if slope == 0.0 {
        return Err(Error::SingularEstimator);
    }
    let m = weighted_stream(network, &network.operating_phases(), config, 1.0 / slope)?;
    let empirical_lod = m.variance();
    let standard_error = empirical_lod * (2.0 / (m.count - 1) as f64).sqrt();
    let analytic_lod = network.closed_form_lod()?;
    Ok(McResult {
        empirical_lod,
        standard_error,
        analytic_lod,
        z_score: (empirical_lod - analytic_lod) / standard_error,
        samples: config.samples,
        seed: config.seed,
        generator: GENERATOR,
    })
}

/// Mean and spread of the linear estimator when the true phases are `phases`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub variance: f64,
}

/// Runs the linear estimator, calibrated at the network's operating point,
/// on records drawn at `phases`.
pub fn mc_phase_estimate(
    network: &Network,
    phases: &[f64],
    config: &McConfig,
) -> Result<PhaseEstimate> {
    let slope = network_slope(network)?;
    if slope == 0.0 {
        return Err(Error::SingularEstimator);
    }
    let m = weighted_stream(network, phases, config, 1.0 / slope)?;
    let variance = m.variance();
    Ok(PhaseEstimate {
        mean: m.mean,
        standard_error: (variance / m.count as f64).sqrt(),
        variance,
    })
}

/// Sample variance of the joint quadrature `X_+` at the operating point and
/// its standard error.
pub fn mc_joint_variance(network: &Network, config: &McConfig) -> Result<(f64, f64)> {
    let m = weighted_stream(network, &network.operating_phases(), config, 1.0)?;
    let v = m.variance();
    Ok((v, v * (2.0 / (m.count - 1) as f64).sqrt()))
}

/// One-sample Kolmogorov-Smirnov test of `values` against the standard
/// normal. Returns `(D, p)`; the p-value uses the asymptotic Kolmogorov
/// series with Stephens' small-sample correction.
pub fn ks_standard_normal(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 1.0);
    }
    let normal = Normal::standard();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nf = n as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = normal.cdf(x);
            (cdf - i as f64 / nf).max((i + 1) as f64 / nf - cdf)
        })
        .fold(0.0, f64::max);
    let sqrt_n = nf.sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    (d, kolmogorov_survival(lambda))
}

/// `P(K > lambda)` for the Kolmogorov distribution.
fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
