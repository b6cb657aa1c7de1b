//! Sensing configurations: closed-form limits of detection, the state
//! builders that reproduce them, and the photon-budget optimizer for the
//! entangled multi-phase network.
//!
//! Two-phase configurations share [`InterferometerParams`]:
//!
//! | scheme | resource | closed form |
//! |---|---|---|
//! | [`Scheme::TsuDistributed`] | one seeded two-mode squeezer, both arms sensed | [`lod_tsu_distributed`] |
//! | [`Scheme::TsuSeparable`] | two squeezers, one phase each | [`lod_tsu_separable`] |
//! | [`Scheme::ClassicalDistributed`] | two coherent beams, same powers | [`lod_classical_distributed`] |
//! | [`Scheme::ClassicalSeparable`] | four coherent beams, one phase per pair | [`lod_classical_separable`] |
//!
//! The M-phase schemes estimate the average of `M` phases with `n` photons
//! per phase element.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{check_param, Error, Result};
use crate::gauss::GaussianState;
use crate::metrology::{self, HomodyneChannel};

/// Seed photon number below which the bright-beam picture is questionable.
pub const BRIGHT_SEED_THRESHOLD: f64 = 10.0;

/// Step used by the state-builder pipeline for the signal slope.
pub const PIPELINE_SLOPE_STEP: f64 = 1e-5;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Parameters of the two-phase configurations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerParams {
    /// Intensity gain of the parametric amplifier, `G >= 1`.
    pub gain: f64,
    /// Seed photon number `|alpha|^2`.
    pub alpha_sq: f64,
    /// Transmission of each arm, `0 < eta <= 1`.
    pub eta: f64,
    /// Classical gain applied to the conjugate homodyne record.
    pub g: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl InterferometerParams {
    /// Parameters with both phases at the operating point zero.
    pub fn new(gain: f64, alpha_sq: f64, eta: f64, g: f64) -> Self {
        Self {
            gain,
            alpha_sq,
            eta,
            g,
            phi1: 0.0,
            phi2: 0.0,
        }
    }

    pub fn with_phases(self, phi1: f64, phi2: f64) -> Self {
        Self { phi1, phi2, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        check_param("G", self.gain, self.gain >= 1.0, "gain must be >= 1")?;
        check_param(
            "alpha_sq",
            self.alpha_sq,
            self.alpha_sq >= 0.0,
            "seed photon number must be >= 0",
        )?;
        check_param(
            "eta",
            self.eta,
            self.eta > 0.0 && self.eta <= 1.0,
            "transmission must lie in (0, 1]",
        )?;
        check_param("g", self.g, self.g > 0.0, "classical gain must be positive")?;
        check_param("phi1", self.phi1, true, "must be finite")?;
        check_param("phi2", self.phi2, true, "must be finite")
    }

    /// Validates, then rejects an unseeded probe: with `|alpha|^2 = 0` the
    /// mean carries no phase and no LOD exists.
    fn validate_seeded(&self) -> Result<()> {
        self.validate()?;
        if self.alpha_sq == 0.0 {
            return Err(Error::SingularEstimator);
        }
        Ok(())
    }

    /// Whether `|alpha|^2` is large enough for the bright-beam formulas.
    pub fn is_bright(&self) -> bool {
        self.alpha_sq >= BRIGHT_SEED_THRESHOLD
    }

    /// `sqrt(G) + g sqrt(G-1)`.
    fn signal_factor(&self) -> f64 {
        self.gain.sqrt() + self.g * (self.gain - 1.0).sqrt()
    }
}

/// Coefficients of the estimated phase combination `beta1 phi1 + beta2 phi2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaWeights {
    pub beta1: f64,
    pub beta2: f64,
}

impl BetaWeights {
    pub fn as_array(&self) -> [f64; 2] {
        [self.beta1, self.beta2]
    }
}

/// Weights set by the gain and the classical gain:
/// `beta1 = sqrt(G) / (sqrt(G) + g sqrt(G-1))`, `beta2 = 1 - beta1`.
pub fn beta_weights(gain: f64, g: f64) -> Result<BetaWeights> {
    check_param("G", gain, gain >= 1.0, "gain must be >= 1")?;
    check_param("g", g, g > 0.0, "classical gain must be positive")?;
    let direct = gain.sqrt();
    let cross = g * (gain - 1.0).sqrt();
    let total = direct + cross;
    Ok(BetaWeights {
        beta1: direct / total,
        beta2: cross / total,
    })
}

/// Parameters of the M-phase schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiPhaseParams {
    /// Number of phase elements.
    pub m: usize,
    /// Mean photon number on each phase element.
    pub n: f64,
}

impl MultiPhaseParams {
    pub fn new(m: usize, n: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter {
                name: "M",
                value: 0.0,
                reason: "need at least one phase",
            });
        }
        check_param("n", n, n > 0.0, "photon number must be positive")?;
        Ok(Self { m, n })
    }

    fn require_even(&self) -> Result<()> {
        if self.m.is_multiple_of(2) {
            Ok(())
        } else {
            Err(Error::OddPhaseCount(self.m))
        }
    }
}

/// The seven sensing configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    TsuDistributed,
    TsuSeparable,
    ClassicalDistributed,
    ClassicalSeparable,
    MultiClassical,
    MultiSeparable,
    MultiEntangled,
}

impl Scheme {
    pub const ALL: [Scheme; 7] = [
        Scheme::TsuDistributed,
        Scheme::TsuSeparable,
        Scheme::ClassicalDistributed,
        Scheme::ClassicalSeparable,
        Scheme::MultiClassical,
        Scheme::MultiSeparable,
        Scheme::MultiEntangled,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Scheme::TsuDistributed => "tsu-dis",
            Scheme::TsuSeparable => "tsu-sep",
            Scheme::ClassicalDistributed => "cla-dis",
            Scheme::ClassicalSeparable => "cla-sep",
            Scheme::MultiClassical => "multi-cla",
            Scheme::MultiSeparable => "multi-sep",
            Scheme::MultiEntangled => "multi-ent",
        }
    }

    pub fn is_multi_phase(&self) -> bool {
        matches!(
            self,
            Scheme::MultiClassical | Scheme::MultiSeparable | Scheme::MultiEntangled
        )
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Scheme::ALL
            .iter()
            .copied()
            .find(|sc| sc.tag() == s)
            .ok_or_else(|| {
                let tags: Vec<&str> = Scheme::ALL.iter().map(|s| s.tag()).collect();
                format!("unknown scheme `{s}` (expected one of {})", tags.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamsSnapshot {
    TwoPhase(InterferometerParams),
    MultiPhase(MultiPhaseParams),
}

/// A limit of detection together with what produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LodResult {
    pub scheme: Scheme,
    pub delta_phi_sq: f64,
    pub params: ParamsSnapshot,
}

impl LodResult {
    fn two_phase(scheme: Scheme, delta_phi_sq: f64, params: &InterferometerParams) -> Self {
        Self {
            scheme,
            delta_phi_sq,
            params: ParamsSnapshot::TwoPhase(*params),
        }
    }

    fn multi_phase(scheme: Scheme, delta_phi_sq: f64, params: MultiPhaseParams) -> Self {
        Self {
            scheme,
            delta_phi_sq,
            params: ParamsSnapshot::MultiPhase(params),
        }
    }
}

/// `Var(X_+)` of the distributed tSU(1,1) joint quadrature at zero phase:
/// `(g^2+1)(1 - 2 eta + 2 eta G) - 4 g eta sqrt(G(G-1))`.
pub fn tsu_joint_variance(gain: f64, eta: f64, g: f64) -> f64 {
    (g * g + 1.0) * (1.0 - 2.0 * eta + 2.0 * eta * gain)
        - 4.0 * g * eta * (gain * (gain - 1.0)).sqrt()
}

/// Distributed sensing with one tSU(1,1) interferometer.
pub fn lod_tsu_distributed(p: &InterferometerParams) -> Result<LodResult> {
    p.validate_seeded()?;
    let s = p.signal_factor();
    let value = tsu_joint_variance(p.gain, p.eta, p.g) / (4.0 * p.alpha_sq * p.eta * s * s);
    Ok(LodResult::two_phase(Scheme::TsuDistributed, value, p))
}

/// Two tSU(1,1) interferometers, each sensing one phase: twice the
/// distributed value.
pub fn lod_tsu_separable(p: &InterferometerParams) -> Result<LodResult> {
    let dis = lod_tsu_distributed(p)?;
    Ok(LodResult::two_phase(
        Scheme::TsuSeparable,
        2.0 * dis.delta_phi_sq,
        p,
    ))
}

/// Coherent beams with the probe and conjugate powers:
/// `(g^2+1) / (4 |alpha|^2 eta (sqrt(G) + g sqrt(G-1))^2)`.
pub fn lod_classical_distributed(p: &InterferometerParams) -> Result<LodResult> {
    p.validate_seeded()?;
    let s = p.signal_factor();
    let value = (p.g * p.g + 1.0) / (4.0 * p.alpha_sq * p.eta * s * s);
    Ok(LodResult::two_phase(Scheme::ClassicalDistributed, value, p))
}

pub fn lod_classical_separable(p: &InterferometerParams) -> Result<LodResult> {
    let dis = lod_classical_distributed(p)?;
    Ok(LodResult::two_phase(
        Scheme::ClassicalSeparable,
        2.0 * dis.delta_phi_sq,
        p,
    ))
}

/// Closed-form QCRB of the distributed tSU(1,1) state for the `g = 1`
/// weights; `p.g` is ignored.
pub fn qcrb_tsu(p: &InterferometerParams) -> Result<f64> {
    InterferometerParams { g: 1.0, ..*p }.validate_seeded()?;
    let (gain, eta) = (p.gain, p.eta);
    let s = gain.sqrt() + (gain - 1.0).sqrt();
    let num = 1.0 - 2.0 * eta + 2.0 * eta * gain - 2.0 * eta * (gain * (gain - 1.0)).sqrt();
    Ok(num / (2.0 * p.alpha_sq * eta * s * s))
}

/// Range of classical gains `g` for which the distributed tSU(1,1) beats
/// the classical distributed configuration.
///
/// The endpoints are the roots of the quadratic in `g` obtained by equating
/// the two limits of detection. `None` when there is no advantage (`G = 1`).
pub fn advantage_g_window(gain: f64, eta: f64) -> Result<Option<(f64, f64)>> {
    check_param("G", gain, gain >= 1.0, "gain must be >= 1")?;
    check_param(
        "eta",
        eta,
        eta > 0.0 && eta <= 1.0,
        "transmission must lie in (0, 1]",
    )?;
    // quantum numerator - classical numerator = a g^2 + b g + c
    let a = 2.0 * eta * (gain - 1.0);
    let b = -4.0 * eta * (gain * (gain - 1.0)).sqrt();
    let c = a;
    let disc = b * b - 4.0 * a * c;
    if a <= 0.0 || disc <= 0.0 {
        return Ok(None);
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = (q / a, c / q);
    Ok(Some((r1.min(r2), r1.max(r2))))
}

/// Transmission at which the `g`-weighted joint quadrature sits
/// `reduction_db` below its coherent-state benchmark `g^2 + 1`.
///
/// The variance is affine in `eta`, so the root is explicit. Errors when
/// the requested reduction is not reachable for any `eta` in `(0, 1]`.
pub fn eta_for_noise_reduction(gain: f64, g: f64, reduction_db: f64) -> Result<f64> {
    check_param("G", gain, gain >= 1.0, "gain must be >= 1")?;
    check_param("g", g, g > 0.0, "classical gain must be positive")?;
    check_param("reduction_db", reduction_db, true, "must be finite")?;
    let benchmark = g * g + 1.0;
    let per_eta = 2.0 * (gain - 1.0) * benchmark - 4.0 * g * (gain * (gain - 1.0)).sqrt();
    let target = benchmark * metrology::undb(-reduction_db);
    let eta = (target - benchmark) / per_eta;
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "reduction_db",
            value: reduction_db,
            reason: "not reachable with transmission in (0, 1]",
        });
    }
    Ok(eta)
}

/// Total photon number of the doubly seeded two-mode squeezer:
/// `2(G-1) + 4 G |alpha|^2 + 2 |alpha|^2 (2 sqrt(G(G-1)) - 1)`.
pub fn n_total(gain: f64, alpha_sq: f64) -> Result<f64> {
    check_param("G", gain, gain >= 1.0, "gain must be >= 1")?;
    check_param(
        "alpha_sq",
        alpha_sq,
        alpha_sq >= 0.0,
        "must be non-negative",
    )?;
    Ok(2.0 * (gain - 1.0)
        + 4.0 * gain * alpha_sq
        + 2.0 * alpha_sq * (2.0 * (gain * (gain - 1.0)).sqrt() - 1.0))
}

/// `1 / (4 M n)`.
pub fn lod_multi_classical(m: usize, n: f64) -> Result<LodResult> {
    let p = MultiPhaseParams::new(m, n)?;
    Ok(LodResult::multi_phase(
        Scheme::MultiClassical,
        1.0 / (4.0 * m as f64 * n),
        p,
    ))
}

/// Independent single-mode squeezed probes: `1 / (4 M n (n + 1))`.
pub fn lod_multi_separable(m: usize, n: f64) -> Result<LodResult> {
    let p = MultiPhaseParams::new(m, n)?;
    Ok(LodResult::multi_phase(
        Scheme::MultiSeparable,
        1.0 / (4.0 * m as f64 * n * (n + 1.0)),
        p,
    ))
}

/// Entangled network LOD before the photon constraint is imposed:
/// `(2G - 1 - 2 sqrt(G(G-1))) / (8 |alpha|^2 (sqrt(G) + sqrt(G-1))^2)`.
/// Independent of `M`.
pub fn lod_multi_entangled_raw(gain: f64, alpha_sq: f64) -> Result<f64> {
    check_param("G", gain, gain >= 1.0, "gain must be >= 1")?;
    check_param(
        "alpha_sq",
        alpha_sq,
        alpha_sq > 0.0,
        "seed photon number must be positive",
    )?;
    // 2G-1-2sqrt(G(G-1)) = 1/p and (sqrt(G)+sqrt(G-1))^2 = p; the product
    // form avoids the cancellation at large G
    let p = 2.0 * gain - 1.0 + 2.0 * (gain * (gain - 1.0)).sqrt();
    Ok(1.0 / (8.0 * alpha_sq * p * p))
}

/// Optimum of the entangled network under `N_tot / M = n`:
/// `1 / (2 M n (M n + 2))`.
pub fn lod_multi_entangled_optimal(m: usize, n: f64) -> Result<LodResult> {
    let p = MultiPhaseParams::new(m, n)?;
    p.require_even()?;
    let total = m as f64 * n;
    Ok(LodResult::multi_phase(
        Scheme::MultiEntangled,
        1.0 / (2.0 * total * (total + 2.0)),
        p,
    ))
}

/// Settings of the one-dimensional minimiser used by [`optimize_entangled`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Bracket width at which the search stops, relative to `max(1, G)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledOptimum {
    pub gain: f64,
    pub alpha_sq: f64,
    pub lod: f64,
    pub iterations: usize,
}

/// Seed photon number that spends exactly the budget `N_tot = total` at
/// gain `G`; negative when the spontaneous photons alone exceed it.
pub fn seed_for_budget(gain: f64, total: f64) -> f64 {
    let per_seed = 2.0 * (2.0 * gain - 1.0 + 2.0 * (gain * (gain - 1.0)).sqrt());
    (total - 2.0 * (gain - 1.0)) / per_seed
}

/// Minimises [`lod_multi_entangled_raw`] subject to `n_total(G, |alpha|^2) = M n`.
///
/// The constraint is solved for `|alpha|^2` (see [`seed_for_budget`]) and the
/// remaining one-dimensional problem in `G` over `(1, 1 + M n / 2)` is
/// minimised by golden-section search.
pub fn optimize_entangled(m: usize, n: f64, config: &SolverConfig) -> Result<EntangledOptimum> {
    let p = MultiPhaseParams::new(m, n)?;
    p.require_even()?;
    check_param("tol", config.tol, config.tol > 0.0, "must be positive")?;
    let total = m as f64 * n;
    let upper = 1.0 + total / 2.0;
    if seed_for_budget(1.0, total) <= 0.0 {
        return Err(Error::InfeasibleBudget { m, n });
    }
    let objective = |gain: f64| -> f64 {
        let seed = seed_for_budget(gain, total);
        if seed <= 0.0 {
            return f64::INFINITY;
        }
        lod_multi_entangled_raw(gain, seed).unwrap_or(f64::INFINITY)
    };

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (1.0, upper);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    let mut iterations = 0;
    while (hi - lo) > config.tol * hi.max(1.0) && iterations < config.max_iter {
        iterations += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    let gain = if f1 <= f2 { x1 } else { x2 };
    let alpha_sq = seed_for_budget(gain, total);
    let lod = objective(gain);
    if !(alpha_sq > 0.0 && lod.is_finite()) {
        return Err(Error::InfeasibleBudget { m, n });
    }
    Ok(EntangledOptimum {
        gain,
        alpha_sq,
        lod,
        iterations,
    })
}

/// Closed-form LOD of `scheme` at two-phase parameters.
pub fn two_phase_lod(scheme: Scheme, p: &InterferometerParams) -> Result<LodResult> {
    match scheme {
        Scheme::TsuDistributed => lod_tsu_distributed(p),
        Scheme::TsuSeparable => lod_tsu_separable(p),
        Scheme::ClassicalDistributed => lod_classical_distributed(p),
        Scheme::ClassicalSeparable => lod_classical_separable(p),
        other => Err(Error::InvalidParameter {
            name: "scheme",
            value: f64::NAN,
            reason: if other.is_multi_phase() {
                "multi-phase scheme given two-phase parameters"
            } else {
                "unsupported"
            },
        }),
    }
}

/// Closed-form LOD of an M-phase scheme; the entangled value is the
/// constrained optimum.
pub fn multi_phase_lod(scheme: Scheme, m: usize, n: f64) -> Result<LodResult> {
    match scheme {
        Scheme::MultiClassical => lod_multi_classical(m, n),
        Scheme::MultiSeparable => lod_multi_separable(m, n),
        Scheme::MultiEntangled => lod_multi_entangled_optimal(m, n),
        _ => Err(Error::InvalidParameter {
            name: "scheme",
            value: f64::NAN,
            reason: "two-phase scheme given multi-phase parameters",
        }),
    }
}

/// A concrete sensor network: how to prepare the probe state for given
/// phases and how it is read out.
#[derive(Debug, Clone, PartialEq)]
pub enum Network {
    /// One of the four two-phase configurations.
    TwoPhase {
        scheme: Scheme,
        params: InterferometerParams,
    },
    /// Coherent beam of `M n` photons split evenly over `M` phases.
    MultiClassical { m: usize, n: f64 },
    /// `M` displaced single-mode squeezed states, each with `n` photons and
    /// the squeezing/displacement split that minimises its LOD.
    MultiSeparable { m: usize, n: f64 },
    /// Doubly seeded two-mode squeezer whose outputs are each split `M/2`
    /// ways. `bsn_phases`, when given, adds a phase to every BSN output
    /// (arm `a` outputs first) and the homodyne phases are co-rotated.
    MultiEntangled {
        m: usize,
        gain: f64,
        alpha_sq: f64,
        bsn_phases: Option<Vec<f64>>,
    },
}

/// Result of running a network through the exact Gaussian pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineLod {
    pub slope: f64,
    pub variance: f64,
    pub lod: f64,
}

impl Network {
    pub fn two_phase(scheme: Scheme, params: InterferometerParams) -> Result<Self> {
        if scheme.is_multi_phase() {
            return Err(Error::InvalidParameter {
                name: "scheme",
                value: f64::NAN,
                reason: "multi-phase scheme given two-phase parameters",
            });
        }
        params.validate()?;
        Ok(Network::TwoPhase { scheme, params })
    }

    pub fn multi_classical(m: usize, n: f64) -> Result<Self> {
        MultiPhaseParams::new(m, n)?;
        Ok(Network::MultiClassical { m, n })
    }

    pub fn multi_separable(m: usize, n: f64) -> Result<Self> {
        MultiPhaseParams::new(m, n)?;
        Ok(Network::MultiSeparable { m, n })
    }

    pub fn multi_entangled(m: usize, gain: f64, alpha_sq: f64) -> Result<Self> {
        Self::multi_entangled_with_bsn_phases(m, gain, alpha_sq, None)
    }

    pub fn multi_entangled_with_bsn_phases(
        m: usize,
        gain: f64,
        alpha_sq: f64,
        bsn_phases: Option<Vec<f64>>,
    ) -> Result<Self> {
        MultiPhaseParams::new(m, 1.0)?.require_even()?;
        check_param("G", gain, gain >= 1.0, "gain must be >= 1")?;
        check_param(
            "alpha_sq",
            alpha_sq,
            alpha_sq > 0.0,
            "seed photon number must be positive",
        )?;
        if let Some(ph) = &bsn_phases {
            if ph.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: ph.len(),
                });
            }
        }
        Ok(Network::MultiEntangled {
            m,
            gain,
            alpha_sq,
            bsn_phases,
        })
    }

    /// The entangled network at the photon-budget optimum for `(M, n)`.
    pub fn multi_entangled_optimal(m: usize, n: f64, config: &SolverConfig) -> Result<Self> {
        let opt = optimize_entangled(m, n, config)?;
        Self::multi_entangled(m, opt.gain, opt.alpha_sq)
    }

    pub fn scheme(&self) -> Scheme {
        match self {
            Network::TwoPhase { scheme, .. } => *scheme,
            Network::MultiClassical { .. } => Scheme::MultiClassical,
            Network::MultiSeparable { .. } => Scheme::MultiSeparable,
            Network::MultiEntangled { .. } => Scheme::MultiEntangled,
        }
    }

    pub fn n_phases(&self) -> usize {
        match self {
            Network::TwoPhase { .. } => 2,
            Network::MultiClassical { m, .. }
            | Network::MultiSeparable { m, .. }
            | Network::MultiEntangled { m, .. } => *m,
        }
    }

    /// Operating point: the configured phases for two-phase networks, zero
    /// for M-phase networks.
    pub fn operating_phases(&self) -> Vec<f64> {
        match self {
            Network::TwoPhase { params, .. } => vec![params.phi1, params.phi2],
            _ => vec![0.0; self.n_phases()],
        }
    }

    /// Weights of the estimated phase combination.
    pub fn beta(&self) -> Vec<f64> {
        match self {
            Network::TwoPhase { params, .. } => beta_weights(params.gain, params.g)
                .map(|b| b.as_array().to_vec())
                .expect("validated on construction"),
            _ => vec![1.0 / self.n_phases() as f64; self.n_phases()],
        }
    }

    /// Probe state after the phase elements (and losses) for `phases`.
    pub fn build(&self, phases: &[f64]) -> Result<GaussianState> {
        if phases.len() != self.n_phases() {
            return Err(Error::DimensionMismatch {
                expected: self.n_phases(),
                got: phases.len(),
            });
        }
        match self {
            Network::TwoPhase { scheme, params } => {
                build_two_phase(*scheme, params, phases[0], phases[1])
            }
            Network::MultiClassical { m, n } => build_multi_classical(*m, *n, phases),
            Network::MultiSeparable { m, n } => build_multi_separable(*m, *n, phases),
            Network::MultiEntangled {
                m,
                gain,
                alpha_sq,
                bsn_phases,
            } => {
                let zeros = vec![0.0; *m];
                let bsn = bsn_phases.as_deref().unwrap_or(&zeros);
                build_multi_entangled_inner(*m, *gain, *alpha_sq, phases, bsn)
            }
        }
    }

    /// Homodyne detectors and classical gains forming the joint quadrature.
    pub fn channels(&self) -> Vec<HomodyneChannel> {
        match self {
            Network::TwoPhase { scheme, params } => {
                let pair = |a: usize, b: usize| {
                    [
                        HomodyneChannel::phase_quadrature(a, 1.0),
                        HomodyneChannel::phase_quadrature(b, params.g),
                    ]
                };
                match scheme {
                    Scheme::TsuDistributed | Scheme::ClassicalDistributed => pair(0, 1).to_vec(),
                    _ => pair(0, 1).into_iter().chain(pair(2, 3)).collect(),
                }
            }
            Network::MultiClassical { m, .. } | Network::MultiSeparable { m, .. } => (0..*m)
                .map(|k| HomodyneChannel::phase_quadrature(k, 1.0))
                .collect(),
            Network::MultiEntangled { m, bsn_phases, .. } => entangled_output_modes(*m)
                .into_iter()
                .enumerate()
                .map(|(j, mode)| {
                    let chi = bsn_phases.as_ref().map_or(0.0, |p| p[j]);
                    HomodyneChannel::new(mode, FRAC_PI_2 - chi, 1.0)
                })
                .collect(),
        }
    }

    /// Closed-form LOD for this network's scheme and parameters.
    pub fn closed_form_lod(&self) -> Result<f64> {
        match self {
            Network::TwoPhase { scheme, params } => {
                Ok(two_phase_lod(*scheme, params)?.delta_phi_sq)
            }
            Network::MultiClassical { m, n } => Ok(lod_multi_classical(*m, *n)?.delta_phi_sq),
            Network::MultiSeparable { m, n } => Ok(lod_multi_separable(*m, *n)?.delta_phi_sq),
            Network::MultiEntangled { gain, alpha_sq, .. } => {
                lod_multi_entangled_raw(*gain, *alpha_sq)
            }
        }
    }

    /// LOD from the exact Gaussian state: slope of `<X_+>` under a common
    /// phase shift and `Var(X_+)` at the operating point.
    pub fn pipeline_lod(&self) -> Result<PipelineLod> {
        let phases = self.operating_phases();
        let channels = self.channels();
        let state = self.build(&phases)?;
        let variance = metrology::joint_quadrature_stats(&state, &channels)?.variance;
        let slope = metrology::common_phase_slope(
            |p| self.build(p),
            &phases,
            &channels,
            PIPELINE_SLOPE_STEP,
        )?;
        Ok(PipelineLod {
            slope,
            variance,
            lod: metrology::lod(slope, variance)?,
        })
    }
}

fn build_two_phase(
    scheme: Scheme,
    p: &InterferometerParams,
    phi1: f64,
    phi2: f64,
) -> Result<GaussianState> {
    let alpha = p.alpha_sq.sqrt();
    let probe = real((p.gain * p.alpha_sq).sqrt());
    let conjugate = real(((p.gain - 1.0) * p.alpha_sq).sqrt());
    let state = match scheme {
        Scheme::TsuDistributed => GaussianState::vacuum(2)?
            .displace(0, real(alpha))?
            .two_mode_squeeze(0, 1, p.gain)?
            .phase_shift(0, phi1)?
            .phase_shift(1, phi2)?,
        Scheme::TsuSeparable => GaussianState::vacuum(4)?
            .displace(0, real(alpha))?
            .two_mode_squeeze(0, 1, p.gain)?
            .displace(2, real(alpha))?
            .two_mode_squeeze(2, 3, p.gain)?
            .phase_shift(0, phi1)?
            .phase_shift(3, phi2)?,
        Scheme::ClassicalDistributed => GaussianState::vacuum(2)?
            .displace(0, probe)?
            .displace(1, conjugate)?
            .phase_shift(0, phi1)?
            .phase_shift(1, phi2)?,
        Scheme::ClassicalSeparable => GaussianState::vacuum(4)?
            .displace(0, probe)?
            .displace(1, conjugate)?
            .displace(2, probe)?
            .displace(3, conjugate)?
            .phase_shift(0, phi1)?
            .phase_shift(3, phi2)?,
        _ => unreachable!("two-phase builder called with {scheme}"),
    };
    (0..state.n_modes()).try_fold(state, |s, mode| s.loss(mode, p.eta))
}

/// Distributed tSU(1,1): seed `|alpha|^2` on the probe, vacuum conjugate,
/// squeeze, phases `phi1`/`phi2`, equal loss `eta` on both arms.
pub fn build_tsu_distributed(p: &InterferometerParams) -> Result<GaussianState> {
    p.validate()?;
    build_two_phase(Scheme::TsuDistributed, p, p.phi1, p.phi2)
}

/// Two independent tSU(1,1) interferometers on modes (0, 1) and (2, 3);
/// `phi1` acts on probe 0, `phi2` on conjugate 3.
pub fn build_tsu_separable(p: &InterferometerParams) -> Result<GaussianState> {
    p.validate()?;
    build_two_phase(Scheme::TsuSeparable, p, p.phi1, p.phi2)
}

/// Coherent beams with `G |alpha|^2` and `(G-1) |alpha|^2` photons.
pub fn build_classical_distributed(p: &InterferometerParams) -> Result<GaussianState> {
    p.validate()?;
    build_two_phase(Scheme::ClassicalDistributed, p, p.phi1, p.phi2)
}

/// Two coherent pairs on modes (0, 1) and (2, 3) with the same powers.
pub fn build_classical_separable(p: &InterferometerParams) -> Result<GaussianState> {
    p.validate()?;
    build_two_phase(Scheme::ClassicalSeparable, p, p.phi1, p.phi2)
}

/// Output modes of the entangled network: arm `a` split outputs, then arm `b`.
fn entangled_output_modes(m: usize) -> Vec<usize> {
    let ways = m / 2;
    // balanced_split keeps the split mode and appends ways-1 new ones
    let mut modes = vec![0];
    modes.extend(2..2 + ways - 1);
    modes.push(1);
    modes.extend(2 + ways - 1..2 + 2 * (ways - 1));
    modes
}

fn build_multi_entangled_inner(
    m: usize,
    gain: f64,
    alpha_sq: f64,
    phases: &[f64],
    bsn_phases: &[f64],
) -> Result<GaussianState> {
    let ways = m / 2;
    let alpha = real(alpha_sq.sqrt());
    let seeded = GaussianState::vacuum(2)?
        .displace(0, alpha)?
        .displace(1, alpha)?
        .two_mode_squeeze(0, 1, gain)?;
    let (split_a, _) = seeded.balanced_split_with_phases(0, ways, &bsn_phases[..ways])?;
    let (split, _) = split_a.balanced_split_with_phases(1, ways, &bsn_phases[ways..])?;
    entangled_output_modes(m)
        .into_iter()
        .zip(phases)
        .try_fold(split, |s, (mode, &phi)| s.phase_shift(mode, phi))
}

/// Entangled M-phase network: both squeezer inputs seeded with `|alpha|^2`,
/// each output split into `M/2` modes, then one phase per mode.
pub fn build_multi_entangled(
    m: usize,
    gain: f64,
    alpha_sq: f64,
    phases: &[f64],
) -> Result<GaussianState> {
    Network::multi_entangled(m, gain, alpha_sq)?.build(phases)
}

fn build_multi_classical(m: usize, n: f64, phases: &[f64]) -> Result<GaussianState> {
    let source = GaussianState::coherent(real((m as f64 * n).sqrt()));
    let (split, modes) = source.balanced_split(0, m)?;
    modes
        .into_iter()
        .zip(phases)
        .try_fold(split, |s, (mode, &phi)| s.phase_shift(mode, phi))
}

/// Optimal split of `n` photons between squeezing and displacement for a
/// single-mode probe read out in the squeezed quadrature: `e^{2r} = 2n + 1`,
/// `|alpha|^2 = n (n + 1) / (2n + 1)`.
pub fn separable_probe_split(n: f64) -> (f64, f64) {
    let r = 0.5 * (2.0 * n + 1.0).ln();
    let alpha_sq = n * (n + 1.0) / (2.0 * n + 1.0);
    (r, alpha_sq)
}

fn build_multi_separable(m: usize, n: f64, phases: &[f64]) -> Result<GaussianState> {
    let (r, alpha_sq) = separable_probe_split(n);
    let mut state = GaussianState::vacuum(m)?;
    for (k, &phi) in phases.iter().enumerate() {
        state = state
            .single_mode_squeeze(k, r)?
            .displace(k, real(alpha_sq.sqrt()))?
            .phase_shift(k, phi)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params(gain: f64, eta: f64, g: f64) -> InterferometerParams {
        InterferometerParams::new(gain, 100.0, eta, g)
    }

    #[test]
    fn beta_weight_values() {
        let b = beta_weights(5.0, 0.618).unwrap();
        assert_abs_diff_eq!(b.beta1, 0.644, epsilon = 1e-3);
        assert_abs_diff_eq!(b.beta2, 0.356, epsilon = 1e-3);
        let b = beta_weights(5.0, 1.618).unwrap();
        assert_abs_diff_eq!(b.beta1, 0.409, epsilon = 1e-3);
        assert_abs_diff_eq!(b.beta2, 0.591, epsilon = 1e-3);
        let b = beta_weights(5.0, 1.0).unwrap();
        let s5 = 5f64.sqrt();
        assert_relative_eq!(b.beta1, s5 / (s5 + 2.0), max_relative = 1e-15);
        assert_abs_diff_eq!(b.beta1, 0.52786, epsilon = 1e-5);
        assert_abs_diff_eq!(b.beta2, 0.47214, epsilon = 1e-5);
        assert_relative_eq!(b.beta1 + b.beta2, 1.0, max_relative = 1e-15);
        assert!(beta_weights(0.9, 1.0).is_err());
        assert!(beta_weights(2.0, 0.0).is_err());
    }

    #[test]
    fn tsu_distributed_values() {
        let l = lod_tsu_distributed(&params(5.0, 1.0, 1.0)).unwrap();
        assert_eq!(l.scheme, Scheme::TsuDistributed);
        let expect = (18.0 - 4.0 * 20f64.sqrt()) / (4.0 * (5f64.sqrt() + 2.0).powi(2));
        assert_relative_eq!(l.delta_phi_sq * 100.0, expect, max_relative = 1e-14);
        assert_abs_diff_eq!(l.delta_phi_sq * 100.0, 1.5528e-3, epsilon = 1e-7);
        let lossy = lod_tsu_distributed(&params(5.0, 0.8, 1.0)).unwrap();
        assert_abs_diff_eq!(lossy.delta_phi_sq * 100.0, 8.519e-3, epsilon = 1e-6);
        for g in [0.3, 1.0, 2.5] {
            let unit = lod_tsu_distributed(&params(1.0, 0.7, g)).unwrap();
            assert_relative_eq!(
                unit.delta_phi_sq,
                (g * g + 1.0) / (4.0 * 100.0 * 0.7),
                max_relative = 1e-14
            );
        }
        let zero_seed = InterferometerParams::new(5.0, 0.0, 1.0, 1.0);
        assert!(lod_tsu_distributed(&zero_seed).is_err());
        assert!(lod_tsu_distributed(&params(5.0, 1.2, 1.0)).is_err());
        assert!(!InterferometerParams::new(5.0, 5.0, 1.0, 1.0).is_bright());
    }

    #[test]
    fn separable_is_twice_distributed() {
        let p = params(5.0, 1.0, 1.0);
        let dis = lod_tsu_distributed(&p).unwrap().delta_phi_sq;
        let sep = lod_tsu_separable(&p).unwrap().delta_phi_sq;
        assert_eq!(sep / dis, 2.0);
        assert_abs_diff_eq!(sep * 100.0, 3.1056e-3, epsilon = 1e-7);
        assert_abs_diff_eq!(metrology::db(sep / dis).unwrap(), 3.0103, epsilon = 1e-4);
        let cdis = lod_classical_distributed(&p).unwrap().delta_phi_sq;
        let csep = lod_classical_separable(&p).unwrap().delta_phi_sq;
        assert_eq!(csep / cdis, 2.0);
        assert_abs_diff_eq!(csep * 100.0, 5.573e-2, epsilon = 1e-5);
    }

    #[test]
    fn classical_distributed_values() {
        let p = params(5.0, 1.0, 1.0);
        let c = lod_classical_distributed(&p).unwrap().delta_phi_sq;
        assert_abs_diff_eq!(c * 100.0, 2.7864e-2, epsilon = 1e-6);
        let q = lod_tsu_distributed(&p).unwrap().delta_phi_sq;
        assert_abs_diff_eq!(c / q, 17.944, epsilon = 1e-3);
        assert_abs_diff_eq!(metrology::db(c / q).unwrap(), 12.54, epsilon = 5e-3);
        let half = lod_classical_distributed(&params(5.0, 0.5, 1.0))
            .unwrap()
            .delta_phi_sq;
        assert_relative_eq!(half, 2.0 * c, max_relative = 1e-15);
    }

    #[test]
    fn qcrb_closed_form_values() {
        let p = params(5.0, 1.0, 1.0);
        assert_relative_eq!(
            qcrb_tsu(&p).unwrap(),
            lod_tsu_distributed(&p).unwrap().delta_phi_sq,
            max_relative = 1e-14
        );
        let unit = params(1.0, 0.6, 1.0);
        assert_relative_eq!(
            qcrb_tsu(&unit).unwrap(),
            1.0 / (2.0 * 100.0 * 0.6),
            max_relative = 1e-14
        );
        let lossy = params(5.0, 0.8, 1.0);
        let expect = (1.0 - 1.6 + 8.0 - 2.0 * 0.8 * 20f64.sqrt())
            / (2.0 * 100.0 * 0.8 * (5f64.sqrt() + 2.0).powi(2));
        assert_relative_eq!(qcrb_tsu(&lossy).unwrap(), expect, max_relative = 1e-14);
        assert_abs_diff_eq!(expect, 8.519e-5, epsilon = 1e-8);
    }

    #[test]
    fn advantage_window_endpoints() {
        let (lo, hi) = advantage_g_window(5.0, 1.0).unwrap().unwrap();
        assert_abs_diff_eq!(lo, 0.618, epsilon = 1e-3);
        assert_abs_diff_eq!(hi, 1.618, epsilon = 1e-3);
        for eta in [1.0, 0.8, 0.3] {
            let (lo, hi) = advantage_g_window(5.0, eta).unwrap().unwrap();
            for g in [lo, hi] {
                let p = params(5.0, eta, g);
                let q = lod_tsu_distributed(&p).unwrap().delta_phi_sq;
                let c = lod_classical_distributed(&p).unwrap().delta_phi_sq;
                assert!(((q - c) / c).abs() < 1e-10);
            }
            let mid = params(5.0, eta, 0.5 * (lo + hi));
            assert!(
                lod_tsu_distributed(&mid).unwrap().delta_phi_sq
                    < lod_classical_distributed(&mid).unwrap().delta_phi_sq
            );
            let outside = params(5.0, eta, hi * 1.2);
            assert!(
                lod_tsu_distributed(&outside).unwrap().delta_phi_sq
                    > lod_classical_distributed(&outside).unwrap().delta_phi_sq
            );
        }
        // the window is loss independent: both numerators carry eta the same way
        let (lo8, hi8) = advantage_g_window(5.0, 0.8).unwrap().unwrap();
        assert_relative_eq!(lo8, lo, max_relative = 1e-12);
        assert_relative_eq!(hi8, hi, max_relative = 1e-12);
        assert_eq!(advantage_g_window(1.0, 1.0).unwrap(), None);
        assert!(advantage_g_window(0.5, 1.0).is_err());
    }

    #[test]
    fn advantage_vanishes_near_unit_gain() {
        // g = 1 is always inside the window; the gain over classical tends to 1
        let mut last = f64::INFINITY;
        for gain in [1.5, 1.1, 1.01, 1.001] {
            let (lo, hi) = advantage_g_window(gain, 1.0).unwrap().unwrap();
            assert!(lo < 1.0 && hi > 1.0);
            let p = params(gain, 1.0, 1.0);
            let ratio = lod_classical_distributed(&p).unwrap().delta_phi_sq
                / lod_tsu_distributed(&p).unwrap().delta_phi_sq;
            assert!(ratio > 1.0 && ratio < last);
            last = ratio;
        }
        assert!(last < 1.2);
    }

    #[test]
    fn photon_budget_values() {
        assert_eq!(n_total(5.0, 0.0).unwrap(), 8.0);
        assert_relative_eq!(n_total(1.0, 37.0).unwrap(), 74.0, max_relative = 1e-15);
        let expect = 8.0 + 2000.0 + 200.0 * (-1.0 + 2.0 * 20f64.sqrt());
        assert_relative_eq!(n_total(5.0, 100.0).unwrap(), expect, max_relative = 1e-15);
        assert_abs_diff_eq!(n_total(5.0, 100.0).unwrap(), 3596.854, epsilon = 1e-3);
    }

    #[test]
    fn photon_budget_matches_state() {
        for (gain, alpha_sq) in [(5.0, 100.0), (1.3, 2.0), (12.0, 0.5)] {
            let s = GaussianState::vacuum(2)
                .unwrap()
                .displace(0, real(f64::sqrt(alpha_sq)))
                .unwrap()
                .displace(1, real(f64::sqrt(alpha_sq)))
                .unwrap()
                .two_mode_squeeze(0, 1, gain)
                .unwrap();
            assert_relative_eq!(
                s.total_photons(),
                n_total(gain, alpha_sq).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn multi_phase_closed_forms() {
        assert_relative_eq!(
            lod_multi_classical(2, 100.0).unwrap().delta_phi_sq,
            1.25e-3,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            lod_multi_classical(1, 100.0).unwrap().delta_phi_sq,
            1.0 / 400.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            lod_multi_classical(3, 200.0).unwrap().delta_phi_sq * 2.0,
            lod_multi_classical(3, 100.0).unwrap().delta_phi_sq,
            max_relative = 1e-15
        );
        let sep2 = lod_multi_separable(2, 100.0).unwrap().delta_phi_sq;
        assert_abs_diff_eq!(sep2, 1.2376e-5, epsilon = 1e-9);
        assert_relative_eq!(
            lod_multi_classical(2, 100.0).unwrap().delta_phi_sq / sep2,
            101.0,
            max_relative = 1e-14
        );
        assert_abs_diff_eq!(
            lod_multi_separable(4, 100.0).unwrap().delta_phi_sq,
            6.188e-6,
            epsilon = 1e-9
        );
        assert!(lod_multi_classical(0, 1.0).is_err());
        assert!(lod_multi_separable(2, 0.0).is_err());
    }

    #[test]
    fn entangled_raw_values() {
        assert_relative_eq!(
            lod_multi_entangled_raw(1.0, 50.0).unwrap(),
            1.0 / 400.0,
            max_relative = 1e-15
        );
        let s = 5f64.sqrt() + 2.0;
        let expect = (9.0 - 2.0 * 20f64.sqrt()) / (800.0 * s * s);
        let raw = lod_multi_entangled_raw(5.0, 100.0).unwrap();
        assert_relative_eq!(raw, expect, max_relative = 1e-12);
        assert_abs_diff_eq!(raw, 3.882e-6, epsilon = 1e-9);
        for (gain, alpha_sq) in [(5.0f64, 100.0), (1.7, 3.0), (40.0, 1e4)] {
            let s = gain.sqrt() + (gain - 1.0).sqrt();
            let c = 2.0 * gain - 1.0 - 2.0 * f64::sqrt(gain * (gain - 1.0));
            assert_relative_eq!(
                lod_multi_entangled_raw(gain, alpha_sq).unwrap(),
                c / (8.0 * alpha_sq * s * s),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn entangled_optimum_values() {
        let two = lod_multi_entangled_optimal(2, 100.0).unwrap().delta_phi_sq;
        assert_eq!(two, 1.0 / 80800.0);
        assert_eq!(two, lod_multi_separable(2, 100.0).unwrap().delta_phi_sq);
        let four = lod_multi_entangled_optimal(4, 100.0).unwrap().delta_phi_sq;
        assert_abs_diff_eq!(four, 3.1095e-6, epsilon = 1e-10);
        assert_abs_diff_eq!(
            lod_multi_separable(4, 100.0).unwrap().delta_phi_sq / four,
            1.990,
            epsilon = 1e-3
        );
        let big = lod_multi_entangled_optimal(2, 1e7).unwrap().delta_phi_sq;
        assert_relative_eq!(big, 1.0 / (2.0 * 4e14), max_relative = 1e-6);
        assert_eq!(
            lod_multi_entangled_optimal(3, 100.0),
            Err(Error::OddPhaseCount(3))
        );
    }

    #[test]
    fn optimizer_hits_closed_form() {
        let cfg = SolverConfig::default();
        for (m, n) in [(4, 100.0), (2, 100.0), (10, 10.0)] {
            let opt = optimize_entangled(m, n, &cfg).unwrap();
            let exact = lod_multi_entangled_optimal(m, n).unwrap().delta_phi_sq;
            assert_relative_eq!(opt.lod, exact, max_relative = 1e-6);
            assert_relative_eq!(
                n_total(opt.gain, opt.alpha_sq).unwrap(),
                m as f64 * n,
                max_relative = 1e-10
            );
            // stationary point: e^{2r} = M n + 1
            let total = m as f64 * n;
            let g_star = (total + 1.0 + 1.0 / (total + 1.0) + 2.0) / 4.0;
            assert_relative_eq!(opt.gain, g_star, max_relative = 1e-5);
        }
        assert_abs_diff_eq!(
            optimize_entangled(10, 10.0, &cfg).unwrap().lod,
            4.902e-5,
            epsilon = 1e-8
        );
        assert_eq!(
            optimize_entangled(5, 10.0, &cfg),
            Err(Error::OddPhaseCount(5))
        );
        assert!(optimize_entangled(4, -1.0, &cfg).is_err());
    }

    #[test]
    fn noise_reduction_root() {
        let eta = eta_for_noise_reduction(5.0, 1.0, 1.7).unwrap();
        let expect = 2.0 * (1.0 - 10f64.powf(-0.17)) / (4.0 * 20f64.sqrt() - 16.0);
        assert_relative_eq!(eta, expect, max_relative = 1e-12);
        assert_abs_diff_eq!(eta, 0.343, epsilon = 1e-3);
        let var = tsu_joint_variance(5.0, eta, 1.0);
        assert_abs_diff_eq!(
            metrology::noise_reduction_db(var, 2.0).unwrap(),
            1.7,
            epsilon = 1e-12
        );
        assert!(eta_for_noise_reduction(5.0, 1.0, 13.0).is_err());
    }

    #[test]
    fn builders_reproduce_closed_forms() {
        let p = params(5.0, 1.0, 1.0);
        for scheme in [
            Scheme::TsuDistributed,
            Scheme::TsuSeparable,
            Scheme::ClassicalDistributed,
            Scheme::ClassicalSeparable,
        ] {
            let net = Network::two_phase(scheme, p).unwrap();
            let pipe = net.pipeline_lod().unwrap();
            assert_relative_eq!(
                pipe.lod,
                net.closed_form_lod().unwrap(),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn classical_distributed_at_rest() {
        let p = params(5.0, 0.9, 1.7);
        let s = build_classical_distributed(&p).unwrap();
        let net = Network::two_phase(Scheme::ClassicalDistributed, p).unwrap();
        let stats = metrology::joint_quadrature_stats(&s, &net.channels()).unwrap();
        assert_abs_diff_eq!(stats.mean, 0.0, epsilon = 1e-12);
        assert_relative_eq!(stats.variance, 1.7 * 1.7 + 1.0, max_relative = 1e-14);
    }

    #[test]
    fn source_photon_numbers() {
        let p = params(5.0, 0.8, 1.0);
        let s = build_tsu_distributed(&p).unwrap();
        assert_relative_eq!(s.mean_photons(0).unwrap(), 403.2, max_relative = 1e-12);
        assert_relative_eq!(s.mean_photons(1).unwrap(), 323.2, max_relative = 1e-12);
        let c = build_classical_separable(&p).unwrap();
        assert_eq!(c.n_modes(), 4);
        assert_relative_eq!(
            c.mean_photons(3).unwrap(),
            0.8 * 400.0,
            max_relative = 1e-12
        );
        assert_eq!(build_tsu_separable(&p).unwrap().n_modes(), 4);
    }

    #[test]
    fn unsplit_entangled_moments() {
        let (gain, alpha_sq, phi) = (5.0f64, 100.0f64, 1e-4);
        let net = Network::multi_entangled(2, gain, alpha_sq).unwrap();
        let s = net.build(&[phi, phi]).unwrap();
        let stats = metrology::joint_quadrature_stats(&s, &net.channels()).unwrap();
        let k = gain.sqrt() + (gain - 1.0).sqrt();
        let linear = 2.0 * 2f64.sqrt() * 2f64.sqrt() * alpha_sq.sqrt() * k * phi;
        assert_relative_eq!(stats.mean, linear, max_relative = phi * phi);
        let exact =
            2.0 * (2.0 * gain - 1.0) - 4.0 * (gain * (gain - 1.0)).sqrt() * (2.0 * phi).cos();
        assert_relative_eq!(stats.variance, exact, max_relative = 1e-9);
        let at_rest = net.build(&[0.0, 0.0]).unwrap();
        let v0 = metrology::joint_quadrature_stats(&at_rest, &net.channels())
            .unwrap()
            .variance;
        let squeezed = 2.0 * (-1.0 + 2.0 * gain - 2.0 * (gain * (gain - 1.0)).sqrt());
        assert_relative_eq!(v0, squeezed, max_relative = 1e-9);
    }

    #[test]
    fn optimal_separable_probe() {
        let n = 100.0;
        let (r, alpha_sq) = separable_probe_split(n);
        assert_relative_eq!(r.sinh().powi(2) + alpha_sq, n, max_relative = 1e-12);
        let net = Network::multi_separable(3, n).unwrap();
        let s = net.build(&[0.0; 3]).unwrap();
        for k in 0..3 {
            assert_relative_eq!(s.mean_photons(k).unwrap(), n, max_relative = 1e-12);
        }
    }

    #[test]
    fn scheme_tags_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.tag().parse::<Scheme>().unwrap(), s);
        }
        assert!("nope".parse::<Scheme>().is_err());
    }

    #[test]
    fn network_rejects_bad_input() {
        assert_eq!(
            Network::multi_entangled(3, 2.0, 1.0),
            Err(Error::OddPhaseCount(3))
        );
        assert!(Network::two_phase(Scheme::MultiClassical, params(2.0, 1.0, 1.0)).is_err());
        let net = Network::multi_entangled(4, 2.0, 1.0).unwrap();
        assert!(matches!(
            net.build(&[0.0; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Network::multi_entangled_with_bsn_phases(4, 2.0, 1.0, Some(vec![0.0; 3])).is_err());
    }
}
