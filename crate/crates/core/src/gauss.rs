//! Gaussian states in ladder-operator form and the Bogoliubov transforms that
//! act on them.
//!
//! An `n`-mode state is stored as the displacement vector
//! `d_i = <A_i>` and the covariance matrix
//! `sigma_ij = <A_i A_j^† + A_j^† A_i> - 2 <A_i><A_j^†>`, where
//! `A = (a_1 .. a_n, a_1^† .. a_n^†)`. With this normalisation the vacuum has
//! `sigma = I` and a homodyne quadrature `X(theta) = e^{-i theta} a^† + e^{i theta} a`
//! has unit vacuum variance.
//!
//! Every operation is a pure function: it returns a new state and leaves the
//! input untouched.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{check_param, Error, Result};

/// Absolute tolerance for structural invariants (Hermiticity, Bogoliubov
/// conditions).
pub const STRUCTURAL_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Displacement vector and covariance matrix of an `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    d: DVector<Complex64>,
    sigma: DMatrix<Complex64>,
}

impl GaussianState {
    /// The `n_modes`-mode vacuum: `d = 0`, `sigma = I`.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(Self {
            n_modes,
            d: DVector::zeros(2 * n_modes),
            sigma: DMatrix::identity(2 * n_modes, 2 * n_modes),
        })
    }

    /// Coherent state on a single mode.
    pub fn coherent(amplitude: Complex64) -> Self {
        Self::vacuum(1)
            .and_then(|s| s.displace(0, amplitude))
            .expect("one-mode vacuum is always valid")
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Displacement vector `<A_i>` (length `2 n`).
    pub fn displacement(&self) -> &DVector<Complex64> {
        &self.d
    }

    /// Covariance matrix (size `2n x 2n`).
    pub fn covariance(&self) -> &DMatrix<Complex64> {
        &self.sigma
    }

    /// `<a_mode>`.
    pub fn amplitude(&self, mode: usize) -> Result<Complex64> {
        self.check_mode(mode)?;
        Ok(self.d[mode])
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.n_modes {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                index: mode,
                n_modes: self.n_modes,
            })
        }
    }

    /// Adds `amplitude` to `<a_mode>` (and its conjugate to `<a_mode^†>`).
    pub fn displace(&self, mode: usize, amplitude: Complex64) -> Result<Self> {
        self.check_mode(mode)?;
        let mut out = self.clone();
        out.d[mode] += amplitude;
        out.d[mode + self.n_modes] += amplitude.conj();
        Ok(out)
    }

    /// Two-mode squeezer with intensity gain `gain = cosh^2 r`:
    /// `a -> sqrt(G) a + sqrt(G-1) b^†`, `b -> sqrt(G) b + sqrt(G-1) a^†`.
    pub fn two_mode_squeeze(&self, mode_a: usize, mode_b: usize, gain: f64) -> Result<Self> {
        let s = SymplecticTransform::two_mode_squeezer(self.n_modes, mode_a, mode_b, gain)?;
        Ok(self.transform(&s))
    }

    /// Single-mode squeezer `a -> cosh(r) a + sinh(r) a^†`. Positive `r`
    /// squeezes the `theta = pi/2` (phase) quadrature by `e^{-r}`.
    pub fn single_mode_squeeze(&self, mode: usize, r: f64) -> Result<Self> {
        let s = SymplecticTransform::single_mode_squeezer(self.n_modes, mode, r)?;
        Ok(self.transform(&s))
    }

    /// Phase element `a -> e^{-i phi} a`.
    pub fn phase_shift(&self, mode: usize, phi: f64) -> Result<Self> {
        let s = SymplecticTransform::phase(self.n_modes, mode, phi)?;
        Ok(self.transform(&s))
    }

    /// Beam splitter with intensity transmissivity `t`:
    /// `a -> sqrt(t) a + e^{i psi} sqrt(1-t) b`,
    /// `b -> -e^{-i psi} sqrt(1-t) a + sqrt(t) b`.
    pub fn beam_splitter(&self, mode_a: usize, mode_b: usize, t: f64, psi: f64) -> Result<Self> {
        let s = SymplecticTransform::beam_splitter(self.n_modes, mode_a, mode_b, t, psi)?;
        Ok(self.transform(&s))
    }

    /// Pure loss `a -> sqrt(eta) a + sqrt(1-eta) c` with `c` in vacuum.
    ///
    /// Built from the beam-splitter primitive: a vacuum ancilla is adjoined,
    /// mixed in at transmissivity `eta`, and traced out.
    pub fn loss(&self, mode: usize, eta: f64) -> Result<Self> {
        self.check_mode(mode)?;
        check_param("eta", eta, (0.0..=1.0).contains(&eta), "must lie in [0, 1]")?;
        let ancilla = self.n_modes;
        self.with_vacuum_modes(1)
            .beam_splitter(mode, ancilla, eta, 0.0)?
            .trace_out(ancilla)
    }

    /// Splits `mode` into `ways` equal-intensity outputs with real positive
    /// amplitudes `1/sqrt(ways)`.
    ///
    /// `ways - 1` vacuum modes are appended. The returned list holds the
    /// output modes: `mode` first, then the appended indices in order.
    pub fn balanced_split(&self, mode: usize, ways: usize) -> Result<(Self, Vec<usize>)> {
        self.balanced_split_with_phases(mode, ways, &vec![0.0; ways])
    }

    /// Balanced split whose `j`-th output additionally carries the phase
    /// factor `e^{i phases[j]}` on its amplitude.
    pub fn balanced_split_with_phases(
        &self,
        mode: usize,
        ways: usize,
        phases: &[f64],
    ) -> Result<(Self, Vec<usize>)> {
        self.check_mode(mode)?;
        if ways == 0 {
            return Err(Error::InvalidParameter {
                name: "ways",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        if phases.len() != ways {
            return Err(Error::DimensionMismatch {
                expected: ways,
                got: phases.len(),
            });
        }
        let first_new = self.n_modes;
        let widened = self.with_vacuum_modes(ways - 1);
        let mut outputs = Vec::with_capacity(ways);
        outputs.push(mode);
        outputs.extend(first_new..first_new + ways - 1);
        let unitary = balanced_unitary(ways, phases);
        let s = SymplecticTransform::passive(widened.n_modes, &outputs, &unitary)?;
        Ok((widened.transform(&s), outputs))
    }

    /// Appends `extra` vacuum modes after the existing ones.
    pub fn with_vacuum_modes(&self, extra: usize) -> Self {
        if extra == 0 {
            return self.clone();
        }
        let n = self.n_modes;
        let m = n + extra;
        let remap = |i: usize| if i < n { i } else { i + extra };
        let mut d = DVector::zeros(2 * m);
        let mut sigma = DMatrix::identity(2 * m, 2 * m);
        for i in 0..2 * n {
            d[remap(i)] = self.d[i];
            for j in 0..2 * n {
                sigma[(remap(i), remap(j))] = self.sigma[(i, j)];
            }
        }
        Self {
            n_modes: m,
            d,
            sigma,
        }
    }

    /// Partial trace over `mode`; the remaining modes keep their order.
    pub fn trace_out(&self, mode: usize) -> Result<Self> {
        self.check_mode(mode)?;
        if self.n_modes == 1 {
            return Err(Error::ZeroModes);
        }
        let n = self.n_modes;
        let keep: Vec<usize> = (0..2 * n).filter(|&i| i != mode && i != n + mode).collect();
        let d = DVector::from_iterator(keep.len(), keep.iter().map(|&i| self.d[i]));
        let sigma = DMatrix::from_fn(keep.len(), keep.len(), |r, c| {
            self.sigma[(keep[r], keep[c])]
        });
        Ok(Self {
            n_modes: n - 1,
            d,
            sigma,
        })
    }

    /// Applies `d -> S d`, `sigma -> S sigma S^†`.
    ///
    /// # Panics
    /// If the transform acts on a different number of modes.
    pub fn transform(&self, s: &SymplecticTransform) -> Self {
        assert_eq!(
            s.n_modes, self.n_modes,
            "transform/state mode count mismatch"
        );
        let n = self.n_modes;
        let mut d = &s.matrix * &self.d;
        for i in 0..n {
            d[n + i] = d[i].conj();
        }
        let sigma = &s.matrix * &self.sigma * s.matrix.adjoint();
        let sigma = (&sigma + sigma.adjoint()).scale(0.5);
        Self {
            n_modes: n,
            d,
            sigma,
        }
    }

    /// `<a^† a>` on `mode`.
    pub fn mean_photons(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        Ok(self.photons_unchecked(mode))
    }

    fn photons_unchecked(&self, mode: usize) -> f64 {
        0.5 * (self.sigma[(mode, mode)].re - 1.0) + self.d[mode].norm_sqr()
    }

    /// Sum of `<a^† a>` over all modes.
    pub fn total_photons(&self) -> f64 {
        (0..self.n_modes).map(|m| self.photons_unchecked(m)).sum()
    }

    /// Largest entry of `|sigma - sigma^†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let diff = &self.sigma - self.sigma.adjoint();
        diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|d[n+i] - conj(d[i])|`.
    pub fn conjugate_symmetry_error(&self) -> f64 {
        let n = self.n_modes;
        (0..n)
            .map(|i| (self.d[n + i] - self.d[i].conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// `ways x ways` unitary whose first column is `e^{i phases[j]} / sqrt(ways)`.
///
/// A discrete Fourier matrix with row phases; column 0 feeds the split input,
/// the other columns take the appended vacuum ports.
fn balanced_unitary(ways: usize, phases: &[f64]) -> DMatrix<Complex64> {
    let norm = 1.0 / (ways as f64).sqrt();
    DMatrix::from_fn(ways, ways, |j, k| {
        let angle = 2.0 * std::f64::consts::PI * (j * k) as f64 / ways as f64 + phases[j];
        Complex64::from_polar(norm, angle)
    })
}

/// Bogoliubov transform `A -> S A` in block form `[[U, V], [conj V, conj U]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    n_modes: usize,
    matrix: DMatrix<Complex64>,
}

impl SymplecticTransform {
    pub fn identity(n_modes: usize) -> Self {
        Self {
            n_modes,
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// Embeds the local blocks `u`, `v` (acting on `modes`, in that order)
    /// into an `n_modes` transform that is the identity elsewhere.
    pub fn from_blocks(
        n_modes: usize,
        modes: &[usize],
        u: &DMatrix<Complex64>,
        v: &DMatrix<Complex64>,
    ) -> Result<Self> {
        let k = modes.len();
        if u.shape() != (k, k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: u.nrows(),
            });
        }
        if v.shape() != (k, k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: v.nrows(),
            });
        }
        for (i, &m) in modes.iter().enumerate() {
            if m >= n_modes {
                return Err(Error::ModeOutOfRange { index: m, n_modes });
            }
            if modes[..i].contains(&m) {
                return Err(Error::DuplicateMode(m));
            }
        }
        let n = n_modes;
        let mut s = DMatrix::identity(2 * n, 2 * n);
        for &m in modes {
            s[(m, m)] = ZERO;
            s[(n + m, n + m)] = ZERO;
        }
        for (i, &mi) in modes.iter().enumerate() {
            for (j, &mj) in modes.iter().enumerate() {
                s[(mi, mj)] = u[(i, j)];
                s[(mi, n + mj)] = v[(i, j)];
                s[(n + mi, mj)] = v[(i, j)].conj();
                s[(n + mi, n + mj)] = u[(i, j)].conj();
            }
        }
        Ok(Self { n_modes, matrix: s })
    }

    /// Passive (photon-number conserving) transform with unitary `u` on `modes`.
    pub fn passive(n_modes: usize, modes: &[usize], u: &DMatrix<Complex64>) -> Result<Self> {
        let k = modes.len();
        Self::from_blocks(n_modes, modes, u, &DMatrix::zeros(k, k))
    }

    pub fn two_mode_squeezer(
        n_modes: usize,
        mode_a: usize,
        mode_b: usize,
        gain: f64,
    ) -> Result<Self> {
        check_param("G", gain, gain >= 1.0, "gain must be >= 1")?;
        if mode_a == mode_b {
            return Err(Error::DuplicateMode(mode_a));
        }
        let direct = Complex64::new(gain.sqrt(), 0.0);
        let cross = Complex64::new((gain - 1.0).sqrt(), 0.0);
        let u = DMatrix::from_row_slice(2, 2, &[direct, ZERO, ZERO, direct]);
        let v = DMatrix::from_row_slice(2, 2, &[ZERO, cross, cross, ZERO]);
        Self::from_blocks(n_modes, &[mode_a, mode_b], &u, &v)
    }

    pub fn single_mode_squeezer(n_modes: usize, mode: usize, r: f64) -> Result<Self> {
        check_param("r", r, true, "must be finite")?;
        let u = DMatrix::from_element(1, 1, Complex64::new(r.cosh(), 0.0));
        let v = DMatrix::from_element(1, 1, Complex64::new(r.sinh(), 0.0));
        Self::from_blocks(n_modes, &[mode], &u, &v)
    }

    pub fn phase(n_modes: usize, mode: usize, phi: f64) -> Result<Self> {
        check_param("phi", phi, true, "must be finite")?;
        let u = DMatrix::from_element(1, 1, Complex64::from_polar(1.0, -phi));
        Self::passive(n_modes, &[mode], &u)
    }

    pub fn beam_splitter(
        n_modes: usize,
        mode_a: usize,
        mode_b: usize,
        t: f64,
        psi: f64,
    ) -> Result<Self> {
        check_param("t", t, (0.0..=1.0).contains(&t), "must lie in [0, 1]")?;
        check_param("psi", psi, true, "must be finite")?;
        let tr = Complex64::new(t.sqrt(), 0.0);
        let refl = (1.0 - t).sqrt();
        let u = DMatrix::from_row_slice(
            2,
            2,
            &[
                tr,
                Complex64::from_polar(refl, psi),
                -Complex64::from_polar(refl, -psi),
                tr,
            ],
        );
        Self::passive(n_modes, &[mode_a, mode_b], &u)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `U` block (annihilation -> annihilation).
    pub fn u_block(&self) -> DMatrix<Complex64> {
        self.matrix
            .view((0, 0), (self.n_modes, self.n_modes))
            .into_owned()
    }

    /// `V` block (creation -> annihilation).
    pub fn v_block(&self) -> DMatrix<Complex64> {
        self.matrix
            .view((0, self.n_modes), (self.n_modes, self.n_modes))
            .into_owned()
    }

    /// Largest violation of `U U^† - V V^† = I` and `U V^T = (U V^T)^T`.
    pub fn bogoliubov_error(&self) -> f64 {
        let u = self.u_block();
        let v = self.v_block();
        let n = self.n_modes;
        let eye = DMatrix::<Complex64>::identity(n, n);
        let unitarity = &u * u.adjoint() - &v * v.adjoint() - eye;
        let uvt = &u * v.transpose();
        let symmetry = &uvt - uvt.transpose();
        unitarity
            .iter()
            .chain(symmetry.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Transform equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &SymplecticTransform) -> Self {
        assert_eq!(self.n_modes, next.n_modes, "mode count mismatch");
        Self {
            n_modes: self.n_modes,
            matrix: &next.matrix * &self.matrix,
        }
    }
}
