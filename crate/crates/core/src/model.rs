//! Coupler parameters, input-state specification and the Gaussian state
//! (coherent amplitudes plus normally ordered noise functions).

use nalgebra::{DMatrix, Matrix6};
use num_complex::Complex64;

use crate::error::{CouplerError, Result};
use crate::linalg::ZERO;
use crate::mode::ModeId;

pub type CMat6 = Matrix6<Complex64>;

/// Phase mismatches. Only the phase-matched case (all zero) is supported.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Mismatches {
    pub dk_s1: f64,
    pub dk_a1: f64,
    pub dk_s2: f64,
    pub dk_a2: f64,
    pub dkk_s: f64,
    pub dkk_a: f64,
}

impl Mismatches {
    pub fn as_array(&self) -> [(&'static str, f64); 6] {
        [
            ("dkS1", self.dk_s1),
            ("dkA1", self.dk_a1),
            ("dkS2", self.dk_s2),
            ("dkA2", self.dk_a2),
            ("dKS", self.dkk_s),
            ("dKA", self.dkk_a),
        ]
    }
}

/// Effective coupling constants (units of inverse length).
///
/// The nonlinear constants `g_*` already include the classical pump amplitude
/// of their waveguide. `kappa_s` / `kappa_a` are the linear evanescent
/// couplings between the Stokes and between the anti-Stokes modes.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CouplerParams {
    pub g_s1: Complex64,
    pub g_a1: Complex64,
    pub g_s2: Complex64,
    pub g_a2: Complex64,
    pub kappa_s: Complex64,
    pub kappa_a: Complex64,
    pub mismatch: Mismatches,
}

impl CouplerParams {
    /// Parameters of the mirror-image coupler: waveguide suffixes exchanged and
    /// the linear couplings conjugated.
    pub fn swapped(&self) -> CouplerParams {
        CouplerParams {
            g_s1: self.g_s2,
            g_a1: self.g_a2,
            g_s2: self.g_s1,
            g_a2: self.g_a1,
            kappa_s: self.kappa_s.conj(),
            kappa_a: self.kappa_a.conj(),
            mismatch: Mismatches {
                dk_s1: self.mismatch.dk_s2,
                dk_a1: self.mismatch.dk_a2,
                dk_s2: self.mismatch.dk_s1,
                dk_a2: self.mismatch.dk_a1,
                dkk_s: -self.mismatch.dkk_s,
                dkk_a: -self.mismatch.dkk_a,
            },
        }
    }

    pub fn couplings(&self) -> [(&'static str, Complex64); 6] {
        [
            ("gS1", self.g_s1),
            ("gA1", self.g_a1),
            ("gS2", self.g_s2),
            ("gA2", self.g_a2),
            ("kappaS", self.kappa_s),
            ("kappaA", self.kappa_a),
        ]
    }
}

/// Parameters that passed [`validate_params`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedParams {
    params: CouplerParams,
    warnings: Vec<String>,
}

impl ValidatedParams {
    pub fn params(&self) -> &CouplerParams {
        &self.params
    }

    /// Non-fatal remarks collected during validation.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn swapped(&self) -> ValidatedParams {
        ValidatedParams {
            params: self.params.swapped(),
            warnings: self.warnings.clone(),
        }
    }
}

impl std::ops::Deref for ValidatedParams {
    type Target = CouplerParams;
    fn deref(&self) -> &CouplerParams {
        &self.params
    }
}

pub fn validate_params(params: &CouplerParams) -> Result<ValidatedParams> {
    for (name, v) in params.couplings() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(CouplerError::Validation(format!("{name} = {v} is not finite")));
        }
    }
    for (name, v) in params.mismatch.as_array() {
        if !v.is_finite() {
            return Err(CouplerError::Validation(format!("{name} = {v} is not finite")));
        }
        if v != 0.0 {
            return Err(CouplerError::Unsupported(format!(
                "phase mismatch {name} = {v}; only phase-matched couplers (all mismatches zero) are supported"
            )));
        }
    }
    let mut warnings = Vec::new();
    for (guide, gs, ga) in [(1, params.g_s1, params.g_a1), (2, params.g_s2, params.g_a2)] {
        let any = gs.norm() > 0.0 || ga.norm() > 0.0;
        if any && ga.norm() <= gs.norm() {
            warnings.push(format!(
                "waveguide {guide}: |gA{guide}| = {} does not exceed |gS{guide}| = {}; \
                 the Stokes process dominates and the fields grow without bound",
                ga.norm(),
                gs.norm()
            ));
        }
    }
    Ok(ValidatedParams {
        params: *params,
        warnings,
    })
}

/// Incident state of one mode: coherent amplitude, squeezing and chaotic noise.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InputSpec {
    pub xi: Complex64,
    /// Squeeze parameter, r >= 0.
    pub r: f64,
    /// Squeeze phase in radians.
    pub theta: f64,
    /// Mean number of chaotic (thermal) noise quanta, >= 0.
    pub n_ch: f64,
}

impl InputSpec {
    pub fn coherent(xi: Complex64) -> Self {
        InputSpec {
            xi,
            ..Default::default()
        }
    }

    pub fn chaotic(n_ch: f64) -> Self {
        InputSpec {
            n_ch,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.xi.re.is_finite()
            && self.xi.im.is_finite()
            && self.r.is_finite()
            && self.theta.is_finite()
            && self.n_ch.is_finite();
        if !finite {
            return Err(CouplerError::Validation(format!("non-finite input {self:?}")));
        }
        if self.r < 0.0 {
            return Err(CouplerError::Validation(format!(
                "squeeze parameter r = {} < 0",
                self.r
            )));
        }
        if self.n_ch < 0.0 {
            return Err(CouplerError::Validation(format!(
                "chaotic noise n_ch = {} < 0",
                self.n_ch
            )));
        }
        Ok(())
    }
}

/// Gaussian field state of the six modes.
///
/// `b`, `c`, `d` and `dbar` are normally ordered:
/// `b_j = <dA_j^+ dA_j>`, `c_j = <dA_j^2>`, `d_jk = <dA_j dA_k>` and
/// `dbar_jk = -<dA_j^+ dA_k>` for `j != k`. The diagonals of `d` and `dbar`
/// are unused and kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub xi: [Complex64; 6],
    pub b: [f64; 6],
    pub c: [Complex64; 6],
    pub d: CMat6,
    pub dbar: CMat6,
}

impl GaussianState {
    pub fn vacuum() -> Self {
        GaussianState {
            xi: [ZERO; 6],
            b: [0.0; 6],
            c: [ZERO; 6],
            d: CMat6::zeros(),
            dbar: CMat6::zeros(),
        }
    }

    /// Normally ordered second moments `N_jk = <dA_j^+ dA_k>` (Hermitian).
    pub fn normal_moments(&self) -> CMat6 {
        CMat6::from_fn(|j, k| {
            if j == k {
                Complex64::new(self.b[j], 0.0)
            } else {
                -self.dbar[(j, k)]
            }
        })
    }

    /// Anomalous second moments `M_jk = <dA_j dA_k>` (symmetric).
    pub fn anomalous_moments(&self) -> CMat6 {
        CMat6::from_fn(|j, k| if j == k { self.c[j] } else { self.d[(j, k)] })
    }

    /// Assemble a state from its mean amplitudes and second-moment matrices.
    /// `normal` is symmetrised to be Hermitian and `anomalous` to be symmetric.
    pub fn from_moments(xi: [Complex64; 6], normal: &CMat6, anomalous: &CMat6) -> Self {
        let n = (normal + normal.adjoint()) * Complex64::new(0.5, 0.0);
        let m = (anomalous + anomalous.transpose()) * Complex64::new(0.5, 0.0);
        let mut state = GaussianState {
            xi,
            b: [0.0; 6],
            c: [ZERO; 6],
            d: CMat6::zeros(),
            dbar: CMat6::zeros(),
        };
        for j in 0..6 {
            state.b[j] = n[(j, j)].re;
            state.c[j] = m[(j, j)];
            for k in 0..6 {
                if j != k {
                    state.d[(j, k)] = m[(j, k)];
                    state.dbar[(j, k)] = -n[(j, k)];
                }
            }
        }
        state
    }

    /// Mean photon (phonon) number `B_j + |xi_j|^2`.
    pub fn mean_number(&self, m: ModeId) -> f64 {
        self.b[m.index()] + self.xi[m.index()].norm_sqr()
    }

    /// The 12x12 second-moment matrix of `(dA_1..dA_6, dA_1^+..dA_6^+)`:
    /// `[[I + N^T, M], [M^*, N]]`. Its upper-left block is antinormally
    /// ordered; the whole matrix is a Gram matrix and hence positive
    /// semidefinite for every physical state.
    pub fn covariance(&self) -> DMatrix<Complex64> {
        let n = self.normal_moments();
        let m = self.anomalous_moments();
        DMatrix::from_fn(12, 12, |r, c| match (r < 6, c < 6) {
            (true, true) => {
                let id = if r == c { 1.0 } else { 0.0 };
                n[(c, r)] + id
            }
            (true, false) => m[(r, c - 6)],
            (false, true) => m[(r - 6, c)].conj(),
            (false, false) => n[(r - 6, c - 6)],
        })
    }

    /// Smallest eigenvalue of [`covariance`](Self::covariance).
    pub fn min_covariance_eigenvalue(&self) -> f64 {
        let cov = self.covariance();
        let herm = (&cov + cov.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.b.iter().all(|&b| b >= -tol) && self.min_covariance_eigenvalue() >= -tol
    }

    /// State with waveguide suffixes exchanged.
    pub fn swapped(&self) -> GaussianState {
        let p = |j: usize| (j + 3) % 6;
        let mut out = GaussianState::vacuum();
        for j in 0..6 {
            out.xi[p(j)] = self.xi[j];
            out.b[p(j)] = self.b[j];
            out.c[p(j)] = self.c[j];
            for k in 0..6 {
                out.d[(p(j), p(k))] = self.d[(j, k)];
                out.dbar[(p(j), p(k))] = self.dbar[(j, k)];
            }
        }
        out
    }
}

/// Incident Gaussian state for independent squeezed/chaotic/coherent inputs.
///
/// Normally ordered noise: `B = cosh^2 r + n_ch - 1`, `C = e^{i theta} sinh(2r) / 2`.
pub fn build_input_state(inputs: &[InputSpec; 6]) -> Result<GaussianState> {
    let mut s = GaussianState::vacuum();
    for (j, inp) in inputs.iter().enumerate() {
        inp.validate()?;
        s.xi[j] = inp.xi;
        // cosh^2 r - 1 = sinh^2 r, written this way to keep small r exact
        s.b[j] = inp.r.sinh().powi(2) + inp.n_ch;
        s.c[j] = Complex64::from_polar(0.5 * (2.0 * inp.r).sinh(), inp.theta);
    }
    Ok(s)
}
