//! Second-order (short-length) solution: propagator, noise coefficients for
//! coherent and chaotic-phonon inputs, and mean amplitudes.

use num_complex::Complex64;

use crate::dynamics::{build_drift_matrix, BogoliubovTransform};
use crate::error::{CouplerError, Result};
use crate::linalg::{CMat, I};
use crate::mode::ModeId;
use crate::model::{CMat6, GaussianState, ValidatedParams};

/// `I + i M z - M^2 z^2 / 2`, the propagator truncated after `z^2`.
pub fn short_propagator(params: &ValidatedParams, z: f64) -> BogoliubovTransform {
    let [e0, e1, e2] = propagator_series(params);
    let e = e0 + e1 * Complex64::new(z, 0.0) + e2 * Complex64::new(z * z, 0.0);
    BogoliubovTransform::from_full(&e, z)
}

/// Coefficients of `z^0`, `z^1`, `z^2` of the full 12x12 short propagator.
fn propagator_series(params: &ValidatedParams) -> [CMat; 3] {
    let m = build_drift_matrix(params).matrix().clone();
    let m2 = &m * &m;
    [CMat::identity(12, 12), m * I, m2 * Complex64::new(-0.5, 0.0)]
}

/// Mean amplitudes propagated with [`short_propagator`].
pub fn shortlen_mean_amplitudes(params: &ValidatedParams, xi0: &[Complex64; 6], z: f64) -> [Complex64; 6] {
    short_propagator(params, z).mean(xi0)
}

/// Second moments as polynomials in `z` truncated after `z^2`.
///
/// `normal[k]` and `anomalous[k]` are the `z^k` coefficients of
/// `<dA_j^+ dA_k>` and `<dA_j dA_k>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortlenSeries {
    pub normal: [CMat6; 3],
    pub anomalous: [CMat6; 3],
}

impl ShortlenSeries {
    pub fn at(&self, z: f64) -> ShortlenCoefficients {
        let zc = [1.0, z, z * z].map(|x| Complex64::new(x, 0.0));
        let n: CMat6 = (0..3).map(|k| self.normal[k] * zc[k]).sum();
        let m: CMat6 = (0..3).map(|k| self.anomalous[k] * zc[k]).sum();
        let s = GaussianState::from_moments([Complex64::default(); 6], &n, &m);
        ShortlenCoefficients {
            z,
            b: s.b,
            c: s.c,
            d: s.d,
            dbar: s.dbar,
        }
    }
}

/// Noise functions of the short-length solution at one `z`, valid to `O(z^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortlenCoefficients {
    pub z: f64,
    pub b: [f64; 6],
    pub c: [Complex64; 6],
    pub d: CMat6,
    pub dbar: CMat6,
}

impl ShortlenCoefficients {
    /// Combine with mean amplitudes into a full Gaussian state.
    pub fn with_means(&self, xi: [Complex64; 6]) -> GaussianState {
        GaussianState {
            xi,
            b: self.b,
            c: self.c,
            d: self.d,
            dbar: self.dbar,
        }
    }
}

/// Truncated product `sum_{a+b<=2} A_a X B_b` collected by degree.
fn sandwich(a: &[CMat6; 3], x: &CMat6, b: &[CMat6; 3]) -> [CMat6; 3] {
    let mut out = [CMat6::zeros(); 3];
    for (i, ai) in a.iter().enumerate() {
        let ax = ai * x;
        for (j, bj) in b.iter().enumerate().take(3 - i) {
            out[i + j] += ax * bj;
        }
    }
    out
}

/// Short-length noise series for coherent radiation inputs and chaotic phonons
/// with mean occupations `n_v1`, `n_v2`. With `n_v1 = n_v2 = 0` this is the
/// all-coherent (Brillouin) case.
pub fn shortlen_series(params: &ValidatedParams, n_v1: f64, n_v2: f64) -> Result<ShortlenSeries> {
    for (name, n) in [("nV1", n_v1), ("nV2", n_v2)] {
        if !(n.is_finite() && n >= 0.0) {
            return Err(CouplerError::Validation(format!(
                "{name} = {n} must be finite and >= 0"
            )));
        }
    }
    let e = propagator_series(params);
    let blocks = |k: usize| {
        let t = BogoliubovTransform::from_full(&e[k], 0.0);
        (t.u, t.v)
    };
    let (u0, v0) = blocks(0);
    let (u1, v1) = blocks(1);
    let (u2, v2) = blocks(2);
    let u = [u0, u1, u2];
    let v = [v0, v1, v2];
    let ut = u.map(|x| x.transpose());
    let vt = v.map(|x| x.transpose());
    let uc = u.map(|x| x.conjugate());
    let vc = v.map(|x| x.conjugate());

    let mut n0 = CMat6::zeros();
    n0[(ModeId::V1.index(), ModeId::V1.index())] = Complex64::new(n_v1, 0.0);
    n0[(ModeId::V2.index(), ModeId::V2.index())] = Complex64::new(n_v2, 0.0);
    // Independent inputs have no anomalous moments; N is real diagonal, so N^T = N.
    let anti = CMat6::identity() + n0;

    let add = |a: [CMat6; 3], b: [CMat6; 3]| [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    let anomalous = add(sandwich(&u, &anti, &vt), sandwich(&v, &n0, &ut));
    let normal = add(sandwich(&uc, &n0, &ut), sandwich(&vc, &anti, &vt));
    Ok(ShortlenSeries { normal, anomalous })
}

pub fn shortlen_coefficients(params: &ValidatedParams, n_v1: f64, n_v2: f64, z: f64) -> Result<ShortlenCoefficients> {
    Ok(shortlen_series(params, n_v1, n_v2)?.at(z))
}
