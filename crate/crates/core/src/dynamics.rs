//! Drift matrix, Bogoliubov propagator and Gaussian-state evolution.

use num_complex::Complex64;

use crate::error::{CouplerError, Result};
use crate::linalg::{CMat, ExpmRoute, MatrixExponential, I, ZERO};
use crate::mode::ModeId;
use crate::model::{CMat6, GaussianState, ValidatedParams};

/// Row/column of annihilator `A_j` in the doubled basis.
#[inline]
pub fn ann(j: usize) -> usize {
    2 * j
}

/// Row/column of creator `A_j^+` in the doubled basis.
#[inline]
pub fn cre(j: usize) -> usize {
    2 * j + 1
}

/// The 12x12 drift matrix over `(S1, S1+, A1, A1+, V1, V1+, S2, ...)`:
/// `dA/dz = i M A`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionMatrix {
    m: CMat,
}

impl EvolutionMatrix {
    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }
}

pub fn build_drift_matrix(params: &ValidatedParams) -> EvolutionMatrix {
    let p = params.params();
    let mut m = CMat::zeros(12, 12);
    for (w, gs, ga) in [(0usize, p.g_s1, p.g_a1), (1, p.g_s2, p.g_a2)] {
        let s = 3 * w;
        let (sn, sc) = (ann(s), cre(s));
        let (an, ac) = (ann(s + 1), cre(s + 1));
        let (vn, vc) = (ann(s + 2), cre(s + 2));
        m[(sn, vc)] = gs;
        m[(sc, vn)] = -gs.conj();
        m[(an, vn)] = ga;
        m[(ac, vc)] = -ga.conj();
        m[(vn, sc)] = gs;
        m[(vn, an)] = ga.conj();
        m[(vc, sn)] = -gs.conj();
        m[(vc, ac)] = -ga;
    }
    // Linear coupling: M12 in the upper-right block, M12* in the lower-left.
    let m12 = [p.kappa_s.conj(), -p.kappa_s, p.kappa_a.conj(), -p.kappa_a];
    for (d, k) in m12.iter().enumerate() {
        m[(d, 6 + d)] = *k;
        m[(6 + d, d)] = k.conj();
    }
    EvolutionMatrix { m }
}

/// Operator solution `A_j(z) = sum_k U_jk A_k(0) + V_jk A_k^+(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovTransform {
    pub u: CMat6,
    pub v: CMat6,
    pub z: f64,
}

impl BogoliubovTransform {
    pub fn identity() -> Self {
        BogoliubovTransform {
            u: CMat6::identity(),
            v: CMat6::zeros(),
            z: 0.0,
        }
    }

    /// Extract U and V from the annihilator rows of a full 12x12 propagator.
    pub fn from_full(e: &CMat, z: f64) -> Self {
        BogoliubovTransform {
            u: CMat6::from_fn(|j, k| e[(ann(j), ann(k))]),
            v: CMat6::from_fn(|j, k| e[(ann(j), cre(k))]),
            z,
        }
    }

    /// The full 12x12 propagator in the doubled basis.
    pub fn to_full(&self) -> CMat {
        let mut e = CMat::zeros(12, 12);
        for j in 0..6 {
            for k in 0..6 {
                e[(ann(j), ann(k))] = self.u[(j, k)];
                e[(ann(j), cre(k))] = self.v[(j, k)];
                e[(cre(j), ann(k))] = self.v[(j, k)].conj();
                e[(cre(j), cre(k))] = self.u[(j, k)].conj();
            }
        }
        e
    }

    /// `later` applied after `self`.
    pub fn then(&self, later: &BogoliubovTransform) -> BogoliubovTransform {
        BogoliubovTransform {
            u: later.u * self.u + later.v * self.v.conjugate(),
            v: later.u * self.v + later.v * self.u.conjugate(),
            z: self.z + later.z,
        }
    }

    /// Transform with waveguide suffixes exchanged.
    pub fn swapped(&self) -> BogoliubovTransform {
        let p = |j: usize| (j + 3) % 6;
        BogoliubovTransform {
            u: CMat6::from_fn(|j, k| self.u[(p(j), p(k))]),
            v: CMat6::from_fn(|j, k| self.v[(p(j), p(k))]),
            z: self.z,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().chain(self.v.iter()).fold(0.0, |a, x| a.max(x.norm()))
    }

    pub fn max_diff(&self, other: &BogoliubovTransform) -> f64 {
        (self.u - other.u)
            .iter()
            .chain((self.v - other.v).iter())
            .fold(0.0, |a, x| a.max(x.norm()))
    }

    pub fn mean(&self, xi: &[Complex64; 6]) -> [Complex64; 6] {
        let mut out = [ZERO; 6];
        for (j, o) in out.iter_mut().enumerate() {
            for k in 0..6 {
                *o += self.u[(j, k)] * xi[k] + self.v[(j, k)] * xi[k].conj();
            }
        }
        out
    }
}

/// Propagator generator `exp(i M z)`, decomposed once and evaluated at any `z`.
#[derive(Debug, Clone)]
pub struct Propagator {
    expm: MatrixExponential,
}

impl Propagator {
    pub fn new(m: &EvolutionMatrix) -> Result<Self> {
        Ok(Propagator {
            expm: MatrixExponential::new(m.matrix() * I)?,
        })
    }

    pub fn route(&self) -> ExpmRoute {
        self.expm.route()
    }

    pub fn eigen_condition(&self) -> f64 {
        self.expm.eigen_condition()
    }

    pub fn at(&self, z: f64) -> Result<BogoliubovTransform> {
        let e = self.expm.eval(z)?;
        Ok(BogoliubovTransform::from_full(&e, z))
    }
}

pub fn propagator(m: &EvolutionMatrix, z: f64) -> Result<BogoliubovTransform> {
    if !z.is_finite() {
        return Err(CouplerError::Numerical(format!("non-finite propagation length {z}")));
    }
    Propagator::new(m)?.at(z)
}

/// Propagate a Gaussian state through a Bogoliubov transform.
///
/// With `N = <dA^+ dA>` and `Mm = <dA dA>`:
/// `Mm' = U Mm U^T + U (I + N^T) V^T + V N U^T + V Mm^* V^T` and
/// `N' = U^* N U^T + U^* Mm^* V^T + V^* Mm U^T + V^* (I + N^T) V^T`.
pub fn evolve_state(t: &BogoliubovTransform, s0: &GaussianState) -> GaussianState {
    let n = s0.normal_moments();
    let mm = s0.anomalous_moments();
    let (u, v) = (&t.u, &t.v);
    let (ut, vt) = (u.transpose(), v.transpose());
    let (uc, vc) = (u.conjugate(), v.conjugate());
    let anti = CMat6::identity() + n.transpose();
    let mm_new = u * mm * ut + u * anti * vt + v * n * ut + v * mm.conjugate() * vt;
    let n_new = uc * n * ut + uc * mm.conjugate() * vt + vc * mm * ut + vc * anti * vt;
    GaussianState::from_moments(t.mean(&s0.xi), &n_new, &mm_new)
}

/// `Q = sum_j (<n_Vj> + <n_Aj> - <n_Sj>)`, conserved by the dynamics.
pub fn conserved_quantity(s: &GaussianState) -> f64 {
    [ModeId::V1, ModeId::A1, ModeId::V2, ModeId::A2]
        .iter()
        .map(|&m| s.mean_number(m))
        .sum::<f64>()
        - s.mean_number(ModeId::S1)
        - s.mean_number(ModeId::S2)
}

/// Largest deviation of the conserved quantity from its value at the first state.
pub fn conservation_residual(trajectory: &[GaussianState]) -> f64 {
    let Some(first) = trajectory.first() else {
        return 0.0;
    };
    let q0 = conserved_quantity(first);
    trajectory
        .iter()
        .map(|s| (conserved_quantity(s) - q0).abs())
        .fold(0.0, f64::max)
}

/// Max-norm of `U U^H - V V^H - I` and `U V^T - V U^T`.
pub fn symplectic_residual(t: &BogoliubovTransform) -> f64 {
    let a = t.u * t.u.adjoint() - t.v * t.v.adjoint() - CMat6::identity();
    let b = t.u * t.v.transpose() - t.v * t.u.transpose();
    a.iter().chain(b.iter()).fold(0.0, |m, x| m.max(x.norm()))
}

/// Fixed-step classical RK4 integration of `dE/dz = i M E`, `E(0) = I`.
/// Independent of the matrix-exponential path; used for cross-checks.
pub fn integrate_rk4(m: &EvolutionMatrix, z: f64, h: f64) -> Result<BogoliubovTransform> {
    if !(z.is_finite() && h.is_finite() && h > 0.0) {
        return Err(CouplerError::Numerical(format!("bad RK4 arguments z = {z}, h = {h}")));
    }
    let steps = (z.abs() / h).ceil().max(1.0) as usize;
    let dz = z / steps as f64;
    let a = m.matrix() * I;
    let mut e = CMat::identity(12, 12);
    let half = Complex64::new(dz / 2.0, 0.0);
    let full = Complex64::new(dz, 0.0);
    let sixth = Complex64::new(dz / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    for _ in 0..steps {
        let k1 = &a * &e;
        let k2 = &a * (&e + &k1 * half);
        let k3 = &a * (&e + &k2 * half);
        let k4 = &a * (&e + &k3 * full);
        e += (k1 + k2 * two + k3 * two + k4) * sixth;
    }
    if e.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(CouplerError::Numerical(format!("RK4 overflow at z = {z}")));
    }
    Ok(BogoliubovTransform::from_full(&e, z))
}

/// Evolve `s0` to every point of `grid`, exponentiating from `z = 0` each time.
pub fn trajectory(params: &ValidatedParams, s0: &GaussianState, grid: &[f64]) -> Result<Vec<GaussianState>> {
    let prop = Propagator::new(&build_drift_matrix(params))?;
    grid.iter().map(|&z| prop.at(z).map(|t| evolve_state(&t, s0))).collect()
}
