//! Closed-form propagator on the special parameter manifold
//! `|gS1| = |gS2|`, `|gA1| = |gA2|`, `|kS| = |kA|` with matched coupling phases.
//!
//! On that manifold the six equations decouple into independent three-mode
//! subsystems after a unitary change of variables, which admits an explicit
//! solution in terms of `r = sqrt(|gS1|^2 - |gA1|^2)` and
//! `l = sqrt(kappa^2 - 4 r^2)`.

use num_complex::Complex64;

use crate::dynamics::BogoliubovTransform;
use crate::error::{CouplerError, Result};
use crate::linalg::{I, ONE, ZERO};
use crate::model::{CMat6, CouplerParams, ValidatedParams};

/// Default tolerance for [`conditions_satisfied`].
pub const DEFAULT_TOL: f64 = 1e-12;

/// Below this `|r|^2` the closed form has a removable singularity that is not
/// evaluated.
const R2_MIN: f64 = 1e-10;

/// Scalars shared by every coefficient of the closed-form solution at one `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticFrame {
    pub r: Complex64,
    pub l: Complex64,
    pub kappa: f64,
    pub z: f64,
    /// `sin(kappa z)`, `cos(kappa z)`
    pub shh: Complex64,
    pub chh: Complex64,
    /// `sin(kappa z / 2)`, `cos(kappa z / 2)`
    pub sh: Complex64,
    pub ch: Complex64,
    /// `sin(l z / 2)`, `cos(l z / 2)`
    pub sl: Complex64,
    pub cl: Complex64,
    /// `sin(l z / 2) / l`, finite as `l -> 0`
    pub sl_over_l: Complex64,
}

impl AnalyticFrame {
    pub fn new(params: &CouplerParams, z: f64) -> AnalyticFrame {
        let kappa = params.kappa_s.norm();
        let r2 = params.g_s1.norm_sqr() - params.g_a1.norm_sqr();
        let r = Complex64::new(r2, 0.0).sqrt();
        let l = Complex64::new(kappa * kappa - 4.0 * r2, 0.0).sqrt();
        let kz = Complex64::new(kappa * z, 0.0);
        let half = l * (z / 2.0);
        AnalyticFrame {
            r,
            l,
            kappa,
            z,
            shh: kz.sin(),
            chh: kz.cos(),
            sh: (kz / 2.0).sin(),
            ch: (kz / 2.0).cos(),
            sl: half.sin(),
            cl: half.cos(),
            sl_over_l: sinc(half) * (z / 2.0),
        }
    }

    /// Worst violation of the angle-doubling identities of the trig cache.
    pub fn consistency_residual(&self) -> f64 {
        let a = (self.shh - 2.0 * self.sh * self.ch).norm();
        let b = (self.chh - (self.ch * self.ch - self.sh * self.sh)).norm();
        a.max(b)
    }
}

/// `sin(x) / x` with a series branch near zero.
fn sinc(x: Complex64) -> Complex64 {
    if x.norm() < 5e-7 {
        ONE - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `x / |x|`, or 1 for `x = 0`.
fn unit(x: Complex64) -> Complex64 {
    if x.norm() == 0.0 {
        ONE
    } else {
        x / x.norm()
    }
}

/// Whether the parameters lie on the manifold where the closed form applies.
///
/// Phase factors with a vanishing denominator are treated as unconstrained,
/// so e.g. uncoupled waveguides with equal gain magnitudes qualify.
pub fn conditions_satisfied(params: &ValidatedParams, tol: f64) -> bool {
    let p = params.params();
    let mags = (p.g_s1.norm() - p.g_s2.norm()).abs() <= tol
        && (p.g_a1.norm() - p.g_a2.norm()).abs() <= tol
        && (p.kappa_s.norm() - p.kappa_a.norm()).abs() <= tol;
    if !mags {
        return false;
    }
    let degenerate = |x: Complex64| x.norm() <= tol;
    if degenerate(p.kappa_s) || degenerate(p.g_a1) || degenerate(p.g_s1) {
        return true;
    }
    let lhs = unit(p.kappa_a.conj()) * p.g_a2 / p.g_a1;
    let rhs = -unit(p.kappa_s) * p.g_s2.conj() / p.g_s1.conj();
    (lhs - rhs).norm() <= tol
}

/// Rows S1, A1, V1 of `(U, V)`.
fn waveguide1_rows(p: &CouplerParams, z: f64) -> ([[Complex64; 6]; 3], [[Complex64; 6]; 3]) {
    const S1: usize = 0;
    const A1: usize = 1;
    const V1: usize = 2;
    const S2: usize = 3;
    const A2: usize = 4;
    const V2: usize = 5;

    let f = AnalyticFrame::new(p, z);
    let kap = f.kappa;
    let (gs1, ga1, gs2, ga2) = (p.g_s1, p.g_a1, p.g_s2, p.g_a2);
    let r2 = f.r * f.r;
    let (ns, na) = (gs1.norm_sqr(), ga1.norm_sqr());
    let ps = unit(p.kappa_s.conj());
    let pa = unit(p.kappa_a.conj());
    // kA*/|kA| * gA2/gA1, rewritten through the phase condition when gA1 = 0
    let pa_rho = if ga1.norm() > 0.0 {
        pa * ga2 / ga1
    } else if gs1.norm() > 0.0 {
        -ps.conj() * gs2.conj() / gs1.conj()
    } else {
        pa
    };
    let (shh, chh, sh, ch) = (f.shh, f.chh, f.sh, f.ch);
    let (cl, sl_l) = (f.cl, f.sl_over_l);
    let (clc, sl_lc) = (cl.conj(), sl_l.conj());

    let mut u = [[ZERO; 6]; 3];
    let mut v = [[ZERO; 6]; 3];

    u[0][S1] = (-na * chh + ns * (-kap * sh * sl_lc + ch * clc)) / r2;
    v[0][A1] = ga1 * gs1 / r2 * (-chh - kap * sh * sl_lc + ch * clc);
    u[0][S2] = I / r2 * ps * (-na * shh + ns * (kap * ch * sl_lc + sh * clc));
    v[0][A2] = I * ga1 * gs1 / r2 * pa.conj() * (shh - kap * ch * sl_lc - sh * clc);
    v[0][V1] = 2.0 * I * gs1 * ch * sl_lc;
    v[0][V2] = -2.0 * ps * gs2 * sh * sl_lc;

    v[1][S1] = ga1 * gs1 / r2 * (chh + kap * sh * sl_l - ch * cl);
    u[1][V1] = 2.0 * I * ga1 * ch * sl_l;
    u[1][A1] = (ns * chh + na * (kap * sh * sl_l - ch * cl)) / r2;
    u[1][A2] = I / r2 * pa * (ns * shh - na * (kap * ch * sl_l + sh * cl));
    v[1][S2] = -I * ga1 * gs1 / r2 * ps.conj() * (shh - kap * ch * sl_l - sh * cl);
    u[1][V2] = -2.0 * pa * ga2 * sh * sl_l;

    v[2][S1] = 2.0 * I * gs1 * ch * sl_l;
    u[2][A1] = 2.0 * I * ga1.conj() * ch * sl_l;
    u[2][V1] = kap * sh * sl_l + ch * cl;
    v[2][S2] = 2.0 * gs1 * ps.conj() * sh * sl_l;
    u[2][A2] = -2.0 * ga1.conj() * pa * sh * sl_l;
    u[2][V2] = -I * pa_rho * (kap * ch * sl_l - sh * cl);

    (u, v)
}

/// Closed-form `(U, V)` at length `z`.
///
/// Rows of waveguide 2 are the rows of waveguide 1 of the mirror-image
/// coupler with columns relabelled.
pub fn analytic_propagator(params: &ValidatedParams, z: f64) -> Result<BogoliubovTransform> {
    if !z.is_finite() {
        return Err(CouplerError::Numerical(format!("non-finite propagation length {z}")));
    }
    if !conditions_satisfied(params, DEFAULT_TOL) {
        return Err(CouplerError::Unsupported(
            "closed-form propagator requires |gS1|=|gS2|, |gA1|=|gA2|, |kS|=|kA| and matched coupling phases".into(),
        ));
    }
    let p = params.params();
    let r2 = p.g_s1.norm_sqr() - p.g_a1.norm_sqr();
    if r2.abs() < R2_MIN {
        return Err(CouplerError::Unsupported(format!(
            "closed-form propagator is singular at |gS1| = |gA1| (|gS1|^2 - |gA1|^2 = {r2:.3e})"
        )));
    }
    let (u1, v1) = waveguide1_rows(p, z);
    let (u2, v2) = waveguide1_rows(&p.swapped(), z);
    let mut u = CMat6::zeros();
    let mut v = CMat6::zeros();
    for i in 0..3 {
        for k in 0..6 {
            u[(i, k)] = u1[i][k];
            v[(i, k)] = v1[i][k];
            u[(i + 3, k)] = u2[i][(k + 3) % 6];
            v[(i + 3, k)] = v2[i][(k + 3) % 6];
        }
    }
    Ok(BogoliubovTransform { u, v, z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_drift_matrix, propagator, symplectic_residual};
    use crate::model::validate_params;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fixture() -> ValidatedParams {
        validate_params(&CouplerParams {
            g_s1: c(1.0, 0.0),
            g_a1: c(2.0, 0.0),
            g_s2: c(1.0, 0.0),
            g_a2: c(2.0, 0.0),
            kappa_s: c(1.0, 0.0),
            kappa_a: c(-1.0, 0.0),
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn fixture_is_on_manifold() {
        assert!(conditions_satisfied(&fixture(), DEFAULT_TOL));
    }

    #[test]
    fn unequal_gains_are_off_manifold() {
        let p = validate_params(&CouplerParams {
            g_s1: c(1.0, 0.0),
            g_s2: c(2.0, 0.0),
            ..Default::default()
        })
        .unwrap();
        assert!(!conditions_satisfied(&p, DEFAULT_TOL));
        assert!(matches!(
            analytic_propagator(&p, 1.0),
            Err(CouplerError::Unsupported(_))
        ));
    }

    #[test]
    fn zero_coupling_with_equal_gains_is_on_manifold() {
        let p = validate_params(&CouplerParams {
            g_s1: c(1.0, 0.0),
            g_a1: c(2.0, 0.0),
            g_s2: c(0.0, 1.0),
            g_a2: c(-2.0, 0.0),
            ..Default::default()
        })
        .unwrap();
        assert!(conditions_satisfied(&p, DEFAULT_TOL));
    }

    #[test]
    fn zero_length_is_identity() {
        let t = analytic_propagator(&fixture(), 0.0).unwrap();
        assert!(t.max_diff(&BogoliubovTransform::identity()) < 1e-15);
    }

    #[test]
    fn single_waveguide_limit() {
        let p = validate_params(&CouplerParams {
            g_s1: c(1.0, 0.0),
            g_a1: c(2.0, 0.0),
            g_s2: c(1.0, 0.0),
            g_a2: c(2.0, 0.0),
            ..Default::default()
        })
        .unwrap();
        let m = build_drift_matrix(&p);
        for &z in &[0.1, 0.5, 1.0] {
            let a = analytic_propagator(&p, z).unwrap();
            let n = propagator(&m, z).unwrap();
            assert!(a.max_diff(&n) < 1e-12, "z={z}: {}", a.max_diff(&n));
            // l = 2 sqrt(3) here; U_S1S1 = (-|gA|^2 + |gS|^2 cos(l z / 2)) / r^2
            let l = 2.0 * 3f64.sqrt();
            let expect = (-4.0 + (l * z / 2.0).cos()) / -3.0;
            assert!((a.u[(0, 0)] - c(expect, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn fixture_matches_numerical() {
        let p = fixture();
        let m = build_drift_matrix(&p);
        for &z in &[0.1, 1.0, 2.5, 5.0] {
            let a = analytic_propagator(&p, z).unwrap();
            let n = propagator(&m, z).unwrap();
            assert!(a.max_diff(&n) < 1e-8, "z={z}: {}", a.max_diff(&n));
            assert!(symplectic_residual(&a) < 1e-9);
        }
    }

    #[test]
    fn degenerate_l_uses_series() {
        // Stokes-dominated guide with kappa^2 = 4 r^2: l = 0
        let p = validate_params(&CouplerParams {
            g_s1: c(2.0, 0.0),
            g_a1: c(3f64.sqrt(), 0.0),
            g_s2: c(2.0, 0.0),
            g_a2: c(3f64.sqrt(), 0.0),
            kappa_s: c(2.0, 0.0),
            kappa_a: c(-2.0, 0.0),
            ..Default::default()
        })
        .unwrap();
        assert!(conditions_satisfied(&p, 1e-12));
        let f = AnalyticFrame::new(p.params(), 1.0);
        assert!(f.l.norm() < 1e-7);
        let a = analytic_propagator(&p, 1.0).unwrap();
        let n = propagator(&build_drift_matrix(&p), 1.0).unwrap();
        assert!(a.max_diff(&n) < 1e-6 * n.max_abs());
    }

    #[test]
    fn balanced_gain_is_unsupported() {
        let p = validate_params(&CouplerParams {
            g_s1: c(1.0, 0.0),
            g_a1: c(1.0, 0.0),
            g_s2: c(1.0, 0.0),
            g_a2: c(1.0, 0.0),
            ..Default::default()
        })
        .unwrap();
        assert!(matches!(
            analytic_propagator(&p, 1.0),
            Err(CouplerError::Unsupported(_))
        ));
    }

    fn manifold_params() -> impl Strategy<Value = CouplerParams> {
        let tau = std::f64::consts::TAU;
        (
            0.2..2.0f64,
            0.3..2.0f64,
            0.0..4.0f64,
            proptest::array::uniform5(0.0..tau),
        )
            .prop_filter("avoid |gS| = |gA|", |(gs, ga, _, _)| (gs * gs - ga * ga).abs() > 0.05)
            .prop_map(move |(gs, extra, k, ph)| {
                let ga = gs + extra;
                let g_s1 = Complex64::from_polar(gs, ph[0]);
                let g_s2 = Complex64::from_polar(gs, ph[1]);
                let g_a1 = Complex64::from_polar(ga, ph[2]);
                let g_a2 = Complex64::from_polar(ga, ph[3]);
                let kappa_s = Complex64::from_polar(k, ph[4]);
                // choose kA from the phase condition
                let rhs = -unit(kappa_s) * g_s2.conj() / g_s1.conj();
                let kappa_a = (rhs * g_a1 / g_a2 * k).conj();
                CouplerParams {
                    g_s1,
                    g_a1,
                    g_s2,
                    g_a2,
                    kappa_s,
                    kappa_a,
                    ..Default::default()
                }
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn analytic_matches_numerical_on_manifold(p in manifold_params(), z in 0.0..5.0f64) {
            let v = validate_params(&p).unwrap();
            prop_assert!(conditions_satisfied(&v, 1e-10));
            let a = analytic_propagator(&v, z).unwrap();
            let n = propagator(&build_drift_matrix(&v), z).unwrap();
            prop_assert!(a.max_diff(&n) < 1e-8, "diff {}", a.max_diff(&n));
        }

        #[test]
        fn trig_cache_is_consistent(p in manifold_params(), z in 0.0..5.0f64) {
            let f = AnalyticFrame::new(&p, z);
            prop_assert!(f.consistency_residual() < 1e-12);
        }
    }
}
