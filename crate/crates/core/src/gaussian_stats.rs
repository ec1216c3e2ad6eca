//! Observable statistics of single and compound (two-mode) fields of a
//! Gaussian state.
//!
//! Conventions:
//! - `W` is the integrated intensity of the selected modes, `W = sum_j A_j^+ A_j`,
//!   and all its moments are normally ordered, so `<W^k>` are factorial moments
//!   of the photon number and reduced moments vanish for coherent light.
//! - Quadratures are `p = a + a^+` and `q = -i (a - a^+)` with `a = A_j`
//!   (single) or `a = A_j + A_k` (compound). Vacuum variance is 1 for a
//!   single mode and 2 for a compound mode.
//! - The principal squeeze variance `lambda` is the minimum quadrature variance
//!   over all phases and the uncertainty product is `lambda_min * lambda_max`.

use num_complex::Complex64;

use crate::error::{CouplerError, Result};
use crate::jet::{solve_with_det, Jet};
use crate::linalg::ZERO;
use crate::mode::{ModeId, ModeSelection};
use crate::model::GaussianState;

/// Highest supported reduced-moment order.
pub const K_MAX_LIMIT: usize = 8;
/// Highest supported photon-number cutoff.
pub const N_MAX_LIMIT: usize = 512;
/// Below this mean integrated intensity reduced moments are not defined.
pub const MEAN_W_FLOOR: f64 = 1e-12;

/// Normally ordered intensity variance `<(dW_j)^2>` of a single mode.
pub fn intensity_variance_single(s: &GaussianState, j: ModeId) -> f64 {
    let j = j.index();
    let (b, c, xi) = (s.b[j], s.c[j], s.xi[j]);
    b * b + c.norm_sqr() + 2.0 * b * xi.norm_sqr() + 2.0 * (c * xi.conj() * xi.conj()).re
}

/// Correlation `<dW_j dW_k>` of the intensity fluctuations of two modes.
pub fn intensity_correlation(s: &GaussianState, j: ModeId, k: ModeId) -> f64 {
    let (j, k) = (j.index(), k.index());
    let (d, db) = (s.d[(j, k)], s.dbar[(j, k)]);
    let (xj, xk) = (s.xi[j], s.xi[k]);
    d.norm_sqr() + db.norm_sqr() + 2.0 * (d * xj.conj() * xk.conj()).re - 2.0 * (db * xj * xk.conj()).re
}

/// Intensity variance of the compound mode `(j, k)`.
pub fn intensity_variance_compound(s: &GaussianState, j: ModeId, k: ModeId) -> f64 {
    intensity_variance_single(s, j) + intensity_variance_single(s, k) + 2.0 * intensity_correlation(s, j, k)
}

pub fn intensity_variance(s: &GaussianState, sel: ModeSelection) -> f64 {
    match sel {
        ModeSelection::Single(j) => intensity_variance_single(s, j),
        ModeSelection::Compound(j, k) => intensity_variance_compound(s, j, k),
    }
}

/// `<da^+ da>` and `<da^2>` for the field operator of a selection.
fn field_moments(s: &GaussianState, sel: ModeSelection) -> (f64, Complex64) {
    match sel {
        ModeSelection::Single(j) => (s.b[j.index()], s.c[j.index()]),
        ModeSelection::Compound(j, k) => {
            let (j, k) = (j.index(), k.index());
            let n = s.b[j] + s.b[k] - 2.0 * s.dbar[(j, k)].re;
            let m = s.c[j] + s.c[k] + 2.0 * s.d[(j, k)];
            (n, m)
        }
    }
}

/// Principal squeeze variance: `1 + 2(B_j - |C_j|)` for a single mode and
/// `2{1 + B_j + B_k - 2 Re Dbar_jk - |C_j + C_k + 2 D_jk|}` for a compound mode.
pub fn principal_squeeze(s: &GaussianState, sel: ModeSelection) -> f64 {
    let (n, m) = field_moments(s, sel);
    sel.vacuum_level() + 2.0 * n - 2.0 * m.norm()
}

/// Variances of the `p` and `q` quadratures and the uncertainty product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratures {
    pub var_p: f64,
    pub var_q: f64,
    pub uncertainty: f64,
}

pub fn quadrature_variances(s: &GaussianState, sel: ModeSelection) -> Quadratures {
    let (n, m) = field_moments(s, sel);
    let base = sel.vacuum_level() + 2.0 * n;
    let lmin = base - 2.0 * m.norm();
    let lmax = base + 2.0 * m.norm();
    Quadratures {
        var_p: base + 2.0 * m.re,
        var_q: base - 2.0 * m.re,
        uncertainty: lmin * lmax,
    }
}

/// Normally ordered covariance `[[N^T, M], [M^*, N]]` and doubled mean
/// `(xi, xi^*)` restricted to the selected modes.
fn reduced_covariance(s: &GaussianState, sel: ModeSelection) -> (Vec<Vec<Complex64>>, Vec<Complex64>) {
    let idx: Vec<usize> = sel.modes().iter().map(|m| m.index()).collect();
    let m = idx.len();
    let n = s.normal_moments();
    let a = s.anomalous_moments();
    let mut sigma = vec![vec![ZERO; 2 * m]; 2 * m];
    for (r, &i) in idx.iter().enumerate() {
        for (c, &j) in idx.iter().enumerate() {
            sigma[r][c] = n[(j, i)];
            sigma[r][m + c] = a[(i, j)];
            sigma[m + r][c] = a[(i, j)].conj();
            sigma[m + r][m + c] = n[(i, j)];
        }
    }
    let mut y: Vec<Complex64> = idx.iter().map(|&i| s.xi[i]).collect();
    y.extend(idx.iter().map(|&i| s.xi[i].conj()));
    (sigma, y)
}

/// Normally ordered generating function `G(s) = <:exp(-s W):>`, evaluated on
/// truncated power series.
///
/// `G(s) = det(I + s Sigma)^(-1/2) exp(-(s/2) y^H (I + s Sigma)^(-1) y)`,
/// where `Sigma` and `y` are the normally ordered covariance and doubled
/// mean of the selected modes. Each point in `svalues` is a jet in some
/// expansion variable; the result carries the expansion of `G` in that
/// variable.
pub fn generating_function(s: &GaussianState, sel: ModeSelection, svalues: &[Jet]) -> Result<Vec<Jet>> {
    let (sigma, y) = reduced_covariance(s, sel);
    let dim = y.len();
    svalues
        .iter()
        .map(|sv| {
            let order = sv.order();
            let a: Vec<Vec<Jet>> = (0..dim)
                .map(|r| {
                    (0..dim)
                        .map(|c| {
                            let mut e = sv.scale(sigma[r][c]);
                            if r == c {
                                e = &e + &Jet::constant(Complex64::new(1.0, 0.0), order);
                            }
                            e
                        })
                        .collect()
                })
                .collect();
            let rhs: Vec<Jet> = y.iter().map(|&v| Jet::constant(v, order)).collect();
            let (x, det) = solve_with_det(&a, &rhs)
                .ok_or_else(|| CouplerError::Numerical(format!("I + s Sigma is singular at s = {}", sv.value())))?;
            if det.value().norm() == 0.0 {
                return Err(CouplerError::Numerical(
                    "vanishing determinant in generating function".into(),
                ));
            }
            let mut quad = Jet::zero(order);
            for (yi, xi) in y.iter().zip(&x) {
                quad = &quad + &xi.scale(yi.conj());
            }
            let expo = (sv * &quad).scale(Complex64::new(-0.5, 0.0)).exp();
            Ok(&det.powf(-0.5) * &expo)
        })
        .collect()
}

/// `G(s)` at a real point.
pub fn generating_function_at(s: &GaussianState, sel: ModeSelection, x: f64) -> Result<f64> {
    let g = generating_function(s, sel, &[Jet::constant(Complex64::new(x, 0.0), 1)])?;
    Ok(g[0].value().re)
}

/// Integrated-intensity moments and photon-number distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentsAndDistribution {
    pub mean_w: f64,
    /// `<W^k>` for `k = 0..=k_max`.
    pub moments: Vec<f64>,
    /// `<W^k>/<W>^k - 1` for `k = 2..=k_max`; `None` when `<W>` vanishes.
    pub reduced: Option<Vec<f64>>,
    /// `p(n)` for `n = 0..=n_max`.
    pub p_n: Vec<f64>,
}

pub fn check_limits(k_max: usize, n_max: usize) -> Result<()> {
    if !(1..=K_MAX_LIMIT).contains(&k_max) {
        return Err(CouplerError::Validation(format!(
            "k_max = {k_max} outside 1..={K_MAX_LIMIT}"
        )));
    }
    if !(1..=N_MAX_LIMIT).contains(&n_max) {
        return Err(CouplerError::Validation(format!(
            "n_max = {n_max} outside 1..={N_MAX_LIMIT}"
        )));
    }
    Ok(())
}

/// `<W^k> = (-1)^k k! [t^k] G(t)` and `p(n) = [t^n] G(1 - t)`.
pub fn moments_and_distribution(
    s: &GaussianState,
    sel: ModeSelection,
    k_max: usize,
    n_max: usize,
) -> Result<MomentsAndDistribution> {
    check_limits(k_max, n_max)?;
    let at_zero = Jet::variable(ZERO, k_max + 1);
    let at_one = Jet::from_coeffs(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)], n_max + 1);
    let g = generating_function(s, sel, &[at_zero, at_one])?;

    let mut fact = 1.0;
    let moments: Vec<f64> = (0..=k_max)
        .map(|k| {
            if k > 0 {
                fact *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * fact * g[0].coeff(k).re
        })
        .collect();
    let mean_w = moments[1];
    let reduced =
        (mean_w.abs() >= MEAN_W_FLOOR).then(|| (2..=k_max).map(|k| moments[k] / mean_w.powi(k as i32) - 1.0).collect());
    let p_n = (0..=n_max).map(|n| g[1].coeff(n).re).collect();
    Ok(MomentsAndDistribution {
        mean_w,
        moments,
        reduced,
        p_n,
    })
}

/// Every statistic of one selection at one propagation length.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub selection: ModeSelection,
    pub mean_w: f64,
    /// Reduced moments for `k = 2..=k_max`, `None` when `<W> = 0`.
    pub reduced_moments: Option<Vec<f64>>,
    pub variance_w: f64,
    pub lambda: f64,
    pub var_p: f64,
    pub var_q: f64,
    pub uncertainty: f64,
    pub p_n: Vec<f64>,
}

impl StatsReport {
    /// Probability mass beyond the photon-number cutoff.
    pub fn truncation_mass(&self) -> f64 {
        1.0 - self.p_n.iter().sum::<f64>()
    }
}

pub fn stats_report(s: &GaussianState, sel: ModeSelection, k_max: usize, n_max: usize) -> Result<StatsReport> {
    let md = moments_and_distribution(s, sel, k_max, n_max)?;
    let q = quadrature_variances(s, sel);
    Ok(StatsReport {
        selection: sel,
        mean_w: sel.modes().iter().map(|&m| s.mean_number(m)).sum(),
        reduced_moments: md.reduced,
        variance_w: intensity_variance(s, sel),
        lambda: principal_squeeze(s, sel),
        var_p: q.var_p,
        var_q: q.var_q,
        uncertainty: q.uncertainty,
        p_n: md.p_n,
    })
}
