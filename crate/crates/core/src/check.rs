//! Cross-method consistency suite run by `coupler check`.

use num_complex::Complex64;

use crate::analytic::analytic_propagator;
use crate::dynamics::{build_drift_matrix, conservation_residual, integrate_rk4, propagator, symplectic_residual};
use crate::error::Result;
use crate::fock_oracle::{evolve_fock, fock_statistics, FockConfig, FockInput};
use crate::gaussian_stats::stats_report;
use crate::mode::{ModeId, ModeSelection};
use crate::model::{build_input_state, validate_params, CouplerParams, InputSpec};
use crate::presets::{preset, PRESET_NAMES};
use crate::shortlen::short_propagator;
use crate::sweep::scenario_states;

pub const DEFAULT_CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    /// Tolerance for propagator comparisons (numerical vs RK4 and analytic).
    pub tol: f64,
    /// Include the Fock-space comparison.
    pub oracle: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            tol: DEFAULT_CHECK_TOL,
            oracle: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckItem {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
}

impl CheckItem {
    fn below(name: impl Into<String>, value: f64, tol: f64) -> Self {
        CheckItem {
            name: name.into(),
            value,
            tol,
            passed: value < tol,
        }
    }

    fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        CheckItem {
            name: name.into(),
            value,
            tol: hi,
            passed: (lo..=hi).contains(&value),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: {:.3e} (tolerance {:.1e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.tol
        )
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Parameters on the manifold where the closed-form solution applies.
pub fn analytic_fixture() -> CouplerParams {
    CouplerParams {
        g_s1: c(1.0, 0.0),
        g_a1: c(2.0, 0.0),
        g_s2: c(1.0, 0.0),
        g_a2: c(2.0, 0.0),
        kappa_s: c(1.0, 0.0),
        kappa_a: c(-1.0, 0.0),
        ..Default::default()
    }
}

pub fn run_checks(opts: &CheckOptions) -> Result<Vec<CheckItem>> {
    let mut items = Vec::new();

    let fixture = validate_params(&analytic_fixture())?;
    let fig5 = validate_params(&preset("fig6")?.params)?;
    for (label, p) in [("analytic fixture", &fixture), ("fig6 couplings", &fig5)] {
        let m = build_drift_matrix(p);
        let mut worst = 0.0f64;
        for z in [0.5, 2.0] {
            worst = worst.max(propagator(&m, z)?.max_diff(&integrate_rk4(&m, z, 1e-4)?));
        }
        items.push(CheckItem::below(format!("expm vs RK4, {label}"), worst, opts.tol));
    }

    let m = build_drift_matrix(&fixture);
    let mut worst = 0.0f64;
    for z in [0.1, 0.5, 1.0, 2.0, 5.0] {
        worst = worst.max(propagator(&m, z)?.max_diff(&analytic_propagator(&fixture, z)?));
    }
    items.push(CheckItem::below("expm vs analytic solution", worst, opts.tol));

    let p3 = validate_params(&preset("fig3")?.params)?;
    let m3 = build_drift_matrix(&p3);
    let err = |z: f64| -> Result<f64> { Ok(propagator(&m3, z)?.max_diff(&short_propagator(&p3, z))) };
    let ratio = err(1e-2)? / err(5e-3)?;
    items.push(CheckItem::within(
        "short-length error ratio at halved z",
        ratio,
        7.0,
        9.0,
    ));

    for name in PRESET_NAMES {
        let mut cfg = preset(name)?;
        cfg.z_steps = 101;
        let states = scenario_states(&cfg)?;
        items.push(CheckItem::below(
            format!("conservation drift, {name}"),
            conservation_residual(&states),
            1e-9,
        ));
        let p = validate_params(&cfg.params)?;
        let t = propagator(&build_drift_matrix(&p), cfg.z_max)?;
        items.push(CheckItem::below(
            format!("symplectic residual, {name}"),
            symplectic_residual(&t),
            1e-10,
        ));
    }

    if opts.oracle {
        items.extend(oracle_checks()?);
    }
    Ok(items)
}

/// Gaussian statistics against direct Fock-space evolution on `{S1, A1, V1}`.
pub fn oracle_checks() -> Result<Vec<CheckItem>> {
    use ModeId::*;
    let params = CouplerParams {
        g_s1: c(0.3, 0.0),
        g_a1: c(0.6, 0.0),
        ..Default::default()
    };
    let xi = [c(0.5, 0.0), c(0.0, 0.4), c(0.3, 0.0)];
    let z = 0.5;
    let sel = ModeSelection::compound(S1, A1)?;

    let cfg = FockConfig::new(&[S1, A1, V1], 12, &params)?;
    let fock = evolve_fock(&cfg, &xi.map(FockInput::Coherent), z)?;
    let fs = fock_statistics(&fock, sel, 2)?;

    let mut inputs = [InputSpec::default(); 6];
    for (k, &x) in xi.iter().enumerate() {
        inputs[k].xi = x;
    }
    let vp = validate_params(&params)?;
    let state = crate::dynamics::evolve_state(&propagator(&build_drift_matrix(&vp), z)?, &build_input_state(&inputs)?);
    let g = stats_report(&state, sel, 2, 8)?;

    let dp = (0..=8).map(|n| (g.p_n[n] - fs.p_n[n]).abs()).fold(0.0, f64::max);
    Ok(vec![
        CheckItem::below("oracle p(n), n <= 8", dp, 1e-4),
        CheckItem::below("oracle lambda", (g.lambda - fs.lambda).abs(), 1e-3),
        CheckItem::below(
            "oracle mean, relative",
            ((g.mean_w - fs.mean_w) / fs.mean_w).abs(),
            1e-3,
        ),
    ])
}
