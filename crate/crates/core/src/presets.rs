//! Built-in scenarios reproducing the figure catalogue.
//!
//! Every preset propagates to `z = 10` on a 501-point grid. Parameters not
//! listed for a figure are zero; figures that say "the other parameters are
//! the same as in Fig. N" start from that preset and override.

use num_complex::Complex64;

use crate::error::{CouplerError, Result};
use crate::mode::{ModeId, ModeSelection};
use crate::model::{CouplerParams, InputSpec};
use crate::scenario::{Observable, Quantity, ScenarioConfig, DEFAULT_K_MAX, DEFAULT_N_MAX};

pub const PRESET_Z_MAX: f64 = 10.0;
pub const PRESET_Z_STEPS: usize = 501;

pub const PRESET_NAMES: [&str; 10] = [
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11",
];

/// One-line summary shown by `list-presets`.
pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig2" => "Brillouin, single guide: moments of (S1,A1)",
        "fig3" => "Brillouin with Stokes coupling kappaS=-10: moments and p(n) of (S1,A1), quadratures of (S2,A1)",
        "fig4" => "fig3 couplings with phased inputs: moments and p(n) of (S2,A1)",
        "fig5" => "Brillouin in both guides, kappaS=6i: moments of (S1,A1), (S2,V1), (A1,A2)",
        "fig6" => "fig5 plus kappaA=6i: moments of (S2,A1), quadratures of (S1,A1)",
        "fig7" => "Raman, single guide, nV1=0.1: p(n) and moments of (S1,A1)",
        "fig8" => "fig7 with nV1=1: quadratures of (S1,V1)",
        "fig9" => "Raman in both guides, kappaS=-6: moments of (A1,V2)",
        "fig10" => "Raman in both guides, kappaS=6i: second moments of (S1,V2) and (S2,V1)",
        "fig11" => "fig10 plus kappaA=6i: moments of (S1,A1)",
        _ => return None,
    })
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pair(a: ModeId, b: ModeId) -> ModeSelection {
    ModeSelection::compound(a, b).expect("distinct preset modes")
}

fn obs(quantity: Quantity, selection: ModeSelection) -> Observable {
    Observable { quantity, selection }
}

fn base(name: &str, params: CouplerParams, inputs: [InputSpec; 6], observables: Vec<Observable>) -> ScenarioConfig {
    ScenarioConfig {
        name: Some(name.to_string()),
        params,
        inputs,
        z_max: PRESET_Z_MAX,
        z_steps: PRESET_Z_STEPS,
        n_max: DEFAULT_N_MAX,
        k_max: DEFAULT_K_MAX,
        observables,
    }
}

fn coherent(pairs: &[(ModeId, Complex64)]) -> [InputSpec; 6] {
    let mut inputs = [InputSpec::default(); 6];
    for &(m, xi) in pairs {
        inputs[m.index()].xi = xi;
    }
    inputs
}

/// The scenario for a named figure.
pub fn preset(name: &str) -> Result<ScenarioConfig> {
    use ModeId::*;
    use Quantity::*;

    let one_guide = CouplerParams {
        g_s1: c(1.0, 0.0),
        g_a1: c(2.0, 0.0),
        ..Default::default()
    };
    let both_guides = CouplerParams {
        g_s2: c(1.0, 0.0),
        g_a2: c(2.0, 0.0),
        ..one_guide
    };

    let cfg = match name {
        "fig2" => base(
            name,
            one_guide,
            coherent(&[(S1, c(0.0, 2.0)), (V1, c(1.0, 0.0))]),
            vec![obs(Moments, pair(S1, A1))],
        ),
        "fig3" => base(
            name,
            CouplerParams {
                kappa_s: c(-10.0, 0.0),
                ..one_guide
            },
            coherent(&[(S1, c(2.0, 0.0)), (V1, c(1.0, 0.0)), (S2, c(2.0, 0.0))]),
            vec![
                obs(Moments, pair(S1, A1)),
                obs(Pn, pair(S1, A1)),
                obs(Quadrature, pair(S2, A1)),
                obs(Squeeze, pair(S2, A1)),
            ],
        ),
        "fig4" => base(
            name,
            CouplerParams {
                kappa_s: c(-10.0, 0.0),
                ..one_guide
            },
            coherent(&[
                (S1, c(0.0, -2.0)),
                (A1, c(0.0, 2.0)),
                (V1, c(1.0, 0.0)),
                (S2, c(2.0, 0.0)),
            ]),
            vec![obs(Moments, pair(S2, A1)), obs(Pn, pair(S2, A1))],
        ),
        "fig5" => base(
            name,
            CouplerParams {
                kappa_s: c(0.0, 6.0),
                ..both_guides
            },
            coherent(&[
                (S1, c(0.0, -2.0)),
                (A1, c(0.0, 2.0)),
                (V1, c(1.0, 0.0)),
                (S2, c(0.0, -2.0)),
                (A2, c(0.0, 2.0)),
                (V2, c(1.0, 0.0)),
            ]),
            vec![
                obs(Moments, pair(S1, A1)),
                obs(Moments, pair(S2, V1)),
                obs(Moments, pair(A1, A2)),
            ],
        ),
        "fig6" => {
            let mut cfg = preset("fig5")?;
            cfg.params.kappa_a = c(0.0, 6.0);
            cfg.observables = vec![
                obs(Moments, pair(S2, A1)),
                obs(Quadrature, pair(S1, A1)),
                obs(Squeeze, pair(S1, A1)),
            ];
            cfg
        }
        "fig7" => {
            let mut inputs = coherent(&[(S1, c(0.0, -2.0)), (A1, c(0.0, 2.0))]);
            inputs[V1.index()].n_ch = 0.1;
            base(
                name,
                one_guide,
                inputs,
                vec![obs(Pn, pair(S1, A1)), obs(Moments, pair(S1, A1))],
            )
        }
        "fig8" => {
            let mut cfg = preset("fig7")?;
            cfg.inputs[V1.index()].n_ch = 1.0;
            cfg.observables = vec![obs(Quadrature, pair(S1, V1)), obs(Squeeze, pair(S1, V1))];
            cfg
        }
        "fig9" => {
            let mut inputs = coherent(&[(S1, c(0.0, -2.0)), (A1, c(0.0, 2.0)), (S2, c(2.0, 0.0))]);
            inputs[V1.index()].n_ch = 0.1;
            inputs[V2.index()].n_ch = 0.1;
            base(
                name,
                CouplerParams {
                    kappa_s: c(-6.0, 0.0),
                    ..both_guides
                },
                inputs,
                vec![obs(Moments, pair(A1, V2))],
            )
        }
        "fig10" => {
            let mut inputs = coherent(&[
                (S1, c(0.0, -2.0)),
                (A1, c(0.0, 2.0)),
                (S2, c(0.0, -2.0)),
                (A2, c(0.0, 2.0)),
            ]);
            inputs[V1.index()].n_ch = 0.1;
            inputs[V2.index()].n_ch = 0.1;
            let mut cfg = base(
                name,
                CouplerParams {
                    kappa_s: c(0.0, 6.0),
                    ..both_guides
                },
                inputs,
                vec![obs(Moments, pair(S1, V2)), obs(Moments, pair(S2, V1))],
            );
            cfg.k_max = 2;
            cfg
        }
        "fig11" => {
            let mut cfg = preset("fig10")?;
            cfg.params.kappa_a = c(0.0, 6.0);
            cfg.observables = vec![obs(Moments, pair(S1, A1))];
            cfg
        }
        _ => {
            return Err(CouplerError::Validation(format!(
                "unknown preset `{name}` (expected one of {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(ScenarioConfig {
        name: Some(name.to_string()),
        ..cfg
    })
}
