//! Sweeping a scenario over its propagation grid.

use rayon::prelude::*;

use crate::dynamics::{build_drift_matrix, evolve_state, Propagator};
use crate::error::{CouplerError, Result};
use crate::gaussian_stats::{stats_report, StatsReport};
use crate::mode::ModeSelection;
use crate::model::{build_input_state, validate_params, GaussianState};
use crate::scenario::{Quantity, ScenarioConfig};

/// One output column; `None` marks a value that is not defined (reduced
/// moments of a field with zero mean intensity).
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub name: String,
    pub grid: Vec<f64>,
    pub columns: Vec<Column>,
    /// `<selection>.p<n>` columns for every requested distribution.
    pub pn_columns: Vec<Column>,
    /// Free-form provenance: version, warnings, propagator route, limits.
    pub metadata: Vec<(String, String)>,
}

impl SweepResult {
    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().chain(&self.pn_columns).find(|c| c.name == name)
    }
}

/// Column names contributed by one (selection, quantity) request.
pub fn column_names(sel: ModeSelection, q: Quantity, k_max: usize, n_max: usize) -> Vec<String> {
    let l = sel.label();
    match q {
        Quantity::Moments => std::iter::once(format!("{l}.meanW"))
            .chain((2..=k_max).map(|k| format!("{l}.w{k}")))
            .collect(),
        Quantity::Variance => vec![format!("{l}.varW")],
        Quantity::Squeeze => vec![format!("{l}.lambda")],
        Quantity::Quadrature => vec![format!("{l}.varP"), format!("{l}.varQ"), format!("{l}.u")],
        Quantity::Pn => (0..=n_max).map(|n| format!("{l}.p{n}")).collect(),
        Quantity::All => Quantity::EACH
            .iter()
            .flat_map(|&q| column_names(sel, q, k_max, n_max))
            .collect(),
    }
}

fn values(r: &StatsReport, q: Quantity, k_max: usize) -> Vec<Option<f64>> {
    match q {
        Quantity::Moments => std::iter::once(Some(r.mean_w))
            .chain((0..k_max.saturating_sub(1)).map(|i| r.reduced_moments.as_ref().map(|v| v[i])))
            .collect(),
        Quantity::Variance => vec![Some(r.variance_w)],
        Quantity::Squeeze => vec![Some(r.lambda)],
        Quantity::Quadrature => vec![Some(r.var_p), Some(r.var_q), Some(r.uncertainty)],
        Quantity::Pn => r.p_n.iter().map(|&p| Some(p)).collect(),
        Quantity::All => unreachable!("requests are expanded"),
    }
}

fn with_context(name: &str, z: f64, e: CouplerError) -> CouplerError {
    match e {
        CouplerError::Numerical(m) => CouplerError::Numerical(format!("scenario `{name}` at z = {z}: {m}")),
        other => other,
    }
}

/// Gaussian states along the scenario grid, in grid order.
pub fn scenario_states(cfg: &ScenarioConfig) -> Result<Vec<GaussianState>> {
    let params = validate_params(&cfg.params)?;
    let s0 = build_input_state(&cfg.inputs)?;
    let prop = Propagator::new(&build_drift_matrix(&params))?;
    let name = cfg.name.as_deref().unwrap_or("scenario");
    cfg.grid()
        .par_iter()
        .map(|&z| {
            prop.at(z)
                .map(|t| evolve_state(&t, &s0))
                .map_err(|e| with_context(name, z, e))
        })
        .collect()
}

/// Propagate, evaluate every requested statistic and collect columns.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let params = validate_params(&cfg.params)?;
    let name = cfg.name.clone().unwrap_or_else(|| "scenario".to_string());
    let grid = cfg.grid();
    let states = scenario_states(cfg)?;
    let requested = cfg.requested();
    let mut selections: Vec<ModeSelection> = Vec::new();
    for (sel, _) in &requested {
        if !selections.contains(sel) {
            selections.push(*sel);
        }
    }

    let reports: Vec<Vec<StatsReport>> = states
        .par_iter()
        .zip(&grid)
        .map(|(s, &z)| {
            selections
                .iter()
                .map(|&sel| stats_report(s, sel, cfg.k_max, cfg.n_max).map_err(|e| with_context(&name, z, e)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut columns = Vec::new();
    let mut pn_columns = Vec::new();
    for &(sel, q) in &requested {
        let slot = selections.iter().position(|s| *s == sel).expect("collected above");
        let names = column_names(sel, q, cfg.k_max, cfg.n_max);
        let mut cols: Vec<Column> = names
            .into_iter()
            .map(|name| Column {
                name,
                values: Vec::with_capacity(grid.len()),
            })
            .collect();
        for row in &reports {
            for (col, v) in cols.iter_mut().zip(values(&row[slot], q, cfg.k_max)) {
                col.values.push(v);
            }
        }
        if q == Quantity::Pn {
            pn_columns.extend(cols);
        } else {
            columns.extend(cols);
        }
    }

    for col in columns.iter().chain(&pn_columns) {
        if let Some(i) = col.values.iter().position(|v| v.is_some_and(|x| !x.is_finite())) {
            return Err(CouplerError::Numerical(format!(
                "scenario `{name}`: column {} is not finite at z = {}",
                col.name, grid[i]
            )));
        }
    }

    let prop = Propagator::new(&build_drift_matrix(&params))?;
    let mut metadata = vec![
        ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("propagator".to_string(), format!("{:?}", prop.route())),
        ("eigen_condition".to_string(), format!("{:e}", prop.eigen_condition())),
        ("k_max".to_string(), cfg.k_max.to_string()),
        ("n_max".to_string(), cfg.n_max.to_string()),
    ];
    metadata.extend(params.warnings().iter().map(|w| ("warning".to_string(), w.clone())));

    Ok(SweepResult {
        name,
        grid,
        columns,
        pn_columns,
        metadata,
    })
}
