//! Quantum statistics of light in a two-waveguide Raman/Brillouin coupler.
//!
//! The six quantum modes (Stokes, anti-Stokes and phonon of each waveguide)
//! evolve linearly under classical pumping, so Gaussian input states stay
//! Gaussian. The crate computes the Bogoliubov propagator numerically,
//! analytically (on a special parameter manifold) and perturbatively, and
//! derives photon-number statistics and squeezing measures from the
//! evolved state. A truncated Fock-space simulator provides ground truth for
//! small subsystems.

// Index loops mirror the matrix and series formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod analytic;
pub mod check;
pub mod csv;
pub mod dynamics;
pub mod error;
pub mod fock_oracle;
pub mod gaussian_stats;
pub mod jet;
pub mod linalg;
pub mod mode;
pub mod model;
pub mod presets;
pub mod scenario;
pub mod shortlen;
pub mod sweep;

pub use dynamics::{
    build_drift_matrix, conservation_residual, evolve_state, propagator, symplectic_residual, BogoliubovTransform,
    EvolutionMatrix, Propagator,
};
pub use error::{CouplerError, Result};
pub use gaussian_stats::StatsReport;
pub use mode::{ModeId, ModeSelection};
pub use model::{build_input_state, validate_params, CouplerParams, GaussianState, InputSpec, ValidatedParams};
pub use scenario::{parse_scenario, ScenarioConfig};
pub use sweep::{run_scenario, SweepResult};
